//! Shared test fixtures. Evaluator construction fills a grid cache, so the
//! reference models are built once per test binary.

use std::sync::OnceLock;

use crate::levy::{ClaimDistribution, Orientation, ProcessModel};
use crate::scale::{ScaleEvaluator, ScaleParams};

pub fn lomax_model() -> ProcessModel {
    ProcessModel::CramerLundberg {
        premium: 1.0,
        intensity: 1.0,
        claims: ClaimDistribution::Lomax {
            scale: 1.0,
            shape: 1.5,
        },
        orientation: Orientation::SpectrallyNegative,
    }
}

pub fn dual_gamma_model() -> ProcessModel {
    ProcessModel::CramerLundbergDiffusion {
        premium: 1.0,
        intensity: 0.4,
        claims: ClaimDistribution::Gamma {
            shape: 2.0,
            scale: 1.0,
        },
        volatility: 0.5,
        orientation: Orientation::SpectrallyPositiveDual,
    }
}

pub fn cl_exp_model() -> ProcessModel {
    ProcessModel::CramerLundberg {
        premium: 1.5,
        intensity: 1.0,
        claims: ClaimDistribution::Exponential { rate: 2.0 },
        orientation: Orientation::SpectrallyNegative,
    }
}

pub fn stable_model() -> ProcessModel {
    ProcessModel::Stable { alpha: 1.5 }
}

/// Lomax Cramer-Lundberg reference: c=1, lambda=1, Lomax(1,1.5), q=0.05.
pub fn lomax_ev() -> &'static ScaleEvaluator {
    static EV: OnceLock<ScaleEvaluator> = OnceLock::new();
    EV.get_or_init(|| {
        ScaleEvaluator::with_params(
            lomax_model(),
            0.05,
            ScaleParams {
                grid_step: 2e-3,
                x_max: 12.0,
                ..ScaleParams::default()
            },
        )
        .unwrap()
    })
}

/// Dual reference: spectrally positive, c=1, lambda=0.4, Gamma(2,1),
/// sigma=0.5, q=0.03.
pub fn dual_ev() -> &'static ScaleEvaluator {
    static EV: OnceLock<ScaleEvaluator> = OnceLock::new();
    EV.get_or_init(|| {
        ScaleEvaluator::with_params(
            dual_gamma_model(),
            0.03,
            ScaleParams {
                grid_step: 2e-3,
                x_max: 20.0,
                ..ScaleParams::default()
            },
        )
        .unwrap()
    })
}

/// Exponential-claim model with a closed-form scale function, exact to
/// machine precision (derivative-sensitive oracles).
pub fn cl_exp_ev() -> &'static ScaleEvaluator {
    static EV: OnceLock<ScaleEvaluator> = OnceLock::new();
    EV.get_or_init(|| ScaleEvaluator::new(cl_exp_model(), 0.1).unwrap())
}

/// Stable reference: alpha=1.5, q=0.1 (Mittag-Leffler closed form).
pub fn stable_ev() -> &'static ScaleEvaluator {
    static EV: OnceLock<ScaleEvaluator> = OnceLock::new();
    EV.get_or_init(|| ScaleEvaluator::new(stable_model(), 0.1).unwrap())
}
