//! Ready-made configurations for the three reference models.

use crate::config::{
    NumericsConfig, OutputConfig, ProblemConfig, RegimeConfig, RunConfig, SimulationConfig,
};
use crate::error::{Error, Result};
use crate::levy::{ClaimDistribution, Orientation, ProcessModel};

/// Preset `1`: Cramer-Lundberg with Lomax(1, 1.5) claims, `c = 1`,
/// `lambda = 1`, `q = 0.05`, reflection barrier without transaction cost.
///
/// Preset `2`: dual (spectrally positive) Cramer-Lundberg with a Brownian
/// part, Gamma(2, 1) jumps, `c = 1`, `lambda = 0.4`, `sigma = 0.5`,
/// `q = 0.03`.
///
/// Preset `3`: spectrally negative stable process with index `1.5`,
/// `q = 0.1`, fixed transaction cost `beta = 0.01`.
pub fn preset(n: u8) -> Result<RunConfig> {
    let (model, q, regime, numerics) = match n {
        1 => (
            ProcessModel::CramerLundberg {
                premium: 1.0,
                intensity: 1.0,
                claims: ClaimDistribution::Lomax {
                    scale: 1.0,
                    shape: 1.5,
                },
                orientation: Orientation::SpectrallyNegative,
            },
            0.05,
            RegimeConfig::NoCost,
            NumericsConfig {
                grid_step: Some(2e-3),
                x_max: Some(12.0),
                ..NumericsConfig::default()
            },
        ),
        2 => (
            ProcessModel::CramerLundbergDiffusion {
                premium: 1.0,
                intensity: 0.4,
                claims: ClaimDistribution::Gamma {
                    shape: 2.0,
                    scale: 1.0,
                },
                volatility: 0.5,
                orientation: Orientation::SpectrallyPositiveDual,
            },
            0.03,
            RegimeConfig::Dual,
            NumericsConfig {
                grid_step: Some(2e-3),
                x_max: Some(20.0),
                ..NumericsConfig::default()
            },
        ),
        3 => (
            ProcessModel::Stable { alpha: 1.5 },
            0.1,
            RegimeConfig::TransactionCost { beta: 0.01 },
            NumericsConfig::default(),
        ),
        _ => {
            return Err(Error::Config(format!(
                "unknown preset {n}; available presets are 1, 2 and 3"
            )))
        }
    };
    let cfg = RunConfig {
        model,
        q,
        regime,
        problem: ProblemConfig {
            x: vec![0.5, 1.0, 2.0, 4.0],
            k: vec![0.3, 0.5, 0.7],
            b: Vec::new(),
            lambda: Vec::new(),
        },
        numerics,
        output: OutputConfig::default(),
        simulation: SimulationConfig::default(),
        seed: 42,
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate_and_round_trip() {
        for n in 1..=3 {
            let cfg = preset(n).unwrap();
            let text = cfg.to_toml();
            let again = RunConfig::from_toml(&text).unwrap();
            assert_eq!(again.q, cfg.q);
        }
        assert!(matches!(preset(4), Err(Error::Config(_))));
    }

    #[test]
    fn preset_regimes() {
        assert!(matches!(preset(1).unwrap().regime, RegimeConfig::NoCost));
        assert!(matches!(preset(2).unwrap().regime, RegimeConfig::Dual));
        assert!(matches!(
            preset(3).unwrap().regime,
            RegimeConfig::TransactionCost { beta } if beta == 0.01
        ));
    }
}
