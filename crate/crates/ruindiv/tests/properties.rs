//! Structural invariants of the scale functions and the solvers, checked
//! on deterministic grids and randomized inputs.

use std::sync::OnceLock;

use approx::assert_relative_eq;
use proptest::prelude::*;

use ruindiv::{
    definetti, dual, transaction, ClaimDistribution, Orientation, ProcessModel, ScaleEvaluator,
    ScaleParams,
};

fn cl_exp() -> &'static ScaleEvaluator {
    static EV: OnceLock<ScaleEvaluator> = OnceLock::new();
    EV.get_or_init(|| {
        let model = ProcessModel::CramerLundberg {
            premium: 1.5,
            intensity: 1.0,
            claims: ClaimDistribution::Exponential { rate: 2.0 },
            orientation: Orientation::SpectrallyNegative,
        };
        ScaleEvaluator::new(model, 0.1).unwrap()
    })
}

fn stable() -> &'static ScaleEvaluator {
    static EV: OnceLock<ScaleEvaluator> = OnceLock::new();
    EV.get_or_init(|| ScaleEvaluator::new(ProcessModel::Stable { alpha: 1.5 }, 0.1).unwrap())
}

fn lomax() -> &'static ScaleEvaluator {
    static EV: OnceLock<ScaleEvaluator> = OnceLock::new();
    EV.get_or_init(|| {
        let model = ProcessModel::CramerLundberg {
            premium: 1.0,
            intensity: 1.0,
            claims: ClaimDistribution::Lomax {
                scale: 1.0,
                shape: 1.5,
            },
            orientation: Orientation::SpectrallyNegative,
        };
        let params = ScaleParams {
            grid_step: 2e-3,
            x_max: 12.0,
            ..ScaleParams::default()
        };
        ScaleEvaluator::with_params(model, 0.05, params).unwrap()
    })
}

fn dual_gamma() -> &'static ScaleEvaluator {
    static EV: OnceLock<ScaleEvaluator> = OnceLock::new();
    EV.get_or_init(|| {
        let model = ProcessModel::CramerLundbergDiffusion {
            premium: 1.0,
            intensity: 0.4,
            claims: ClaimDistribution::Gamma {
                shape: 2.0,
                scale: 1.0,
            },
            volatility: 0.5,
            orientation: Orientation::SpectrallyPositiveDual,
        };
        let params = ScaleParams {
            grid_step: 2e-3,
            x_max: 20.0,
            ..ScaleParams::default()
        };
        ScaleEvaluator::with_params(model, 0.03, params).unwrap()
    })
}

fn all_models() -> [&'static ScaleEvaluator; 3] {
    [cl_exp(), stable(), lomax()]
}

#[test]
fn w_is_increasing_and_log_concave() {
    for ev in all_models() {
        let w: Vec<f64> = (1..=160)
            .map(|i| ev.w(0.05 * i as f64, 0).unwrap())
            .collect();
        for pair in w.windows(2) {
            assert!(pair[1] > pair[0], "W must increase");
        }
        let logw: Vec<f64> = w.iter().map(|v| v.ln()).collect();
        for t in logw.windows(3) {
            assert!(t[2] - 2.0 * t[1] + t[0] <= 1e-7, "log W must be concave");
        }
    }
}

#[test]
fn w_prime_is_log_convex_for_complete_monotone_models() {
    // All three example models have completely monotone jump densities,
    // so W' = (decreasing part) + (exponential) is log-convex.
    for ev in all_models() {
        assert!(ev.model().has_completely_monotone_density());
        let logwp: Vec<f64> = (2..=160)
            .map(|i| ev.w(0.05 * i as f64, 1).unwrap().ln())
            .collect();
        for t in logwp.windows(3) {
            assert!(t[2] - 2.0 * t[1] + t[0] >= -1e-6, "log W' must be convex");
        }
    }
}

#[test]
fn psi_barrier_decreases_in_b_and_respects_floor() {
    for ev in [cl_exp(), lomax()] {
        for &x in &[0.5, 1.0, 3.0] {
            let floor = definetti::k_bar(ev, x).unwrap();
            let psis: Vec<f64> = (0..=40)
                .map(|i| definetti::psi_barrier(ev, x, 0.2 * i as f64).unwrap())
                .collect();
            for pair in psis.windows(2) {
                assert!(pair[1] <= pair[0] + 1e-12, "Psi_x(b) must not increase in b");
            }
            for &p in &psis {
                assert!((0.0..=1.0).contains(&p));
                assert!(p >= floor - 1e-9, "Psi can never beat the do-nothing floor");
            }
        }
    }
    // Dual orientation: same monotonicity with the barrier at the top.
    let ev = dual_gamma();
    for &x in &[0.5, 2.0] {
        let psis: Vec<f64> = (0..=30)
            .map(|i| dual::psi_dual(ev, x, x + 0.3 * i as f64).unwrap())
            .collect();
        for pair in psis.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12);
        }
    }
}

#[test]
fn psi_band_decreases_in_both_band_ends() {
    let ev = stable();
    let x = 3.0;
    // Fixed upper end, moving lower end.
    let fixed_bp = 4.0;
    let psis: Vec<f64> = (0..=15)
        .map(|i| transaction::psi_band(ev, x, 0.2 * i as f64, fixed_bp).unwrap())
        .collect();
    for pair in psis.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-12, "Psi must not increase in b-");
    }
    // Fixed lower end, moving upper end.
    let fixed_bm = 1.0;
    let psis: Vec<f64> = (0..=20)
        .map(|i| transaction::psi_band(ev, x, fixed_bm, 2.0 + 0.3 * i as f64).unwrap())
        .collect();
    for pair in psis.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-12, "Psi must not increase in b+");
    }
}

#[test]
fn lambda_map_is_strictly_increasing() {
    for ev in [cl_exp(), lomax()] {
        let b0 = definetti::optimal_barrier(ev, 0.0).unwrap().level;
        let lams: Vec<f64> = (0..=40)
            .map(|i| definetti::lambda_of_b(ev, b0 + 0.1 * i as f64).unwrap())
            .collect();
        for pair in lams.windows(2) {
            assert!(pair[1] > pair[0], "Lambda(b) must be strictly increasing");
        }
    }
    let ev = dual_gamma();
    let lams: Vec<f64> = (0..=40)
        .map(|i| dual::lambda_of_b_dual(ev, 0.1 + 0.1 * i as f64).unwrap())
        .collect();
    for pair in lams.windows(2) {
        assert!(pair[1] > pair[0]);
    }
}

#[test]
fn band_straddles_the_costless_barrier() {
    // Whenever the costless barrier b_Lambda is positive, the band with a
    // positive transaction cost must straddle it: b- < b_Lambda < b+.
    for ev in [cl_exp(), stable()] {
        for &lam in &[0.0, 0.3, 1.0, 2.5, 5.0] {
            let b = definetti::optimal_barrier(ev, lam).unwrap().level;
            if b <= 0.0 {
                continue;
            }
            let band = transaction::optimal_band(ev, lam, 0.02).unwrap();
            assert!(
                band.lower < b && b < band.upper,
                "lam={lam}: [{}, {}] vs b={b}",
                band.lower,
                band.upper
            );
        }
    }
}

#[test]
fn scale_identities_on_reference_model() {
    // Z(x) = 1 + q * integral of W; Zbar' = Z. Spot-check both through
    // the integral helper against finite differences.
    let ev = cl_exp();
    for &x in &[0.5, 2.0, 6.0] {
        let z = ev.z(x).unwrap();
        assert_relative_eq!(
            z,
            1.0 + ev.q() * ev.integral_w(0.0, x).unwrap(),
            max_relative = 1e-10
        );
        let h = 1e-5;
        let dzbar = (ev.z_bar(x + h).unwrap() - ev.z_bar(x - h).unwrap()) / (2.0 * h);
        assert_relative_eq!(dzbar, z, max_relative = 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn psi_stays_in_unit_interval(x in 0.0f64..10.0, b in 0.0f64..6.0) {
        let p = definetti::psi_barrier(cl_exp(), x, b).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(p >= definetti::k_bar(cl_exp(), x).unwrap() - 1e-9);
    }

    #[test]
    fn w_monotone_on_random_pairs(a in 0.01f64..9.0, d in 0.01f64..1.0) {
        let ev = stable();
        prop_assert!(ev.w(a + d, 0).unwrap() > ev.w(a, 0).unwrap());
        // Zbar is a second antiderivative of qW plus x, hence increasing.
        prop_assert!(ev.z_bar(a + d).unwrap() > ev.z_bar(a).unwrap());
    }

    #[test]
    fn psi_band_monotone_on_random_bands(bm in 0.0f64..2.0, w in 0.1f64..3.0) {
        let ev = stable();
        let p_wide = transaction::psi_band(ev, 3.0, bm, bm + w + 0.5).unwrap();
        let p_narrow = transaction::psi_band(ev, 3.0, bm, bm + w).unwrap();
        prop_assert!(p_wide <= p_narrow + 1e-12);
    }
}
