//! Solve the dividend problem under the constraint that the expected
//! discount factor at ruin stays at or below a ceiling K, for several
//! (initial reserve, ceiling) pairs.

use ruindiv::constrained::{self, Regime, SolutionStatus};
use ruindiv::{
    ClaimDistribution, Orientation, Policy, ProcessModel, Result, ScaleEvaluator, ScaleParams,
};

fn main() -> Result<()> {
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
    let ev = ScaleEvaluator::with_params(model, 0.05, params)?;

    for &x in &[1.0, 2.0, 4.0] {
        for &k in &[0.5, 0.75, 0.95] {
            let sol = constrained::solve(&ev, x, k, Regime::NoCost)?;
            match sol.status {
                SolutionStatus::Infeasible => {
                    println!(
                        "x = {x}, K = {k}: infeasible (do-nothing floor {:.4})",
                        sol.k_bar
                    );
                }
                status => {
                    let b = match sol.policy {
                        Some(Policy::Barrier(b)) => b.level,
                        _ => f64::NAN,
                    };
                    println!(
                        "x = {x}, K = {k}: {status:?}, b* = {b:.4}, Lambda* = {:.4}, \
                         V = {:.6}, Psi = {:.6}",
                        sol.multiplier, sol.value, sol.constraint_value
                    );
                    // Complementary slackness: Lambda* (K - Psi) = 0.
                    if status == SolutionStatus::Binding {
                        let slack = sol.multiplier * (k - sol.constraint_value);
                        assert!(slack.abs() < 1e-8 * (1.0 + sol.multiplier));
                    }
                }
            }
        }
    }
    Ok(())
}
