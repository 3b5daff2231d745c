//! Numerical certificate of strong duality: the best plain value over a
//! grid of feasible policies (primal) and the smallest Lagrangian value
//! over a multiplier grid (dual) bracket the constrained optimum, and
//! their gap shrinks to grid resolution.

use ruindiv::constrained::{duality_gap_report, solve, Regime};
use ruindiv::{
    ClaimDistribution, Orientation, ProcessModel, Result, ScaleEvaluator, ScaleParams,
};

fn main() -> Result<()> {
    let lomax = ProcessModel::CramerLundberg {
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
    let ev = ScaleEvaluator::with_params(lomax, 0.05, params)?;

    for &(x, k) in &[(1.0, 0.9), (2.0, 0.8), (4.0, 0.7)] {
        let sol = solve(&ev, x, k, Regime::NoCost)?;
        let report = duality_gap_report(&ev, x, k, Regime::NoCost, 200)?;
        println!(
            "x = {x}, K = {k}: {:?}, V = {:.8}, primal = {:.8}, dual = {:.8}, gap = {:.2e}",
            sol.status, sol.value, report.primal_sup, report.dual_inf, report.gap
        );
        // Weak duality up to numerics; strong duality up to grid error.
        assert!(report.gap > -1e-6 && report.gap < 1e-3);
    }

    // Same certificate in the transaction-cost regime on the stable model.
    let ev = ScaleEvaluator::new(ProcessModel::Stable { alpha: 1.5 }, 0.1)?;
    let (x, k) = (3.0, 0.5);
    let report = duality_gap_report(&ev, x, k, Regime::TransactionCost(0.01), 200)?;
    println!(
        "stable bands, x = {x}, K = {k}: primal = {:.8}, dual = {:.8}, gap = {:.2e}",
        report.primal_sup, report.dual_inf, report.gap
    );
    Ok(())
}
