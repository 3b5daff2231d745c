//! Optimal reflection barrier without a ruin-time constraint for a
//! Cramer-Lundberg reserve with heavy-tailed Lomax(1, 1.5) claims.
//! The optimal barrier for these parameters is b0 = 0.42.

use ruindiv::definetti;
use ruindiv::{
    ClaimDistribution, Orientation, ProcessModel, Result, ScaleEvaluator, ScaleParams,
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

    let b0 = definetti::optimal_barrier(&ev, 0.0)?;
    println!("optimal barrier b0 = {:.4}", b0.level);

    // Expected discounted dividends when reflecting at b0 (multiplier 0).
    println!("{:>6} {:>12} {:>12}", "x", "V(x)", "Psi_x(b0)");
    for i in 0..=8 {
        let x = 0.5 * i as f64;
        let v = definetti::value_barrier_lagrangian(&ev, x, b0, 0.0, 0.0)?;
        let psi = definetti::psi_barrier(&ev, x, b0.level)?;
        println!("{x:>6.2} {v:>12.6} {psi:>12.6}");
    }
    Ok(())
}
