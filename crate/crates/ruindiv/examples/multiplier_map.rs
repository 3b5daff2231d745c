//! The map from a barrier level b to the Lagrange multiplier Lambda(b)
//! that makes b the optimal reflection barrier, and its threshold
//! Lambda_bar below which the optimal barrier is positive.

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

    let b0 = definetti::optimal_barrier(&ev, 0.0)?.level;
    println!("b0 = {b0:.4}, Lambda_bar = {:.4}", definetti::lambda_bar(&ev)?);

    // Lambda(b) is increasing on [b0, inf): larger multipliers penalize
    // ruin more and push the optimal barrier up.
    println!("{:>8} {:>12}", "b", "Lambda(b)");
    for i in 0..=12 {
        let b = b0 + 0.5 * i as f64;
        println!("{b:>8.3} {:>12.6}", definetti::lambda_of_b(&ev, b)?);
    }

    // Round trip: the barrier optimal for Lambda(b) is b again.
    let b = b0 + 2.0;
    let lam = definetti::lambda_of_b(&ev, b)?;
    let back = definetti::optimal_barrier(&ev, lam)?.level;
    println!("round trip at b = {b:.3}: recovered {back:.6}");
    Ok(())
}
