//! Dual model: the reserve is spectrally positive (gains arrive as
//! jumps, premiums are paid out continuously). Dividends are again paid
//! by reflection at a barrier, but the geometry flips: here the
//! unconstrained optimal barrier is 0 and only the multiplier threshold
//! Lambda_bar = psi'(0+)/q lifts it off zero.

use ruindiv::constrained::{self, Regime};
use ruindiv::dual;
use ruindiv::{
    ClaimDistribution, Orientation, ProcessModel, Result, ScaleEvaluator, ScaleParams,
};

fn main() -> Result<()> {
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
    let ev = ScaleEvaluator::with_params(model, 0.03, params)?;

    let b0 = dual::optimal_barrier_dual(&ev, 0.0)?.level;
    println!("b0 = {b0}, Lambda_bar = {:.4}", dual::lambda_bar_dual(&ev)?);

    println!("{:>8} {:>12}", "Lambda", "b_Lambda");
    for &lam in &[2.0, 6.0, 6.67, 8.0, 12.0] {
        let b = dual::optimal_barrier_dual(&ev, lam)?.level;
        println!("{lam:>8.2} {b:>12.6}");
    }

    // Constrained solve: the barrier rises until Psi_x(b) = K.
    let (x, k) = (1.0, 0.95);
    let sol = constrained::solve(&ev, x, k, Regime::Dual)?;
    println!(
        "x = {x}, K = {k}: {:?}, Lambda* = {:.4}, V = {:.6}, Psi = {:.6}",
        sol.status, sol.multiplier, sol.value, sol.constraint_value
    );
    Ok(())
}
