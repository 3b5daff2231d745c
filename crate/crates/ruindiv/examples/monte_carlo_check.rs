//! Cross-check the scale-function formulas against exact event-driven
//! simulation of the controlled Cramer-Lundberg path: expected
//! discounted dividends and the expected discount factor at ruin.

use ruindiv::definetti;
use ruindiv::montecarlo::{simulate_do_nothing, simulate_policy};
use ruindiv::{
    ClaimDistribution, Orientation, Policy, ProcessModel, Result, ScaleEvaluator,
    SimulationParams,
};

fn main() -> Result<()> {
    let model = ProcessModel::CramerLundberg {
        premium: 1.5,
        intensity: 1.0,
        claims: ClaimDistribution::Exponential { rate: 2.0 },
        orientation: Orientation::SpectrallyNegative,
    };
    let q = 0.1;
    let ev = ScaleEvaluator::new(model, q)?;
    let mut params = SimulationParams::new(50_000, 20260823);
    params.antithetic = true;

    let b = definetti::optimal_barrier(&ev, 0.0)?;
    for &x in &[0.5, 1.5, 3.0] {
        let est = simulate_policy(&model, q, Policy::Barrier(b), x, &params)?;
        let v = definetti::value_barrier_lagrangian(&ev, x, b, 0.0, 0.0)?;
        let psi = definetti::psi_barrier(&ev, x, b.level)?;
        println!(
            "x = {x}: value {:.5} +- {:.5} vs formula {:.5} | constraint {:.5} +- {:.5} vs {:.5}",
            est.value_mean, est.value_se, v, est.constraint_mean, est.constraint_se, psi
        );
        assert!((est.value_mean - v).abs() < 3.0 * est.value_se + 1e-3);
        assert!((est.constraint_mean - psi).abs() < 3.0 * est.constraint_se + 1e-3);
    }

    // Without dividends the constraint estimate reproduces the floor
    // Kbar_x = Z(x) - q W(x)/Phi(q).
    let x = 1.0;
    let est = simulate_do_nothing(&model, q, x, &params)?;
    let kb = definetti::k_bar(&ev, x)?;
    println!(
        "do nothing at x = {x}: {:.5} +- {:.5} vs Kbar = {:.5}",
        est.constraint_mean, est.constraint_se, kb
    );
    Ok(())
}
