//! Evaluate the scale functions W, W', Z, Zbar for a Cramer-Lundberg
//! model with exponential claims and check them against the transform
//! identity integral(e^{-beta x} W(x) dx) = 1/(psi(beta) - q).

use ruindiv::{ClaimDistribution, Orientation, ProcessModel, Result, ScaleEvaluator};

fn main() -> Result<()> {
    let model = ProcessModel::CramerLundberg {
        premium: 1.5,
        intensity: 1.0,
        claims: ClaimDistribution::Exponential { rate: 2.0 },
        orientation: Orientation::SpectrallyNegative,
    };
    let ev = ScaleEvaluator::new(model, 0.1)?;
    println!("Phi(q) = {:.8}", ev.phi());

    println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "x", "W", "W'", "Z", "Zbar");
    for i in 0..=10 {
        let x = i as f64;
        println!(
            "{:>6.1} {:>14.8} {:>14.8} {:>14.8} {:>14.8}",
            x,
            ev.w(x, 0)?,
            ev.w(x, 1)?,
            ev.z(x)?,
            ev.z_bar(x)?
        );
    }

    for i in 1..=5 {
        let beta = ev.phi() + i as f64;
        let residual = ev.verify_laplace_identity(beta)?;
        println!("transform residual at beta = Phi + {i}: {residual:.3e}");
    }
    Ok(())
}
