//! Dividend bands under a fixed transaction cost: whenever the reserve
//! reaches b+, it is pushed down to b- and the lump b+ - b- minus the
//! cost is paid out. Uses the spectrally negative stable model, whose
//! scale functions have Mittag-Leffler closed forms.

use ruindiv::transaction;
use ruindiv::{ProcessModel, Result, ScaleEvaluator};

fn main() -> Result<()> {
    let ev = ScaleEvaluator::new(ProcessModel::Stable { alpha: 1.5 }, 0.1)?;
    let beta = 0.01;

    // The band widens and rises as the multiplier grows.
    println!("{:>8} {:>10} {:>10} {:>12}", "Lambda", "b-", "b+", "G_Lambda");
    for &lam in &[0.0, 0.5, 1.0, 2.0, 4.0] {
        let band = transaction::optimal_band(&ev, lam, beta)?;
        let g = transaction::g_lambda(&ev, lam, band.lower, band.upper, beta)?;
        println!("{lam:>8.2} {:>10.5} {:>10.5} {g:>12.6}", band.lower, band.upper);
    }

    // Ruin-transform level curve {(b-, b+) : Psi_x(b-, b+) = K} at x = 3.
    let (x, k) = (3.0, 0.5);
    let points = transaction::level_curve(&ev, x, k, 7)?;
    println!("level curve Psi_{x}(b-, b+) = {k}:");
    for (bm, bp) in points {
        let psi = transaction::psi_band(&ev, x, bm, bp)?;
        println!("  b- = {bm:.5}, b+ = {bp:.5}, Psi = {psi:.8}");
    }

    // Smallest multiplier meeting the constraint with equality.
    let (lam, band) = transaction::solve_multiplier_star(&ev, x, k, beta)?;
    println!(
        "constrained optimum: Lambda* = {lam:.5}, band = [{:.5}, {:.5}]",
        band.lower, band.upper
    );
    Ok(())
}
