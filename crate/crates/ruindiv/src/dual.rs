//! Dual model: spectrally positive reserves (income arrives in lumps,
//! expenses drain continuously). Scale functions are those of the negated
//! process, so the evaluator is built from the same parameters with the
//! dual orientation. Barriers have closed-form multipliers through `Zbar`.

use crate::definetti::BarrierPolicy;
use crate::error::{Error, Result};
use crate::scale::ScaleEvaluator;

/// `k(s) = Zbar(s) - Z(s)/Phi(q) + psi'(0+)/q`, the building block of the
/// dual barrier value.
pub fn k_small(ev: &ScaleEvaluator, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::Domain(format!("k_small needs s >= 0, got {s}")));
    }
    let drift = ev.model().laplace_exponent_derivative(0.0)?;
    Ok(ev.z_bar(s)? - ev.z(s)? / ev.phi() + drift / ev.q())
}

/// Candidate dual barrier: `Zbar^{-1}(Lambda - psi'(0+)/q)` when the
/// multiplier exceeds the threshold `psi'(0+)/q`, else 0.
pub fn optimal_barrier_dual(ev: &ScaleEvaluator, lambda: f64) -> Result<BarrierPolicy> {
    if lambda < 0.0 {
        return Err(Error::Domain(format!("multiplier must be >= 0, got {lambda}")));
    }
    let threshold = ev.model().laplace_exponent_derivative(0.0)? / ev.q();
    let target = lambda - threshold;
    if target <= 0.0 {
        return BarrierPolicy::new(0.0);
    }
    // Zbar is strictly increasing and onto [0, inf); bisect.
    let mut hi = 1.0;
    while ev.z_bar(hi)? < target {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::Numerical("Zbar inversion bound exhausted".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ev.z_bar(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * (1.0 + hi) {
            break;
        }
    }
    BarrierPolicy::new(0.5 * (lo + hi))
}

/// Threshold multiplier below which the dual barrier stays at 0.
pub fn lambda_bar_dual(ev: &ScaleEvaluator) -> Result<f64> {
    Ok(ev.model().laplace_exponent_derivative(0.0)? / ev.q())
}

/// Lagrangian value of the dual barrier strategy:
/// `-k(b-x) + (Z(b-x)/Z(b)) (k(b) - Lambda) + Lambda K` for `x <= b`,
/// linear continuation above.
pub fn value_barrier_dual_lagrangian(
    ev: &ScaleEvaluator,
    x: f64,
    policy: BarrierPolicy,
    lambda: f64,
    k: f64,
) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!("initial reserve must be >= 0, got {x}")));
    }
    let b = policy.level;
    if x > b {
        return Ok(x - b + value_barrier_dual_lagrangian(ev, b, policy, lambda, k)?);
    }
    Ok(-k_small(ev, b - x)?
        + ev.z(b - x)? / ev.z(b)? * (k_small(ev, b)? - lambda)
        + lambda * k)
}

/// Dual ruin constraint `Psi_x(b) = Z(b - x) / Z(b)`; equal to 1 at `x = 0`
/// and strictly decreasing in `b` for `x > 0`.
pub fn psi_dual(ev: &ScaleEvaluator, x: f64, b: f64) -> Result<f64> {
    if x < 0.0 || b < 0.0 {
        return Err(Error::Domain(format!("psi_dual needs x, b >= 0, got x={x}, b={b}")));
    }
    let v = ev.z(b - x)? / ev.z(b)?;
    const TOL: f64 = 1e-6;
    if !(-TOL..=1.0 + TOL).contains(&v) {
        return Err(Error::Numerical(format!("psi_dual outside [0,1]: {v}")));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// Multiplier map of the dual model, `Lambda(b) = Zbar(b) + psi'(0+)/q`
/// for `b` above the unconstrained barrier (0 at the barrier itself).
pub fn lambda_of_b_dual(ev: &ScaleEvaluator, b: f64) -> Result<f64> {
    if b < 0.0 {
        return Err(Error::Domain(format!("lambda map needs b >= 0, got {b}")));
    }
    if b == 0.0 {
        return Ok(0.0);
    }
    Ok(ev.z_bar(b)? + ev.model().laplace_exponent_derivative(0.0)? / ev.q())
}

/// Dual do-nothing floor `Kbar_x = e^{-Phi(q) x}`.
pub fn k_bar_dual(ev: &ScaleEvaluator, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!("k_bar_dual needs x >= 0, got {x}")));
    }
    Ok((-ev.phi() * x).exp())
}

/// Smooth-fit residual `xi_Lambda(b) = 1/Phi(q) + (k(b) - Lambda)/Z(b)`;
/// zero at the candidate barrier when it is positive. Diagnostic backing
/// the smooth-fit invariant tests.
pub fn smooth_fit_residual(ev: &ScaleEvaluator, lambda: f64, b: f64) -> Result<f64> {
    Ok(1.0 / ev.phi() + (k_small(ev, b)? - lambda) / ev.z(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::dual_ev;

    #[test]
    fn k_small_at_origin() {
        let ev = dual_ev();
        // Zbar(0)=0, Z(0)=1: k(0) = -1/Phi(q) + psi'(0+)/q with psi'(0+)=0.2.
        let expect = -1.0 / ev.phi() + 0.2 / 0.03;
        assert!((k_small(ev, 0.0).unwrap() - expect).abs() < 1e-10);
        // Frozen references: Phi(0.03) and k(0) for these parameters.
        assert!((ev.phi() - 9.564_447_976_496_046e-2).abs() < 1e-9);
        assert!((k_small(ev, 0.0).unwrap() - (-3.788_719_806_838_435_3)).abs() < 1e-7);
    }

    #[test]
    fn threshold_multiplier_and_zero_barrier() {
        let ev = dual_ev();
        let lam_bar = lambda_bar_dual(ev).unwrap();
        assert!((lam_bar - 0.2 / 0.03).abs() < 1e-12);
        for &lam in &[0.0, 3.0, lam_bar] {
            assert_eq!(optimal_barrier_dual(ev, lam).unwrap().level, 0.0);
        }
        assert!(optimal_barrier_dual(ev, lam_bar + 0.5).unwrap().level > 0.0);
    }

    #[test]
    fn barrier_inverts_zbar() {
        let ev = dual_ev();
        for &lam in &[7.0, 8.0, 12.0] {
            let b = optimal_barrier_dual(ev, lam).unwrap().level;
            let target = lam - lambda_bar_dual(ev).unwrap();
            assert!((ev.z_bar(b).unwrap() - target).abs() < 1e-8, "lambda={lam}");
        }
    }

    #[test]
    fn lambda_map_round_trip_and_monotone() {
        let ev = dual_ev();
        let mut prev = 0.0;
        for &b in &[0.5, 1.0, 2.0, 4.0] {
            let lam = lambda_of_b_dual(ev, b).unwrap();
            assert!(lam > prev);
            prev = lam;
            let back = optimal_barrier_dual(ev, lam).unwrap().level;
            assert!((back - b).abs() < 1e-8, "b={b}: {back}");
        }
    }

    #[test]
    fn psi_dual_limits() {
        let ev = dual_ev();
        for &b in &[0.0, 1.0, 5.0] {
            assert!((psi_dual(ev, 0.0, b).unwrap() - 1.0).abs() < 1e-12);
        }
        // x >= b collapses to 1/Z(b).
        let v = psi_dual(ev, 3.0, 2.0).unwrap();
        assert!((v - 1.0 / ev.z(2.0).unwrap()).abs() < 1e-12);
        // Strictly decreasing in b for x > 0.
        let mut prev = psi_dual(ev, 1.0, 0.0).unwrap();
        for &b in &[0.5, 1.0, 2.0, 4.0] {
            let p = psi_dual(ev, 1.0, b).unwrap();
            assert!(p < prev, "b={b}");
            prev = p;
        }
        // Large-barrier limit is the do-nothing floor.
        let kb = k_bar_dual(ev, 1.0).unwrap();
        assert!((psi_dual(ev, 1.0, 50.0).unwrap() - kb).abs() < 1e-3);
        assert_eq!(k_bar_dual(ev, 0.0).unwrap(), 1.0);
        let x = 1.0 / ev.phi();
        assert!((k_bar_dual(ev, x).unwrap() - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn smooth_fit_at_positive_barriers() {
        let ev = dual_ev();
        for &lam in &[8.0, 10.0, 15.0] {
            let b = optimal_barrier_dual(ev, lam).unwrap();
            assert!(b.level > 0.0);
            let xi = smooth_fit_residual(ev, lam, b.level).unwrap();
            assert!(xi.abs() < 1e-8, "lambda={lam}: xi={xi}");
            // First-order fit: d/dx of the value at x=b equals 1.
            let h = 1e-5;
            let f = |x: f64| value_barrier_dual_lagrangian(ev, x, b, lam, 0.0).unwrap();
            let slope = (f(b.level) - f(b.level - h)) / h;
            assert!((slope - 1.0).abs() < 1e-4, "lambda={lam}: slope={slope}");
        }
    }

    #[test]
    fn dual_value_branches() {
        let ev = dual_ev();
        let b = BarrierPolicy::new(2.0).unwrap();
        // x = b: Z(0)=1 collapses the middle term.
        let v = value_barrier_dual_lagrangian(ev, 2.0, b, 0.0, 0.0).unwrap();
        let expect = -k_small(ev, 0.0).unwrap() + k_small(ev, 2.0).unwrap() / ev.z(2.0).unwrap();
        assert!((v - expect).abs() < 1e-12);
        // Above the barrier: linear continuation.
        let v2 = value_barrier_dual_lagrangian(ev, 2.6, b, 0.0, 0.0).unwrap();
        assert!((v2 - (0.6 + v)).abs() < 1e-12);
        assert!(value_barrier_dual_lagrangian(ev, -1.0, b, 0.0, 0.0).is_err());
    }
}
