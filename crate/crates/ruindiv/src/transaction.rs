//! Spectrally negative model with a fixed transaction cost `beta > 0`:
//! single-band strategies `(b_minus, b_plus)` paying the lump
//! `b_plus - b_minus` (net of cost) whenever the reserve reaches `b_plus`.

use crate::definetti;
use crate::error::{Error, Result};
use crate::numerics::golden_section_max;
use crate::scale::ScaleEvaluator;

/// Band strategy: on reaching `upper` the reserve is brought down to
/// `lower`, paying `upper - lower` minus the cost `cost`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPolicy {
    pub lower: f64,
    pub upper: f64,
    pub cost: f64,
}

impl BandPolicy {
    pub fn new(lower: f64, upper: f64, cost: f64) -> Result<Self> {
        if !(lower >= 0.0 && lower < upper && upper.is_finite()) {
            return Err(Error::Config(format!(
                "band needs 0 <= lower < upper, got ({lower}, {upper})"
            )));
        }
        if !(cost > 0.0 && cost.is_finite()) {
            return Err(Error::Config(format!("transaction cost must be > 0, got {cost}")));
        }
        Ok(BandPolicy { lower, upper, cost })
    }
}

const SEARCH_CAP: f64 = 1e4;

/// Band objective
/// `G_Lambda(b-, b+) = (b+ - b- - beta + q Lambda int_{b-}^{b+} W) / (W(b+) - W(b-))`,
/// the per-unit-of-scale value of one payout cycle.
pub fn g_lambda(
    ev: &ScaleEvaluator,
    lambda: f64,
    b_minus: f64,
    b_plus: f64,
    beta: f64,
) -> Result<f64> {
    if !(b_minus < b_plus) {
        return Err(Error::Domain(format!(
            "g_lambda needs b- < b+, got ({b_minus}, {b_plus})"
        )));
    }
    let dw = ev.w(b_plus, 0)? - ev.w(b_minus, 0)?;
    if dw <= 0.0 {
        return Err(Error::Numerical(format!(
            "degenerate band: W({b_plus}) - W({b_minus}) = {dw}"
        )));
    }
    let integral = ev.integral_w(b_minus, b_plus)?;
    Ok((b_plus - b_minus - beta + ev.q() * lambda * integral) / dw)
}

/// Candidate optimal band maximizing `G_Lambda`, via nested line searches:
/// inner maximization over the lower level for fixed width, outer over the
/// width. The boundary candidate `b- = 0` competes with the interior point.
pub fn optimal_band(ev: &ScaleEvaluator, lambda: f64, beta: f64) -> Result<BandPolicy> {
    if beta <= 0.0 {
        return Err(Error::Config(format!("transaction cost must be > 0, got {beta}")));
    }
    let b_lam = definetti::optimal_barrier(ev, lambda)?.level;
    // The optimal band straddles b_Lambda, so the lower level lives in
    // [0, b_Lambda].
    let inner = |d: f64| -> (f64, f64) {
        let g = |eta: f64| g_lambda(ev, lambda, eta, eta + d, beta).unwrap_or(f64::NEG_INFINITY);
        let (mut eta, mut val) = if b_lam > 0.0 {
            golden_section_max(&g, 0.0, b_lam, 1e-11)
        } else {
            (0.0, g(0.0))
        };
        let at_zero = g(0.0);
        if at_zero >= val {
            eta = 0.0;
            val = at_zero;
        }
        (eta, val)
    };
    let mut hi = beta.max(1e-3);
    loop {
        let (_, g_mid) = inner(0.5 * hi);
        let (_, g_end) = inner(hi);
        if g_end < g_mid {
            break;
        }
        hi *= 2.0;
        if hi > SEARCH_CAP {
            return Err(Error::Numerical(format!(
                "band width search still increasing at cap {SEARCH_CAP}"
            )));
        }
    }
    // Tolerances tight enough that the band is a smooth function of
    // Lambda at the 1e-10 level; the constraint bisection in
    // solve_multiplier_star relies on that.
    let (d, _) = golden_section_max(&|d: f64| inner(d).1, 1e-11, hi, 1e-11);
    let (eta, _) = inner(d);
    BandPolicy::new(eta, eta + d, beta)
}

/// Lagrangian value of the band strategy:
/// `W(x) G_Lambda(b-, b+) - Lambda Z(x) + Lambda K` for `x <= b+`, lump
/// continuation `x - b- - beta + (value at b-)` above.
pub fn value_band_lagrangian(
    ev: &ScaleEvaluator,
    x: f64,
    band: BandPolicy,
    lambda: f64,
    k: f64,
) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!("initial reserve must be >= 0, got {x}")));
    }
    if x > band.upper {
        return Ok(x - band.lower - band.cost
            + value_band_lagrangian(ev, band.lower, band, lambda, k)?);
    }
    let g = g_lambda(ev, lambda, band.lower, band.upper, band.cost)?;
    Ok(ev.w(x, 0)? * g - lambda * ev.z(x)? + lambda * k)
}

/// Ruin constraint of the band strategy, `Psi_x(b-, b+) = E_x[e^{-q tau}]`.
pub fn psi_band(ev: &ScaleEvaluator, x: f64, b_minus: f64, b_plus: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!("psi_band needs x >= 0, got {x}")));
    }
    if !(0.0 <= b_minus && b_minus < b_plus) {
        return Err(Error::Domain(format!(
            "psi_band needs 0 <= b- < b+, got ({b_minus}, {b_plus})"
        )));
    }
    let w_m = ev.w(b_minus, 0)?;
    let w_p = ev.w(b_plus, 0)?;
    let dw = w_p - w_m;
    if dw <= 0.0 {
        return Err(Error::Numerical(format!(
            "degenerate band: W({b_plus}) - W({b_minus}) = {dw}"
        )));
    }
    let v = if x <= b_plus {
        let integral = ev.integral_w(b_minus, b_plus)?;
        ev.z(x)? - ev.w(x, 0)? * ev.q() * integral / dw
    } else {
        (ev.z(b_minus)? * w_p - ev.z(b_plus)? * w_m) / dw
    };
    const TOL: f64 = 1e-6;
    if !(-TOL..=1.0 + TOL).contains(&v) {
        return Err(Error::Numerical(format!("psi_band outside [0,1]: {v}")));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// Points of the level curve `{(b-, b+) : Psi_x(b-, b+) = K}`, traced by
/// solving for `b+` on a grid of `b-` values (Psi is monotone in `b+`).
pub fn level_curve(ev: &ScaleEvaluator, x: f64, k: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(Error::Config(format!("level curve needs >= 2 points, got {n}")));
    }
    let k_floor = definetti::k_bar(ev, x)?;
    if k <= k_floor {
        return Err(Error::Infeasible(format!(
            "level K={k} at or below the do-nothing floor {k_floor}"
        )));
    }
    // Degenerate end: the barrier level with Psi_x(b) = K. The grid stops
    // a hair short of it; zero-width bands lose all precision to
    // cancellation in W(b+) - W(b-).
    let b_low = barrier_psi_root(ev, x, k)?;
    let top = (b_low - 1e-4 * (1.0 + b_low)).max(0.0);
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let b_minus = top * i as f64 / (n - 1) as f64;
        let b_plus = band_upper_root(ev, x, k, b_minus, b_low)?;
        points.push((b_minus, b_plus));
    }
    Ok(points)
}

/// Smallest multiplier whose candidate band satisfies the constraint with
/// equality (or the unconstrained band when already feasible).
pub fn solve_multiplier_star(
    ev: &ScaleEvaluator,
    x: f64,
    k: f64,
    beta: f64,
) -> Result<(f64, BandPolicy)> {
    let k_floor = definetti::k_bar(ev, x)?;
    if k <= k_floor {
        return Err(Error::Infeasible(format!(
            "constraint level K={k} at or below the do-nothing floor {k_floor}"
        )));
    }
    let h = |lam: f64| -> Result<f64> {
        let band = optimal_band(ev, lam, beta)?;
        Ok(psi_band(ev, x, band.lower, band.upper)? - k)
    };
    let band0 = optimal_band(ev, 0.0, beta)?;
    if psi_band(ev, x, band0.lower, band0.upper)? <= k {
        return Ok((0.0, band0));
    }
    // h is nonincreasing in Lambda (larger multipliers push the band up,
    // lowering the ruin transform); bracket the sign change and bisect.
    let mut hi = 1.0;
    while h(hi)? > 0.0 {
        hi *= 2.0;
        if hi > 1e8 {
            return Err(Error::Numerical(
                "no multiplier below 1e8 meets the constraint".into(),
            ));
        }
    }
    let mut lo = 0.0;
    let mut lam = hi;
    for _ in 0..200 {
        lam = 0.5 * (lo + hi);
        let v = h(lam)?;
        if v.abs() < 1e-10 {
            break;
        }
        if v > 0.0 {
            lo = lam;
        } else {
            hi = lam;
        }
        if hi - lo < 1e-13 * (1.0 + lam) {
            break;
        }
    }
    let band = optimal_band(ev, lam, beta)?;
    Ok((lam, band))
}

/// Root of `Psi_x(b) = K` over the barrier family (strictly decreasing).
fn barrier_psi_root(ev: &ScaleEvaluator, x: f64, k: f64) -> Result<f64> {
    if definetti::psi_barrier(ev, x, 0.0)? <= k {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while definetti::psi_barrier(ev, x, hi)? > k {
        hi *= 2.0;
        if hi > SEARCH_CAP {
            return Err(Error::Infeasible(format!(
                "level K={k} unreachable by barriers below {SEARCH_CAP}"
            )));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if definetti::psi_barrier(ev, x, mid)? > k {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * (1.0 + hi) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Root of `Psi_x(b-, b+) = K` in `b+` for fixed `b-` (decreasing in `b+`).
fn band_upper_root(ev: &ScaleEvaluator, x: f64, k: f64, b_minus: f64, b_low: f64) -> Result<f64> {
    let mut lo = b_low.max(b_minus + 1e-9);
    if psi_band(ev, x, b_minus, lo)? < k {
        // K is attained before the degenerate end; shrink toward b_minus.
        let mut a = b_minus + 1e-12;
        for _ in 0..200 {
            let mid = 0.5 * (a + lo);
            if psi_band(ev, x, b_minus, mid)? > k {
                a = mid;
            } else {
                lo = mid;
            }
            if lo - a < 1e-12 * (1.0 + lo) {
                break;
            }
        }
        return Ok(lo);
    }
    let mut hi = (2.0 * lo).max(1.0);
    while psi_band(ev, x, b_minus, hi)? > k {
        hi *= 2.0;
        if hi > SEARCH_CAP {
            return Err(Error::Infeasible(format!(
                "level K={k} unreachable for lower level {b_minus}"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if psi_band(ev, x, b_minus, mid)? > k {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * (1.0 + hi) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
