//! Spectrally negative model without transaction cost: Lagrangian barrier
//! value, the candidate barrier `b_Lambda`, the multiplier map `Lambda(b)`,
//! the ruin constraint `Psi_x(b)` and its limit `Kbar_x`.

use crate::error::{Error, Result};
use crate::numerics::golden_section_max;
use crate::scale::ScaleEvaluator;

/// Reflection strategy: dividends are paid to keep the reserve at or
/// below `level`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierPolicy {
    pub level: f64,
}

impl BarrierPolicy {
    pub fn new(level: f64) -> Result<Self> {
        if level >= 0.0 && level.is_finite() {
            Ok(BarrierPolicy { level })
        } else {
            Err(Error::Config(format!("barrier level must be >= 0, got {level}")))
        }
    }
}

/// Hard cap for barrier searches; the objective flattens far before this.
const SEARCH_CAP: f64 = 1e4;
/// Barriers below this are reported as exactly 0.
const ZERO_SNAP: f64 = 1e-7;

/// `zeta_Lambda(s) = (1 + q Lambda W(s)) / W'(s)`; the barrier value slope
/// whose maximizer is the candidate barrier. Returns 0 at `s = 0` when
/// `W'(0+)` is infinite.
pub fn zeta(ev: &ScaleEvaluator, lambda: f64, s: f64) -> Result<f64> {
    if lambda < 0.0 {
        return Err(Error::Domain(format!("multiplier must be >= 0, got {lambda}")));
    }
    if s < 0.0 {
        return Err(Error::Domain(format!("zeta needs s >= 0, got {s}")));
    }
    let wp = ev.w(s, 1)?;
    if wp == f64::INFINITY {
        return Ok(0.0);
    }
    if wp <= 0.0 {
        return Err(Error::Numerical(format!(
            "W' must be positive (W strictly increasing), got {wp} at s={s}"
        )));
    }
    Ok((1.0 + ev.q() * lambda * ev.w(s, 0)?) / wp)
}

/// Candidate barrier `b_Lambda = argmax zeta_Lambda`, unique for models
/// whose jump density is completely monotone. Callers should treat the
/// result as heuristic otherwise (see `ProcessModel::has_completely_monotone_density`).
pub fn optimal_barrier(ev: &ScaleEvaluator, lambda: f64) -> Result<BarrierPolicy> {
    // Expand the right end until zeta decreases there; unimodality then
    // guarantees the bracket holds the maximum.
    let mut hi = 1.0;
    loop {
        let mid = zeta(ev, lambda, 0.5 * hi)?;
        let end = zeta(ev, lambda, hi)?;
        if end < mid {
            break;
        }
        hi *= 2.0;
        if hi > SEARCH_CAP {
            return Err(Error::Numerical(format!(
                "barrier search still increasing at cap {SEARCH_CAP}"
            )));
        }
    }
    let (mut b, f_b) = golden_section_max(&|s| zeta(ev, lambda, s).unwrap_or(f64::NEG_INFINITY), 0.0, hi, 1e-8);
    // Boundary candidate: the maximum may sit at 0 (b_Lambda = 0 regime).
    if zeta(ev, lambda, 0.0)? >= f_b || b < ZERO_SNAP {
        b = 0.0;
    }
    BarrierPolicy::new(b)
}

/// Threshold multiplier `LambdaBar = sup { Lambda : b_Lambda = 0 }`,
/// or 0 when the unconstrained barrier is already positive.
pub fn lambda_bar(ev: &ScaleEvaluator) -> Result<f64> {
    if optimal_barrier(ev, 0.0)?.level > 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while optimal_barrier(ev, hi)?.level <= ZERO_SNAP {
        hi *= 2.0;
        if hi > 1e8 {
            return Err(Error::Numerical(
                "no positive barrier found below multiplier 1e8".into(),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if optimal_barrier(ev, mid)?.level > ZERO_SNAP {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Lagrangian value of the barrier strategy:
/// `W(x)(1 + q Lambda W(b))/W'(b) - Lambda Z(x) + Lambda K` for `x <= b`,
/// linear continuation `x - b + (value at b)` above.
pub fn value_barrier_lagrangian(
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
        return Ok(x - b + value_barrier_lagrangian(ev, b, policy, lambda, k)?);
    }
    let wp = ev.w(b, 1)?;
    let slope = if wp == f64::INFINITY {
        0.0
    } else {
        (1.0 + ev.q() * lambda * ev.w(b, 0)?) / wp
    };
    Ok(ev.w(x, 0)? * slope - lambda * ev.z(x)? + lambda * k)
}

/// The multiplier for which `b` is the candidate barrier:
/// `Lambda(b) = -W''(b) / ( q [ W(b) W''(b) - W'(b)^2 ] )` for `b > b_0`,
/// where `b_0` is the unconstrained barrier (the map is 0 there).
pub fn lambda_of_b(ev: &ScaleEvaluator, b: f64) -> Result<f64> {
    let w = ev.w(b, 0)?;
    let wp = ev.w(b, 1)?;
    let wpp = ev.w(b, 2)?;
    let denom = w * wpp - wp * wp;
    if denom >= 0.0 {
        return Err(Error::Numerical(format!(
            "log-concavity of W violated at b={b} (W W'' - W'^2 = {denom})"
        )));
    }
    let lam = -wpp / (ev.q() * denom);
    // At b = b_0 the numerator vanishes; tolerate rounding-scale negatives.
    if lam < -1e-6 {
        return Err(Error::Domain(format!(
            "multiplier map needs b above the unconstrained barrier, got b={b}"
        )));
    }
    Ok(lam.max(0.0))
}

/// Ruin constraint of the barrier strategy,
/// `Psi_x(b) = E_x[e^{-q tau}]` under reflection at `b`:
/// `Z(x) - q (W(b)/W'(b)) W(x)` for `x <= b`, constant in `x` above.
pub fn psi_barrier(ev: &ScaleEvaluator, x: f64, b: f64) -> Result<f64> {
    if x < 0.0 || b < 0.0 {
        return Err(Error::Domain(format!("psi_barrier needs x, b >= 0, got x={x}, b={b}")));
    }
    let x_eff = x.min(b);
    let wp = ev.w(b, 1)?;
    let ratio = if wp == f64::INFINITY {
        0.0
    } else {
        ev.w(b, 0)? / wp
    };
    let v = ev.z(x_eff)? - ev.q() * ratio * ev.w(x_eff, 0)?;
    check_unit_interval(v, "psi_barrier")
}

/// `Kbar_x = E_x[e^{-q tau}]` for the do-nothing strategy:
/// `Z(x) - q W(x) / Phi(q)`; the infimum of `Psi_x(b)` over `b`.
pub fn k_bar(ev: &ScaleEvaluator, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!("k_bar needs x >= 0, got {x}")));
    }
    let v = ev.z(x)? - ev.q() * ev.w(x, 0)? / ev.phi();
    check_unit_interval(v, "k_bar")
}

fn check_unit_interval(v: f64, what: &str) -> Result<f64> {
    const TOL: f64 = 1e-6;
    if !(-TOL..=1.0 + TOL).contains(&v) {
        return Err(Error::Numerical(format!("{what} outside [0,1]: {v}")));
    }
    Ok(v.clamp(0.0, 1.0))
}
