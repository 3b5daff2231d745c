use crate::error::{Error, Result};

/// Bisection for `f(x) = target` where `f` is nondecreasing on `[lo, hi]`.
///
/// Requires `f(lo) <= target <= f(hi)`; converges to `tol` in the argument.
pub fn bisect_increasing(
    mut f: impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    target: f64,
    tol: f64,
) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if !(flo <= target && target <= fhi) {
        return Err(Error::Numerical(format!(
            "root not bracketed: f({lo})={flo}, f({hi})={fhi}, target={target}"
        )));
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection for `f(x) = target` where `f` is nonincreasing on `[lo, hi]`.
pub fn bisect_decreasing(
    f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    target: f64,
    tol: f64,
) -> Result<f64> {
    let mut f = f;
    bisect_increasing(move |x| -f(x), lo, hi, -target, tol)
}

/// Doubles `hi` starting from `start` until `pred(hi)` holds, up to `cap`.
pub fn expand_upper(mut pred: impl FnMut(f64) -> bool, start: f64, cap: f64) -> Result<f64> {
    let mut hi = start;
    while hi <= cap {
        if pred(hi) {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::Numerical(format!(
        "bracket expansion exhausted at cap {cap}"
    )))
}
