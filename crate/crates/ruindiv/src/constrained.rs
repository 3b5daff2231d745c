//! Primal problem: maximize expected discounted dividends subject to the
//! ruin-time constraint `E_x[e^{-q tau}] <= K`, solved through the
//! Lagrangian dual. Covers the no-cost barrier regime, the
//! transaction-cost band regime, and the dual (spectrally positive) model.

use crate::definetti::{self, BarrierPolicy};
use crate::dual;
use crate::error::{Error, Result};
use crate::scale::ScaleEvaluator;
use crate::transaction::{self, BandPolicy};

/// Classification band around the feasibility boundary.
pub const CLASS_TOL: f64 = 1e-6;
/// Residual tolerance for binding constraints.
pub const CONSTRAINT_TOL: f64 = 1e-8;
/// Default certificate tolerance for the duality gap.
pub const GAP_TOL: f64 = 1e-3;

const SEARCH_CAP: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionStatus {
    /// Constraint slack at the unconstrained optimum; multiplier 0.
    Inactive,
    /// Constraint active; positive multiplier with complementary slackness.
    Binding,
    /// `K` at the do-nothing floor; only the zero strategy is feasible.
    DoNothingBoundary,
    /// `K` below the floor; no strategy is feasible.
    Infeasible,
}

/// Which Lagrangian family solves the instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// Spectrally negative, reflection barrier, no transaction cost.
    NoCost,
    /// Spectrally negative with fixed cost per dividend lump.
    TransactionCost(f64),
    /// Spectrally positive (dual) model, barrier at the top.
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    Barrier(BarrierPolicy),
    Band(BandPolicy),
}

#[derive(Debug, Clone)]
pub struct ConstrainedSolution {
    pub status: SolutionStatus,
    /// Absent exactly when the instance is infeasible.
    pub policy: Option<Policy>,
    /// Optimal multiplier; infinite at the do-nothing boundary where the
    /// dual infimum is attained only in the limit.
    pub multiplier: f64,
    pub value: f64,
    /// `Psi_x` of the returned policy (NaN when infeasible).
    pub constraint_value: f64,
    /// Do-nothing floor `Kbar_x`.
    pub k_bar: f64,
    pub k: f64,
    /// Set when the model lacks a completely monotone jump density, where
    /// barrier/band optimality is not guaranteed by the theory.
    pub heuristic: bool,
}

/// Duality certificate: grid suprema/infima of the two sides.
#[derive(Debug, Clone, Copy)]
pub struct GapReport {
    /// Best plain value over a grid of feasible policies.
    pub primal_sup: f64,
    /// Smallest Lagrangian value over a multiplier grid.
    pub dual_inf: f64,
    /// `dual_inf - primal_sup`; nonnegative up to numerics by weak duality.
    pub gap: f64,
    pub grid_points: usize,
}

fn floor_k_bar(ev: &ScaleEvaluator, x: f64, regime: Regime) -> Result<f64> {
    match regime {
        Regime::Dual => dual::k_bar_dual(ev, x),
        _ => definetti::k_bar(ev, x),
    }
}

fn unconstrained_policy(ev: &ScaleEvaluator, regime: Regime) -> Result<Policy> {
    Ok(match regime {
        Regime::NoCost => Policy::Barrier(definetti::optimal_barrier(ev, 0.0)?),
        Regime::TransactionCost(beta) => Policy::Band(transaction::optimal_band(ev, 0.0, beta)?),
        Regime::Dual => Policy::Barrier(dual::optimal_barrier_dual(ev, 0.0)?),
    })
}

fn psi_of(ev: &ScaleEvaluator, x: f64, policy: Policy, regime: Regime) -> Result<f64> {
    match (policy, regime) {
        (Policy::Barrier(b), Regime::Dual) => dual::psi_dual(ev, x, b.level),
        (Policy::Barrier(b), _) => definetti::psi_barrier(ev, x, b.level),
        (Policy::Band(band), _) => transaction::psi_band(ev, x, band.lower, band.upper),
    }
}

fn value_of(
    ev: &ScaleEvaluator,
    x: f64,
    policy: Policy,
    regime: Regime,
    lambda: f64,
    k: f64,
) -> Result<f64> {
    match (policy, regime) {
        (Policy::Barrier(b), Regime::Dual) => {
            dual::value_barrier_dual_lagrangian(ev, x, b, lambda, k)
        }
        (Policy::Barrier(b), _) => definetti::value_barrier_lagrangian(ev, x, b, lambda, k),
        (Policy::Band(band), _) => transaction::value_band_lagrangian(ev, x, band, lambda, k),
    }
}

/// Feasibility classification of the instance `(x, K)`.
pub fn classify(ev: &ScaleEvaluator, x: f64, k: f64, regime: Regime) -> Result<SolutionStatus> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain(format!("constraint level must lie in [0,1], got {k}")));
    }
    let kb = floor_k_bar(ev, x, regime)?;
    if k < kb - CLASS_TOL {
        return Ok(SolutionStatus::Infeasible);
    }
    if (k - kb).abs() <= CLASS_TOL {
        return Ok(SolutionStatus::DoNothingBoundary);
    }
    let unc = unconstrained_policy(ev, regime)?;
    if k >= psi_of(ev, x, unc, regime)? {
        Ok(SolutionStatus::Inactive)
    } else {
        Ok(SolutionStatus::Binding)
    }
}

/// Full solve of the constrained problem via the dual route.
pub fn solve(ev: &ScaleEvaluator, x: f64, k: f64, regime: Regime) -> Result<ConstrainedSolution> {
    let kb = floor_k_bar(ev, x, regime)?;
    let mut status = classify(ev, x, k, regime)?;
    let heuristic =
        regime != Regime::Dual && !ev.model().has_completely_monotone_density();
    let base = |status| ConstrainedSolution {
        status,
        policy: None,
        multiplier: 0.0,
        value: f64::NEG_INFINITY,
        constraint_value: f64::NAN,
        k_bar: kb,
        k,
        heuristic,
    };
    match status {
        SolutionStatus::Infeasible => return Ok(base(status)),
        SolutionStatus::DoNothingBoundary => {
            return Ok(ConstrainedSolution {
                multiplier: f64::INFINITY,
                value: 0.0,
                constraint_value: kb,
                ..base(status)
            });
        }
        SolutionStatus::Inactive => {
            let policy = unconstrained_policy(ev, regime)?;
            let value = value_of(ev, x, policy, regime, 0.0, k)?;
            let psi = psi_of(ev, x, policy, regime)?;
            return Ok(ConstrainedSolution {
                policy: Some(policy),
                multiplier: 0.0,
                value,
                constraint_value: psi,
                ..base(status)
            });
        }
        SolutionStatus::Binding => {}
    }

    let (policy, lambda) = match regime {
        Regime::TransactionCost(beta) => {
            let (lam, band) = transaction::solve_multiplier_star(ev, x, k, beta)?;
            (Policy::Band(band), lam)
        }
        Regime::NoCost | Regime::Dual => {
            let psi = |b: f64| -> Result<f64> {
                match regime {
                    Regime::Dual => dual::psi_dual(ev, x, b),
                    _ => definetti::psi_barrier(ev, x, b),
                }
            };
            let b_star = bisect_psi_level(&psi, k)?;
            if (psi(b_star)? - k).abs() > CONSTRAINT_TOL {
                if (k - kb).abs() < 1e-4 {
                    // Psi flattens toward the floor; the root is out of
                    // reach numerically and the instance is boundary-like.
                    status = SolutionStatus::DoNothingBoundary;
                    return Ok(ConstrainedSolution {
                        multiplier: f64::INFINITY,
                        value: 0.0,
                        constraint_value: kb,
                        ..base(status)
                    });
                }
                return Err(Error::Numerical(format!(
                    "constraint root not resolved: Psi({b_star}) vs K={k}"
                )));
            }
            let lam = match regime {
                Regime::Dual => dual::lambda_of_b_dual(ev, b_star)?,
                _ => definetti::lambda_of_b(ev, b_star)?,
            };
            (Policy::Barrier(BarrierPolicy::new(b_star)?), lam)
        }
    };
    let value = value_of(ev, x, policy, regime, lambda, k)?;
    let psi = psi_of(ev, x, policy, regime)?;
    Ok(ConstrainedSolution {
        policy: Some(policy),
        multiplier: lambda,
        value,
        constraint_value: psi,
        ..base(status)
    })
}

/// Root of the strictly decreasing `Psi(b) = K` with expanding bracket.
fn bisect_psi_level(psi: &dyn Fn(f64) -> Result<f64>, k: f64) -> Result<f64> {
    if psi(0.0)? <= k {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while psi(hi)? > k {
        hi *= 2.0;
        if hi > SEARCH_CAP {
            // Caller decides whether this is a boundary case.
            return Ok(SEARCH_CAP);
        }
    }
    let mut lo = 0.5 * hi;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if psi(mid)? > k {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * (1.0 + hi) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Numerical strong-duality certificate on `n`-point grids. The exact
/// solution of the instance is inserted into both grids, so the gap is
/// bounded by grid resolution from one side only.
pub fn duality_gap_report(
    ev: &ScaleEvaluator,
    x: f64,
    k: f64,
    regime: Regime,
    n: usize,
) -> Result<GapReport> {
    if n < 2 {
        return Err(Error::Config(format!("gap report needs >= 2 grid points, got {n}")));
    }
    let sol = solve(ev, x, k, regime)?;
    if sol.status == SolutionStatus::Infeasible {
        // Dual side diverges: sample growing multipliers.
        let mut dual_inf = f64::INFINITY;
        for i in 0..n {
            let lam = 10f64.powi(i as i32 % 8);
            let policy = lambda_policy(ev, lam, regime)?;
            let v = value_of(ev, x, policy, regime, lam, k)?;
            dual_inf = dual_inf.min(v);
        }
        return Ok(GapReport {
            primal_sup: f64::NEG_INFINITY,
            dual_inf,
            gap: f64::NEG_INFINITY,
            grid_points: n,
        });
    }

    // Primal side: plain values of feasible policies.
    let mut candidates: Vec<Policy> = Vec::with_capacity(n + 1);
    if sol.status != SolutionStatus::DoNothingBoundary {
        if let Some(p) = sol.policy {
            candidates.push(p);
        }
    }
    match regime {
        Regime::TransactionCost(beta) => {
            // Feasible boundary: the level curve of the constraint.
            if let Ok(points) = transaction::level_curve(ev, x, k, n) {
                for (bm, bp) in points {
                    candidates.push(Policy::Band(BandPolicy::new(bm, bp, beta)?));
                }
            }
        }
        _ => {
            let anchor = match sol.policy {
                Some(Policy::Barrier(b)) => b.level,
                _ => 1.0,
            };
            for i in 0..n {
                let b = anchor + 3.0 * anchor.max(1.0) * i as f64 / (n - 1) as f64;
                candidates.push(Policy::Barrier(BarrierPolicy::new(b)?));
            }
        }
    }
    let mut primal_sup = 0.0f64; // do-nothing is always feasible
    for policy in candidates {
        if psi_of(ev, x, policy, regime)? <= k + CONSTRAINT_TOL {
            primal_sup = primal_sup.max(value_of(ev, x, policy, regime, 0.0, 0.0)?);
        }
    }

    // Dual side: Lagrangian values of multiplier-optimal policies.
    let lam_star = if sol.multiplier.is_finite() {
        sol.multiplier
    } else {
        0.0
    };
    let mut dual_inf = f64::INFINITY;
    for i in 0..=n {
        let lam = if i == n {
            lam_star
        } else {
            2.0 * lam_star.max(1.0) * i as f64 / (n - 1) as f64
        };
        let policy = lambda_policy(ev, lam, regime)?;
        let v = value_of(ev, x, policy, regime, lam, k)?;
        dual_inf = dual_inf.min(v);
    }
    Ok(GapReport {
        primal_sup,
        dual_inf,
        gap: dual_inf - primal_sup,
        grid_points: n,
    })
}

fn lambda_policy(ev: &ScaleEvaluator, lambda: f64, regime: Regime) -> Result<Policy> {
    Ok(match regime {
        Regime::NoCost => Policy::Barrier(definetti::optimal_barrier(ev, lambda)?),
        Regime::TransactionCost(beta) => {
            Policy::Band(transaction::optimal_band(ev, lambda, beta)?)
        }
        Regime::Dual => Policy::Barrier(dual::optimal_barrier_dual(ev, lambda)?),
    })
}
