//! Simulation oracle for the controlled reserve process: estimates the
//! discounted dividend value and the ruin transform `E[e^{-q tau}]` under
//! barrier and band strategies.
//!
//! Jump-only paths (no Brownian part) are simulated exactly event by
//! event: exponential inter-arrival times, deterministic drift in between,
//! closed-form discounting of the reflection stream. With a Brownian part
//! the path uses an Euler scheme with per-step clipping (reflection bias
//! of order sqrt(dt)). Each path owns a counter-derived RNG stream, so
//! estimates are bit-identical for a fixed seed regardless of thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constrained::Policy;
use crate::error::{Error, Result};
use crate::levy::{ClaimDistribution, ProcessModel};

#[derive(Debug, Clone, Copy)]
pub struct SimulationParams {
    pub n_paths: usize,
    pub seed: u64,
    /// Explicit horizon; defaults to `ln(1/bias)/q`.
    pub horizon: Option<f64>,
    /// Target truncation bias `e^{-qT}` when the horizon is derived.
    pub bias: f64,
    /// Euler step for models with a Brownian part.
    pub dt: f64,
    /// Pair consecutive paths on mirrored uniforms.
    pub antithetic: bool,
}

impl SimulationParams {
    pub fn new(n_paths: usize, seed: u64) -> Self {
        SimulationParams {
            n_paths,
            seed,
            horizon: None,
            bias: 1e-4,
            dt: 1e-3,
            antithetic: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimulationEstimate {
    pub value_mean: f64,
    pub value_se: f64,
    pub constraint_mean: f64,
    pub constraint_se: f64,
    pub n_paths: usize,
    pub horizon: f64,
    /// `e^{-qT}`: upper bound on the mass ignored past the horizon.
    pub truncation_bias_bound: f64,
}

#[derive(Clone, Copy)]
enum Strategy {
    Barrier(f64),
    Band { lower: f64, upper: f64, cost: f64 },
    DoNothing,
}

/// Estimate value and constraint of a barrier or band strategy started
/// at reserve `x`.
pub fn simulate_policy(
    model: &ProcessModel,
    q: f64,
    policy: Policy,
    x: f64,
    params: &SimulationParams,
) -> Result<SimulationEstimate> {
    let strategy = match policy {
        Policy::Barrier(b) => Strategy::Barrier(b.level),
        Policy::Band(band) => {
            if model.is_dual() {
                return Err(Error::Unsupported(
                    "band strategies are not defined for the dual model".into(),
                ));
            }
            Strategy::Band {
                lower: band.lower,
                upper: band.upper,
                cost: band.cost,
            }
        }
    };
    run(model, q, strategy, x, params)
}

/// Estimate the do-nothing ruin transform `Kbar_x` (value is identically 0).
pub fn simulate_do_nothing(
    model: &ProcessModel,
    q: f64,
    x: f64,
    params: &SimulationParams,
) -> Result<SimulationEstimate> {
    run(model, q, Strategy::DoNothing, x, params)
}

fn run(
    model: &ProcessModel,
    q: f64,
    strategy: Strategy,
    x: f64,
    params: &SimulationParams,
) -> Result<SimulationEstimate> {
    model.validate()?;
    if matches!(model, ProcessModel::Stable { .. }) {
        return Err(Error::Unsupported(
            "stable paths are not simulated; use the closed-form scale functions".into(),
        ));
    }
    if q <= 0.0 || x < 0.0 || params.n_paths == 0 {
        return Err(Error::Config(format!(
            "simulation needs q > 0, x >= 0, paths > 0 (q={q}, x={x}, n={})",
            params.n_paths
        )));
    }
    if params.dt <= 0.0 || !(0.0..1.0).contains(&params.bias) || params.bias <= 0.0 {
        return Err(Error::Config("dt must be > 0 and bias in (0,1)".into()));
    }
    let horizon = match params.horizon {
        Some(t) if t > 0.0 => t,
        Some(t) => return Err(Error::Config(format!("horizon must be > 0, got {t}"))),
        None => (1.0 / params.bias).ln() / q,
    };
    let ctx = PathContext {
        model: *model,
        q,
        strategy,
        x,
        horizon,
        dt: params.dt,
    };
    let samples: Vec<(f64, f64)> = (0..params.n_paths)
        .into_par_iter()
        .map(|i| {
            let (stream, mirror) = if params.antithetic {
                ((i / 2) as u64, i % 2 == 1)
            } else {
                (i as u64, false)
            };
            let mut rng = PathRng::new(params.seed, stream, mirror);
            ctx.sample(&mut rng)
        })
        .collect();
    // Fixed-order reduction keeps the result independent of scheduling.
    let n = samples.len() as f64;
    let (mut sv, mut sc) = (0.0, 0.0);
    for &(v, c) in &samples {
        sv += v;
        sc += c;
    }
    let (mv, mc) = (sv / n, sc / n);
    let (mut vv, mut vc) = (0.0, 0.0);
    for &(v, c) in &samples {
        vv += (v - mv) * (v - mv);
        vc += (c - mc) * (c - mc);
    }
    let denom = if samples.len() > 1 { n * (n - 1.0) } else { n };
    Ok(SimulationEstimate {
        value_mean: mv,
        value_se: (vv / denom).sqrt(),
        constraint_mean: mc,
        constraint_se: (vc / denom).sqrt(),
        n_paths: samples.len(),
        horizon,
        truncation_bias_bound: (-q * horizon).exp(),
    })
}

/// Uniform source with optional antithetic mirroring; one counter-derived
/// stream per path.
struct PathRng {
    rng: ChaCha8Rng,
    mirror: bool,
}

impl PathRng {
    fn new(seed: u64, stream: u64, mirror: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        PathRng { rng, mirror }
    }

    /// Uniform in the open interval (0, 1).
    fn u01(&mut self) -> f64 {
        let u: f64 = self.rng.gen();
        let u = if self.mirror { 1.0 - u } else { u };
        u.clamp(1e-16, 1.0 - 1e-16)
    }

    fn exp(&mut self, rate: f64) -> f64 {
        -self.u01().ln() / rate
    }

    fn normal(&mut self) -> f64 {
        let (u1, u2) = (self.u01(), self.u01());
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    fn claim(&mut self, dist: &ClaimDistribution) -> f64 {
        match *dist {
            ClaimDistribution::Exponential { rate } => self.exp(rate),
            ClaimDistribution::Lomax { scale, shape } => {
                scale * (self.u01().powf(-1.0 / shape) - 1.0)
            }
            ClaimDistribution::Gamma { shape, scale } => scale * self.std_gamma(shape),
        }
    }

    fn std_gamma(&mut self, shape: f64) -> f64 {
        if shape < 1.0 {
            // Boost: Gamma(a) = Gamma(a+1) * U^{1/a}.
            return self.std_gamma(shape + 1.0) * self.u01().powf(1.0 / shape);
        }
        if shape.fract() == 0.0 && shape <= 64.0 {
            // Erlang: sum of unit exponentials.
            return (0..shape as usize).map(|_| self.exp(1.0)).sum();
        }
        // Marsaglia-Tsang squeeze.
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let z = self.normal();
            let v = (1.0 + c * z).powi(3);
            if v <= 0.0 {
                continue;
            }
            let u = self.u01();
            if u.ln() < 0.5 * z * z + d - d * v + d * v.ln() {
                return d * v;
            }
        }
    }
}

struct PathContext {
    model: ProcessModel,
    q: f64,
    strategy: Strategy,
    x: f64,
    horizon: f64,
    dt: f64,
}

impl PathContext {
    /// Returns `(discounted dividends net of costs, e^{-q tau} 1{tau <= T})`.
    fn sample(&self, rng: &mut PathRng) -> (f64, f64) {
        if self.model.volatility() > 0.0 {
            self.euler_path(rng)
        } else if self.model.is_dual() {
            self.exact_dual_path(rng)
        } else {
            self.exact_spectrally_negative_path(rng)
        }
    }

    /// Exact path of the spectrally negative Cramer-Lundberg reserve:
    /// drift `+c` between claims, downward claim jumps.
    fn exact_spectrally_negative_path(&self, rng: &mut PathRng) -> (f64, f64) {
        let c = self.model.premium();
        let lam = self.model.intensity();
        let claims = self.model.claims().expect("jump models carry a claim distribution");
        let q = self.q;
        let t_end = self.horizon;
        let mut u = self.x;
        let mut t = 0.0;
        let mut dividends = 0.0;
        // Initial lump above the payout level.
        match self.strategy {
            Strategy::Barrier(b) if u > b => {
                dividends += u - b;
                u = b;
            }
            Strategy::Band { lower, upper, cost } if u > upper => {
                dividends += u - lower - cost;
                u = lower;
            }
            _ => {}
        }
        loop {
            let e = rng.exp(lam);
            let t_jump = t + e;
            match self.strategy {
                Strategy::Barrier(b) => {
                    // Reflection stream: drift paid out while at the barrier.
                    let t_hit = t + (b - u) / c;
                    let stream_end = t_jump.min(t_end);
                    if t_hit < stream_end {
                        dividends += c / q * ((-q * t_hit).exp() - (-q * stream_end).exp());
                        u = b;
                    }
                }
                Strategy::Band { lower, upper, cost } => {
                    let mut t_now = t;
                    loop {
                        let t_cross = t_now + (upper - u) / c;
                        if t_cross < t_jump.min(t_end) {
                            dividends += (-q * t_cross).exp() * (upper - lower - cost);
                            u = lower;
                            t_now = t_cross;
                        } else {
                            u += c * (t_jump.min(t_end) - t_now);
                            break;
                        }
                    }
                }
                Strategy::DoNothing => {}
            }
            if t_jump >= t_end {
                return (dividends, 0.0);
            }
            if !matches!(self.strategy, Strategy::Band { .. }) {
                u = (u + c * e).min(match self.strategy {
                    Strategy::Barrier(b) => b,
                    _ => f64::INFINITY,
                });
            }
            t = t_jump;
            u -= rng.claim(&claims);
            if u < 0.0 {
                return (dividends, (-q * t).exp());
            }
        }
    }

    /// Exact path of the dual (spectrally positive) reserve: drift `-c`
    /// between jumps, upward income jumps; ruin by drifting into 0.
    fn exact_dual_path(&self, rng: &mut PathRng) -> (f64, f64) {
        let c = self.model.premium();
        let lam = self.model.intensity();
        let claims = self.model.claims().expect("jump models carry a claim distribution");
        let q = self.q;
        let t_end = self.horizon;
        let barrier = match self.strategy {
            Strategy::Barrier(b) => b,
            Strategy::DoNothing => f64::INFINITY,
            Strategy::Band { .. } => unreachable!("rejected in simulate_policy"),
        };
        let mut u = self.x;
        let mut t = 0.0;
        let mut dividends = 0.0;
        if u > barrier {
            dividends += u - barrier;
            u = barrier;
        }
        loop {
            if u <= 0.0 {
                return (dividends, (-q * t).exp());
            }
            let e = rng.exp(lam);
            let t_ruin = t + u / c;
            if t_ruin <= t + e {
                if t_ruin > t_end {
                    return (dividends, 0.0);
                }
                return (dividends, (-q * t_ruin).exp());
            }
            if t + e >= t_end {
                return (dividends, 0.0);
            }
            t += e;
            u -= c * e;
            u += rng.claim(&claims);
            if u > barrier {
                dividends += (-q * t).exp() * (u - barrier);
                u = barrier;
            }
        }
    }

    /// Euler scheme for models with a Brownian part; per-step clipping at
    /// the payout level (reflection bias of order sqrt(dt)).
    fn euler_path(&self, rng: &mut PathRng) -> (f64, f64) {
        let sigma = self.model.volatility();
        let c = self.model.premium();
        let lam = self.model.intensity();
        let claims = self.model.claims().expect("jump models carry a claim distribution");
        let dual = self.model.is_dual();
        let q = self.q;
        let dt = self.dt;
        let sqdt = dt.sqrt();
        let n_steps = (self.horizon / dt).ceil() as usize;
        let mut u = self.x;
        let mut dividends = 0.0;
        // Initial lump.
        match self.strategy {
            Strategy::Barrier(b) if u > b => {
                dividends += u - b;
                u = b;
            }
            Strategy::Band { lower, upper, cost } if u > upper => {
                dividends += u - lower - cost;
                u = lower;
            }
            _ => {}
        }
        if u <= 0.0 {
            return (dividends, 1.0);
        }
        for step in 0..n_steps {
            let t = step as f64 * dt;
            let drift = if dual { -c } else { c };
            u += drift * dt + sigma * sqdt * rng.normal();
            if rng.u01() < lam * dt {
                let z = rng.claim(&claims);
                u += if dual { z } else { -z };
            }
            if u < 0.0 {
                return (dividends, (-q * (t + dt)).exp());
            }
            match self.strategy {
                Strategy::Barrier(b) if u > b => {
                    dividends += (-q * (t + dt)).exp() * (u - b);
                    u = b;
                }
                Strategy::Band { lower, upper, cost } if u >= upper => {
                    dividends += (-q * (t + dt)).exp() * (u - lower - cost);
                    u = lower;
                }
                _ => {}
            }
        }
        (dividends, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constrained::Policy;
    use crate::definetti::{self, BarrierPolicy};
    use crate::dual;
    use crate::levy::Orientation;
    use crate::scale::ScaleEvaluator;
    use crate::testutil::{cl_exp_ev, cl_exp_model, dual_gamma_model};
    use crate::transaction::{self, BandPolicy};

    fn dual_cl_model() -> ProcessModel {
        ProcessModel::CramerLundberg {
            premium: 1.0,
            intensity: 0.4,
            claims: ClaimDistribution::Gamma {
                shape: 2.0,
                scale: 1.0,
            },
            orientation: Orientation::SpectrallyPositiveDual,
        }
    }

    #[test]
    fn reproducible_and_antithetic_consistent() {
        let model = cl_exp_model();
        let policy = Policy::Barrier(BarrierPolicy::new(2.0).unwrap());
        let a = simulate_policy(&model, 0.1, policy, 1.0, &SimulationParams::new(2000, 7)).unwrap();
        let b = simulate_policy(&model, 0.1, policy, 1.0, &SimulationParams::new(2000, 7)).unwrap();
        assert_eq!(a.value_mean, b.value_mean);
        assert_eq!(a.constraint_mean, b.constraint_mean);
        let mut anti = SimulationParams::new(2000, 7);
        anti.antithetic = true;
        let c = simulate_policy(&model, 0.1, policy, 1.0, &anti).unwrap();
        let se = a.value_se.hypot(c.value_se);
        assert!((a.value_mean - c.value_mean).abs() < 3.0 * se);
    }

    #[test]
    fn barrier_value_matches_formula() {
        let ev = cl_exp_ev();
        let b0 = definetti::optimal_barrier(ev, 0.0).unwrap();
        let x = b0.level;
        let expect = ev.w(x, 0).unwrap() / ev.w(b0.level, 1).unwrap();
        let est = simulate_policy(
            ev.model(),
            ev.q(),
            Policy::Barrier(b0),
            x,
            &SimulationParams::new(30_000, 11),
        )
        .unwrap();
        let err = (est.value_mean - expect).abs();
        assert!(
            err < 3.0 * est.value_se + est.truncation_bias_bound * expect,
            "{} vs {expect} (se {})",
            est.value_mean,
            est.value_se
        );
    }

    #[test]
    fn barrier_constraint_matches_formula() {
        let ev = cl_exp_ev();
        let expect = definetti::psi_barrier(ev, 1.0, 1.0).unwrap();
        let est = simulate_policy(
            ev.model(),
            ev.q(),
            Policy::Barrier(BarrierPolicy::new(1.0).unwrap()),
            1.0,
            &SimulationParams::new(30_000, 13),
        )
        .unwrap();
        let err = (est.constraint_mean - expect).abs();
        assert!(
            err < 3.0 * est.constraint_se + est.truncation_bias_bound,
            "{} vs {expect}",
            est.constraint_mean
        );
    }

    #[test]
    fn do_nothing_matches_k_bar() {
        let ev = cl_exp_ev();
        let expect = definetti::k_bar(ev, 1.0).unwrap();
        let est =
            simulate_do_nothing(ev.model(), ev.q(), 1.0, &SimulationParams::new(30_000, 17))
                .unwrap();
        assert_eq!(est.value_mean, 0.0);
        let err = (est.constraint_mean - expect).abs();
        assert!(
            err < 3.0 * est.constraint_se + est.truncation_bias_bound,
            "{} vs {expect}",
            est.constraint_mean
        );
    }

    #[test]
    fn band_value_matches_formula() {
        let ev = cl_exp_ev();
        let band = BandPolicy::new(0.5, 2.0, 0.05).unwrap();
        let x = 1.0;
        let expect = transaction::value_band_lagrangian(ev, x, band, 0.0, 0.0).unwrap();
        let est = simulate_policy(
            ev.model(),
            ev.q(),
            Policy::Band(band),
            x,
            &SimulationParams::new(30_000, 19),
        )
        .unwrap();
        let err = (est.value_mean - expect).abs();
        assert!(
            err < 3.0 * est.value_se + est.truncation_bias_bound * expect.abs(),
            "{} vs {expect} (se {})",
            est.value_mean,
            est.value_se
        );
        // Constraint side as well.
        let psi = transaction::psi_band(ev, x, band.lower, band.upper).unwrap();
        let errc = (est.constraint_mean - psi).abs();
        assert!(errc < 3.0 * est.constraint_se + est.truncation_bias_bound);
    }

    #[test]
    fn dual_jump_model_matches_formulas() {
        // Jump-only dual model: exact event-driven paths.
        let model = dual_cl_model();
        let q = 0.05;
        let ev = ScaleEvaluator::new(model, q).unwrap();
        let b = BarrierPolicy::new(2.0).unwrap();
        let x = 1.0;
        let expect = dual::value_barrier_dual_lagrangian(&ev, x, b, 0.0, 0.0).unwrap();
        let psi = dual::psi_dual(&ev, x, b.level).unwrap();
        let est = simulate_policy(&model, q, Policy::Barrier(b), x, &SimulationParams::new(30_000, 23))
            .unwrap();
        assert!(
            (est.value_mean - expect).abs() < 3.0 * est.value_se + est.truncation_bias_bound,
            "{} vs {expect}",
            est.value_mean
        );
        assert!(
            (est.constraint_mean - psi).abs() < 3.0 * est.constraint_se + est.truncation_bias_bound,
            "{} vs {psi}",
            est.constraint_mean
        );
    }

    #[test]
    fn dual_at_zero_is_immediate_ruin() {
        let model = dual_gamma_model();
        let mut params = SimulationParams::new(200, 29);
        params.bias = 1e-2;
        let est = simulate_do_nothing(&model, 0.03, 0.0, &params).unwrap();
        assert_eq!(est.constraint_mean, 1.0);
        assert_eq!(est.constraint_se, 0.0);
    }

    #[test]
    fn diffusion_euler_smoke() {
        // Wider tolerance: Euler reflection bias is order sqrt(dt).
        let model = dual_gamma_model();
        let q = 0.03;
        let ev = crate::testutil::dual_ev();
        let b = BarrierPolicy::new(2.0).unwrap();
        let x = 1.0;
        let psi = dual::psi_dual(ev, x, b.level).unwrap();
        let mut params = SimulationParams::new(800, 31);
        params.bias = 1e-3;
        params.dt = 2e-3;
        let est = simulate_policy(&model, q, Policy::Barrier(b), x, &params).unwrap();
        assert!(
            (est.constraint_mean - psi).abs()
                < 5.0 * est.constraint_se + est.truncation_bias_bound + 0.05,
            "{} vs {psi}",
            est.constraint_mean
        );
    }

    #[test]
    fn horizon_truncation_bound() {
        let model = cl_exp_model();
        let q = 0.1;
        let mut p1 = SimulationParams::new(10_000, 37);
        p1.horizon = Some(40.0);
        let mut p2 = p1;
        p2.horizon = Some(80.0);
        let e1 = simulate_do_nothing(&model, q, 1.0, &p1).unwrap();
        let e2 = simulate_do_nothing(&model, q, 1.0, &p2).unwrap();
        let bound = (-q * 40.0f64).exp() + 3.0 * e1.constraint_se.hypot(e2.constraint_se);
        assert!((e1.constraint_mean - e2.constraint_mean).abs() < bound);
    }

    #[test]
    fn rejects_stable_and_dual_bands() {
        let stable = ProcessModel::Stable { alpha: 1.5 };
        let p = SimulationParams::new(10, 1);
        assert!(matches!(
            simulate_do_nothing(&stable, 0.1, 1.0, &p),
            Err(Error::Unsupported(_))
        ));
        let band = BandPolicy::new(0.5, 2.0, 0.05).unwrap();
        assert!(matches!(
            simulate_policy(&dual_cl_model(), 0.05, Policy::Band(band), 1.0, &p),
            Err(Error::Unsupported(_))
        ));
    }
}
