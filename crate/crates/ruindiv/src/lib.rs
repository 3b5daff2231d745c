//! Optimal dividend policies for spectrally one-sided Levy reserve
//! processes under a ruin-time constraint.
//!
//! The crate evaluates scale functions `W^{(q)}`, `Z^{(q)}`, `Zbar^{(q)}`
//! for Cramer-Lundberg models (with or without a Brownian component) and
//! stable processes, solves the Lagrangian dividend problems (reflection
//! barriers, transaction-cost bands, dual-model barriers), and resolves
//! the ruin-probability constraint by a dual search over the multiplier.
//! Monte Carlo simulation of the controlled paths provides an independent
//! check of the analytic values.

pub mod cli;
pub mod config;
pub mod constrained;
pub mod definetti;
pub mod dual;
pub mod error;
pub mod levy;
pub mod montecarlo;
pub mod numerics;
pub mod output;
pub mod presets;
pub mod scale;
pub mod transaction;

#[cfg(test)]
pub(crate) mod testutil;

pub use config::RunConfig;
pub use constrained::{ConstrainedSolution, GapReport, Policy, Regime, SolutionStatus};
pub use definetti::BarrierPolicy;
pub use error::{Error, Result};
pub use levy::{ClaimDistribution, Orientation, ProcessModel};
pub use montecarlo::{SimulationEstimate, SimulationParams};
pub use scale::{ScaleEvaluator, ScaleMethod, ScaleParams};
pub use transaction::BandPolicy;
