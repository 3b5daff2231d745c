//! Run configuration: a single TOML file with nested keys describing the
//! model, discount rate, regime, problem inputs, numeric overrides, output
//! destination and simulation settings.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::constrained::Regime;
use crate::error::{Error, Result};
use crate::levy::ProcessModel;
use crate::scale::ScaleParams;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ProcessModel,
    /// Discount rate `q > 0`.
    pub q: f64,
    #[serde(default)]
    pub regime: RegimeConfig,
    #[serde(default)]
    pub problem: ProblemConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub simulation: SimulationConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    42
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RegimeConfig {
    #[default]
    NoCost,
    TransactionCost {
        beta: f64,
    },
    Dual,
}

impl RegimeConfig {
    pub fn to_regime(self) -> Regime {
        match self {
            RegimeConfig::NoCost => Regime::NoCost,
            RegimeConfig::TransactionCost { beta } => Regime::TransactionCost(beta),
            RegimeConfig::Dual => Regime::Dual,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    /// Initial reserve levels.
    #[serde(default = "default_x")]
    pub x: Vec<f64>,
    /// Constraint ceilings.
    #[serde(default = "default_k")]
    pub k: Vec<f64>,
    /// Barrier levels for constraint curves.
    #[serde(default)]
    pub b: Vec<f64>,
    /// Multiplier grid for parametric sweeps.
    #[serde(default)]
    pub lambda: Vec<f64>,
}

fn default_x() -> Vec<f64> {
    vec![1.0]
}

fn default_k() -> Vec<f64> {
    vec![0.5]
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            x: default_x(),
            k: default_k(),
            b: Vec::new(),
            lambda: Vec::new(),
        }
    }
}

/// Optional overrides of the scale-evaluation parameters.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    pub grid_step: Option<f64>,
    pub x_max: Option<f64>,
    pub series_terms: Option<usize>,
    pub euler_terms: Option<usize>,
    pub decay: Option<f64>,
    pub deriv_step: Option<f64>,
    pub gl_nodes: Option<usize>,
}

impl NumericsConfig {
    pub fn to_scale_params(self) -> ScaleParams {
        let d = ScaleParams::default();
        ScaleParams {
            series_terms: self.series_terms.unwrap_or(d.series_terms),
            euler_terms: self.euler_terms.unwrap_or(d.euler_terms),
            decay: self.decay.unwrap_or(d.decay),
            grid_step: self.grid_step.unwrap_or(d.grid_step),
            x_max: self.x_max.unwrap_or(d.x_max),
            deriv_step: self.deriv_step.unwrap_or(d.deriv_step),
            gl_nodes: self.gl_nodes.unwrap_or(d.gl_nodes),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub directory: String,
    /// Any of "csv", "svg".
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_dir() -> String {
    "out".into()
}

fn default_formats() -> Vec<String> {
    vec!["csv".into()]
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: default_dir(),
            formats: default_formats(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default = "default_paths")]
    pub paths: usize,
    pub horizon: Option<f64>,
    #[serde(default = "default_bias")]
    pub bias: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub antithetic: bool,
    /// Barrier level to simulate; defaults to the unconstrained optimum.
    pub barrier: Option<f64>,
    /// Band `[lower, upper]` to simulate (transaction-cost regime).
    pub band: Option<[f64; 2]>,
}

fn default_paths() -> usize {
    100_000
}

fn default_bias() -> f64 {
    1e-4
}

fn default_dt() -> f64 {
    1e-3
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            paths: default_paths(),
            horizon: None,
            bias: default_bias(),
            dt: default_dt(),
            antithetic: false,
            barrier: None,
            band: None,
        }
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if !(self.q > 0.0 && self.q.is_finite()) {
            return Err(Error::Config(format!("q: must be > 0, got {}", self.q)));
        }
        match self.regime {
            RegimeConfig::TransactionCost { beta } if !(beta > 0.0 && beta.is_finite()) => {
                return Err(Error::Config(format!("regime.beta: must be > 0, got {beta}")));
            }
            RegimeConfig::Dual if !self.model.is_dual() => {
                return Err(Error::Config(
                    "regime.kind: dual regime needs a model with dual orientation".into(),
                ));
            }
            _ => {}
        }
        if self.model.is_dual() && !matches!(self.regime, RegimeConfig::Dual) {
            return Err(Error::Config(
                "model.orientation: dual-oriented models require the dual regime".into(),
            ));
        }
        for (name, list) in [("problem.x", &self.problem.x), ("problem.b", &self.problem.b)] {
            if let Some(v) = list.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::Config(format!("{name}: entries must be >= 0, got {v}")));
            }
        }
        if let Some(v) = self.problem.k.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Config(format!(
                "problem.k: entries must lie in [0,1], got {v}"
            )));
        }
        if let Some(v) = self.problem.lambda.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Config(format!(
                "problem.lambda: entries must be >= 0, got {v}"
            )));
        }
        let p = self.numerics.to_scale_params();
        if !(p.grid_step > 0.0 && p.x_max > p.grid_step && p.decay > 0.0 && p.deriv_step > 0.0) {
            return Err(Error::Config("numerics: steps and ranges must be positive".into()));
        }
        if p.gl_nodes < 8 || p.series_terms < 4 || p.euler_terms < 2 {
            return Err(Error::Config("numerics: too few terms or nodes".into()));
        }
        for f in &self.output.formats {
            if f != "csv" && f != "svg" {
                return Err(Error::Config(format!("output.formats: unknown format {f}")));
            }
        }
        if self.simulation.paths == 0 {
            return Err(Error::Config("simulation.paths: must be > 0".into()));
        }
        if let Some([lo, hi]) = self.simulation.band {
            if !(0.0 <= lo && lo < hi) {
                return Err(Error::Config(format!(
                    "simulation.band: needs 0 <= lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
q = 0.05
seed = 7

[model]
kind = "cramer-lundberg"
premium = 1.0
intensity = 1.0
orientation = "spectrally-negative"

[model.claims]
kind = "lomax"
scale = 1.0
shape = 1.5

[regime]
kind = "no-cost"

[problem]
x = [1.0, 2.0]
k = [0.4, 0.6]

[output]
directory = "out"
formats = ["csv"]
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = RunConfig::from_toml(EXAMPLE).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.problem.x, vec![1.0, 2.0]);
        let again = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(again.q, cfg.q);
        assert_eq!(again.problem.k, cfg.problem.k);
    }

    #[test]
    fn rejects_bad_fields() {
        let bad = EXAMPLE.replace("q = 0.05", "q = -1.0");
        assert!(matches!(RunConfig::from_toml(&bad), Err(Error::Config(_))));
        let bad = EXAMPLE.replace("k = [0.4, 0.6]", "k = [1.4]");
        assert!(matches!(RunConfig::from_toml(&bad), Err(Error::Config(_))));
        let bad = EXAMPLE.replace("kind = \"no-cost\"", "kind = \"dual\"");
        assert!(matches!(RunConfig::from_toml(&bad), Err(Error::Config(_))));
        let bad = EXAMPLE.replace("[output]", "[outputz]");
        assert!(matches!(RunConfig::from_toml(&bad), Err(Error::Config(_))));
    }
}
