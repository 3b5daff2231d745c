//! Command-line front end: config ingestion, solver orchestration and
//! CSV/SVG emission. The binary in `src/main.rs` is a thin wrapper around
//! [`run`]; everything here is callable from tests.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{RegimeConfig, RunConfig};
use crate::constrained::{self, Policy, Regime, SolutionStatus};
use crate::definetti::{self, BarrierPolicy};
use crate::dual;
use crate::error::{Error, Result};
use crate::montecarlo::{self, SimulationParams};
use crate::output::{self, Cell, Series};
use crate::presets;
use crate::scale::ScaleEvaluator;
use crate::transaction::{self, BandPolicy};

#[derive(Parser, Debug)]
#[command(
    name = "ruindiv",
    version,
    about = "Ruin-time-constrained optimal dividends for spectrally one-sided Levy reserve processes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Tabulate W, W', W'', Z and the integral of Z on a reserve grid
    Scale,
    /// Optimal unconstrained policy and its value curve V(x)
    SolveUnconstrained,
    /// Map from barrier level b to the multiplier that makes b optimal
    LambdaMap,
    /// Ruin transform x -> Psi_x(b) for a list of barriers, plus the
    /// do-nothing floor
    PsiCurve,
    /// Constrained optimal barrier (or band) as a function of x per ceiling K
    Bstar,
    /// Constrained value V(x; K) per ceiling K
    ValueCurves,
    /// Level curves of the band ruin transform and the multiplier-indexed
    /// band path (transaction-cost regime)
    PsiContour,
    /// Solve the constrained problem for every (x, K) pair
    SolveConstrained,
    /// Grid certificate that primal and dual values coincide per (x, K)
    DualityReport,
    /// Monte Carlo estimate of value and constraint for a fixed policy
    Simulate,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    /// Reflection barrier on a spectrally negative reserve
    Definetti,
    /// Barrier on a spectrally positive (dual) reserve
    Dual,
}

/// Flags that override fields of the resolved configuration.
#[derive(Args, Debug, Clone, Default)]
pub struct Overrides {
    /// TOML run configuration
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Built-in example preset (1, 2 or 3); the default base when no
    /// config file is given
    #[arg(long = "paper-example", global = true, value_name = "N")]
    pub paper_example: Option<u8>,
    /// Solver family
    #[arg(long, global = true, value_enum)]
    pub model: Option<ModelChoice>,
    /// Fixed transaction cost per dividend lump (selects the band regime)
    #[arg(long, global = true, value_name = "BETA")]
    pub cost: Option<f64>,
    /// Comma-separated initial reserves
    #[arg(long, global = true, value_delimiter = ',', value_name = "LIST")]
    pub x: Option<Vec<f64>>,
    /// Comma-separated ruin-transform ceilings
    #[arg(long = "K", global = true, value_delimiter = ',', value_name = "LIST")]
    pub k: Option<Vec<f64>>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Output formats
    #[arg(long, global = true, value_delimiter = ',', value_name = "FMT")]
    pub format: Option<Vec<String>>,
    /// Simulation seed
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
}

/// Process exit code for a library error: 2 infeasible, 65 bad
/// configuration or unsupported request, 1 numerical/domain/IO failure.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Infeasible(_) => 2,
        Error::Config(_) | Error::Unsupported(_) => 65,
        Error::Domain(_) | Error::Numerical(_) | Error::Io(_) => 1,
    }
}

/// Base config from `--config` or `--paper-example` (preset 1 when
/// neither is given), with flag overrides applied and re-validated.
pub fn resolve_config(ov: &Overrides) -> Result<RunConfig> {
    let mut cfg = match (&ov.config, ov.paper_example) {
        (Some(path), _) => RunConfig::from_path(path)?,
        (None, n) => presets::preset(n.unwrap_or(1))?,
    };
    if ov.model == Some(ModelChoice::Dual) && ov.cost.is_some() {
        return Err(Error::Config(
            "--model dual conflicts with --cost; the dual regime has no band policies".into(),
        ));
    }
    match ov.model {
        Some(ModelChoice::Definetti) => cfg.regime = RegimeConfig::NoCost,
        Some(ModelChoice::Dual) => cfg.regime = RegimeConfig::Dual,
        None => {}
    }
    if let Some(beta) = ov.cost {
        cfg.regime = RegimeConfig::TransactionCost { beta };
    }
    if let Some(x) = &ov.x {
        cfg.problem.x = x.clone();
    }
    if let Some(k) = &ov.k {
        cfg.problem.k = k.clone();
    }
    if let Some(out) = &ov.out {
        cfg.output.directory = out.to_string_lossy().into_owned();
    }
    if let Some(formats) = &ov.format {
        cfg.output.formats = formats.clone();
    }
    if let Some(seed) = ov.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Execute one command against the resolved configuration.
pub fn run(cli: &Cli) -> Result<()> {
    cap_worker_threads();
    let cfg = resolve_config(&cli.overrides)?;
    let ctx = Context::new(&cfg)?;
    match cli.command {
        Command::Scale => cmd_scale(&ctx),
        Command::SolveUnconstrained => cmd_solve_unconstrained(&ctx),
        Command::LambdaMap => cmd_lambda_map(&ctx),
        Command::PsiCurve => cmd_psi_curve(&ctx),
        Command::Bstar => cmd_bstar(&ctx),
        Command::ValueCurves => cmd_value_curves(&ctx),
        Command::PsiContour => cmd_psi_contour(&ctx),
        Command::SolveConstrained => cmd_solve_constrained(&ctx),
        Command::DualityReport => cmd_duality_report(&ctx),
        Command::Simulate => cmd_simulate(&ctx),
    }
}

/// `RUIN_DIV_THREADS` caps the worker pool; ignored when the global pool
/// already exists (e.g. a second `run` in the same process).
fn cap_worker_threads() {
    if let Ok(v) = std::env::var("RUIN_DIV_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

struct Context {
    cfg: RunConfig,
    ev: ScaleEvaluator,
    regime: Regime,
    hash: String,
    out_dir: PathBuf,
}

impl Context {
    fn new(cfg: &RunConfig) -> Result<Self> {
        let ev = ScaleEvaluator::with_params(cfg.model, cfg.q, cfg.numerics.to_scale_params())?;
        let out_dir = PathBuf::from(&cfg.output.directory);
        std::fs::create_dir_all(&out_dir)?;
        Ok(Context {
            cfg: cfg.clone(),
            ev,
            regime: cfg.regime.to_regime(),
            hash: output::config_hash(&cfg.to_toml()),
            out_dir,
        })
    }

    fn wants(&self, format: &str) -> bool {
        self.cfg.output.formats.iter().any(|f| f == format)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn csv(&self, name: &str, header: &[&str], rows: &[Vec<Cell>]) -> Result<Option<PathBuf>> {
        if !self.wants("csv") {
            return Ok(None);
        }
        let path = self.path(name);
        output::write_csv(&path, &self.hash, header, rows)?;
        Ok(Some(path))
    }

    fn svg(&self, name: &str, title: &str, series: &[Series]) -> Result<()> {
        if self.wants("svg") {
            output::write_svg(&self.path(name), title, series)?;
        }
        Ok(())
    }

    fn x_grid(&self, n: usize) -> Vec<f64> {
        let xm = self.ev.x_max();
        (0..n).map(|i| xm * i as f64 / (n - 1) as f64).collect()
    }

    /// Ruin transform of a single reflection/dual barrier.
    fn psi(&self, x: f64, b: f64) -> Result<f64> {
        match self.regime {
            Regime::Dual => dual::psi_dual(&self.ev, x, b),
            _ => definetti::psi_barrier(&self.ev, x, b),
        }
    }

    fn k_bar(&self, x: f64) -> Result<f64> {
        match self.regime {
            Regime::Dual => dual::k_bar_dual(&self.ev, x),
            _ => definetti::k_bar(&self.ev, x),
        }
    }

    fn unconstrained(&self) -> Result<Policy> {
        Ok(match self.regime {
            Regime::NoCost => Policy::Barrier(definetti::optimal_barrier(&self.ev, 0.0)?),
            Regime::TransactionCost(beta) => {
                Policy::Band(transaction::optimal_band(&self.ev, 0.0, beta)?)
            }
            Regime::Dual => Policy::Barrier(dual::optimal_barrier_dual(&self.ev, 0.0)?),
        })
    }

    fn plain_value(&self, x: f64, policy: Policy) -> Result<f64> {
        // Multiplier 0 removes the constraint term from the Lagrangian.
        match (policy, self.regime) {
            (Policy::Barrier(b), Regime::Dual) => {
                dual::value_barrier_dual_lagrangian(&self.ev, x, b, 0.0, 0.0)
            }
            (Policy::Barrier(b), _) => {
                definetti::value_barrier_lagrangian(&self.ev, x, b, 0.0, 0.0)
            }
            (Policy::Band(band), _) => {
                transaction::value_band_lagrangian(&self.ev, x, band, 0.0, 0.0)
            }
        }
    }

    fn policy_psi(&self, x: f64, policy: Policy) -> Result<f64> {
        match (policy, self.regime) {
            (Policy::Barrier(b), Regime::Dual) => dual::psi_dual(&self.ev, x, b.level),
            (Policy::Barrier(b), _) => definetti::psi_barrier(&self.ev, x, b.level),
            (Policy::Band(band), _) => {
                transaction::psi_band(&self.ev, x, band.lower, band.upper)
            }
        }
    }
}

fn describe_policy(policy: Policy) -> String {
    match policy {
        Policy::Barrier(b) => format!("barrier b = {:.6}", b.level),
        Policy::Band(band) => format!(
            "band [b- = {:.6}, b+ = {:.6}], cost {}",
            band.lower, band.upper, band.cost
        ),
    }
}

fn status_name(status: SolutionStatus) -> &'static str {
    match status {
        SolutionStatus::Inactive => "inactive",
        SolutionStatus::Binding => "binding",
        SolutionStatus::DoNothingBoundary => "do-nothing-boundary",
        SolutionStatus::Infeasible => "infeasible",
    }
}

fn report_written(path: Option<&Path>) {
    if let Some(p) = path {
        println!("wrote {}", p.display());
    }
}

fn cmd_scale(ctx: &Context) -> Result<()> {
    let grid = ctx.x_grid(241);
    let mut rows = Vec::with_capacity(grid.len());
    let mut w_pts = Vec::new();
    let mut z_pts = Vec::new();
    for &x in &grid {
        let w = ctx.ev.w(x, 0)?;
        let z = ctx.ev.z(x)?;
        rows.push(vec![
            Cell::Num(x),
            Cell::Num(w),
            Cell::Num(ctx.ev.w(x, 1)?),
            Cell::Num(ctx.ev.w(x, 2)?),
            Cell::Num(z),
            Cell::Num(ctx.ev.z_bar(x)?),
        ]);
        w_pts.push((x, w));
        z_pts.push((x, z));
    }
    let path = ctx.csv("scale.csv", &["x", "w", "w1", "w2", "z", "zbar"], &rows)?;
    report_written(path.as_deref());
    ctx.svg(
        "scale.svg",
        "scale functions",
        &[
            Series { label: "W".into(), points: w_pts },
            Series { label: "Z".into(), points: z_pts },
        ],
    )?;
    println!("scale table: {} points, q = {}", grid.len(), ctx.ev.q());
    Ok(())
}

fn cmd_solve_unconstrained(ctx: &Context) -> Result<()> {
    let policy = ctx.unconstrained()?;
    match policy {
        Policy::Barrier(b) => println!("b0 = {:.6}", b.level),
        Policy::Band(band) => println!(
            "b0 band: b- = {:.6}, b+ = {:.6} (cost {})",
            band.lower, band.upper, band.cost
        ),
    }
    let grid = ctx.x_grid(121);
    let mut rows = Vec::with_capacity(grid.len());
    let mut pts = Vec::new();
    for &x in &grid {
        let v = ctx.plain_value(x, policy)?;
        rows.push(vec![Cell::Num(x), Cell::Num(v)]);
        pts.push((x, v));
    }
    let path = ctx.csv("value_unconstrained.csv", &["x", "value"], &rows)?;
    report_written(path.as_deref());
    ctx.svg(
        "value_unconstrained.svg",
        "unconstrained value V(x)",
        &[Series { label: "V".into(), points: pts }],
    )?;
    Ok(())
}

fn cmd_lambda_map(ctx: &Context) -> Result<()> {
    let (grid, bar): (Vec<f64>, f64) = match ctx.regime {
        Regime::Dual => {
            let bar = dual::lambda_bar_dual(&ctx.ev)?;
            (ctx.x_grid(201), bar)
        }
        _ => {
            // The map is defined on [b_0, inf); sample a few spans of b_0.
            let b0 = definetti::optimal_barrier(&ctx.ev, 0.0)?.level;
            let hi = (b0 + 5.0 * (1.0 + b0)).min(ctx.ev.x_max());
            let n = 201;
            let grid = (0..n)
                .map(|i| b0 + (hi - b0) * i as f64 / (n - 1) as f64)
                .collect();
            (grid, definetti::lambda_bar(&ctx.ev)?)
        }
    };
    let mut rows = Vec::with_capacity(grid.len());
    let mut pts = Vec::new();
    for &b in &grid {
        let lam = match ctx.regime {
            Regime::Dual => dual::lambda_of_b_dual(&ctx.ev, b)?,
            _ => definetti::lambda_of_b(&ctx.ev, b)?,
        };
        rows.push(vec![Cell::Num(b), Cell::Num(lam)]);
        pts.push((b, lam));
    }
    let path = ctx.csv("lambda_map.csv", &["b", "lambda"], &rows)?;
    report_written(path.as_deref());
    ctx.svg(
        "lambda_map.svg",
        "multiplier map Lambda(b)",
        &[Series { label: "Lambda".into(), points: pts }],
    )?;
    println!("lambda_bar = {bar:.6}");
    Ok(())
}

fn cmd_psi_curve(ctx: &Context) -> Result<()> {
    let b_list = if ctx.cfg.problem.b.is_empty() {
        let base = match ctx.regime {
            Regime::Dual => {
                let b = dual::optimal_barrier_dual(&ctx.ev, 1.0)?.level;
                if b > 0.1 { b } else { 1.0 }
            }
            _ => {
                let b = definetti::optimal_barrier(&ctx.ev, 0.0)?.level;
                if b > 0.1 { b } else { 1.0 }
            }
        };
        vec![0.5 * base, base, 2.0 * base]
    } else {
        ctx.cfg.problem.b.clone()
    };
    let grid = ctx.x_grid(161);
    let mut header: Vec<String> = vec!["x".into()];
    for b in &b_list {
        header.push(format!("psi_b_{b:.4}"));
    }
    header.push("k_bar".into());
    let mut rows = Vec::with_capacity(grid.len());
    let mut series: Vec<Series> = b_list
        .iter()
        .map(|b| Series { label: format!("b = {b:.3}"), points: Vec::new() })
        .collect();
    let mut floor_pts = Vec::new();
    for &x in &grid {
        let mut row = vec![Cell::Num(x)];
        for (j, &b) in b_list.iter().enumerate() {
            let p = ctx.psi(x, b)?;
            row.push(Cell::Num(p));
            series[j].points.push((x, p));
        }
        let kb = ctx.k_bar(x)?;
        row.push(Cell::Num(kb));
        floor_pts.push((x, kb));
        rows.push(row);
    }
    series.push(Series { label: "k_bar".into(), points: floor_pts });
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let path = ctx.csv("psi_curve.csv", &header_refs, &rows)?;
    report_written(path.as_deref());
    ctx.svg("psi_curve.svg", "ruin transform Psi_x(b)", &series)?;
    Ok(())
}

/// Constrained solves across an x grid are expensive in the band regime
/// (each solve nests a two-level golden search), so the grid is coarser.
fn solve_grid(ctx: &Context) -> Vec<f64> {
    match ctx.regime {
        Regime::TransactionCost(_) => ctx.x_grid(21),
        _ => ctx.x_grid(61),
    }
}

fn cmd_bstar(ctx: &Context) -> Result<()> {
    let grid = solve_grid(ctx);
    let ks = &ctx.cfg.problem.k;
    let band_regime = matches!(ctx.regime, Regime::TransactionCost(_));
    let mut header: Vec<String> = vec!["x".into()];
    for k in ks {
        if band_regime {
            header.push(format!("b_minus_k_{k:.4}"));
            header.push(format!("b_plus_k_{k:.4}"));
        } else {
            header.push(format!("bstar_k_{k:.4}"));
        }
    }
    let mut rows = Vec::with_capacity(grid.len());
    let mut series: Vec<Series> = ks
        .iter()
        .map(|k| Series { label: format!("K = {k}"), points: Vec::new() })
        .collect();
    for &x in &grid {
        let mut row = vec![Cell::Num(x)];
        for (j, &k) in ks.iter().enumerate() {
            let sol = constrained::solve(&ctx.ev, x, k, ctx.regime)?;
            match sol.policy {
                Some(Policy::Barrier(b)) => {
                    row.push(Cell::Num(b.level));
                    series[j].points.push((x, b.level));
                }
                Some(Policy::Band(band)) => {
                    row.push(Cell::Num(band.lower));
                    row.push(Cell::Num(band.upper));
                    series[j].points.push((x, band.upper));
                }
                None => {
                    row.push(Cell::Num(f64::NAN));
                    if band_regime {
                        row.push(Cell::Num(f64::NAN));
                    }
                    series[j].points.push((f64::NAN, f64::NAN));
                }
            }
        }
        rows.push(row);
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let path = ctx.csv("bstar.csv", &header_refs, &rows)?;
    report_written(path.as_deref());
    ctx.svg("bstar.svg", "constrained barrier b*(x)", &series)?;
    Ok(())
}

fn cmd_value_curves(ctx: &Context) -> Result<()> {
    let grid = solve_grid(ctx);
    let ks = &ctx.cfg.problem.k;
    let mut header: Vec<String> = vec!["x".into()];
    for k in ks {
        header.push(format!("value_k_{k:.4}"));
    }
    let mut rows = Vec::with_capacity(grid.len());
    let mut series: Vec<Series> = ks
        .iter()
        .map(|k| Series { label: format!("K = {k}"), points: Vec::new() })
        .collect();
    for &x in &grid {
        let mut row = vec![Cell::Num(x)];
        for (j, &k) in ks.iter().enumerate() {
            let sol = constrained::solve(&ctx.ev, x, k, ctx.regime)?;
            let v = if sol.status == SolutionStatus::Infeasible {
                f64::NAN
            } else {
                sol.value
            };
            row.push(Cell::Num(v));
            series[j].points.push((x, v));
        }
        rows.push(row);
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let path = ctx.csv("value_curves.csv", &header_refs, &rows)?;
    report_written(path.as_deref());
    ctx.svg("value_curves.svg", "constrained value V(x; K)", &series)?;
    Ok(())
}

fn cmd_psi_contour(ctx: &Context) -> Result<()> {
    let beta = match ctx.regime {
        Regime::TransactionCost(beta) => beta,
        _ => {
            return Err(Error::Config(
                "psi-contour needs the transaction-cost regime (set regime.kind or --cost)".into(),
            ))
        }
    };
    let x = ctx.cfg.problem.x.first().copied().unwrap_or(1.0);
    let mut rows = Vec::new();
    let mut series = Vec::new();
    let mut feasible = 0usize;
    for &k in &ctx.cfg.problem.k {
        match transaction::level_curve(&ctx.ev, x, k, 60) {
            Ok(points) => {
                feasible += 1;
                let mut pts = Vec::with_capacity(points.len());
                for (bm, bp) in points {
                    rows.push(vec![Cell::Num(k), Cell::Num(bm), Cell::Num(bp)]);
                    pts.push((bm, bp));
                }
                series.push(Series { label: format!("K = {k}"), points: pts });
            }
            Err(Error::Infeasible(_)) => {
                println!("K = {k}: below the do-nothing floor at x = {x}, skipped");
            }
            Err(e) => return Err(e),
        }
    }
    if feasible == 0 {
        return Err(Error::Infeasible(format!(
            "no requested ceiling is attainable at x = {x}"
        )));
    }
    let path = ctx.csv("psi_contour.csv", &["k", "b_minus", "b_plus"], &rows)?;
    report_written(path.as_deref());

    // Parametric band path Lambda -> (b-, b+) on a multiplier grid.
    let lams: Vec<f64> = if ctx.cfg.problem.lambda.is_empty() {
        (0..21).map(|i| 5.0 * i as f64 / 20.0).collect()
    } else {
        ctx.cfg.problem.lambda.clone()
    };
    let mut band_rows = Vec::with_capacity(lams.len());
    let mut band_pts = Vec::with_capacity(lams.len());
    for &lam in &lams {
        let band = transaction::optimal_band(&ctx.ev, lam, beta)?;
        band_rows.push(vec![Cell::Num(lam), Cell::Num(band.lower), Cell::Num(band.upper)]);
        band_pts.push((band.lower, band.upper));
    }
    let path = ctx.csv("band_path.csv", &["lambda", "b_minus", "b_plus"], &band_rows)?;
    report_written(path.as_deref());
    series.push(Series { label: "band path".into(), points: band_pts });
    ctx.svg("psi_contour.svg", "band level curves in the (b-, b+) plane", &series)?;
    Ok(())
}

const SOLVE_HEADER: [&str; 11] = [
    "x", "k", "status", "barrier", "b_minus", "b_plus", "multiplier", "value", "psi", "k_bar",
    "heuristic",
];

fn solution_row(x: f64, k: f64, sol: &constrained::ConstrainedSolution) -> Vec<Cell> {
    let (barrier, bm, bp) = match sol.policy {
        Some(Policy::Barrier(b)) => (b.level, f64::NAN, f64::NAN),
        Some(Policy::Band(band)) => (f64::NAN, band.lower, band.upper),
        None => (f64::NAN, f64::NAN, f64::NAN),
    };
    vec![
        Cell::Num(x),
        Cell::Num(k),
        Cell::Text(status_name(sol.status).into()),
        Cell::Num(barrier),
        Cell::Num(bm),
        Cell::Num(bp),
        Cell::Num(sol.multiplier),
        Cell::Num(sol.value),
        Cell::Num(sol.constraint_value),
        Cell::Num(sol.k_bar),
        Cell::Text(sol.heuristic.to_string()),
    ]
}

fn cmd_solve_constrained(ctx: &Context) -> Result<()> {
    let mut rows = Vec::new();
    let mut infeasible = 0usize;
    let mut total = 0usize;
    for &x in &ctx.cfg.problem.x {
        for &k in &ctx.cfg.problem.k {
            let sol = constrained::solve(&ctx.ev, x, k, ctx.regime)?;
            total += 1;
            match sol.status {
                SolutionStatus::Infeasible => {
                    infeasible += 1;
                    println!("x = {x}, K = {k}: infeasible (floor k_bar = {:.6})", sol.k_bar);
                }
                _ => {
                    let policy = sol
                        .policy
                        .map(describe_policy)
                        .unwrap_or_else(|| "do nothing".into());
                    println!(
                        "x = {x}, K = {k}: {}, {policy}, multiplier = {:.6}, value = {:.6}",
                        status_name(sol.status),
                        sol.multiplier,
                        sol.value
                    );
                }
            }
            rows.push(solution_row(x, k, &sol));
        }
    }
    let path = ctx.csv("solve_constrained.csv", &SOLVE_HEADER, &rows)?;
    report_written(path.as_deref());
    if infeasible == total {
        return Err(Error::Infeasible(
            "every requested (x, K) instance lies below the do-nothing floor".into(),
        ));
    }
    Ok(())
}

fn cmd_duality_report(ctx: &Context) -> Result<()> {
    let mut rows = Vec::new();
    for &x in &ctx.cfg.problem.x {
        for &k in &ctx.cfg.problem.k {
            let sol = constrained::solve(&ctx.ev, x, k, ctx.regime)?;
            let report = constrained::duality_gap_report(&ctx.ev, x, k, ctx.regime, 200)?;
            println!(
                "x = {x}, K = {k}: {}, primal = {:.9}, dual = {:.9}, gap = {:.3e}",
                status_name(sol.status),
                report.primal_sup,
                report.dual_inf,
                report.gap
            );
            rows.push(vec![
                Cell::Num(x),
                Cell::Num(k),
                Cell::Text(status_name(sol.status).into()),
                Cell::Num(report.primal_sup),
                Cell::Num(report.dual_inf),
                Cell::Num(report.gap),
                Cell::Num(report.grid_points as f64),
            ]);
        }
    }
    let path = ctx.csv(
        "duality_report.csv",
        &["x", "k", "status", "primal_sup", "dual_inf", "gap", "grid_points"],
        &rows,
    )?;
    report_written(path.as_deref());
    Ok(())
}

fn simulation_policy(ctx: &Context) -> Result<Policy> {
    let sim = &ctx.cfg.simulation;
    if let Some([lo, hi]) = sim.band {
        let beta = match ctx.regime {
            Regime::TransactionCost(beta) => beta,
            _ => {
                return Err(Error::Config(
                    "simulation.band needs the transaction-cost regime for its cost".into(),
                ))
            }
        };
        return Ok(Policy::Band(BandPolicy::new(lo, hi, beta)?));
    }
    if let Some(b) = sim.barrier {
        return Ok(Policy::Barrier(BarrierPolicy::new(b)?));
    }
    ctx.unconstrained()
}

fn cmd_simulate(ctx: &Context) -> Result<()> {
    let policy = simulation_policy(ctx)?;
    let sim = &ctx.cfg.simulation;
    let params = SimulationParams {
        n_paths: sim.paths,
        seed: ctx.cfg.seed,
        horizon: sim.horizon,
        bias: sim.bias,
        dt: sim.dt,
        antithetic: sim.antithetic,
    };
    println!("simulating {} ({} paths)", describe_policy(policy), sim.paths);
    let mut rows = Vec::new();
    for &x in &ctx.cfg.problem.x {
        let est = montecarlo::simulate_policy(&ctx.cfg.model, ctx.cfg.q, policy, x, &params)?;
        let fv = ctx.plain_value(x, policy)?;
        let fp = ctx.policy_psi(x, policy)?;
        println!(
            "x = {x}: value = {:.6} +- {:.6} (formula {:.6}), constraint = {:.6} +- {:.6} (formula {:.6})",
            est.value_mean, est.value_se, fv, est.constraint_mean, est.constraint_se, fp
        );
        rows.push(vec![
            Cell::Num(x),
            Cell::Num(est.value_mean),
            Cell::Num(est.value_se),
            Cell::Num(est.constraint_mean),
            Cell::Num(est.constraint_se),
            Cell::Num(fv),
            Cell::Num(fp),
            Cell::Num(est.n_paths as f64),
            Cell::Num(est.horizon),
            Cell::Num(est.truncation_bias_bound),
        ]);
    }
    let path = ctx.csv(
        "simulate.csv",
        &[
            "x",
            "value_mean",
            "value_se",
            "constraint_mean",
            "constraint_se",
            "formula_value",
            "formula_constraint",
            "n_paths",
            "horizon",
            "bias_bound",
        ],
        &rows,
    )?;
    report_written(path.as_deref());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(args).unwrap()
    }

    #[test]
    fn parses_flags_and_defaults_to_preset_one() {
        let cli = parse(&[
            "ruindiv",
            "solve-constrained",
            "--x",
            "1,2",
            "--K",
            "0.5,0.8",
            "--seed",
            "7",
        ]);
        let cfg = resolve_config(&cli.overrides).unwrap();
        assert_eq!(cfg.problem.x, vec![1.0, 2.0]);
        assert_eq!(cfg.problem.k, vec![0.5, 0.8]);
        assert_eq!(cfg.seed, 7);
        assert!(matches!(cfg.regime, RegimeConfig::NoCost));
    }

    #[test]
    fn cost_flag_selects_band_regime() {
        let cli = parse(&["ruindiv", "bstar", "--cost", "0.1"]);
        let cfg = resolve_config(&cli.overrides).unwrap();
        assert!(matches!(
            cfg.regime,
            RegimeConfig::TransactionCost { beta } if beta == 0.1
        ));
    }

    #[test]
    fn dual_model_flag_conflicts_with_cost() {
        let cli = parse(&["ruindiv", "scale", "--model", "dual", "--cost", "0.1"]);
        assert!(matches!(
            resolve_config(&cli.overrides),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        assert!(Cli::try_parse_from(["ruindiv", "scale", "--frobnicate"]).is_err());
    }

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(exit_code(&Error::Infeasible("k".into())), 2);
        assert_eq!(exit_code(&Error::Config("q".into())), 65);
        assert_eq!(exit_code(&Error::Unsupported("m".into())), 65);
        assert_eq!(exit_code(&Error::Numerical("n".into())), 1);
    }
}
