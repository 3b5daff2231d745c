//! Drive the command layer programmatically: build a config, write CSV
//! artifacts for a full constrained experiment, and show that reruns are
//! byte-identical.

use std::path::PathBuf;

use ruindiv::cli::{resolve_config, run, Cli, Command, Overrides};
use ruindiv::Result;

fn run_once(out: &PathBuf) -> Result<()> {
    let overrides = Overrides {
        paper_example: Some(1),
        x: Some(vec![1.0, 2.0, 4.0]),
        k: Some(vec![0.7, 0.9]),
        out: Some(out.clone()),
        format: Some(vec!["csv".into(), "svg".into()]),
        seed: Some(7),
        ..Overrides::default()
    };
    let cfg = resolve_config(&overrides)?;
    println!("regime: {:?}, q = {}", cfg.regime, cfg.q);
    for command in [Command::Scale, Command::PsiCurve, Command::SolveConstrained] {
        run(&Cli { command, overrides: overrides.clone() })?;
    }
    Ok(())
}

fn main() -> Result<()> {
    let out = std::env::temp_dir().join("ruindiv_experiment");
    run_once(&out)?;
    let first = std::fs::read(out.join("solve_constrained.csv"))?;
    run_once(&out)?;
    let second = std::fs::read(out.join("solve_constrained.csv"))?;
    assert_eq!(first, second, "fixed config and seed give byte-identical CSV");
    println!("artifacts in {}", out.display());
    Ok(())
}
