mod commands;
mod config;
mod solve;

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;

use commands::{GenArgs, ProjectArgs};
use config::{parse_config_file, RunConfig, SolveFlags};

#[derive(Debug, Parser)]
#[command(name = "agm", version, about = "Accelerated gradient methods for regularized risk minimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a model and export the convergence trace.
    Solve(SolveArgs),
    /// Solve a standalone QP or elastic-ball projection instance.
    Project(ProjectArgs),
    /// Write a synthetic LibSVM dataset.
    Gen(GenArgs),
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    #[command(flatten)]
    flags: SolveFlags,
    /// key=value config file; repeat to run several configs.
    #[arg(long)]
    config: Vec<PathBuf>,
    /// Worker threads when several configs are given.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// Inserts the config stem before the extension so parallel runs never share a file.
fn tagged(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{tag}"),
    };
    path.with_file_name(name)
}

fn resolve_all(args: &SolveArgs) -> Result<Vec<RunConfig>> {
    if args.config.is_empty() {
        return Ok(vec![RunConfig::resolve(&args.flags, &HashMap::new(), None)?]);
    }
    let many = args.config.len() > 1;
    args.config
        .iter()
        .map(|path| {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file = parse_config_file(&text).with_context(|| format!("in {}", path.display()))?;
            let mut cfg = RunConfig::resolve(&args.flags, &file, path.parent())
                .with_context(|| format!("in {}", path.display()))?;
            if many && (args.flags.out.is_some() || args.flags.trace.is_some()) {
                let tag = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                cfg.out = cfg.out.map(|p| tagged(&p, &tag));
                cfg.trace = cfg.trace.map(|p| tagged(&p, &tag));
            }
            Ok(cfg)
        })
        .collect()
}

fn run_solve(args: &SolveArgs) -> Result<u8> {
    // every config is validated before any solver starts
    let configs = resolve_all(args)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build()?;
    let outcomes: Vec<Result<solve::Outcome>> = pool.install(|| configs.par_iter().map(solve::run).collect());
    let mut code = 0u8;
    for (cfg, out) in configs.iter().zip(outcomes) {
        match out {
            Ok(o) => {
                let gap = o.gap.map_or_else(|| "n/a".to_string(), |g| format!("{g:e}"));
                println!(
                    "{}: status={:?} iterations={} J={:e} gap={gap}",
                    cfg.data.display(),
                    o.status,
                    o.iterations,
                    o.objective
                );
                code = code.max(o.exit_code);
            }
            Err(e) => {
                eprintln!("error: {}: {e:#}", cfg.data.display());
                return Ok(1);
            }
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors share the generic failure code; 2 means "target not reached"
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Project(a) => commands::project(a).map(|_| 0),
        Command::Gen(a) => commands::gen(a).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
