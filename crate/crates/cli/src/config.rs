//! Run configuration: flags, an optional `key=value` file, defaults. Flags win.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use agm_core::Memory;
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    Svm,
    Lpboost,
    ElasticNet,
    F1svm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeKind {
    PrimalSmooth,
    DualSmooth,
    DualRaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MemoryKind {
    Inf,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LModeKind {
    Fixed,
    Adaptive,
}

/// Flags of `agm solve`. Every field is optional so that a config file can fill it.
#[derive(Debug, Clone, Default, Args)]
pub struct SolveFlags {
    #[arg(long, value_enum)]
    pub problem: Option<ProblemKind>,
    /// SVM formulation.
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeKind>,
    #[arg(long, value_enum)]
    pub memory: Option<MemoryKind>,
    #[arg(long = "l-mode", value_enum)]
    pub l_mode: Option<LModeKind>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Elastic-net ℓ1 weight.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// LPBoost cap on the example weights.
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long = "gamma-d")]
    pub gamma_d: Option<f64>,
    #[arg(long = "gamma-u")]
    pub gamma_u: Option<f64>,
    /// Initial L (adaptive) or the constant L (fixed); defaults to the problem's bound when fixed.
    #[arg(long = "l-init")]
    pub l_init: Option<f64>,
    #[arg(long = "gap-tol")]
    pub gap_tol: Option<f64>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// LibSVM input file.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long = "n-features")]
    pub n_features: Option<usize>,
    /// Model output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Trace prefix: writes PREFIX.csv and PREFIX.jsonl.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Record zero elapsed times so traces are bitwise reproducible.
    #[arg(long = "no-timing")]
    pub no_timing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub scheme: SchemeKind,
    pub memory: Memory,
    pub l_mode: LModeKind,
    pub lambda: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub nu: f64,
    pub gamma_d: f64,
    pub gamma_u: f64,
    pub l_init: Option<f64>,
    pub max_iter: usize,
    pub gap_tol: Option<f64>,
    pub seed: u64,
    pub data: PathBuf,
    pub n_features: Option<usize>,
    pub out: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub no_timing: bool,
}

/// Parses `key = value` lines; `#` starts a comment. Keys use the flag spelling.
pub fn parse_config_file(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key=value", i + 1))?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            bail!("line {}: unknown key {key:?}", i + 1);
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

const KEYS: &[&str] = &[
    "problem", "scheme", "memory", "l-mode", "lambda", "epsilon", "gamma", "nu", "gamma-d", "gamma-u", "l-init",
    "gap-tol", "max-iter", "seed", "data", "n-features", "out", "trace", "no-timing",
];

fn from_file<T: FromStr>(file: &HashMap<String, String>, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    file.get(key).map(|v| v.parse::<T>().map_err(|e| anyhow!("config key {key}: {e}"))).transpose()
}

fn enum_from_file<T: ValueEnum>(file: &HashMap<String, String>, key: &str) -> Result<Option<T>> {
    file.get(key).map(|v| T::from_str(v, true).map_err(|e| anyhow!("config key {key}: {e}"))).transpose()
}

impl RunConfig {
    /// Merges flags over the file over defaults, then validates.
    pub fn resolve(flags: &SolveFlags, file: &HashMap<String, String>, base_dir: Option<&Path>) -> Result<Self> {
        let rel = |p: PathBuf| match base_dir {
            Some(d) if p.is_relative() => d.join(p),
            _ => p,
        };
        let path = |key: &str| -> Option<PathBuf> { file.get(key).map(|v| rel(PathBuf::from(v))) };
        let memory = match flags.memory.or(enum_from_file(file, "memory")?).unwrap_or(MemoryKind::Inf) {
            MemoryKind::Inf => Memory::Infinite,
            MemoryKind::One => Memory::One,
        };
        let cfg = Self {
            problem: flags.problem.or(enum_from_file(file, "problem")?).unwrap_or(ProblemKind::Svm),
            scheme: flags.scheme.or(enum_from_file(file, "scheme")?).unwrap_or(SchemeKind::PrimalSmooth),
            memory,
            l_mode: flags.l_mode.or(enum_from_file(file, "l-mode")?).unwrap_or(LModeKind::Adaptive),
            lambda: flags.lambda.or(from_file(file, "lambda")?).unwrap_or(1e-2),
            epsilon: flags.epsilon.or(from_file(file, "epsilon")?).unwrap_or(1e-2),
            gamma: flags.gamma.or(from_file(file, "gamma")?).unwrap_or(1.0),
            nu: flags.nu.or(from_file(file, "nu")?).unwrap_or(1.0),
            gamma_d: flags.gamma_d.or(from_file(file, "gamma-d")?).unwrap_or(2.0),
            gamma_u: flags.gamma_u.or(from_file(file, "gamma-u")?).unwrap_or(2.0),
            l_init: flags.l_init.or(from_file(file, "l-init")?),
            max_iter: flags.max_iter.or(from_file(file, "max-iter")?).unwrap_or(1000),
            gap_tol: flags.gap_tol.or(from_file(file, "gap-tol")?),
            seed: flags.seed.or(from_file(file, "seed")?).unwrap_or(0),
            data: flags.data.clone().or_else(|| path("data")).context("--data is required")?,
            n_features: flags.n_features.or(from_file(file, "n-features")?),
            out: flags.out.clone().or_else(|| path("out")),
            trace: flags.trace.clone().or_else(|| path("trace")),
            no_timing: flags.no_timing || from_file::<bool>(file, "no-timing")?.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(anyhow!("{name} must be positive and finite, got {v}"))
            }
        };
        positive("lambda", self.lambda)?;
        let smoothed = match self.problem {
            ProblemKind::Svm => self.scheme != SchemeKind::DualRaw,
            ProblemKind::Lpboost | ProblemKind::F1svm => true,
            ProblemKind::ElasticNet => false,
        };
        if smoothed {
            positive("epsilon", self.epsilon)?;
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            bail!("gamma must be nonnegative, got {}", self.gamma);
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            bail!("nu must lie in (0, 1], got {}", self.nu);
        }
        if !(self.gamma_d >= 1.0 && self.gamma_d.is_finite()) {
            bail!("gamma-d must be at least 1, got {}", self.gamma_d);
        }
        if !(self.gamma_u > 1.0 && self.gamma_u.is_finite()) {
            bail!("gamma-u must exceed 1, got {}", self.gamma_u);
        }
        if let Some(l) = self.l_init {
            positive("l-init", l)?;
        }
        if let Some(t) = self.gap_tol {
            positive("gap-tol", t)?;
            if self.problem != ProblemKind::Svm {
                bail!("gap-tol needs a duality gap, which only the svm problem provides");
            }
        }
        if self.max_iter == 0 {
            bail!("max-iter must be at least 1");
        }
        Ok(())
    }
}
