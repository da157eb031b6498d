use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use agm_core::rrm::{generate, write_libsvm, Dataset, SynthKind, SynthSpec};
use agm_core::subproblem::{elastic_net_ball_project, parse_elastic_ball, parse_qp, solve_box_hyperplane};
use anyhow::{Context, Result};
use clap::{Args, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProjectKind {
    Qp,
    ElasticBall,
}

#[derive(Debug, Clone, Args)]
pub struct ProjectArgs {
    #[arg(long, value_enum, default_value = "qp")]
    pub kind: ProjectKind,
    /// Instance file in the QP or elastic-ball text format.
    pub file: PathBuf,
}

/// Prints `multiplier <m>` and then one coordinate per line.
pub fn project(args: &ProjectArgs) -> Result<()> {
    let text = fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let (x, mult) = match args.kind {
        ProjectKind::Qp => {
            let qp = parse_qp::<f64>(&text)?;
            let s = solve_box_hyperplane(&qp)?;
            (s.alpha, s.multiplier)
        }
        ProjectKind::ElasticBall => {
            let (g, ball) = parse_elastic_ball::<f64>(&text)?;
            let p = elastic_net_ball_project(g.view(), &ball)?;
            (p.w, p.multiplier)
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    writeln!(out, "multiplier {mult}")?;
    for v in x.iter() {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Separable,
    Noisy,
    Regression,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "separable")]
    pub kind: GenKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fraction of positive labels.
    #[arg(long = "pos-frac", default_value_t = 0.5)]
    pub pos_frac: f64,
    /// Half-width of the empty slab around the hidden hyperplane (separable).
    #[arg(long, default_value_t = 0.05)]
    pub margin: f64,
    /// Label flip probability (noisy).
    #[arg(long, default_value_t = 0.1)]
    pub flip: f64,
    /// Standard deviation of the target noise (regression).
    #[arg(long, default_value_t = 0.1)]
    pub noise: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn gen(args: &GenArgs) -> Result<()> {
    let kind = match args.kind {
        GenKind::Separable => SynthKind::Separable { margin: args.margin },
        GenKind::Noisy => SynthKind::Noisy { flip: args.flip },
        GenKind::Regression => SynthKind::Regression { noise: args.noise },
    };
    let spec = SynthSpec { kind, n: args.n, p: args.p, pos_frac: args.pos_frac, seed: args.seed };
    let data: Dataset<f64> = generate(&spec)?;
    let mut buf = Vec::new();
    write_libsvm(&data, &mut buf)?;
    match &args.out {
        Some(path) => fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(&buf)?,
    }
    Ok(())
}
