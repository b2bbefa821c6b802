use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rescaled_rbf::experiments::{linspace, logspace};
use rescaled_rbf::geometry::{grid, halton_in, Domain, PointSet};
use rescaled_rbf::io::read_points;
use rescaled_rbf::kernels::{KernelFamily, ScaleFunction};

use crate::failure::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "rrbf",
    version,
    about = "Standard and rescaled RBF interpolation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fit a global interpolant to `x1..xd,f` data and evaluate it.
    Interp(InterpArgs),
    /// Standard and rescaled Lebesgue functions of a node set.
    Lebesgue(LebesgueArgs),
    /// Partition-of-unity interpolation with standard or rescaled local fits.
    Pum(PumArgs),
    /// Run a named experiment and write its report.
    Experiment(ExperimentArgs),
    /// List kernel families, their formulas and validity constraints.
    Kernels,
}

#[derive(Args, Debug, Clone)]
pub struct KernelArgs {
    /// Kernel family tag (gauss, iq, imq, m0, m2, w0, w2).
    #[arg(long, default_value = "w2")]
    pub kernel: String,
    /// Shape parameter.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Added to the Gram diagonal.
    #[arg(long, default_value_t = 0.0)]
    pub ridge: f64,
    /// Relative threshold below which the rescaling denominator counts as zero.
    #[arg(long = "vanish-tol")]
    pub vanish_tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    /// Evaluation points: `grid:N` (N per axis), `grid:NxM`, `halton:N` or a CSV file.
    #[arg(long)]
    pub eval: Option<String>,
    /// Box for generated points, `lo:hi` for every axis or `lo:hi,lo:hi,...`.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub bbox: Option<String>,
    /// Output CSV (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// True values at the evaluation points: a function tag (identity1d,
    /// franke2d, ackley2d, poly9_2d, constant:a) or a CSV whose last column holds them.
    #[arg(long)]
    pub truth: Option<String>,
}

#[derive(Args, Debug)]
pub struct InterpArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Data CSV with columns `x1..xd,f`.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[command(flatten)]
    pub eval: EvalArgs,
    /// Use the rescaled interpolant.
    #[arg(long)]
    pub rescale: bool,
    /// Variably scaled kernel: `half-sphere` or `const:v`.
    #[arg(long)]
    pub vsk: Option<String>,
}

#[derive(Args, Debug)]
pub struct LebesgueArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Nodes: a CSV of coordinates, `grid:N`, `grid:NxM` or `halton:N` in `--box`.
    #[arg(long)]
    pub sites: Option<String>,
    #[command(flatten)]
    pub eval: EvalArgs,
    /// Also write the cardinal table to this CSV.
    #[arg(long)]
    pub cardinals: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Args, Debug)]
pub struct PumArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Data CSV with columns `x1..xd,f`.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[command(flatten)]
    pub eval: EvalArgs,
    /// Patches per axis (default: floor(sqrt(N)/2)).
    #[arg(long)]
    pub patches: Option<usize>,
    /// Patch radius over half the cell diagonal.
    #[arg(long, default_value_t = rescaled_rbf::pum::DEFAULT_OVERLAP)]
    pub overlap: f64,
    #[arg(long = "rescale-locals", value_enum, default_value = "off")]
    pub rescale_locals: Switch,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    /// Registry name; omit with `--list`.
    pub name: Option<String>,
    /// List the registry and exit.
    #[arg(long)]
    pub list: bool,
    /// Report CSV (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replace the kernel family.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Replace the sweep with one shape parameter.
    #[arg(long, conflicts_with = "eps_sweep")]
    pub eps: Option<f64>,
    /// Replace the sweep: `lo:hi:n:{lin|log}`.
    #[arg(long = "eps-sweep", allow_hyphen_values = true)]
    pub eps_sweep: Option<String>,
    /// Record fit and evaluation wall-clock times.
    #[arg(long)]
    pub timings: bool,
    /// Square the `(9y+1)` term of Franke's second exponential.
    #[arg(long = "franke-classic")]
    pub franke_classic: bool,
    /// Use `+0.5` in Ackley's cosine exponential.
    #[arg(long = "ackley-classic")]
    pub ackley_classic: bool,
    /// Write per-point Lebesgue functions into this directory.
    #[arg(long = "curves-dir")]
    pub curves_dir: Option<PathBuf>,
}

pub fn require<T: Copy>(v: Option<T>, field: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::config(field, format!("missing --{field}")))
}

pub fn parse_family(tag: &str) -> Result<KernelFamily, Failure> {
    tag.parse()
        .map_err(|e: rescaled_rbf::Error| Failure::config("kernel", e.to_string()))
}

pub fn parse_positive(v: f64, field: &str) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::config(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

/// `lo:hi:n[:lin|log]`.
pub fn parse_eps_sweep(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = |why: &str| {
        Failure::config(
            "eps-sweep",
            format!("`{s}`: {why}; expected lo:hi:n:{{lin|log}}"),
        )
    };
    let parts: Vec<&str> = s.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(bad("wrong number of fields"));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad("bad lo"))?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad("bad hi"))?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad("bad n"))?;
    if !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() || n == 0 {
        return Err(bad("need 0 < lo <= hi and n >= 1"));
    }
    match parts.get(3).map(|m| m.trim()).unwrap_or("lin") {
        "lin" => Ok(linspace(lo, hi, n)),
        "log" => Ok(logspace(lo, hi, n)),
        _ => Err(bad("mode must be lin or log")),
    }
}

pub fn parse_vsk(s: &str) -> Result<ScaleFunction, Failure> {
    if s == "half-sphere" {
        return Ok(ScaleFunction::HalfSphere);
    }
    if let Some(v) = s.strip_prefix("const:") {
        if let Ok(v) = v.trim().parse::<f64>() {
            if v.is_finite() {
                return Ok(ScaleFunction::Constant(v));
            }
        }
    }
    Err(Failure::config(
        "vsk",
        format!("`{s}`: expected half-sphere or const:<value>"),
    ))
}

/// `lo:hi` for every axis, or one `lo:hi` per axis separated by commas.
pub fn parse_box(s: &str, dim: usize) -> Result<(Vec<f64>, Vec<f64>), Failure> {
    let bad = |why: String| Failure::config("box", format!("`{s}`: {why}"));
    let axes: Vec<(f64, f64)> = s
        .split(',')
        .map(|a| {
            let (l, h) = a
                .split_once(':')
                .ok_or_else(|| bad("axis needs lo:hi".into()))?;
            let l: f64 = l
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad bound `{l}`")))?;
            let h: f64 = h
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad bound `{h}`")))?;
            if !(l < h) || !l.is_finite() || !h.is_finite() {
                return Err(bad("need finite lo < hi".into()));
            }
            Ok((l, h))
        })
        .collect::<Result<_, _>>()?;
    let axes = match axes.len() {
        1 => vec![axes[0]; dim],
        n if n == dim => axes,
        n => return Err(bad(format!("{n} axes given for {dim}-dimensional data"))),
    };
    Ok(axes.into_iter().unzip())
}

/// Points described by `grid:...`, `halton:N` or a CSV path, inside `bbox`.
pub fn parse_points(
    s: &str,
    field: &str,
    dim: Option<usize>,
    bbox: impl FnOnce(usize) -> Result<(Vec<f64>, Vec<f64>), Failure>,
) -> Result<PointSet, Failure> {
    let to_failure = |e: rescaled_rbf::Error| Failure::config(field, e.to_string());
    if let Some(res) = s.strip_prefix("grid:") {
        let counts: Vec<usize> = res
            .split('x')
            .map(|c| c.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::config(field, format!("`{s}`: expected grid:N or grid:NxM")))?;
        let d = dim.unwrap_or(counts.len());
        let counts = match counts.len() {
            1 => vec![counts[0]; d],
            n if n == d => counts,
            n => {
                return Err(Failure::config(
                    field,
                    format!("`{s}`: {n} axes for {d}-dimensional data"),
                ))
            }
        };
        let (lo, hi) = bbox(d)?;
        return grid(&counts, &lo, &hi).map_err(to_failure);
    }
    if let Some(n) = s.strip_prefix("halton:") {
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Failure::config(field, format!("`{s}`: expected halton:N")))?;
        let d = dim.ok_or_else(|| {
            Failure::config(
                field,
                "halton points need a known dimension; use a CSV or grid",
            )
        })?;
        let (lo, hi) = bbox(d)?;
        let domain = Domain::boxed(lo, hi).map_err(to_failure)?;
        return halton_in(&domain, n, n + 1).map_err(to_failure);
    }
    let file = std::fs::File::open(s).map_err(|e| Failure::config(field, format!("{s}: {e}")))?;
    read_points(file, dim).map_err(to_failure)
}
