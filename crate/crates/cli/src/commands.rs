use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rescaled_rbf::experiments::{
    default_patches_per_axis, lebesgue_curves, lookup, metrics_opt, run, write_csv, RunOptions,
    TestFunction, REGISTRY_NAMES,
};
use rescaled_rbf::geometry::{Domain, PointSet, CARDIOID_SCALE};
use rescaled_rbf::interpolate::{
    cardinal_table_with, fit_rescaled_with, fit_standard_with, lebesgue, FitOptions,
    DEFAULT_VANISH_REL_TOL,
};
use rescaled_rbf::io::{
    read_samples, read_table, write_cardinal_table, write_lebesgue, write_predictions,
};
use rescaled_rbf::kernels::{Kernel, KernelFamily};
use rescaled_rbf::pum::{build_cover, fit_pum_with};

use crate::args::{
    parse_box, parse_eps_sweep, parse_family, parse_points, parse_positive, parse_vsk, require,
    EvalArgs, ExperimentArgs, InterpArgs, KernelArgs, LebesgueArgs, PumArgs, Switch,
};
use crate::failure::{Failure, EXIT_ROWS};

/// Where summary lines go: stdout, unless the CSV itself is on stdout.
struct Reporter {
    to_stderr: bool,
}

impl Reporter {
    fn for_out(out: &Option<PathBuf>) -> Self {
        Reporter {
            to_stderr: out.is_none(),
        }
    }

    fn line(&self, s: impl AsRef<str>) {
        if self.to_stderr {
            eprintln!("{}", s.as_ref());
        } else {
            println!("{}", s.as_ref());
        }
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => {
            let f = File::create(p)
                .map_err(|e| Failure::config("out", format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn write_with(
    path: &Option<PathBuf>,
    body: impl FnOnce(&mut dyn Write) -> rescaled_rbf::Result<()>,
) -> Result<(), Failure> {
    let mut w = open_out(path)?;
    body(&mut w).map_err(|e| Failure::config("out", e.to_string()))?;
    w.flush().map_err(|e| Failure::config("out", e.to_string()))
}

fn open_in(path: &Path, field: &str) -> Result<File, Failure> {
    File::open(path).map_err(|e| Failure::config(field, format!("{}: {e}", path.display())))
}

fn fit_options(k: &KernelArgs) -> Result<FitOptions, Failure> {
    if !(k.ridge >= 0.0) || !k.ridge.is_finite() {
        return Err(Failure::config(
            "ridge",
            format!("must be finite and >= 0, got {}", k.ridge),
        ));
    }
    let vanish_rel_tol = match k.vanish_tol {
        Some(t) => parse_positive(t, "vanish-tol")?,
        None => DEFAULT_VANISH_REL_TOL,
    };
    Ok(FitOptions {
        ridge: k.ridge,
        vanish_rel_tol,
    })
}

fn read_data(path: &Option<PathBuf>) -> Result<(PointSet, Vec<f64>), Failure> {
    let path = path
        .as_ref()
        .ok_or_else(|| Failure::config("data", "missing --data"))?;
    read_samples(open_in(path, "data")?).map_err(|e| Failure::from_core(e, "data"))
}

fn data_box(args: &EvalArgs, sites: &PointSet, d: usize) -> Result<(Vec<f64>, Vec<f64>), Failure> {
    match &args.bbox {
        Some(b) => parse_box(b, d),
        None => {
            let (lo, hi) = sites.bounds();
            if lo.iter().zip(&hi).any(|(l, h)| !(l < h)) {
                return Err(Failure::config(
                    "box",
                    "data bounds are degenerate; pass --box",
                ));
            }
            Ok((lo, hi))
        }
    }
}

/// Evaluation points from `--eval`, defaulting to the data sites.
fn eval_points(args: &EvalArgs, sites: &PointSet) -> Result<PointSet, Failure> {
    match &args.eval {
        None => Ok(sites.clone()),
        Some(s) => parse_points(s, "eval", Some(sites.dim()), |d| data_box(args, sites, d)),
    }
}

fn parse_truth(s: &str, eval: &PointSet) -> Result<Vec<f64>, Failure> {
    let tagged = match s {
        "identity1d" => Some(TestFunction::Identity1d),
        "franke2d" => Some(TestFunction::Franke2d { classic: false }),
        "ackley2d" => Some(TestFunction::Ackley2d { classic: false }),
        "poly9_2d" => Some(TestFunction::Poly9),
        _ => match s.strip_prefix("constant:").map(|a| a.trim().parse::<f64>()) {
            Some(Ok(a)) => Some(TestFunction::Constant(a)),
            Some(Err(_)) => return Err(Failure::config("truth", format!("`{s}`: bad constant"))),
            None => None,
        },
    };
    if let Some(f) = tagged {
        if f.dim().is_some_and(|d| d != eval.dim()) {
            return Err(Failure::config(
                "truth",
                format!("{} needs {}-dimensional points", f.tag(), f.dim().unwrap()),
            ));
        }
        return Ok(f.sample(eval));
    }
    let rows =
        read_table(open_in(Path::new(s), "truth")?).map_err(|e| Failure::from_core(e, "truth"))?;
    if rows.len() != eval.len() {
        return Err(Failure::config(
            "truth",
            format!("{} values for {} evaluation points", rows.len(), eval.len()),
        ));
    }
    Ok(rows
        .iter()
        .map(|r| *r.last().expect("nonempty row"))
        .collect())
}

fn report_predictions(
    r: &Reporter,
    args: &EvalArgs,
    eval: &PointSet,
    preds: &[Option<f64>],
) -> Result<(), Failure> {
    let flagged = preds.iter().filter(|p| p.is_none()).count();
    r.line(format!("n_eval={}", eval.len()));
    r.line(format!("n_flagged={flagged}"));
    if let Some(t) = &args.truth {
        let truth = parse_truth(t, eval)?;
        let s = metrics_opt(&truth, preds).map_err(|e| Failure::from_core(e, "truth"))?;
        r.line(format!("rmse={:e}", s.rmse));
        r.line(format!("maxerr={:e}", s.max_err));
    }
    Ok(())
}

pub fn interp(a: InterpArgs) -> Result<(), Failure> {
    let eps = parse_positive(require(a.kernel.eps, "eps")?, "eps")?;
    let family = parse_family(&a.kernel.kernel)?;
    let opts = fit_options(&a.kernel)?;
    let scale = a.vsk.as_deref().map(parse_vsk).transpose()?;
    let (x, f) = read_data(&a.data)?;
    let kernel = match scale {
        Some(s) => Kernel::vsk(family, eps, x.dim(), s),
        None => Kernel::radial(family, eps, x.dim()),
    }
    .map_err(|e| Failure::from_core(e, "kernel"))?;
    let eval = eval_points(&a.eval, &x)?;

    let (preds, cond, residual): (Vec<Option<f64>>, f64, f64) = if a.rescale {
        let m =
            fit_rescaled_with(&kernel, &x, &f, &opts).map_err(|e| Failure::from_core(e, "data"))?;
        let residual = x
            .iter()
            .zip(&f)
            .map(|(p, v)| m.eval(p).map_or(f64::INFINITY, |u| (u - v).abs()))
            .fold(0.0, f64::max);
        (m.eval_many(&eval), m.cond_estimate(), residual)
    } else {
        let m =
            fit_standard_with(&kernel, &x, &f, &opts).map_err(|e| Failure::from_core(e, "data"))?;
        let preds = m.eval_many(&eval).into_iter().map(Some).collect();
        (preds, m.cond_estimate(), m.max_node_residual())
    };
    write_with(&a.eval.out, |w| write_predictions(w, &eval, &preds))?;

    let r = Reporter::for_out(&a.eval.out);
    r.line(format!("kernel={}", kernel.label()));
    r.line(format!("cond_est={cond:e}"));
    r.line(format!("node_residual={residual:e}"));
    report_predictions(&r, &a.eval, &eval, &preds)
}

pub fn lebesgue_cmd(a: LebesgueArgs) -> Result<(), Failure> {
    let eps = parse_positive(require(a.kernel.eps, "eps")?, "eps")?;
    let family = parse_family(&a.kernel.kernel)?;
    let opts = fit_options(&a.kernel)?;
    let sites_spec = a
        .sites
        .as_deref()
        .ok_or_else(|| Failure::config("sites", "missing --sites"))?;
    let dim_hint = a
        .eval
        .bbox
        .as_ref()
        .filter(|b| b.contains(','))
        .map(|b| b.split(',').count());
    let bbox = |d: usize| match &a.eval.bbox {
        Some(b) => parse_box(b, d),
        None => Ok((vec![0.0; d], vec![1.0; d])),
    };
    let x = parse_points(sites_spec, "sites", dim_hint, bbox)?;
    let eval = match &a.eval.eval {
        Some(_) => eval_points(&a.eval, &x)?,
        None => {
            let n = if x.dim() == 1 { 1000 } else { 101 };
            let spec = format!("grid:{n}");
            parse_points(&spec, "eval", Some(x.dim()), |d| match &a.eval.bbox {
                Some(b) => parse_box(b, d),
                None => data_box(&a.eval, &x, d),
            })?
        }
    };
    let kernel =
        Kernel::radial(family, eps, x.dim()).map_err(|e| Failure::from_core(e, "kernel"))?;
    let table = cardinal_table_with(&kernel, &x, &eval, &opts)
        .map_err(|e| Failure::from_core(e, "sites"))?;
    let report = lebesgue(&table);
    write_with(&a.eval.out, |w| write_lebesgue(w, &eval, &report))?;
    if let Some(p) = &a.cardinals {
        write_with(&Some(p.clone()), |w| write_cardinal_table(w, &table))?;
    }
    let r = Reporter::for_out(&a.eval.out);
    r.line(format!("n_points={}", x.len()));
    r.line(format!("n_eval={}", eval.len()));
    r.line(format!("lambda_std={:e}", report.lambda_const));
    r.line(format!("lambda_resc={:e}", report.lambda_hat_const));
    r.line(format!("n_undefined={}", report.n_undefined));
    r.line(format!("cond_est={:e}", table.cond_estimate()));
    Ok(())
}

pub fn pum(a: PumArgs) -> Result<(), Failure> {
    let eps = parse_positive(require(a.kernel.eps, "eps")?, "eps")?;
    let family = parse_family(&a.kernel.kernel)?;
    let opts = fit_options(&a.kernel)?;
    if !(a.overlap > 1.0) || !a.overlap.is_finite() {
        return Err(Failure::config(
            "overlap",
            format!("must be finite and > 1, got {}", a.overlap),
        ));
    }
    let (x, f) = read_data(&a.data)?;
    let kernel =
        Kernel::radial(family, eps, x.dim()).map_err(|e| Failure::from_core(e, "kernel"))?;
    let domain = match &a.eval.bbox {
        Some(b) => {
            let (lo, hi) = parse_box(b, x.dim())?;
            Domain::boxed(lo, hi).map_err(|e| Failure::from_core(e, "box"))?
        }
        None => x.domain().clone(),
    };
    let patches = a
        .patches
        .unwrap_or_else(|| default_patches_per_axis(x.len()));
    let cover = build_cover(&domain, &x, patches, a.overlap)
        .map_err(|e| Failure::from_core(e, "patches"))?;
    let rescale = a.rescale_locals == Switch::On;
    let model = fit_pum_with(&cover, &x, &f, rescale, &opts, |_, _| kernel.clone())
        .map_err(|e| Failure::from_core(e, "data"))?;
    let eval = eval_points(&a.eval, &x)?;
    let preds = model.eval_many(&eval);
    write_with(&a.eval.out, |w| write_predictions(w, &eval, &preds))?;

    let r = Reporter::for_out(&a.eval.out);
    r.line(format!("patches={}", cover.len()));
    r.line(format!("patch_radius={:e}", cover.radius()));
    r.line(format!("max_local_n={}", cover.max_local_len()));
    r.line(format!("max_cond_est={:e}", model.max_cond_estimate()));
    report_predictions(&r, &a.eval, &eval, &preds)
}

pub fn experiment(a: ExperimentArgs) -> Result<(), Failure> {
    if a.list {
        for name in REGISTRY_NAMES {
            let s = lookup(name).expect("registry entry");
            println!("{name}\t{} rows\t{}", s.n_rows(), s.summary);
        }
        return Ok(());
    }
    let name = a.name.as_deref().ok_or_else(|| {
        Failure::config(
            "experiment",
            format!("missing name; available: {}", REGISTRY_NAMES.join(", ")),
        )
    })?;
    let mut spec = lookup(name).map_err(|e| Failure::from_core(e, "experiment"))?;
    if let Some(k) = &a.kernel {
        spec.family = parse_family(k)?;
    }
    if let Some(e) = a.eps {
        spec.eps = vec![parse_positive(e, "eps")?];
    }
    if let Some(s) = &a.eps_sweep {
        spec.eps = parse_eps_sweep(s)?;
    }
    spec.function = match spec.function {
        TestFunction::Franke2d { .. } => TestFunction::Franke2d {
            classic: a.franke_classic,
        },
        TestFunction::Ackley2d { .. } => TestFunction::Ackley2d {
            classic: a.ackley_classic,
        },
        other => other,
    };
    let opts = RunOptions { timings: a.timings };
    let report = run(&spec, &opts).map_err(|e| Failure::from_core(e, "experiment"))?;
    write_with(&a.out, |w| write_csv(w, &report.rows))?;

    if let Some(dir) = &a.curves_dir {
        if !spec.lebesgue {
            return Err(Failure::config(
                "curves-dir",
                format!("{name} has no Lebesgue curves"),
            ));
        }
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::config("curves-dir", format!("{}: {e}", dir.display())))?;
        let curves = lebesgue_curves(&spec).map_err(|e| Failure::from_core(e, "curves-dir"))?;
        for c in &curves {
            let path = dir.join(format!("{name}_case{}_eps{:.6}.csv", c.case, c.eps));
            write_with(&Some(path), |w| {
                write_lebesgue(w, c.table.eval_points(), &c.report)
            })?;
        }
    }

    let failed = report.n_failed();
    if failed > 0 {
        for row in report.failures() {
            eprintln!(
                "warning:row: {} eps={} n={}: {}",
                row.method,
                row.eps,
                row.n_points,
                row.error.as_deref().unwrap_or_default()
            );
        }
        return Err(Failure {
            code: EXIT_ROWS,
            field: "rows".to_string(),
            message: format!("{failed} of {} rows failed", report.rows.len()),
        });
    }
    Ok(())
}

pub fn kernels() -> Result<(), Failure> {
    let mut text = String::from("tag\tname\tphi(t), t = eps*r\tsupport\tdimensions\n");
    for k in KernelFamily::ALL {
        let support = if k.is_compactly_supported() {
            "r < 1/eps"
        } else {
            "global"
        };
        let dims = k
            .max_dim()
            .map_or("any".to_string(), |d| format!("1..={d}"));
        text.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            k.tag(),
            k.name(),
            k.formula(),
            support,
            dims
        ));
    }
    text.push_str(&format!(
        "\neps must be positive and finite.\n\
         --vsk half-sphere lifts x in the unit disk to (x, sqrt(1 - |x|^2)); the base kernel then\n  \
         lives in d+1 dimensions, so Wendland families accept d <= 2 there.\n\
         --vsk const:v lifts every site by the same height, which reproduces the plain kernel.\n\
         The cardioid domain is r <= s (1 - cos theta) in polar coordinates about the origin, s = {CARDIOID_SCALE}.\n"
    ));
    let _ = io::stdout().lock().write_all(text.as_bytes());
    Ok(())
}
