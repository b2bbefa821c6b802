use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::interpolate::{
    cardinal_table, fit_rescaled, fit_standard, lebesgue, CardinalTable, LebesgueReport,
    RescaledModel,
};
use crate::kernels::Kernel;
use crate::pum::{build_cover, fit_pum, Cover};

use super::metrics::{metrics_opt, ErrorSummary};
use super::registry::{ExperimentSpec, Method};

pub const CSV_HEADER: [&str; 14] = [
    "experiment",
    "method",
    "kernel",
    "eps",
    "n_points",
    "n_eval",
    "rmse",
    "maxerr",
    "n_flagged",
    "lebesgue_std",
    "lebesgue_resc",
    "cond_est",
    "fit_ms",
    "eval_ms",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Record wall-clock times. Off by default so that reports are
    /// reproducible byte for byte.
    pub timings: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub method: Method,
    pub kernel: String,
    pub eps: f64,
    pub n_points: usize,
    pub n_eval: usize,
    pub summary: Option<ErrorSummary>,
    pub lebesgue_std: Option<f64>,
    pub lebesgue_resc: Option<f64>,
    pub cond_est: Option<f64>,
    pub fit_ms: Option<f64>,
    pub eval_ms: Option<f64>,
    /// Why the row has no metrics.
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub name: String,
    pub rows: Vec<Row>,
}

impl ExperimentReport {
    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    pub fn n_failed(&self) -> usize {
        self.failures().count()
    }

    /// Rows of one method, in sweep order.
    pub fn method_rows(&self, method: Method) -> Vec<&Row> {
        self.rows.iter().filter(|r| r.method == method).collect()
    }
}

struct Prepared {
    nodes: PointSet,
    eval: PointSet,
    values: Vec<f64>,
    truth: Vec<f64>,
    cover: Option<Cover>,
}

fn prepare(spec: &ExperimentSpec) -> Result<Vec<Prepared>> {
    spec.cases
        .iter()
        .map(|case| {
            let nodes = case.nodes.build()?;
            let eval = case.eval.build()?;
            if eval.is_empty() {
                return Err(Error::EmptyPointSet);
            }
            let cover = match case.patches_per_axis {
                Some(k) if spec.methods.iter().any(|m| m.is_pum()) => {
                    Some(build_cover(nodes.domain(), &nodes, k, spec.overlap)?)
                }
                _ => None,
            };
            Ok(Prepared {
                values: spec.function.sample(&nodes),
                truth: spec.function.sample(&eval),
                nodes,
                eval,
                cover,
            })
        })
        .collect()
}

fn kernel_for(spec: &ExperimentSpec, method: Method, eps: f64, dim: usize) -> Result<Kernel> {
    if method.is_vsk() {
        Kernel::vsk(spec.family, eps, dim, spec.scale.clone())
    } else {
        Kernel::radial(spec.family, eps, dim)
    }
}

struct Fitted {
    values: Vec<Option<f64>>,
    cond: f64,
    fit_ms: f64,
    eval_ms: f64,
}

fn fit_and_eval(method: Method, kernel: &Kernel, case: &Prepared) -> Result<Fitted> {
    let start = Instant::now();
    let ms = |t: Instant| t.elapsed().as_secs_f64() * 1e3;
    match method {
        Method::Standard | Method::Vsk => {
            let m = fit_standard(kernel, &case.nodes, &case.values)?;
            let fit_ms = ms(start);
            let t = Instant::now();
            let values = m.eval_many(&case.eval).into_iter().map(Some).collect();
            Ok(Fitted {
                values,
                cond: m.cond_estimate(),
                fit_ms,
                eval_ms: ms(t),
            })
        }
        Method::Rescaled | Method::VskRescaled => {
            let m = fit_rescaled(kernel, &case.nodes, &case.values)?;
            let fit_ms = ms(start);
            let t = Instant::now();
            let values = m.eval_many(&case.eval);
            Ok(Fitted {
                values,
                cond: m.cond_estimate(),
                fit_ms,
                eval_ms: ms(t),
            })
        }
        Method::Pum | Method::Rpum => {
            let cover = case.cover.as_ref().expect("cover prepared for PUM methods");
            let m = fit_pum(
                kernel,
                cover,
                &case.nodes,
                &case.values,
                method == Method::Rpum,
            )?;
            let fit_ms = ms(start);
            let t = Instant::now();
            let values = m.eval_many(&case.eval);
            Ok(Fitted {
                values,
                cond: m.max_cond_estimate(),
                fit_ms,
                eval_ms: ms(t),
            })
        }
    }
}

fn rows_for(spec: &ExperimentSpec, case: &Prepared, eps: f64, opts: &RunOptions) -> Vec<Row> {
    let dim = case.nodes.dim();
    let wants_lebesgue = spec.lebesgue
        && spec
            .methods
            .iter()
            .any(|m| matches!(m, Method::Standard | Method::Rescaled));
    let leb = if wants_lebesgue {
        Kernel::radial(spec.family, eps, dim)
            .and_then(|k| cardinal_table(&k, &case.nodes, &case.eval))
            .map(|t| lebesgue(&t))
            .ok()
    } else {
        None
    };
    spec.methods
        .iter()
        .map(|&method| {
            let mut row = Row {
                experiment: spec.name.clone(),
                method,
                kernel: String::new(),
                eps,
                n_points: case.nodes.len(),
                n_eval: case.eval.len(),
                summary: None,
                lebesgue_std: None,
                lebesgue_resc: None,
                cond_est: None,
                fit_ms: None,
                eval_ms: None,
                error: None,
            };
            if let (Some(r), Method::Standard | Method::Rescaled) = (&leb, method) {
                row.lebesgue_std = Some(r.lambda_const);
                row.lebesgue_resc = (!r.lambda_hat_const.is_nan()).then_some(r.lambda_hat_const);
            }
            let outcome = kernel_for(spec, method, eps, dim).and_then(|kernel| {
                row.kernel = kernel.label();
                let fitted = fit_and_eval(method, &kernel, case)?;
                row.cond_est = Some(fitted.cond);
                if opts.timings {
                    row.fit_ms = Some(fitted.fit_ms);
                    row.eval_ms = Some(fitted.eval_ms);
                }
                metrics_opt(&case.truth, &fitted.values)
            });
            match outcome {
                Ok(s) => row.summary = Some(s),
                Err(e) => row.error = Some(e.to_string()),
            }
            if row.kernel.is_empty() {
                row.kernel = spec.family.tag().to_string();
            }
            row
        })
        .collect()
}

/// Runs every (case, method, eps) row. Row-level failures are recorded in the
/// row; only an unbuildable configuration is an error.
pub fn run(spec: &ExperimentSpec, opts: &RunOptions) -> Result<ExperimentReport> {
    spec.validate()?;
    let cases = prepare(spec)?;
    let jobs: Vec<(usize, usize)> = (0..cases.len())
        .flat_map(|c| (0..spec.eps.len()).map(move |e| (c, e)))
        .collect();
    let blocks: Vec<Vec<Row>> = jobs
        .par_iter()
        .map(|&(c, e)| rows_for(spec, &cases[c], spec.eps[e], opts))
        .collect();
    let n_eps = spec.eps.len();
    let mut rows = Vec::with_capacity(spec.n_rows());
    for c in 0..cases.len() {
        for m in 0..spec.methods.len() {
            for e in 0..n_eps {
                rows.push(blocks[c * n_eps + e][m].clone());
            }
        }
    }
    Ok(ExperimentReport {
        name: spec.name.clone(),
        rows,
    })
}

/// Lebesgue functions of one (case, eps) pair, with the rescaled fit of the
/// experiment's function on the same nodes.
#[derive(Clone, Debug)]
pub struct LebesgueCurve {
    pub case: usize,
    pub eps: f64,
    pub table: CardinalTable,
    pub report: LebesgueReport,
    pub model: RescaledModel,
}

pub fn lebesgue_curves(spec: &ExperimentSpec) -> Result<Vec<LebesgueCurve>> {
    spec.validate()?;
    let cases = prepare(spec)?;
    let jobs: Vec<(usize, f64)> = (0..cases.len())
        .flat_map(|c| spec.eps.iter().map(move |&e| (c, e)))
        .collect();
    jobs.par_iter()
        .map(|&(c, eps)| {
            let case = &cases[c];
            let k = Kernel::radial(spec.family, eps, case.nodes.dim())?;
            let table = cardinal_table(&k, &case.nodes, &case.eval)?;
            let model = fit_rescaled(&k, &case.nodes, &case.values)?;
            Ok(LebesgueCurve {
                case: c,
                eps,
                report: lebesgue(&table),
                table,
                model,
            })
        })
        .collect()
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

pub fn row_record(row: &Row) -> Vec<String> {
    let s = row.summary.as_ref();
    vec![
        row.experiment.clone(),
        row.method.tag().to_string(),
        row.kernel.clone(),
        format_float(row.eps),
        row.n_points.to_string(),
        row.n_eval.to_string(),
        opt(s.map(|s| s.rmse)),
        opt(s.map(|s| s.max_err)),
        s.map(|s| s.n_flagged.to_string()).unwrap_or_default(),
        opt(row.lebesgue_std),
        opt(row.lebesgue_resc),
        opt(row.cond_est),
        opt(row.fit_ms),
        opt(row.eval_ms),
    ]
}

pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row_record(row))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::registry::lookup;

    #[test]
    fn fig2_line_rows() {
        let report = run(&lookup("fig2-line").unwrap(), &RunOptions::default()).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert_eq!(report.n_failed(), 0);
        let seven: Vec<&Row> = report.rows.iter().filter(|r| r.n_points == 7).collect();
        let (std, resc) = (seven[0], seven[1]);
        assert_eq!(
            (std.method, resc.method),
            (Method::Standard, Method::Rescaled)
        );
        assert!(resc.summary.unwrap().max_err < std.summary.unwrap().max_err);
        assert!(std.fit_ms.is_none());
    }

    #[test]
    fn csv_is_deterministic() {
        let spec = lookup("leb-square").unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&mut a, &run(&spec, &RunOptions::default()).unwrap().rows).unwrap();
        write_csv(&mut b, &run(&spec, &RunOptions::default()).unwrap().rows).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with(&CSV_HEADER.join(",")));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, 2.5e-300, 12345.678] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }
}
