//! Standard and rescaled kernel interpolation, cardinal functions, and
//! Lebesgue diagnostics.
//!
//! The standard interpolant is `P_f(x) = sum_i c_i K(x, x_i)` with `A c = f_X`.
//! Its companion `P_g` interpolates the constant one (`A d = 1`), and the
//! rescaled interpolant is the ratio `P_f / P_g`. Writing both through the
//! cardinal basis `u_j` shows the ratio is a Shepard-type method with weights
//! `u_j / sum_k u_k`, so it reproduces constants exactly.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::kernels::{gram, Kernel, RescaledKernel};
use crate::solver::{
    cond_estimate, dd_dot, factor_with_ridge, Refined, SpdFactorization, SymMatrix,
};

/// Default relative threshold below which `|P_g(x)|` counts as vanished.
pub const DEFAULT_VANISH_REL_TOL: f64 = 1e-12;

const REFINE_ITERS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    /// Added to the Gram diagonal before factoring. Zero means none.
    pub ridge: f64,
    /// `vanish_tol = vanish_rel_tol * max_i |P_g(x_i)|`.
    pub vanish_rel_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            ridge: 0.0,
            vanish_rel_tol: DEFAULT_VANISH_REL_TOL,
        }
    }
}

/// Factored collocation system shared by every fit on one center set.
struct Collocation {
    matrix: SymMatrix,
    factor: SpdFactorization,
    cond: f64,
}

impl Collocation {
    fn build(kernel: &Kernel, centers: &PointSet, opts: &FitOptions) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if centers.dim() != kernel.dim() {
            return Err(Error::DimensionMismatch {
                expected: kernel.dim(),
                got: centers.dim(),
            });
        }
        let wrap = |e: Error| Error::Fit {
            kernel: kernel.label(),
            epsilon: kernel.epsilon(),
            source: Box::new(e),
        };
        let mut matrix = gram(kernel, centers).map_err(wrap)?;
        if opts.ridge != 0.0 {
            matrix = matrix.with_ridge(opts.ridge);
        }
        let factor = factor_with_ridge(&matrix, 0.0).map_err(wrap)?;
        let cond = cond_estimate(&factor, &matrix);
        Ok(Collocation {
            matrix,
            factor,
            cond,
        })
    }
}

fn check_values(centers: &PointSet, values: &[f64]) -> Result<()> {
    if values.len() != centers.len() {
        return Err(Error::DimensionMismatch {
            expected: centers.len(),
            got: values.len(),
        });
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index: i });
    }
    Ok(())
}

/// `P_f(x) = sum_i c_i K(x, x_i)`.
#[derive(Clone, Debug)]
pub struct InterpolantModel {
    kernel: Kernel,
    centers: PointSet,
    coeffs: Refined,
    values: Vec<f64>,
    cond: f64,
}

impl InterpolantModel {
    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn centers(&self) -> &PointSet {
        &self.centers
    }

    /// Leading parts of the coefficients. They are stored to roughly twice
    /// working precision; [`InterpolantModel::eval`] uses the full value.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs.hi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// 1-norm condition estimate of the collocation matrix.
    pub fn cond_estimate(&self) -> f64 {
        self.cond
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.dot(&self.kernel.row(x, &self.centers))
    }

    pub fn eval_many(&self, points: &PointSet) -> Vec<f64> {
        (0..points.len())
            .into_par_iter()
            .with_min_len(64)
            .map(|i| self.eval(points.point(i)))
            .collect()
    }

    /// `max_i |P_f(x_i) - f_i|`.
    pub fn max_node_residual(&self) -> f64 {
        self.centers
            .iter()
            .zip(&self.values)
            .map(|(x, f)| (self.eval(x) - f).abs())
            .fold(0.0, f64::max)
    }
}

/// Solves `A c = f_X` for the standard interpolant.
pub fn fit_standard(
    kernel: &Kernel,
    centers: &PointSet,
    values: &[f64],
) -> Result<InterpolantModel> {
    fit_standard_with(kernel, centers, values, &FitOptions::default())
}

pub fn fit_standard_with(
    kernel: &Kernel,
    centers: &PointSet,
    values: &[f64],
    opts: &FitOptions,
) -> Result<InterpolantModel> {
    check_values(centers, values)?;
    let sys = Collocation::build(kernel, centers, opts)?;
    let coeffs = sys
        .factor
        .solve_refined(&sys.matrix, values, REFINE_ITERS)?;
    Ok(InterpolantModel {
        kernel: kernel.clone(),
        centers: centers.clone(),
        coeffs,
        values: values.to_vec(),
        cond: sys.cond,
    })
}

pub fn eval_standard(model: &InterpolantModel, x: &[f64]) -> f64 {
    model.eval(x)
}

/// `P_f / P_g`, with `P_g` the interpolant of the constant one.
#[derive(Clone, Debug)]
pub struct RescaledModel {
    base: InterpolantModel,
    denom_coeffs: Refined,
    vanish_tol: f64,
}

impl RescaledModel {
    pub fn base(&self) -> &InterpolantModel {
        &self.base
    }

    pub fn denom_coeffs(&self) -> &[f64] {
        &self.denom_coeffs.hi
    }

    pub fn vanish_tol(&self) -> f64 {
        self.vanish_tol
    }

    pub fn cond_estimate(&self) -> f64 {
        self.base.cond
    }

    pub fn centers(&self) -> &PointSet {
        &self.base.centers
    }

    /// `(P_f(x), P_g(x))` from a single pass over the kernel row.
    pub fn parts(&self, x: &[f64]) -> (f64, f64) {
        let k = self.base.kernel.row(x, &self.base.centers);
        (self.base.coeffs.dot(&k), self.denom_coeffs.dot(&k))
    }

    pub fn numerator(&self, x: &[f64]) -> f64 {
        self.parts(x).0
    }

    pub fn denominator(&self, x: &[f64]) -> f64 {
        self.parts(x).1
    }

    /// `Some(P_f(x) / P_g(x))`, or `None` where `|P_g(x)| <= vanish_tol`.
    pub fn eval(&self, x: &[f64]) -> Option<f64> {
        let (num, den) = self.parts(x);
        (den.abs() > self.vanish_tol).then(|| num / den)
    }

    pub fn eval_many(&self, points: &PointSet) -> Vec<Option<f64>> {
        (0..points.len())
            .into_par_iter()
            .with_min_len(64)
            .map(|i| self.eval(points.point(i)))
            .collect()
    }

    /// The constant-one interpolant `P_g` as its own model.
    pub fn constant_one_model(&self) -> InterpolantModel {
        InterpolantModel {
            kernel: self.base.kernel.clone(),
            centers: self.base.centers.clone(),
            coeffs: self.denom_coeffs.clone(),
            values: vec![1.0; self.denom_coeffs.hi.len()],
            cond: self.base.cond,
        }
    }

    pub fn rescaled_kernel(&self) -> RescaledKernel {
        RescaledKernel::new(self.constant_one_model(), self.vanish_tol)
    }

    /// `sum_j c_j K_r(x, x_j) P_g(x_j)`, evaluated literally through the
    /// rescaled kernel. Costs `N` denominator evaluations per term; intended
    /// for cross-checking [`RescaledModel::eval`].
    pub fn eval_rescaled_kernel_form(&self, x: &[f64]) -> Result<f64> {
        let kr = self.rescaled_kernel();
        let pg = kr.denominator_model();
        let terms = self
            .base
            .centers
            .iter()
            .map(|xj| Ok(kr.eval(x, xj)? * pg.eval(xj)))
            .collect::<Result<Vec<f64>>>()?;
        Ok(self.base.coeffs.dot(&terms))
    }
}

/// Fits `P_f` and `P_g` from one factorization.
pub fn fit_rescaled(kernel: &Kernel, centers: &PointSet, values: &[f64]) -> Result<RescaledModel> {
    fit_rescaled_with(kernel, centers, values, &FitOptions::default())
}

pub fn fit_rescaled_with(
    kernel: &Kernel,
    centers: &PointSet,
    values: &[f64],
    opts: &FitOptions,
) -> Result<RescaledModel> {
    check_values(centers, values)?;
    let sys = Collocation::build(kernel, centers, opts)?;
    let coeffs = sys
        .factor
        .solve_refined(&sys.matrix, values, REFINE_ITERS)?;
    let denom_coeffs =
        sys.factor
            .solve_refined(&sys.matrix, &vec![1.0; centers.len()], REFINE_ITERS)?;
    let node_pg = sys.matrix.mul_vec(&denom_coeffs.hi);
    let scale = node_pg.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(RescaledModel {
        base: InterpolantModel {
            kernel: kernel.clone(),
            centers: centers.clone(),
            coeffs,
            values: values.to_vec(),
            cond: sys.cond,
        },
        denom_coeffs,
        vanish_tol: opts.vanish_rel_tol * scale,
    })
}

pub fn eval_rescaled(model: &RescaledModel, x: &[f64]) -> Option<f64> {
    model.eval(x)
}

/// Cardinal functions `u_j` and their normalized counterparts
/// `u_hat_j = u_j / sum_k u_k` tabulated on a set of evaluation points.
#[derive(Clone, Debug)]
pub struct CardinalTable {
    centers: PointSet,
    eval_points: PointSet,
    /// Row-major `n_eval x n_centers`.
    u: Vec<f64>,
    /// Low parts of `u` carried from the double-double evaluation.
    u_lo: Vec<f64>,
    /// Row-major; rows where `defined` is false hold NaN.
    u_hat: Vec<f64>,
    denom: Vec<f64>,
    defined: Vec<bool>,
    vanish_tol: f64,
    cond: f64,
}

impl CardinalTable {
    pub fn centers(&self) -> &PointSet {
        &self.centers
    }

    pub fn eval_points(&self) -> &PointSet {
        &self.eval_points
    }

    pub fn n_centers(&self) -> usize {
        self.centers.len()
    }

    pub fn n_eval(&self) -> usize {
        self.eval_points.len()
    }

    pub fn u_row(&self, i: usize) -> &[f64] {
        let n = self.n_centers();
        &self.u[i * n..(i + 1) * n]
    }

    pub fn u_hat_row(&self, i: usize) -> Option<&[f64]> {
        let n = self.n_centers();
        self.defined[i].then(|| &self.u_hat[i * n..(i + 1) * n])
    }

    /// `sum_k u_k(x)`, which is `P_g(x)`.
    pub fn denom(&self) -> &[f64] {
        &self.denom
    }

    pub fn defined(&self) -> &[bool] {
        &self.defined
    }

    pub fn vanish_tol(&self) -> f64 {
        self.vanish_tol
    }

    pub fn cond_estimate(&self) -> f64 {
        self.cond
    }

    fn weighted(&self, i: usize, values: &[f64]) -> f64 {
        let n = self.n_centers();
        let (hi, lo) = dd_dot(values, self.u_row(i), &self.u_lo[i * n..(i + 1) * n]);
        hi + lo
    }

    /// Standard interpolant in cardinal form, `sum_j f_j u_j(x)`.
    pub fn cardinal_eval(&self, values: &[f64]) -> Vec<f64> {
        (0..self.n_eval())
            .map(|i| self.weighted(i, values))
            .collect()
    }

    /// Rescaled interpolant in Shepard form, `sum_j f_j u_hat_j(x)`,
    /// computed as `sum_j f_j u_j / sum_k u_k`.
    pub fn shepard_eval(&self, values: &[f64]) -> Vec<Option<f64>> {
        (0..self.n_eval())
            .map(|i| self.defined[i].then(|| self.weighted(i, values) / self.denom[i]))
            .collect()
    }
}

/// Tabulates the cardinal basis by solving `A C = I` once and forming
/// `u(x) = C k(x)` with `k(x) = [K(x, x_1), ..., K(x, x_N)]`. The columns of
/// `C` are refined in double-double and `C k(x)` is accumulated the same way.
pub fn cardinal_table(
    kernel: &Kernel,
    centers: &PointSet,
    eval_points: &PointSet,
) -> Result<CardinalTable> {
    cardinal_table_with(kernel, centers, eval_points, &FitOptions::default())
}

pub fn cardinal_table_with(
    kernel: &Kernel,
    centers: &PointSet,
    eval_points: &PointSet,
    opts: &FitOptions,
) -> Result<CardinalTable> {
    if eval_points.dim() != centers.dim() {
        return Err(Error::DimensionMismatch {
            expected: centers.dim(),
            got: eval_points.dim(),
        });
    }
    let sys = Collocation::build(kernel, centers, opts)?;
    let n = centers.len();
    // Columns of C = A^{-1}, refined past working precision so that u(x_i)
    // still reproduces delta_ij when A is badly conditioned.
    let inv: Vec<Refined> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            sys.factor.solve_refined(&sys.matrix, &e, REFINE_ITERS)
        })
        .collect::<Result<_>>()?;

    let d: Vec<f64> = (0..n)
        .map(|i| inv.iter().map(|col| col.hi[i]).sum())
        .collect();
    let node_pg = sys.matrix.mul_vec(&d);
    let vanish_tol = opts.vanish_rel_tol * node_pg.iter().map(|v| v.abs()).fold(0.0, f64::max);

    let rows: Vec<(Vec<f64>, Vec<f64>, f64)> = (0..eval_points.len())
        .into_par_iter()
        .with_min_len(32)
        .map(|i| {
            let k = kernel.row(eval_points.point(i), centers);
            let (u, u_lo): (Vec<f64>, Vec<f64>) = inv.iter().map(|col| col.dot_split(&k)).unzip();
            let (s_hi, s_lo) = dd_dot(&vec![1.0; n], &u, &u_lo);
            (u, u_lo, s_hi + s_lo)
        })
        .collect();

    let m = eval_points.len();
    let mut u = Vec::with_capacity(m * n);
    let mut u_lo = Vec::with_capacity(m * n);
    let mut u_hat = Vec::with_capacity(m * n);
    let mut denom = Vec::with_capacity(m);
    let mut defined = Vec::with_capacity(m);
    for (row, lo, s) in rows {
        let ok = s.abs() > vanish_tol;
        if ok {
            u_hat.extend(row.iter().map(|v| v / s));
        } else {
            u_hat.extend(std::iter::repeat(f64::NAN).take(n));
        }
        u.extend(row);
        u_lo.extend(lo);
        denom.push(s);
        defined.push(ok);
    }
    Ok(CardinalTable {
        centers: centers.clone(),
        eval_points: eval_points.clone(),
        u,
        u_lo,
        u_hat,
        denom,
        defined,
        vanish_tol,
        cond: sys.cond,
    })
}

/// Lebesgue functions of the standard and rescaled cardinal bases.
#[derive(Clone, Debug)]
pub struct LebesgueReport {
    /// `Lambda_N(x) = sum_j |u_j(x)|`.
    pub lambda_fn: Vec<f64>,
    pub lambda_const: f64,
    /// `sum_j |u_hat_j(x)|`; NaN where the denominator vanished.
    pub lambda_hat_fn: Vec<f64>,
    /// Maximum over defined points; NaN when none is defined.
    pub lambda_hat_const: f64,
    pub defined: Vec<bool>,
    pub n_undefined: usize,
}

pub fn lebesgue(table: &CardinalTable) -> LebesgueReport {
    let m = table.n_eval();
    let lambda_fn: Vec<f64> = (0..m)
        .map(|i| table.u_row(i).iter().map(|v| v.abs()).sum())
        .collect();
    let lambda_hat_fn: Vec<f64> = (0..m)
        .map(|i| {
            table
                .u_hat_row(i)
                .map_or(f64::NAN, |r| r.iter().map(|v| v.abs()).sum())
        })
        .collect();
    let lambda_const = lambda_fn.iter().copied().fold(0.0, f64::max);
    let lambda_hat_const = lambda_hat_fn
        .iter()
        .zip(&table.defined)
        .filter(|(_, ok)| **ok)
        .map(|(v, _)| *v)
        .fold(f64::NAN, f64::max);
    let n_undefined = table.defined.iter().filter(|ok| !**ok).count();
    LebesgueReport {
        lambda_fn,
        lambda_const,
        lambda_hat_fn,
        lambda_hat_const,
        defined: table.defined.clone(),
        n_undefined,
    }
}

/// Pointwise check of `|P(x)| <= Lambda(x) max_j |f_j| + STABILITY_SLACK` for
/// both interpolants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityCheck {
    pub checked_std: usize,
    pub checked_resc: usize,
    pub violations_std: usize,
    pub violations_resc: usize,
    /// Largest `|P_f(x)| - Lambda_N(x) max|f|`.
    pub max_excess_std: f64,
    /// Largest `|P_hat_f(x)| - Lambda_hat_N(x) max|f|` over defined points.
    pub max_excess_resc: f64,
}

impl StabilityCheck {
    pub fn holds(&self) -> bool {
        self.violations_std == 0 && self.violations_resc == 0
    }
}

pub const STABILITY_SLACK: f64 = 1e-9;

/// Evaluates the model independently of the table and checks it against the
/// table's Lebesgue functions at every evaluation point.
pub fn stability_bound_check(model: &RescaledModel, table: &CardinalTable) -> StabilityCheck {
    let fmax = model
        .base
        .values
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    let report = lebesgue(table);
    let mut out = StabilityCheck {
        checked_std: 0,
        checked_resc: 0,
        violations_std: 0,
        violations_resc: 0,
        max_excess_std: f64::NEG_INFINITY,
        max_excess_resc: f64::NEG_INFINITY,
    };
    for (i, x) in table.eval_points.iter().enumerate() {
        let (num, den) = model.parts(x);
        let excess = num.abs() - report.lambda_fn[i] * fmax;
        out.checked_std += 1;
        out.max_excess_std = out.max_excess_std.max(excess);
        if excess > STABILITY_SLACK {
            out.violations_std += 1;
        }
        if report.defined[i] && den.abs() > model.vanish_tol {
            let excess = (num / den).abs() - report.lambda_hat_fn[i] * fmax;
            out.checked_resc += 1;
            out.max_excess_resc = out.max_excess_resc.max(excess);
            if excess > STABILITY_SLACK {
                out.violations_resc += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{grid, Domain};
    use crate::kernels::KernelFamily;

    fn line(points: &[f64]) -> PointSet {
        PointSet::new(1, points.to_vec(), Domain::interval(0.0, 1.0).unwrap()).unwrap()
    }

    fn w2(eps: f64, dim: usize) -> Kernel {
        Kernel::radial(KernelFamily::WendlandW2, eps, dim).unwrap()
    }

    #[test]
    fn single_center_gaussian() {
        let k = Kernel::radial(KernelFamily::Gaussian, 2.0, 1).unwrap();
        let x = line(&[0.3]);
        let m = fit_standard(&k, &x, &[5.0]).unwrap();
        assert_eq!(m.coeffs(), &[5.0]);
        let y = [0.55];
        assert!((m.eval(&y) - 5.0 * k.eval(&y, &[0.3])).abs() < 1e-15);
    }

    #[test]
    fn identity_on_three_points() {
        let x = line(&[1.0 / 6.0, 0.5, 5.0 / 6.0]);
        let f: Vec<f64> = x.iter().map(|p| p[0]).collect();
        let m = fit_standard(&w2(5.0, 1), &x, &f).unwrap();
        assert!(m.max_node_residual() < 1e-14);
    }

    #[test]
    fn fit_rejects_bad_values() {
        let x = line(&[0.1, 0.2]);
        assert!(fit_standard(&w2(1.0, 1), &x, &[1.0]).is_err());
        assert!(fit_standard(&w2(1.0, 1), &x, &[1.0, f64::NAN]).is_err());
        assert!(fit_standard(&w2(1.0, 2), &x, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn not_pd_error_carries_context() {
        let k = Kernel::radial(KernelFamily::Gaussian, 1e-4, 1).unwrap();
        let x = line(&[0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]);
        match fit_standard(&k, &x, &[0.0; 10]) {
            Err(Error::Fit { kernel, source, .. }) => {
                assert_eq!(kernel, "gauss");
                assert!(matches!(*source, Error::NotPositiveDefinite { .. }));
            }
            other => panic!("expected fit failure, got {other:?}"),
        }
        let ridged = FitOptions {
            ridge: 1e-6,
            ..FitOptions::default()
        };
        assert!(fit_standard_with(&k, &x, &[0.0; 10], &ridged).is_ok());
    }

    #[test]
    fn rescaled_reproduces_constant() {
        let x = line(&[0.05, 0.3, 0.42, 0.7, 0.95]);
        for a in [-3.0, 0.0, 1.0, 7.0] {
            let m = fit_rescaled(
                &Kernel::radial(KernelFamily::InverseMultiquadric, 2.0, 1).unwrap(),
                &x,
                &[a; 5],
            )
            .unwrap();
            for i in 0..=100 {
                let v = m.eval(&[i as f64 / 100.0]).unwrap();
                assert!((v - a).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rescaled_single_center() {
        let x = line(&[0.5]);
        let m = fit_rescaled(&w2(3.0, 1), &x, &[2.5]).unwrap();
        assert_eq!(m.eval(&[0.6]), Some(2.5));
        assert_eq!(m.eval(&[0.9]), None);
    }

    #[test]
    fn rescaled_hits_nodes_and_zero() {
        let x = grid(&[4, 4], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let f: Vec<f64> = x.iter().map(|p| (3.0 * p[0]).sin() + p[1]).collect();
        let m = fit_rescaled(&w2(2.0, 2), &x, &f).unwrap();
        for (p, v) in x.iter().zip(&f) {
            assert!((m.eval(p).unwrap() - v).abs() < 1e-12);
        }
        let z = fit_rescaled(&w2(2.0, 2), &x, &[0.0; 16]).unwrap();
        assert_eq!(z.eval(&[0.4, 0.4]), Some(0.0));
    }

    #[test]
    fn outside_support_is_flagged() {
        let x = line(&[0.0, 0.25, 0.5]);
        let m = fit_rescaled(&w2(10.0, 1), &x, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(m.eval(&[0.9]), None);
        assert_eq!(
            fit_standard(&w2(10.0, 1), &x, &[1.0, 2.0, 3.0])
                .unwrap()
                .eval(&[0.9]),
            0.0
        );
    }

    #[test]
    fn constant_one_model_is_one_at_nodes() {
        let x = grid(&[3, 3], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let m = fit_rescaled(
            &Kernel::radial(KernelFamily::MaternM2, 3.0, 2).unwrap(),
            &x,
            &[1.0; 9],
        )
        .unwrap();
        let pg = m.constant_one_model();
        for p in x.iter() {
            assert!((pg.eval(p) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn rescaled_kernel_matches_gram_at_nodes() {
        let x = grid(&[3, 3], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let k = Kernel::radial(KernelFamily::Gaussian, 3.0, 2).unwrap();
        let m = fit_rescaled(&k, &x, &[0.0; 9]).unwrap();
        let kr = m.rescaled_kernel();
        for i in 0..9 {
            for j in 0..9 {
                let a = k.eval(x.point(i), x.point(j));
                let r = kr.eval(x.point(i), x.point(j)).unwrap();
                assert!((a - r).abs() < 1e-12);
            }
        }
        assert!(matches!(
            kr.eval(&[5.0, 5.0], &[0.0, 0.0]),
            Err(Error::DenominatorVanished { .. })
        ));
    }

    #[test]
    fn cardinal_identity_at_nodes() {
        let x = line(&[0.0, 0.2, 0.5, 0.65, 1.0]);
        let t = cardinal_table(&w2(2.0, 1), &x, &x).unwrap();
        for i in 0..5 {
            for (j, v) in t.u_row(i).iter().enumerate() {
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-8);
            }
        }
        let r = lebesgue(&t);
        assert!(r.lambda_fn.iter().all(|v| (v - 1.0).abs() < 1e-8));
    }

    #[test]
    fn cardinal_single_center() {
        let x = line(&[0.4]);
        let e = grid(&[11], &[0.0], &[1.0]).unwrap();
        let k = w2(2.0, 1);
        let t = cardinal_table(&k, &x, &e).unwrap();
        for (i, p) in e.iter().enumerate() {
            assert!((t.u_row(i)[0] - k.eval(p, &[0.4])).abs() < 1e-15);
            if let Some(h) = t.u_hat_row(i) {
                assert!((h[0] - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn shepard_and_cardinal_forms_agree_with_models() {
        let x = grid(&[4, 4], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let e = grid(&[9, 9], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let k = Kernel::radial(KernelFamily::MaternM2, 4.0, 2).unwrap();
        let f: Vec<f64> = x.iter().map(|p| p[0] * p[0] - p[1]).collect();
        let t = cardinal_table(&k, &x, &e).unwrap();
        let std = fit_standard(&k, &x, &f).unwrap();
        let resc = fit_rescaled(&k, &x, &f).unwrap();
        for (i, (card, shep)) in t
            .cardinal_eval(&f)
            .iter()
            .zip(t.shepard_eval(&f))
            .enumerate()
        {
            let p = e.point(i);
            assert!((card - std.eval(p)).abs() < 1e-10);
            assert!((shep.unwrap() - resc.eval(p).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn stability_bound_examples() {
        let x = line(&[0.0, 0.3, 0.5, 0.9]);
        let e = grid(&[200], &[0.0], &[1.0]).unwrap();
        let k = w2(1.5, 1);
        let t = cardinal_table(&k, &x, &e).unwrap();
        let one = fit_rescaled(&k, &x, &[1.0; 4]).unwrap();
        let c = stability_bound_check(&one, &t);
        assert!(c.holds());
        let m = fit_rescaled(&k, &x, &[0.3, -2.0, 1.1, 0.0]).unwrap();
        assert!(stability_bound_check(&m, &t).holds());
    }

    #[test]
    fn wendland_refinement_reduces_error() {
        let e = grid(&[1000], &[0.0], &[1.0]).unwrap();
        let err = |pts: &[f64]| {
            let x = line(pts);
            let f: Vec<f64> = pts.to_vec();
            let s = fit_standard(&w2(5.0, 1), &x, &f).unwrap();
            let r = fit_rescaled(&w2(5.0, 1), &x, &f).unwrap();
            let es = e
                .iter()
                .map(|p| (s.eval(p) - p[0]).abs())
                .fold(0.0, f64::max);
            let er = e
                .iter()
                .filter_map(|p| r.eval(p).map(|v| (v - p[0]).abs()))
                .fold(0.0, f64::max);
            (es, er)
        };
        let (s3, r3) = err(&[1.0 / 6.0, 0.5, 5.0 / 6.0]);
        let (s7, r7) = err(&[0.0, 1.0 / 6.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 5.0 / 6.0, 1.0]);
        assert!(s7 <= s3, "standard {s3} -> {s7}");
        assert!(r7 <= r3, "rescaled {r3} -> {r7}");
        assert!(r7 < s7);
    }
}
