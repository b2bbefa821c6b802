//! Dense symmetric positive-definite linear algebra.

use crate::error::{Error, Result};

/// Dense symmetric matrix in full row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds the matrix from `entry(i, j)` evaluated on the lower triangle and
    /// mirrored, so symmetry holds bit for bit.
    pub fn from_fn(n: usize, mut entry: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = entry(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix { n, data }
    }

    /// Wraps row-major data, checking symmetry exactly.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(crate::error::invalid(
                        "matrix",
                        format!("not symmetric at ({i}, {j})"),
                    ));
                }
            }
        }
        Ok(SymMatrix { n, data })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `A + ridge * I`.
    pub fn with_ridge(&self, ridge: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += ridge;
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute row sum; equals the 1-norm by symmetry.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Cholesky factor `A = L L^T` with `L` lower triangular.
#[derive(Clone, Debug)]
pub struct SpdFactorization {
    n: usize,
    /// Row-major; entries above the diagonal are zero.
    l: Vec<f64>,
    smallest_pivot: f64,
}

impl SpdFactorization {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Smallest value `a_jj - sum_k l_jk^2` seen before taking square roots.
    pub fn smallest_pivot(&self) -> f64 {
        self.smallest_pivot
    }

    pub fn lower(&self) -> &[f64] {
        &self.l
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: b.len(),
            });
        }
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            let s: f64 = row.iter().zip(&y[..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - s) / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            y[i] /= self.l[i * n + i];
            let xi = y[i];
            let row = &self.l[i * n..i * n + i];
            for (yk, lik) in y[..i].iter_mut().zip(row) {
                *yk -= lik * xi;
            }
        }
        Ok(y)
    }

    /// Solves `A X = B` column by column with the shared factor.
    pub fn solve_many(&self, rhs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        rhs.iter().map(|b| self.solve(b)).collect()
    }

    /// Solves `A x = b` by iterative refinement with residuals accumulated in
    /// double-double arithmetic, returning `x` as the unevaluated sum
    /// `hi + lo`. Converges whenever `cond(A) * 2^-53` is well below one and
    /// then resolves `x` far beyond working precision. `a` must be the matrix
    /// this factorization came from.
    pub fn solve_refined(&self, a: &SymMatrix, b: &[f64], max_iter: usize) -> Result<Refined> {
        if a.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: a.n,
            });
        }
        let n = self.n;
        let mut hi = self.solve(b)?;
        let mut lo = vec![0.0; n];
        let mut residual = f64::INFINITY;
        let mut iterations = 0;
        while iterations < max_iter {
            let r: Vec<f64> = (0..n)
                .map(|i| {
                    let row = &a.data[i * n..(i + 1) * n];
                    let mut acc = Dd::from(b[i]);
                    for k in 0..n {
                        acc = acc.sub_prod(row[k], hi[k]).sub(row[k] * lo[k]);
                    }
                    acc.value()
                })
                .collect();
            let norm = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if norm == 0.0 || norm > 0.5 * residual {
                residual = residual.min(norm);
                break;
            }
            residual = norm;
            let delta = self.solve(&r)?;
            let scale = hi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let step = delta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for k in 0..n {
                let s = Dd::from(hi[k]).add(lo[k]).add(delta[k]);
                hi[k] = s.hi;
                lo[k] = s.lo;
            }
            iterations += 1;
            if step <= DD_EPSILON * scale {
                break;
            }
        }
        Ok(Refined {
            hi,
            lo,
            residual,
            iterations,
        })
    }

    /// Columns of `A^{-1}`.
    pub fn inverse_columns(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|j| {
                let mut e = vec![0.0; self.n];
                e[j] = 1.0;
                self.solve(&e).expect("order matches")
            })
            .collect()
    }
}

/// Roughly the unit roundoff of double-double arithmetic.
const DD_EPSILON: f64 = 1e-32;

/// Solution of a refined solve, `x = hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Refined {
    pub hi: Vec<f64>,
    pub lo: Vec<f64>,
    /// Infinity norm of the last computed residual `b - A x`.
    pub residual: f64,
    pub iterations: usize,
}

impl Refined {
    /// `sum_k w_k x_k`, accumulated in double-double and rounded once.
    pub fn dot(&self, w: &[f64]) -> f64 {
        let (hi, lo) = self.dot_split(w);
        hi + lo
    }

    /// [`Refined::dot`] without the final rounding.
    pub fn dot_split(&self, w: &[f64]) -> (f64, f64) {
        dd_dot(w, &self.hi, &self.lo)
    }
}

/// `sum_k w_k (hi_k + lo_k)` in double-double, returned as `(hi, lo)`.
pub fn dd_dot(w: &[f64], hi: &[f64], lo: &[f64]) -> (f64, f64) {
    let mut acc = Dd::from(0.0);
    for ((wk, h), l) in w.iter().zip(hi).zip(lo) {
        acc = acc.add_prod(*wk, *h).add(wk * l);
    }
    let v = Dd::normalize(acc.hi, acc.lo);
    (v.hi, v.lo)
}

/// Unevaluated sum `hi + lo` of two doubles.
#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl Dd {
    #[inline]
    fn normalize(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Dd {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    #[inline]
    fn add(self, v: f64) -> Self {
        let (s, e) = two_sum(self.hi, v);
        Dd::normalize(s, e + self.lo)
    }

    #[inline]
    fn sub(self, v: f64) -> Self {
        self.add(-v)
    }

    /// `self + a * b` with the product formed exactly.
    #[inline]
    fn add_prod(self, a: f64, b: f64) -> Self {
        let p = a * b;
        let pe = a.mul_add(b, -p);
        let (s, e) = two_sum(self.hi, p);
        Dd::normalize(s, e + self.lo + pe)
    }

    #[inline]
    fn sub_prod(self, a: f64, b: f64) -> Self {
        self.add_prod(-a, b)
    }

    #[inline]
    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Cholesky factorization. Never regularizes; see [`factor_with_ridge`].
pub fn factor(a: &SymMatrix) -> Result<SpdFactorization> {
    let n = a.n;
    if let Some(k) = a.data.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index: k });
    }
    let mut l = vec![0.0; n * n];
    let mut smallest = f64::INFINITY;
    for i in 0..n {
        for j in 0..=i {
            let (li, lj) = (&l[i * n..i * n + j], &l[j * n..j * n + j]);
            let s = a.data[i * n + j] - li.iter().zip(lj).map(|(x, y)| x * y).sum::<f64>();
            if i == j {
                if !(s > 0.0) || !s.is_finite() {
                    return Err(Error::NotPositiveDefinite {
                        pivot: i + 1,
                        value: s,
                    });
                }
                smallest = smallest.min(s);
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    if n == 0 {
        smallest = 0.0;
    }
    Ok(SpdFactorization {
        n,
        l,
        smallest_pivot: smallest,
    })
}

/// Factors `A + ridge * I`. Zero ridge is plain [`factor`].
pub fn factor_with_ridge(a: &SymMatrix, ridge: f64) -> Result<SpdFactorization> {
    if ridge == 0.0 {
        factor(a)
    } else {
        factor(&a.with_ridge(ridge))
    }
}

/// 1-norm condition number estimate `|A|_1 * est(|A^{-1}|_1)`, using Hager's
/// power iteration with Higham's alternating-sign safeguard. The estimate is a
/// lower bound on the true 1-norm condition number, clamped to at least 1.
pub fn cond_estimate(f: &SpdFactorization, a: &SymMatrix) -> f64 {
    let n = f.n;
    if n == 0 {
        return 1.0;
    }
    let solve = |v: &[f64]| f.solve(v).expect("order matches");
    let norm1 = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();

    let mut x = vec![1.0 / n as f64; n];
    let mut est = 0.0;
    let mut last_j = usize::MAX;
    for iter in 0..5 {
        let y = solve(&x);
        est = norm1(&y);
        let xi: Vec<f64> = y
            .iter()
            .map(|v| if *v >= 0.0 { 1.0 } else { -1.0 })
            .collect();
        let z = solve(&xi);
        let (j, zmax) = z
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bj, bv), (k, v)| {
                if v.abs() > bv {
                    (k, v.abs())
                } else {
                    (bj, bv)
                }
            });
        let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
        if (iter > 0 && zmax <= ztx) || j == last_j {
            break;
        }
        last_j = j;
        x.iter_mut().for_each(|v| *v = 0.0);
        x[j] = 1.0;
    }
    let alt: Vec<f64> = (0..n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let t = if n > 1 {
                i as f64 / (n - 1) as f64
            } else {
                0.0
            };
            sign * (1.0 + t)
        })
        .collect();
    let alt_est = 2.0 * norm1(&solve(&alt)) / (3.0 * n as f64);
    let inv_norm = est.max(alt_est);
    (a.norm_inf() * inv_norm).max(1.0)
}

/// Smallest eigenvalue of `m`, computed by a dense symmetric eigensolver. A
/// positive value certifies strict positive definiteness.
pub fn min_eig_check(m: &SymMatrix) -> f64 {
    if m.n == 0 {
        return f64::INFINITY;
    }
    let mat = nalgebra::DMatrix::from_row_slice(m.n, m.n, &m.data);
    nalgebra::SymmetricEigen::new(mat)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
