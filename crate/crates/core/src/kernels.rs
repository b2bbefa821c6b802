//! Radial kernels, variably scaled kernels, and the rescaled kernel.
//!
//! Every family is written in terms of the scaled radius `t = eps * r`:
//!
//! | tag   | family                 | phi(t)                     |
//! |-------|------------------------|----------------------------|
//! | gauss | Gaussian               | exp(-t^2)                  |
//! | iq    | inverse quadric        | 1 / (1 + t^2)              |
//! | imq   | inverse multiquadric   | 1 / sqrt(1 + t^2)          |
//! | m0    | Matern, C^0            | exp(-t)                    |
//! | m2    | Matern, C^2            | (1 + t) exp(-t)            |
//! | w0    | Wendland, C^0          | (1 - t)_+^2                |
//! | w2    | Wendland, C^2          | (1 - t)_+^4 (4 t + 1)      |
//!
//! The Wendland forms are the `d <= 3` members of their families, so the
//! compactly supported kernels reject ambient dimensions above 3. With shape
//! parameter `eps` their support is the ball of radius `1 / eps`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geometry::{half_sphere_lift, PointSet};
use crate::interpolate::InterpolantModel;
use crate::solver::SymMatrix;
use crate::spatial::squared_distance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    Gaussian,
    InverseQuadric,
    InverseMultiquadric,
    MaternM0,
    MaternM2,
    WendlandW0,
    WendlandW2,
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 7] = [
        KernelFamily::Gaussian,
        KernelFamily::InverseQuadric,
        KernelFamily::InverseMultiquadric,
        KernelFamily::MaternM0,
        KernelFamily::MaternM2,
        KernelFamily::WendlandW0,
        KernelFamily::WendlandW2,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            KernelFamily::Gaussian => "gauss",
            KernelFamily::InverseQuadric => "iq",
            KernelFamily::InverseMultiquadric => "imq",
            KernelFamily::MaternM0 => "m0",
            KernelFamily::MaternM2 => "m2",
            KernelFamily::WendlandW0 => "w0",
            KernelFamily::WendlandW2 => "w2",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::Gaussian => "Gaussian",
            KernelFamily::InverseQuadric => "inverse quadric",
            KernelFamily::InverseMultiquadric => "inverse multiquadric",
            KernelFamily::MaternM0 => "Matern M0",
            KernelFamily::MaternM2 => "Matern M2",
            KernelFamily::WendlandW0 => "Wendland W0",
            KernelFamily::WendlandW2 => "Wendland W2",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            KernelFamily::Gaussian => "exp(-t^2)",
            KernelFamily::InverseQuadric => "(1+t^2)^-1",
            KernelFamily::InverseMultiquadric => "(1+t^2)^-1/2",
            KernelFamily::MaternM0 => "exp(-t)",
            KernelFamily::MaternM2 => "(1+t) exp(-t)",
            KernelFamily::WendlandW0 => "(1-t)_+^2",
            KernelFamily::WendlandW2 => "(1-t)_+^4 (4t+1)",
        }
    }

    pub fn is_compactly_supported(self) -> bool {
        matches!(self, KernelFamily::WendlandW0 | KernelFamily::WendlandW2)
    }

    /// Largest ambient dimension for which the closed form is positive definite.
    pub fn max_dim(self) -> Option<usize> {
        self.is_compactly_supported().then_some(3)
    }

    /// Basic radial function at the scaled radius `t >= 0`.
    pub fn phi(self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(invalid(
                "t",
                format!("scaled radius must be nonnegative, got {t}"),
            ));
        }
        Ok(self.profile(t))
    }

    #[inline]
    pub(crate) fn profile(self, t: f64) -> f64 {
        match self {
            KernelFamily::Gaussian => (-t * t).exp(),
            KernelFamily::InverseQuadric => 1.0 / (1.0 + t * t),
            KernelFamily::InverseMultiquadric => 1.0 / (1.0 + t * t).sqrt(),
            KernelFamily::MaternM0 => (-t).exp(),
            KernelFamily::MaternM2 => (1.0 + t) * (-t).exp(),
            KernelFamily::WendlandW0 => {
                if t >= 1.0 {
                    0.0
                } else {
                    let s = 1.0 - t;
                    s * s
                }
            }
            KernelFamily::WendlandW2 => {
                if t >= 1.0 {
                    0.0
                } else {
                    let s = 1.0 - t;
                    let s2 = s * s;
                    s2 * s2 * (4.0 * t + 1.0)
                }
            }
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for KernelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelFamily::ALL
            .into_iter()
            .find(|k| k.tag().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                invalid(
                    "kernel",
                    format!("unknown kernel `{s}` (expected gauss|iq|imq|m0|m2|w0|w2)"),
                )
            })
    }
}

/// Free-function form of [`KernelFamily::phi`].
pub fn phi(family: KernelFamily, t: f64) -> Result<f64> {
    family.phi(t)
}

/// A radial family with its shape parameter on `R^dim`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    family: KernelFamily,
    epsilon: f64,
    dim: usize,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, epsilon: f64, dim: usize) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(invalid(
                "eps",
                format!("shape parameter must be positive and finite, got {epsilon}"),
            ));
        }
        if dim == 0 {
            return Err(invalid("dim", "must be positive"));
        }
        if let Some(max) = family.max_dim() {
            if dim > max {
                return Err(invalid(
                    "dim",
                    format!(
                        "{} is only implemented for d <= {max}, got d = {dim}",
                        family.name()
                    ),
                ));
            }
        }
        Ok(KernelSpec {
            family,
            epsilon,
            dim,
        })
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `1 / eps` for compactly supported families.
    pub fn support_radius(&self) -> Option<f64> {
        self.family
            .is_compactly_supported()
            .then(|| 1.0 / self.epsilon)
    }

    #[inline]
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.family
            .profile(self.epsilon * squared_distance(x, y).sqrt())
    }
}

/// Scale function `c : R^d -> R` lifting a site `x` to `(x, c(x))`.
#[derive(Clone)]
pub enum ScaleFunction {
    Constant(f64),
    /// `sqrt(1 - x1^2 - x2^2)`; NaN outside the closed unit disk.
    HalfSphere,
    Custom(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

impl fmt::Debug for ScaleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleFunction::Constant(v) => write!(f, "Constant({v})"),
            ScaleFunction::HalfSphere => f.write_str("HalfSphere"),
            ScaleFunction::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl ScaleFunction {
    pub fn custom(c: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ScaleFunction::Custom(Arc::new(c))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            ScaleFunction::Constant(v) => *v,
            ScaleFunction::HalfSphere => half_sphere_lift(x).unwrap_or(f64::NAN),
            ScaleFunction::Custom(c) => c(x),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ScaleFunction::Constant(v) => format!("const:{v}"),
            ScaleFunction::HalfSphere => "half-sphere".to_string(),
            ScaleFunction::Custom(_) => "custom".to_string(),
        }
    }
}

/// A fixed-scale kernel on `R^{d+1}` applied to sites lifted by a scale function.
#[derive(Clone, Debug)]
pub struct VskKernel {
    base: KernelSpec,
    scale: ScaleFunction,
}

impl VskKernel {
    /// `base` lives in the lifted space, so its dimension is the input
    /// dimension plus one.
    pub fn new(base: KernelSpec, scale: ScaleFunction) -> Result<Self> {
        if base.dim() < 2 {
            return Err(invalid(
                "vsk",
                "base kernel must live in at least two dimensions",
            ));
        }
        Ok(VskKernel { base, scale })
    }

    pub fn base(&self) -> &KernelSpec {
        &self.base
    }

    pub fn scale(&self) -> &ScaleFunction {
        &self.scale
    }

    pub fn input_dim(&self) -> usize {
        self.base.dim() - 1
    }

    #[inline]
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let dc = self.scale.eval(x) - self.scale.eval(y);
        let rho = (squared_distance(x, y) + dc * dc).sqrt();
        self.base.family.profile(self.base.epsilon * rho)
    }
}

/// A kernel usable for fitting: plain radial or variably scaled.
#[derive(Clone, Debug)]
pub enum Kernel {
    Radial(KernelSpec),
    Vsk(VskKernel),
}

impl Kernel {
    pub fn radial(family: KernelFamily, epsilon: f64, dim: usize) -> Result<Self> {
        Ok(Kernel::Radial(KernelSpec::new(family, epsilon, dim)?))
    }

    /// VSK over `family` in `R^{dim+1}` with scale function `scale` on `R^dim`.
    pub fn vsk(
        family: KernelFamily,
        epsilon: f64,
        dim: usize,
        scale: ScaleFunction,
    ) -> Result<Self> {
        Ok(Kernel::Vsk(VskKernel::new(
            KernelSpec::new(family, epsilon, dim + 1)?,
            scale,
        )?))
    }

    pub fn spec(&self) -> &KernelSpec {
        match self {
            Kernel::Radial(k) => k,
            Kernel::Vsk(k) => &k.base,
        }
    }

    pub fn family(&self) -> KernelFamily {
        self.spec().family
    }

    pub fn epsilon(&self) -> f64 {
        self.spec().epsilon
    }

    /// Dimension of the sites the kernel is evaluated on.
    pub fn dim(&self) -> usize {
        match self {
            Kernel::Radial(k) => k.dim,
            Kernel::Vsk(k) => k.input_dim(),
        }
    }

    /// Distance in input space beyond which the kernel vanishes. Lifting never
    /// shortens distances, so this holds for VSK as well.
    pub fn support_radius(&self) -> Option<f64> {
        self.spec().support_radius()
    }

    /// Same kernel with another shape parameter.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        let spec = KernelSpec::new(self.family(), epsilon, self.spec().dim)?;
        Ok(match self {
            Kernel::Radial(_) => Kernel::Radial(spec),
            Kernel::Vsk(v) => Kernel::Vsk(VskKernel::new(spec, v.scale.clone())?),
        })
    }

    pub fn label(&self) -> String {
        match self {
            Kernel::Radial(k) => k.family.tag().to_string(),
            Kernel::Vsk(v) => format!("{}+vsk({})", v.base.family.tag(), v.scale.label()),
        }
    }

    #[inline]
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Kernel::Radial(k) => k.eval(x, y),
            Kernel::Vsk(k) => k.eval(x, y),
        }
    }

    /// `[K(x, c_1), ..., K(x, c_N)]` over the centers.
    pub fn row(&self, x: &[f64], centers: &PointSet) -> Vec<f64> {
        centers.iter().map(|c| self.eval(x, c)).collect()
    }
}

impl From<KernelSpec> for Kernel {
    fn from(k: KernelSpec) -> Self {
        Kernel::Radial(k)
    }
}

impl From<VskKernel> for Kernel {
    fn from(k: VskKernel) -> Self {
        Kernel::Vsk(k)
    }
}

/// `K_r(x, y) = K(x, y) / (P_g(x) P_g(y))` where `P_g` interpolates the
/// constant one at the centers of `denom`.
#[derive(Clone, Debug)]
pub struct RescaledKernel {
    denom: InterpolantModel,
    vanish_tol: f64,
}

impl RescaledKernel {
    pub fn new(denom: InterpolantModel, vanish_tol: f64) -> Self {
        RescaledKernel { denom, vanish_tol }
    }

    pub fn base(&self) -> &Kernel {
        self.denom.kernel()
    }

    pub fn denominator_model(&self) -> &InterpolantModel {
        &self.denom
    }

    pub fn vanish_tol(&self) -> f64 {
        self.vanish_tol
    }

    fn scale(&self, x: &[f64]) -> Result<f64> {
        let pg = self.denom.eval(x);
        if !(pg.abs() > self.vanish_tol) {
            return Err(Error::DenominatorVanished {
                point: x.to_vec(),
                value: pg,
            });
        }
        Ok(pg)
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let px = self.scale(x)?;
        let py = self.scale(y)?;
        Ok(self.base().eval(x, y) / (px * py))
    }
}

/// Anything that can be evaluated as `K(x, y)`.
pub trait KernelFn {
    fn input_dim(&self) -> usize;
    fn try_eval(&self, x: &[f64], y: &[f64]) -> Result<f64>;
}

impl KernelFn for KernelSpec {
    fn input_dim(&self) -> usize {
        self.dim
    }
    fn try_eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        Ok(self.eval(x, y))
    }
}

impl KernelFn for VskKernel {
    fn input_dim(&self) -> usize {
        VskKernel::input_dim(self)
    }
    fn try_eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        Ok(self.eval(x, y))
    }
}

impl KernelFn for Kernel {
    fn input_dim(&self) -> usize {
        self.dim()
    }
    fn try_eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        Ok(self.eval(x, y))
    }
}

impl KernelFn for RescaledKernel {
    fn input_dim(&self) -> usize {
        self.base().dim()
    }
    fn try_eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.eval(x, y)
    }
}

/// `K(x, y)` with dimension checks.
pub fn kernel_eval<K: KernelFn + ?Sized>(k: &K, x: &[f64], y: &[f64]) -> Result<f64> {
    let d = k.input_dim();
    for p in [x, y] {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
    }
    k.try_eval(x, y)
}

/// Gram matrix `A_ij = K(x_i, x_j)`; rows are assembled in parallel.
pub fn gram<K: KernelFn + Sync + ?Sized>(k: &K, points: &PointSet) -> Result<SymMatrix> {
    if points.dim() != k.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: k.input_dim(),
            got: points.dim(),
        });
    }
    let n = points.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .with_min_len(32)
        .map(|i| {
            let xi = points.point(i);
            (0..=i)
                .map(|j| k.try_eval(xi, points.point(j)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(SymMatrix::from_fn(n, |i, j| rows[i][j]))
}
