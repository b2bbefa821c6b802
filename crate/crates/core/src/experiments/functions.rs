use std::f64::consts::{E, PI};
use std::fmt;

/// Target functions sampled by the registry experiments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFunction {
    /// `f(x) = x_1`.
    Identity1d,
    /// Franke's function. The default keeps the linear `(9y+1)/10` term of the
    /// second exponential; `classic` squares it.
    Franke2d {
        classic: bool,
    },
    /// Ackley's function. The default has `-0.5 (cos 2pi x + cos 2pi y)` in the
    /// second exponential; `classic` flips the sign so that `f(0,0) = 0`.
    Ackley2d {
        classic: bool,
    },
    /// `(x_1^2 + x_2^2 - 1)^9`.
    Poly9,
    Constant(f64),
}

impl TestFunction {
    pub fn tag(&self) -> &'static str {
        match self {
            TestFunction::Identity1d => "identity1d",
            TestFunction::Franke2d { .. } => "franke2d",
            TestFunction::Ackley2d { .. } => "ackley2d",
            TestFunction::Poly9 => "poly9_2d",
            TestFunction::Constant(_) => "constant",
        }
    }

    /// Number of coordinates read; `None` for functions of any dimension.
    pub fn dim(&self) -> Option<usize> {
        match self {
            TestFunction::Identity1d => Some(1),
            TestFunction::Constant(_) => None,
            _ => Some(2),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            TestFunction::Identity1d => x[0],
            TestFunction::Franke2d { classic } => {
                if classic {
                    franke2d_classic(x[0], x[1])
                } else {
                    franke2d(x[0], x[1])
                }
            }
            TestFunction::Ackley2d { classic } => {
                if classic {
                    ackley2d_classic(x[0], x[1])
                } else {
                    ackley2d(x[0], x[1])
                }
            }
            TestFunction::Poly9 => poly9_2d(x[0], x[1]),
            TestFunction::Constant(a) => a,
        }
    }

    pub fn sample(&self, points: &crate::geometry::PointSet) -> Vec<f64> {
        points.iter().map(|p| self.eval(p)).collect()
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Franke2d { classic: true } | TestFunction::Ackley2d { classic: true } => {
                write!(f, "{}(classic)", self.tag())
            }
            TestFunction::Constant(a) => write!(f, "constant({a})"),
            _ => f.write_str(self.tag()),
        }
    }
}

fn franke_terms(x: f64, y: f64, second_y: f64) -> f64 {
    let (u, v) = (9.0 * x, 9.0 * y);
    0.75 * (-0.25 * ((u - 2.0).powi(2) + (v - 2.0).powi(2))).exp()
        + 0.75 * (-(u + 1.0).powi(2) / 49.0 - second_y / 10.0).exp()
        + 0.5 * (-0.25 * ((u - 7.0).powi(2) + (v - 3.0).powi(2))).exp()
        - 0.2 * (-(u - 4.0).powi(2) - (v - 7.0).powi(2)).exp()
}

pub fn franke2d(x: f64, y: f64) -> f64 {
    franke_terms(x, y, 9.0 * y + 1.0)
}

pub fn franke2d_classic(x: f64, y: f64) -> f64 {
    franke_terms(x, y, (9.0 * y + 1.0).powi(2))
}

fn ackley_first(x: f64, y: f64) -> f64 {
    -20.0 * (-0.2 * (0.5 * (x * x + y * y)).sqrt()).exp()
}

pub fn ackley2d(x: f64, y: f64) -> f64 {
    ackley_first(x, y) - (-0.5 * ((2.0 * PI * x).cos() + (2.0 * PI * y).cos())).exp() + 20.0 + E
}

pub fn ackley2d_classic(x: f64, y: f64) -> f64 {
    ackley_first(x, y) - (0.5 * ((2.0 * PI * x).cos() + (2.0 * PI * y).cos())).exp() + 20.0 + E
}

pub fn poly9_2d(x1: f64, x2: f64) -> f64 {
    (x1 * x1 + x2 * x2 - 1.0).powi(9)
}
