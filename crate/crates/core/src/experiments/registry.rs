use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::geometry::{
    fibonacci_hemisphere_projection, grid, halton_in, restrict, Domain, PointSet, CARDIOID_SCALE,
};
use crate::kernels::{KernelFamily, ScaleFunction};
use crate::pum::DEFAULT_OVERLAP;

use super::functions::TestFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Standard,
    Rescaled,
    Pum,
    Rpum,
    Vsk,
    VskRescaled,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Standard,
        Method::Rescaled,
        Method::Pum,
        Method::Rpum,
        Method::Vsk,
        Method::VskRescaled,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Standard => "standard",
            Method::Rescaled => "rescaled",
            Method::Pum => "pum",
            Method::Rpum => "rpum",
            Method::Vsk => "vsk",
            Method::VskRescaled => "vsk+rescaled",
        }
    }

    pub fn is_rescaled(self) -> bool {
        matches!(self, Method::Rescaled | Method::Rpum | Method::VskRescaled)
    }

    pub fn is_pum(self) -> bool {
        matches!(self, Method::Pum | Method::Rpum)
    }

    pub fn is_vsk(self) -> bool {
        matches!(self, Method::Vsk | Method::VskRescaled)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| invalid("method", format!("unknown method `{s}`")))
    }
}

/// How the data sites of a case are generated.
#[derive(Clone, Debug)]
pub enum NodeSpec {
    Grid {
        resolution: Vec<usize>,
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    /// First `n` Halton points of the domain's bounding box that lie inside it.
    HaltonIn {
        domain: Domain,
        n: usize,
    },
    FibonacciHemisphere {
        n: usize,
    },
    Explicit {
        dim: usize,
        coords: Vec<f64>,
        domain: Domain,
    },
}

impl NodeSpec {
    pub fn build(&self) -> Result<PointSet> {
        match self {
            NodeSpec::Grid { resolution, lo, hi } => grid(resolution, lo, hi),
            NodeSpec::HaltonIn { domain, n } => halton_in(domain, *n, 1000 * n + 1000),
            NodeSpec::FibonacciHemisphere { n } => fibonacci_hemisphere_projection(*n),
            NodeSpec::Explicit {
                dim,
                coords,
                domain,
            } => PointSet::new(*dim, coords.clone(), domain.clone()),
        }
    }
}

/// Tensor grid on a box, optionally restricted to a subdomain.
#[derive(Clone, Debug)]
pub struct EvalSpec {
    pub resolution: Vec<usize>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub restrict_to: Option<Domain>,
}

impl EvalSpec {
    pub fn square(n: usize, lo: f64, hi: f64) -> Self {
        EvalSpec {
            resolution: vec![n, n],
            lo: vec![lo, lo],
            hi: vec![hi, hi],
            restrict_to: None,
        }
    }

    pub fn line(n: usize, lo: f64, hi: f64) -> Self {
        EvalSpec {
            resolution: vec![n],
            lo: vec![lo],
            hi: vec![hi],
            restrict_to: None,
        }
    }

    pub fn within(mut self, domain: Domain) -> Self {
        self.restrict_to = Some(domain);
        self
    }

    pub fn build(&self) -> Result<PointSet> {
        let g = grid(&self.resolution, &self.lo, &self.hi)?;
        match &self.restrict_to {
            Some(d) => restrict(&g, d),
            None => Ok(g),
        }
    }
}

/// One node set with its evaluation grid.
#[derive(Clone, Debug)]
pub struct Case {
    pub nodes: NodeSpec,
    pub eval: EvalSpec,
    /// Cover resolution for the PUM methods.
    pub patches_per_axis: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub name: String,
    pub summary: String,
    pub family: KernelFamily,
    pub eps: Vec<f64>,
    pub cases: Vec<Case>,
    pub function: TestFunction,
    pub methods: Vec<Method>,
    /// Fill the Lebesgue-constant columns for the global methods.
    pub lebesgue: bool,
    pub overlap: f64,
    pub scale: ScaleFunction,
}

impl ExperimentSpec {
    pub fn n_rows(&self) -> usize {
        self.cases.len() * self.methods.len() * self.eps.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps.is_empty() {
            return Err(invalid("eps", "empty sweep"));
        }
        if let Some(e) = self.eps.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
            return Err(invalid(
                "eps",
                format!("must be positive and finite, got {e}"),
            ));
        }
        if self.methods.is_empty() {
            return Err(invalid("method", "no methods"));
        }
        if self.cases.is_empty() {
            return Err(invalid("nodes", "no cases"));
        }
        for case in &self.cases {
            if self.methods.iter().any(|m| m.is_pum()) && case.patches_per_axis.is_none() {
                return Err(invalid("patches", "PUM methods need a cover resolution"));
            }
        }
        Ok(())
    }
}

/// `n` values from `lo` to `hi` inclusive, evenly spaced.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `n` values from `lo` to `hi` inclusive, evenly spaced in log scale.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut v: Vec<f64> = linspace(a, b, n).into_iter().map(f64::exp).collect();
    if let Some(first) = v.first_mut() {
        *first = lo;
    }
    if n > 1 {
        v[n - 1] = hi;
    }
    v
}

/// Patches per axis used for an `n`-point cover of a square-like domain.
pub fn default_patches_per_axis(n: usize) -> usize {
    (((n as f64).sqrt() / 2.0).floor() as usize).max(1)
}

pub const REGISTRY_NAMES: [&str; 10] = [
    "fig2-line",
    "fig2-line-caption",
    "fig2-franke",
    "leb-gauss",
    "leb-wendland",
    "leb-square",
    "leb-cardioid",
    "pu-vs-rpu-disk",
    "table444",
    "vsk-halfsphere",
];

/// Names of registry entries whose rows carry Lebesgue constants.
pub const LEBESGUE_RUNS: [&str; 4] = ["leb-gauss", "leb-wendland", "leb-square", "leb-cardioid"];

fn unit_square_grid(n: usize) -> NodeSpec {
    NodeSpec::Grid {
        resolution: vec![n, n],
        lo: vec![0.0, 0.0],
        hi: vec![1.0, 1.0],
    }
}

fn line_nodes(points: &[f64], lo: f64, hi: f64) -> NodeSpec {
    NodeSpec::Explicit {
        dim: 1,
        coords: points.to_vec(),
        domain: Domain::Interval { a: lo, b: hi },
    }
}

fn global(nodes: NodeSpec, eval: EvalSpec) -> Case {
    Case {
        nodes,
        eval,
        patches_per_axis: None,
    }
}

fn base(name: &str, summary: &str, family: KernelFamily, function: TestFunction) -> ExperimentSpec {
    ExperimentSpec {
        name: name.to_string(),
        summary: summary.to_string(),
        family,
        eps: Vec::new(),
        cases: Vec::new(),
        function,
        methods: vec![Method::Standard, Method::Rescaled],
        lebesgue: false,
        overlap: DEFAULT_OVERLAP,
        scale: ScaleFunction::HalfSphere,
    }
}

/// The named experiment, or an error listing the available names.
pub fn lookup(name: &str) -> Result<ExperimentSpec> {
    let w2 = KernelFamily::WendlandW2;
    let spec =
        match name {
            "fig2-line" => ExperimentSpec {
                eps: vec![5.0],
                cases: vec![
                    global(
                        line_nodes(&[1.0 / 6.0, 0.5, 5.0 / 6.0], 0.0, 1.0),
                        EvalSpec::line(1000, 0.0, 1.0),
                    ),
                    global(
                        line_nodes(
                            &[0.0, 1.0 / 6.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 5.0 / 6.0, 1.0],
                            0.0,
                            1.0,
                        ),
                        EvalSpec::line(1000, 0.0, 1.0),
                    ),
                ],
                lebesgue: true,
                ..base(
                    "fig2-line",
                    "f(x)=x on three and seven nodes of [0,1], W2",
                    w2,
                    TestFunction::Identity1d,
                )
            },
            "fig2-line-caption" => ExperimentSpec {
                eps: vec![5.0],
                cases: vec![global(
                    line_nodes(&[1.0 / 3.0, 2.0 / 3.0, 5.0 / 6.0], 0.0, 1.0),
                    EvalSpec::line(1000, 0.0, 1.0),
                )],
                lebesgue: true,
                ..base(
                    "fig2-line-caption",
                    "f(x)=x on the nodes {1/3,2/3,5/6}, W2",
                    w2,
                    TestFunction::Identity1d,
                )
            },
            "fig2-franke" => ExperimentSpec {
                eps: logspace(0.5, 8.0, 30),
                cases: vec![global(unit_square_grid(5), EvalSpec::square(40, 0.0, 1.0))],
                lebesgue: true,
                ..base(
                    "fig2-franke",
                    "Franke on the 5x5 grid of [0,1]^2, W2, 30 log-spaced eps",
                    w2,
                    TestFunction::Franke2d { classic: false },
                )
            },
            "leb-gauss" | "leb-wendland" => {
                let (family, eps) = if name == "leb-gauss" {
                    (KernelFamily::Gaussian, vec![0.5, 1.0, 4.0, 8.0])
                } else {
                    (w2, vec![0.5, 1.0, 2.0, 4.0])
                };
                ExperimentSpec {
                    eps,
                    cases: vec![global(
                        line_nodes(&linspace(-1.0, 1.0, 10), -1.0, 1.0),
                        EvalSpec::line(1000, -1.0, 1.0),
                    )],
                    lebesgue: true,
                    ..base(
                        name,
                        "Lebesgue functions on 10 equispaced nodes of [-1,1]",
                        family,
                        TestFunction::Identity1d,
                    )
                }
            }
            "leb-square" => ExperimentSpec {
                eps: vec![3.85],
                cases: vec![global(
                    NodeSpec::Grid {
                        resolution: vec![5, 5],
                        lo: vec![-1.0, -1.0],
                        hi: vec![1.0, 1.0],
                    },
                    EvalSpec::square(101, -1.0, 1.0),
                )],
                lebesgue: true,
                ..base(
                    "leb-square",
                    "Lebesgue functions on the 5x5 grid of [-1,1]^2, W2",
                    w2,
                    TestFunction::Franke2d { classic: false },
                )
            },
            "leb-cardioid" => {
                let cardioid = Domain::cardioid(CARDIOID_SCALE)?;
                ExperimentSpec {
                    eps: vec![3.0],
                    cases: vec![global(
                        NodeSpec::HaltonIn {
                            domain: cardioid.clone(),
                            n: 60,
                        },
                        EvalSpec::square(101, -1.0, 1.0).within(cardioid),
                    )],
                    lebesgue: true,
                    ..base(
                        "leb-cardioid",
                        "Lebesgue functions on 60 Halton nodes of the cardioid, W2",
                        w2,
                        TestFunction::Franke2d { classic: false },
                    )
                }
            }
            "pu-vs-rpu-disk" => {
                let disk = Domain::disk(vec![0.5, 0.5], 0.5)?;
                ExperimentSpec {
                    eps: linspace(0.01, 2.0, 30),
                    cases: vec![Case {
                        nodes: NodeSpec::HaltonIn {
                            domain: disk.clone(),
                            n: 1000,
                        },
                        eval: EvalSpec::square(100, 0.0, 1.0).within(disk),
                        patches_per_axis: Some(default_patches_per_axis(1000)),
                    }],
                    methods: vec![Method::Pum, Method::Rpum],
                    ..base(
                        "pu-vs-rpu-disk",
                        "Ackley on 1000 Halton nodes of a disk, PUM vs rescaled PUM, W2",
                        w2,
                        TestFunction::Ackley2d { classic: false },
                    )
                }
            }
            "table444" => ExperimentSpec {
                eps: vec![5.0],
                cases: [(17, 40), (32, 50), (50, 80)]
                    .into_iter()
                    .map(|(n, m)| Case {
                        nodes: unit_square_grid(n),
                        eval: EvalSpec::square(m, 0.0, 1.0),
                        patches_per_axis: Some(default_patches_per_axis(n * n)),
                    })
                    .collect(),
                methods: vec![Method::Pum, Method::Rpum],
                ..base(
                    "table444",
                    "(x1^2+x2^2-1)^9 on grids of [0,1]^2, PUM vs rescaled PUM, W2",
                    w2,
                    TestFunction::Poly9,
                )
            },
            "vsk-halfsphere" => {
                let disk = Domain::disk(vec![0.0, 0.0], 1.0)?;
                ExperimentSpec {
                eps: linspace(0.1, 5.0, 20),
                cases: vec![global(
                    NodeSpec::FibonacciHemisphere { n: 200 },
                    EvalSpec::square(100, -1.0, 1.0).within(disk),
                )],
                methods: vec![Method::Standard, Method::Rescaled, Method::Vsk, Method::VskRescaled],
                ..base(
                    "vsk-halfsphere",
                    "Franke on 200 hemisphere nodes projected to the disk, with and without VSK",
                    w2,
                    TestFunction::Franke2d { classic: false },
                )
            }
            }
            _ => {
                return Err(invalid(
                    "experiment",
                    format!(
                        "unknown experiment `{name}`; available: {}",
                        REGISTRY_NAMES.join(", ")
                    ),
                ))
            }
        };
    Ok(spec)
}

pub fn registry() -> Vec<ExperimentSpec> {
    REGISTRY_NAMES
        .iter()
        .map(|n| lookup(n).expect("registry entry"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_valid_and_unique() {
        let specs = registry();
        for s in &specs {
            s.validate().unwrap();
            for c in &s.cases {
                let x = c.nodes.build().unwrap();
                let e = c.eval.build().unwrap();
                assert!(!x.is_empty() && !e.is_empty(), "{}", s.name);
                if let Some(d) = s.function.dim() {
                    assert_eq!(x.dim(), d, "{}", s.name);
                }
            }
        }
        let mut names: Vec<_> = specs.iter().map(|s| s.name.clone()).collect();
        names.dedup();
        assert_eq!(names.len(), REGISTRY_NAMES.len());
    }

    #[test]
    fn row_counts() {
        assert_eq!(lookup("fig2-franke").unwrap().n_rows(), 60);
        assert_eq!(lookup("table444").unwrap().n_rows(), 6);
        assert_eq!(lookup("vsk-halfsphere").unwrap().n_rows(), 80);
        assert_eq!(lookup("pu-vs-rpu-disk").unwrap().n_rows(), 60);
        assert!(lookup("nosuch").is_err());
    }

    #[test]
    fn sweeps_hit_endpoints() {
        let l = linspace(0.1, 5.0, 20);
        assert_eq!((l[0], l[19]), (0.1, 5.0));
        let g = logspace(0.5, 8.0, 30);
        assert_eq!((g[0], g[29]), (0.5, 8.0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!((g[1] / g[0] - g[2] / g[1]).abs() < 1e-12);
    }

    #[test]
    fn table444_eval_sizes() {
        let s = lookup("table444").unwrap();
        let sizes: Vec<(usize, usize)> = s
            .cases
            .iter()
            .map(|c| {
                (
                    c.nodes.build().unwrap().len(),
                    c.eval.build().unwrap().len(),
                )
            })
            .collect();
        assert_eq!(sizes, vec![(289, 1600), (1024, 2500), (2500, 6400)]);
    }

    #[test]
    fn method_tags_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.tag().parse::<Method>().unwrap(), m);
        }
    }
}
