//! Point sets, domains, and point generators.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::spatial::{distance, GridIndex};

/// Two sites closer than this are considered coincident.
pub const DISTINCT_TOL: f64 = 1e-12;

/// Slack allowed on domain boundaries so that points generated exactly on a
/// boundary survive rounding.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Scale of the cardioid fitted into `[-1, 1]^2`.
pub const CARDIOID_SCALE: f64 = 0.5;

type Mask = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Region `Omega` that a point set is drawn from.
#[derive(Clone)]
pub enum Domain {
    Interval {
        a: f64,
        b: f64,
    },
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    /// Closed Euclidean ball; a disk in two dimensions.
    Disk {
        center: Vec<f64>,
        radius: f64,
    },
    /// Polar cardioid `r <= s (1 - cos theta)` about the origin, cusp at the
    /// origin, extending to `x = -2 s`.
    Cardioid {
        scale: f64,
    },
    Custom {
        dim: usize,
        mask: Mask,
        bounds: Option<(Vec<f64>, Vec<f64>)>,
    },
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Interval { a, b } => write!(f, "Interval({a}, {b})"),
            Domain::Box { lo, hi } => write!(f, "Box({lo:?}, {hi:?})"),
            Domain::Disk { center, radius } => write!(f, "Disk({center:?}, {radius})"),
            Domain::Cardioid { scale } => write!(f, "Cardioid({scale})"),
            Domain::Custom { dim, bounds, .. } => write!(f, "Custom(dim={dim}, bounds={bounds:?})"),
        }
    }
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(invalid(
                "interval",
                format!("requires a < b, got [{a}, {b}]"),
            ));
        }
        Ok(Domain::Interval { a, b })
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(invalid(
                "box",
                "lo and hi must be nonempty and of equal length",
            ));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l <= h)) {
            return Err(invalid("box", "requires lo <= hi on every axis"));
        }
        Ok(Domain::Box { lo, hi })
    }

    /// The box `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::boxed(vec![lo; dim], vec![hi; dim])
    }

    pub fn disk(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(invalid("disk", "center must be nonempty"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(invalid(
                "disk",
                format!("radius must be positive, got {radius}"),
            ));
        }
        Ok(Domain::Disk { center, radius })
    }

    pub fn cardioid(scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(invalid("cardioid", "scale must be positive"));
        }
        Ok(Domain::Cardioid { scale })
    }

    pub fn custom(
        dim: usize,
        bounds: Option<(Vec<f64>, Vec<f64>)>,
        mask: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Domain::Custom {
            dim,
            mask: Arc::new(mask),
            bounds,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            Domain::Box { lo, .. } => lo.len(),
            Domain::Disk { center, .. } => center.len(),
            Domain::Cardioid { .. } => 2,
            Domain::Custom { dim, .. } => *dim,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let tol = MEMBERSHIP_TOL;
        match self {
            Domain::Interval { a, b } => x[0] >= a - tol && x[0] <= b + tol,
            Domain::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| *v >= l - tol && *v <= h + tol),
            Domain::Disk { center, radius } => distance(x, center) <= radius + tol,
            Domain::Cardioid { scale } => {
                // r <= s (1 - x / r)  <=>  r^2 + s x <= s r
                let r = x[0].hypot(x[1]);
                r * r + scale * x[0] <= scale * r + tol
            }
            Domain::Custom { mask, .. } => mask(x),
        }
    }

    /// Axis-aligned bounding box, when the domain knows one.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Domain::Interval { a, b } => Some((vec![*a], vec![*b])),
            Domain::Box { lo, hi } => Some((lo.clone(), hi.clone())),
            Domain::Disk { center, radius } => Some((
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            )),
            Domain::Cardioid { scale } => {
                // x ranges over [-2s, s/4], |y| <= (3 sqrt 3 / 4) s
                let ymax = 0.75 * 3f64.sqrt() * scale;
                Some((vec![-2.0 * scale, -ymax], vec![0.25 * scale, ymax]))
            }
            Domain::Custom { bounds, .. } => bounds.clone(),
        }
    }
}

/// Ordered, pairwise-distinct sites of a common dimension, stored row-wise.
#[derive(Clone, Debug)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    domain: Domain,
}

impl PointSet {
    /// Validates finiteness, domain membership, and pairwise distinctness.
    pub fn new(dim: usize, coords: Vec<f64>, domain: Domain) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "must be positive"));
        }
        if coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: coords.len() % dim,
            });
        }
        if domain.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: domain.dim(),
            });
        }
        if let Some(k) = coords.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: k / dim });
        }
        let set = PointSet {
            dim,
            coords,
            domain,
        };
        if let Some(i) = set.iter().position(|p| !set.domain.contains(p)) {
            return Err(Error::OutsideDomain { index: i });
        }
        set.check_distinct()?;
        Ok(set)
    }

    pub fn from_rows(rows: &[Vec<f64>], domain: Domain) -> Result<Self> {
        let dim = domain.dim();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: r.len(),
            });
        }
        Self::new(dim, rows.concat(), domain)
    }

    /// Point set whose domain is the bounding box of its own sites.
    pub fn with_hull(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::EmptyPointSet);
        }
        let (lo, hi) = bounds_of(dim, &coords);
        Self::new(dim, coords, Domain::boxed(lo, hi)?)
    }

    fn check_distinct(&self) -> Result<()> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| self.point(i)[0].total_cmp(&self.point(j)[0]));
        for (a, &i) in order.iter().enumerate() {
            let pi = self.point(i);
            for &j in &order[a + 1..] {
                let pj = self.point(j);
                if pj[0] - pi[0] > DISTINCT_TOL {
                    break;
                }
                let d = distance(pi, pj);
                if d <= DISTINCT_TOL {
                    return Err(Error::CoincidentPoints {
                        first: i.min(j),
                        second: i.max(j),
                        distance: d,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    /// Subset by index, keeping the domain. Indices must be distinct.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointSet {
            dim: self.dim,
            coords,
            domain: self.domain.clone(),
        }
    }

    /// Bounding box of the sites themselves.
    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        bounds_of(self.dim, &self.coords)
    }

    /// Smallest pairwise distance (infinite for fewer than two points).
    pub fn separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                best = best.min(distance(self.point(i), self.point(j)));
            }
        }
        best
    }
}

fn bounds_of(dim: usize, coords: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in coords.chunks_exact(dim) {
        for a in 0..dim {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    (lo, hi)
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| candidate % p != 0)
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    r
}

/// The first `n` Halton points in `(0,1)^dim`, starting at index 1.
pub fn halton(n: usize, dim: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    let bases = first_primes(dim);
    let mut coords = Vec::with_capacity(n * dim);
    for i in 1..=n as u64 {
        coords.extend(bases.iter().map(|&b| radical_inverse(i, b)));
    }
    PointSet::new(dim, coords, Domain::cube(dim, 0.0, 1.0)?)
}

/// The first `n` Halton points (index from 1) that fall inside `domain`, with
/// `domain` as the resulting point set's domain. Gives up after `max_tries`
/// sequence indices.
pub fn halton_in(domain: &Domain, n: usize, max_tries: usize) -> Result<PointSet> {
    let dim = domain.dim();
    let (lo, hi) = domain
        .bounding_box()
        .ok_or_else(|| invalid("domain", "needs a bounding box"))?;
    let bases = first_primes(dim);
    let mut coords = Vec::with_capacity(n * dim);
    let mut p = vec![0.0; dim];
    let mut index = 0u64;
    while coords.len() < n * dim {
        index += 1;
        if index as usize > max_tries {
            return Err(invalid(
                "n",
                format!("only {} of {n} Halton points fit", coords.len() / dim),
            ));
        }
        for a in 0..dim {
            p[a] = lo[a] + (hi[a] - lo[a]) * radical_inverse(index, bases[a]);
        }
        if domain.contains(&p) {
            coords.extend_from_slice(&p);
        }
    }
    PointSet::new(dim, coords, domain.clone())
}

/// Tensor-product grid including the box corners; the first axis varies
/// fastest.
pub fn grid(resolution: &[usize], lo: &[f64], hi: &[f64]) -> Result<PointSet> {
    let dim = resolution.len();
    if dim == 0 || lo.len() != dim || hi.len() != dim {
        return Err(invalid(
            "box",
            "resolution, lo and hi must have the same nonzero length",
        ));
    }
    if resolution.iter().any(|&r| r < 2) {
        return Err(invalid("resolution", "at least 2 points per axis"));
    }
    if lo.iter().zip(hi).any(|(l, h)| !(l < h)) {
        return Err(invalid("box", "degenerate box (lo >= hi on an axis)"));
    }
    let axes: Vec<Vec<f64>> = (0..dim)
        .map(|a| {
            let n = resolution[a];
            (0..n)
                .map(|i| {
                    if i + 1 == n {
                        hi[a]
                    } else {
                        lo[a] + (hi[a] - lo[a]) * i as f64 / (n - 1) as f64
                    }
                })
                .collect()
        })
        .collect();
    let total: usize = resolution.iter().product();
    let mut coords = Vec::with_capacity(total * dim);
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        coords.extend((0..dim).map(|a| axes[a][idx[a]]));
        for a in 0..dim {
            idx[a] += 1;
            if idx[a] < resolution[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    PointSet::new(dim, coords, Domain::boxed(lo.to_vec(), hi.to_vec())?)
}

/// Points of `points` inside `domain`, in their original order.
pub fn restrict(points: &PointSet, domain: &Domain) -> Result<PointSet> {
    if domain.dim() != points.dim() {
        return Err(Error::DimensionMismatch {
            expected: points.dim(),
            got: domain.dim(),
        });
    }
    let mut coords = Vec::new();
    for p in points.iter() {
        if domain.contains(p) {
            coords.extend_from_slice(p);
        }
    }
    Ok(PointSet {
        dim: points.dim(),
        coords,
        domain: domain.clone(),
    })
}

/// Discrete fill distance `max_{y in probe} min_{x in sites} |y - x|`.
pub fn fill_distance(sites: &PointSet, probe: &PointSet) -> Result<f64> {
    if sites.is_empty() || probe.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if sites.dim() != probe.dim() {
        return Err(Error::DimensionMismatch {
            expected: sites.dim(),
            got: probe.dim(),
        });
    }
    let (lo, hi) = sites.bounds();
    let dim = sites.dim();
    let volume: f64 = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| (h - l).max(f64::EPSILON))
        .product();
    let mut cell = (volume / sites.len() as f64).powf(1.0 / dim as f64);
    if !(cell > 0.0) || !cell.is_finite() {
        cell = 1.0;
    }
    let index = GridIndex::new(sites.coords(), dim, cell);
    Ok(probe
        .iter()
        .map(|y| index.nearest(y).map_or(f64::INFINITY, |(_, d)| d))
        .fold(0.0, f64::max))
}

/// Height of the unit upper hemisphere above `x`, `sqrt(1 - x1^2 - x2^2)`.
pub fn half_sphere_lift(x: &[f64]) -> Result<f64> {
    if x.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: x.len(),
        });
    }
    let s = 1.0 - x[0] * x[0] - x[1] * x[1];
    if s < -MEMBERSHIP_TOL {
        return Err(Error::OutsideDomain { index: 0 });
    }
    Ok(s.max(0.0).sqrt())
}

/// `n` near-uniform points on the unit upper hemisphere (Fibonacci lattice,
/// equal-area heights), projected onto the unit disk.
pub fn fibonacci_hemisphere_projection(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut coords = Vec::with_capacity(2 * n);
    for i in 0..n {
        let z = (i as f64 + 0.5) / n as f64;
        let r = (1.0 - z * z).sqrt();
        let theta = golden * i as f64;
        coords.push(r * theta.cos());
        coords.push(r * theta.sin());
    }
    PointSet::new(2, coords, Domain::disk(vec![0.0, 0.0], 1.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_fill(sites: &PointSet, probe: &PointSet) -> f64 {
        probe
            .iter()
            .map(|y| {
                sites
                    .iter()
                    .map(|x| distance(x, y))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn halton_first_values() {
        let h = halton(3, 1).unwrap();
        assert_eq!(h.coords(), &[0.5, 0.25, 0.75]);
        let h = halton(1, 2).unwrap();
        assert_eq!(h.coords(), &[0.5, 1.0 / 3.0]);
    }

    #[test]
    fn halton_prefix_stable() {
        let a = halton(50, 3).unwrap();
        let b = halton(200, 3).unwrap();
        assert_eq!(a.coords(), &b.coords()[..150]);
        assert!(b.coords().iter().all(|&v| v > 0.0 && v < 1.0));
    }

    #[test]
    fn halton_disk_filter_matches_brute_force() {
        let h = halton(1000, 2).unwrap();
        let disk = Domain::disk(vec![0.5, 0.5], 0.5).unwrap();
        let kept = restrict(&h, &disk).unwrap();
        let expected = h
            .iter()
            .filter(|p| {
                ((p[0] - 0.5).powi(2) + (p[1] - 0.5).powi(2)).sqrt() <= 0.5 + MEMBERSHIP_TOL
            })
            .count();
        assert_eq!(kept.len(), expected);
        assert!(kept
            .iter()
            .all(|p| distance(p, &[0.5, 0.5]) <= 0.5 + MEMBERSHIP_TOL));
    }

    #[test]
    fn halton_in_domain_gives_exact_count() {
        let disk = Domain::disk(vec![0.5, 0.5], 0.5).unwrap();
        let pts = halton_in(&disk, 1000, 10_000).unwrap();
        assert_eq!(pts.len(), 1000);
    }

    #[test]
    fn grid_examples() {
        let g = grid(&[5, 5], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!(g.point(0), &[0.0, 0.0]);
        assert_eq!(g.point(24), &[1.0, 1.0]);
        assert_eq!(g.point(1), &[0.25, 0.0]);

        let g = grid(&[2], &[0.0], &[1.0]).unwrap();
        assert_eq!(g.coords(), &[0.0, 1.0]);

        let g = grid(&[10], &[-1.0], &[1.0]).unwrap();
        assert_eq!(g.len(), 10);
        for w in g.coords().windows(2) {
            assert!((w[1] - w[0] - 2.0 / 9.0).abs() < 1e-15);
        }
    }

    #[test]
    fn grid_rejects_degenerate() {
        assert!(grid(&[3], &[1.0], &[1.0]).is_err());
        assert!(grid(&[1], &[0.0], &[1.0]).is_err());
    }

    #[test]
    fn restrict_examples() {
        let g = grid(&[3, 3], &[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let disk = Domain::disk(vec![0.0, 0.0], 1.0).unwrap();
        let r = restrict(&g, &disk).unwrap();
        assert_eq!(r.len(), 5);

        let (lo, hi) = g.bounds();
        let same = restrict(&g, &Domain::boxed(lo, hi).unwrap()).unwrap();
        assert_eq!(same.coords(), g.coords());

        let big = grid(&[100, 100], &[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let r = restrict(&big, &disk).unwrap();
        let count = big
            .iter()
            .filter(|p| p[0] * p[0] + p[1] * p[1] <= 1.0 + 2e-12)
            .count();
        assert_eq!(r.len(), count);

        let empty = restrict(&g, &Domain::disk(vec![5.0, 5.0], 0.1).unwrap()).unwrap();
        assert!(empty.is_empty());
        assert!(restrict(&g, &Domain::interval(0.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn fill_distance_examples() {
        let x = PointSet::new(1, vec![0.0, 0.5, 1.0], Domain::interval(0.0, 1.0).unwrap()).unwrap();
        let probe = grid(&[1001], &[0.0], &[1.0]).unwrap();
        assert!((fill_distance(&x, &probe).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(fill_distance(&probe, &probe).unwrap(), 0.0);

        let sites = grid(&[5, 5], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let probe = grid(&[101, 101], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(
            fill_distance(&sites, &probe).unwrap(),
            brute_fill(&sites, &probe)
        );
    }

    #[test]
    fn fill_distance_dimension_mismatch() {
        let a = grid(&[3], &[0.0], &[1.0]).unwrap();
        let b = grid(&[3, 3], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!(matches!(
            fill_distance(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn half_sphere_examples() {
        assert_eq!(half_sphere_lift(&[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(half_sphere_lift(&[1.0, 0.0]).unwrap(), 0.0);
        assert!(half_sphere_lift(&[0.6, 0.8]).unwrap() < 1e-7);
        assert!(half_sphere_lift(&[0.9, 0.9]).is_err());
    }

    #[test]
    fn point_set_rejects_duplicates_and_outsiders() {
        let d = Domain::interval(0.0, 1.0).unwrap();
        assert!(matches!(
            PointSet::new(1, vec![0.1, 0.5, 0.1], d.clone()),
            Err(Error::CoincidentPoints {
                first: 0,
                second: 2,
                ..
            })
        ));
        assert!(matches!(
            PointSet::new(1, vec![0.1, 1.5], d.clone()),
            Err(Error::OutsideDomain { index: 1 })
        ));
        assert!(PointSet::new(1, vec![0.1, f64::NAN], d).is_err());
    }

    #[test]
    fn cardioid_membership() {
        let c = Domain::cardioid(CARDIOID_SCALE).unwrap();
        assert!(c.contains(&[-0.5, 0.0]));
        assert!(c.contains(&[-1.0, 0.0]));
        assert!(!c.contains(&[-1.01, 0.0]));
        assert!(!c.contains(&[0.1, 0.0]));
        assert!(c.contains(&[0.0, 0.0]));
        let (lo, hi) = c.bounding_box().unwrap();
        assert!(lo.iter().chain(&hi).all(|v| v.abs() <= 1.0));
    }

    #[test]
    fn fibonacci_points_lie_in_disk() {
        let p = fibonacci_hemisphere_projection(200).unwrap();
        assert_eq!(p.len(), 200);
        for x in p.iter() {
            let c = half_sphere_lift(x).unwrap();
            assert!((x[0] * x[0] + x[1] * x[1] + c * c - 1.0).abs() < 1e-12);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn lift_is_on_sphere(r in 0.0f64..=1.0, t in 0.0f64..std::f64::consts::TAU) {
                let x = [r * t.cos(), r * t.sin()];
                let c = half_sphere_lift(&x).unwrap();
                prop_assert!((x[0] * x[0] + x[1] * x[1] + c * c - 1.0).abs() <= 1e-12);
            }

            #[test]
            fn fill_distance_monotone(extra in proptest::collection::vec(0.0f64..1.0, 2)) {
                let sites = halton(12, 2).unwrap();
                let probe = grid(&[41, 41], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
                let before = fill_distance(&sites, &probe).unwrap();
                let mut coords = sites.coords().to_vec();
                coords.extend_from_slice(&extra);
                if let Ok(more) = PointSet::new(2, coords, sites.domain().clone()) {
                    prop_assert!(fill_distance(&more, &probe).unwrap() <= before);
                }
            }
        }
    }
}
