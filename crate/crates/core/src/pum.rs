//! Block-based partition-of-unity interpolation.
//!
//! Patch centers sit on a uniform grid over the domain's bounding box. Each
//! patch is a ball whose radius is the half cell diagonal times an overlap
//! factor, so neighbouring balls overlap and the box is covered. Weights are
//! Shepard-normalized W2 bumps centred on the patch centers with support equal
//! to the patch radius, which keeps every weight supported inside its patch.
//! A uniform grid with cells of edge `radius` over the patch centers answers
//! "which patches cover x" by scanning at most `3^d` cells.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geometry::{Domain, PointSet};
use crate::interpolate::{
    fit_rescaled_with, fit_standard_with, FitOptions, InterpolantModel, RescaledModel,
};
use crate::kernels::{Kernel, KernelFamily, KernelSpec};
use crate::spatial::{distance, GridIndex};

pub const DEFAULT_OVERLAP: f64 = 1.5;

#[derive(Clone, Debug)]
pub struct Patch {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Indices into the global point set, ascending.
    pub local_points: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Cover {
    dim: usize,
    n_points: usize,
    radius: f64,
    patches: Vec<Patch>,
    weight_kernel: KernelSpec,
    index: GridIndex,
}

impl Cover {
    pub fn patches(&self) -> &[Patch] {
        &self.patches
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight_kernel(&self) -> &KernelSpec {
        &self.weight_kernel
    }

    pub fn max_local_len(&self) -> usize {
        self.patches
            .iter()
            .map(|p| p.local_points.len())
            .max()
            .unwrap_or(0)
    }

    /// Patches whose open ball contains `x`, ascending.
    pub fn covering(&self, x: &[f64]) -> Vec<usize> {
        self.index.within(x, self.radius)
    }

    /// Unnormalized bump of patch `k` at `x`.
    #[inline]
    fn bump(&self, k: usize, x: &[f64]) -> f64 {
        self.weight_kernel.eval(x, &self.patches[k].center)
    }

    /// `(patch, w_k(x))` for every patch with a positive weight at `x`. Empty
    /// when `x` is uncovered.
    pub fn weights(&self, x: &[f64]) -> Vec<(usize, f64)> {
        let mut w: Vec<(usize, f64)> = self
            .covering(x)
            .into_iter()
            .map(|k| (k, self.bump(k, x)))
            .filter(|(_, v)| *v > 0.0)
            .collect();
        let total: f64 = w.iter().map(|(_, v)| v).sum();
        w.iter_mut().for_each(|(_, v)| *v /= total);
        w
    }
}

/// Weight of patch `k` at `x`; `None` if no patch covers `x`.
pub fn weight(cover: &Cover, k: usize, x: &[f64]) -> Option<f64> {
    let w = cover.weights(x);
    if w.is_empty() {
        return None;
    }
    Some(w.iter().find(|(j, _)| *j == k).map_or(0.0, |(_, v)| *v))
}

/// Lays `patches_per_axis^d` patches over the bounding box of `domain` (or of
/// the points, when the domain has none) and assigns every point to the
/// patches containing it. Empty patches are dropped.
pub fn build_cover(
    domain: &Domain,
    points: &PointSet,
    patches_per_axis: usize,
    overlap: f64,
) -> Result<Cover> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if patches_per_axis == 0 {
        return Err(invalid("patches", "must be at least 1"));
    }
    if !(overlap > 1.0) || !overlap.is_finite() {
        return Err(invalid("overlap", format!("must exceed 1, got {overlap}")));
    }
    let dim = points.dim();
    if domain.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: domain.dim(),
        });
    }
    let (lo, hi) = domain.bounding_box().unwrap_or_else(|| points.bounds());
    let cell: Vec<f64> = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| {
            let extent = h - l;
            if extent > 0.0 {
                extent / patches_per_axis as f64
            } else {
                1.0
            }
        })
        .collect();
    let radius = overlap * 0.5 * cell.iter().map(|c| c * c).sum::<f64>().sqrt();
    let weight_kernel = KernelSpec::new(KernelFamily::WendlandW2, 1.0 / radius, dim)?;

    let total = patches_per_axis
        .checked_pow(dim as u32)
        .ok_or_else(|| invalid("patches", "too many patches"))?;
    let mut centers = Vec::with_capacity(total * dim);
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        centers.extend((0..dim).map(|a| lo[a] + (idx[a] as f64 + 0.5) * cell[a]));
        for a in 0..dim {
            idx[a] += 1;
            if idx[a] < patches_per_axis {
                break;
            }
            idx[a] = 0;
        }
    }

    let grid = GridIndex::new(&centers, dim, radius);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (i, x) in points.iter().enumerate() {
        grid.for_each_candidate(x, radius, |k| {
            if distance(x, grid.point(k)) < radius {
                members[k].push(i);
            }
        });
    }

    let mut patches = Vec::new();
    let mut kept_centers = Vec::new();
    for (k, local) in members.into_iter().enumerate() {
        if local.is_empty() {
            continue;
        }
        let center = centers[k * dim..(k + 1) * dim].to_vec();
        kept_centers.extend_from_slice(&center);
        patches.push(Patch {
            center,
            radius,
            local_points: local,
        });
    }
    let index = GridIndex::new(&kept_centers, dim, radius);
    let cover = Cover {
        dim,
        n_points: points.len(),
        radius,
        patches,
        weight_kernel,
        index,
    };

    let mut covered = vec![false; points.len()];
    for p in &cover.patches {
        for &i in &p.local_points {
            covered[i] = true;
        }
    }
    if let Some(i) = covered.iter().position(|c| !c) {
        return Err(Error::Uncovered { index: i });
    }
    Ok(cover)
}

#[derive(Clone, Debug)]
pub enum LocalModel {
    Standard(InterpolantModel),
    Rescaled(RescaledModel),
}

impl LocalModel {
    /// `None` where a rescaled local's denominator vanished.
    pub fn eval(&self, x: &[f64]) -> Option<f64> {
        match self {
            LocalModel::Standard(m) => Some(m.eval(x)),
            LocalModel::Rescaled(m) => m.eval(x),
        }
    }

    pub fn cond_estimate(&self) -> f64 {
        match self {
            LocalModel::Standard(m) => m.cond_estimate(),
            LocalModel::Rescaled(m) => m.cond_estimate(),
        }
    }

    pub fn n_centers(&self) -> usize {
        match self {
            LocalModel::Standard(m) => m.centers().len(),
            LocalModel::Rescaled(m) => m.centers().len(),
        }
    }
}

/// Global interpolant `sum_k p_k(x) w_k(x)`.
#[derive(Clone, Debug)]
pub struct PumModel {
    cover: Cover,
    locals: Vec<LocalModel>,
    rescale_locals: bool,
}

impl PumModel {
    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn locals(&self) -> &[LocalModel] {
        &self.locals
    }

    pub fn rescale_locals(&self) -> bool {
        self.rescale_locals
    }

    pub fn max_cond_estimate(&self) -> f64 {
        self.locals
            .iter()
            .map(LocalModel::cond_estimate)
            .fold(1.0, f64::max)
    }

    /// Weighted local values at `x`. Rescaled locals whose denominator
    /// vanished at `x` are dropped and the remaining weights renormalized;
    /// `None` when nothing usable covers `x`.
    pub fn eval(&self, x: &[f64]) -> Option<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        for k in self.cover.covering(x) {
            let w = self.cover.bump(k, x);
            if !(w > 0.0) {
                continue;
            }
            if let Some(v) = self.locals[k].eval(x) {
                num += w * v;
                den += w;
            }
        }
        (den > 0.0).then(|| num / den)
    }

    pub fn eval_many(&self, points: &PointSet) -> Vec<Option<f64>> {
        (0..points.len())
            .into_par_iter()
            .with_min_len(64)
            .map(|i| self.eval(points.point(i)))
            .collect()
    }
}

pub fn eval_pum(model: &PumModel, x: &[f64]) -> Option<f64> {
    model.eval(x)
}

/// Fits every patch with the same kernel.
pub fn fit_pum(
    kernel: &Kernel,
    cover: &Cover,
    points: &PointSet,
    values: &[f64],
    rescale_locals: bool,
) -> Result<PumModel> {
    fit_pum_with(
        cover,
        points,
        values,
        rescale_locals,
        &FitOptions::default(),
        |_, _| kernel.clone(),
    )
}

/// Fits every patch, taking the local kernel from `kernel_for(patch_id, patch)`;
/// this is the hook for per-patch shape parameters.
pub fn fit_pum_with(
    cover: &Cover,
    points: &PointSet,
    values: &[f64],
    rescale_locals: bool,
    opts: &FitOptions,
    kernel_for: impl Fn(usize, &Patch) -> Kernel + Sync,
) -> Result<PumModel> {
    if points.len() != cover.n_points || points.dim() != cover.dim {
        return Err(invalid("cover", "was built for a different point set"));
    }
    if values.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: values.len(),
        });
    }
    let locals = cover
        .patches
        .par_iter()
        .enumerate()
        .map(|(k, patch)| {
            let kernel = kernel_for(k, patch);
            let centers = points.select(&patch.local_points);
            let local_values: Vec<f64> = patch.local_points.iter().map(|&i| values[i]).collect();
            let fitted = if rescale_locals {
                fit_rescaled_with(&kernel, &centers, &local_values, opts).map(LocalModel::Rescaled)
            } else {
                fit_standard_with(&kernel, &centers, &local_values, opts).map(LocalModel::Standard)
            };
            fitted.map_err(|e| Error::PatchFit {
                patch: k,
                n_local: patch.local_points.len(),
                cond: f64::INFINITY,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PumModel {
        cover: cover.clone(),
        locals,
        rescale_locals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{grid, halton_in};
    use crate::interpolate::fit_standard;

    fn unit_square() -> Domain {
        Domain::cube(2, 0.0, 1.0).unwrap()
    }

    fn brute_members(cover: &Cover, points: &PointSet, k: usize) -> Vec<usize> {
        let p = &cover.patches()[k];
        (0..points.len())
            .filter(|&i| distance(points.point(i), &p.center) < p.radius)
            .collect()
    }

    #[test]
    fn single_patch_holds_everything() {
        let x = grid(&[5, 5], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let c = build_cover(&unit_square(), &x, 1, DEFAULT_OVERLAP).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.patches()[0].local_points.len(), 25);
        let w = c.weights(&[0.3, 0.9]);
        assert_eq!(w, vec![(0, 1.0)]);
    }

    #[test]
    fn two_by_two_cover_of_grid() {
        let x = grid(&[5, 5], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let c = build_cover(&unit_square(), &x, 2, 1.5).unwrap();
        assert_eq!(c.len(), 4);
        for k in 0..4 {
            assert_eq!(c.patches()[k].local_points, brute_members(&c, &x, k));
        }
        let count = |i: usize| {
            c.patches()
                .iter()
                .filter(|p| p.local_points.contains(&i))
                .count()
        };
        for corner in [0, 4, 20, 24] {
            assert_eq!(count(corner), 1);
        }
        assert!((0..25).all(|i| count(i) >= 1));
    }

    #[test]
    fn halton_disk_cover() {
        let disk = Domain::disk(vec![0.5, 0.5], 0.5).unwrap();
        let x = halton_in(&disk, 1000, 10_000).unwrap();
        let c = build_cover(&disk, &x, 8, DEFAULT_OVERLAP).unwrap();
        for k in 0..c.len() {
            assert_eq!(c.patches()[k].local_points, brute_members(&c, &x, k));
        }
        assert!(c.max_local_len() > 0);
    }

    #[test]
    fn weight_partition_of_unity() {
        let x = grid(&[9, 9], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let c = build_cover(&unit_square(), &x, 4, DEFAULT_OVERLAP).unwrap();
        let mut s = 99u64;
        for _ in 0..10_000 {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let a = (s >> 11) as f64 / (1u64 << 53) as f64;
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let b = (s >> 11) as f64 / (1u64 << 53) as f64;
            let w = c.weights(&[a, b]);
            assert!(!w.is_empty());
            let total: f64 = w.iter().map(|(_, v)| v).sum();
            assert!((total - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn weight_at_lonely_center_is_one() {
        let x = grid(&[5, 5], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        // overlap 1.2: centers 0.5 apart, radius ~0.42, so a center is covered by its own patch only
        let c = build_cover(&unit_square(), &x, 2, 1.2).unwrap();
        let center = c.patches()[0].center.clone();
        assert_eq!(weight(&c, 0, &center), Some(1.0));
        assert_eq!(weight(&c, 3, &center), Some(0.0));
        assert_eq!(weight(&c, 0, &[5.0, 5.0]), None);
    }

    #[test]
    fn bad_cover_parameters() {
        let x = grid(&[3, 3], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!(build_cover(&unit_square(), &x, 0, 1.5).is_err());
        assert!(build_cover(&unit_square(), &x, 2, 1.0).is_err());
        assert!(build_cover(&Domain::interval(0.0, 1.0).unwrap(), &x, 2, 1.5).is_err());
    }

    #[test]
    fn single_patch_matches_global_fit() {
        let x = grid(&[6, 6], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let f: Vec<f64> = x.iter().map(|p| (p[0] - p[1]).exp()).collect();
        let k = Kernel::radial(KernelFamily::WendlandW2, 2.0, 2).unwrap();
        let c = build_cover(&unit_square(), &x, 1, DEFAULT_OVERLAP).unwrap();
        let pum = fit_pum(&k, &c, &x, &f, false).unwrap();
        let global = fit_standard(&k, &x, &f).unwrap();
        let e = grid(&[13, 13], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        for p in e.iter() {
            let (a, b) = (pum.eval(p).unwrap(), global.eval(p));
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn constant_data_with_rescaled_locals() {
        let x = grid(&[12, 12], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let k = Kernel::radial(KernelFamily::WendlandW2, 5.0, 2).unwrap();
        let c = build_cover(&unit_square(), &x, 4, DEFAULT_OVERLAP).unwrap();
        let pum = fit_pum(&k, &c, &x, &vec![-2.5; x.len()], true).unwrap();
        let e = grid(&[30, 30], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        for v in pum.eval_many(&e).into_iter().flatten() {
            assert!((v + 2.5).abs() < 1e-8);
        }
    }

    #[test]
    fn interpolates_data() {
        let x = grid(&[10, 10], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let f: Vec<f64> = x.iter().map(|p| (4.0 * p[0]).sin() * p[1]).collect();
        let k = Kernel::radial(KernelFamily::WendlandW2, 3.0, 2).unwrap();
        let c = build_cover(&unit_square(), &x, 3, DEFAULT_OVERLAP).unwrap();
        for rescale in [false, true] {
            let pum = fit_pum(&k, &c, &x, &f, rescale).unwrap();
            let tol = 1e-8 * pum.max_cond_estimate();
            for (p, v) in x.iter().zip(&f) {
                assert!((pum.eval(p).unwrap() - v).abs() <= tol);
            }
        }
    }

    #[test]
    fn perturbing_one_patch_is_local() {
        let x = grid(&[17, 17], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let mut f: Vec<f64> = x.iter().map(|p| p[0] * p[1]).collect();
        let k = Kernel::radial(KernelFamily::WendlandW2, 5.0, 2).unwrap();
        let c = build_cover(&unit_square(), &x, 4, DEFAULT_OVERLAP).unwrap();
        let before = fit_pum(&k, &c, &x, &f, true).unwrap();

        let target = 0;
        let exclusive: Vec<usize> = c.patches()[target]
            .local_points
            .iter()
            .copied()
            .filter(|&i| {
                c.patches()
                    .iter()
                    .filter(|p| p.local_points.contains(&i))
                    .count()
                    == 1
            })
            .collect();
        assert!(!exclusive.is_empty());
        for &i in &exclusive {
            f[i] += 0.37;
        }
        let after = fit_pum(&k, &c, &x, &f, true).unwrap();
        let e = grid(&[40, 40], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let mut compared = 0;
        for p in e.iter() {
            if !c.covering(p).contains(&target) {
                assert_eq!(
                    before.eval(p).map(f64::to_bits),
                    after.eval(p).map(f64::to_bits)
                );
                compared += 1;
            }
        }
        assert!(compared > 0);
    }

    #[test]
    fn global_rescaling_at_nodes_is_identity() {
        // Rescaling the assembled interpolant divides by the PUM fit of the
        // constant one, which already equals one at every node.
        let x = grid(&[10, 10], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let f: Vec<f64> = x.iter().map(|p| p[0] + 2.0 * p[1]).collect();
        let k = Kernel::radial(KernelFamily::WendlandW2, 3.0, 2).unwrap();
        let c = build_cover(&unit_square(), &x, 3, DEFAULT_OVERLAP).unwrap();
        let pf = fit_pum(&k, &c, &x, &f, false).unwrap();
        let p1 = fit_pum(&k, &c, &x, &vec![1.0; x.len()], false).unwrap();
        for (p, v) in x.iter().zip(&f) {
            let one = p1.eval(p).unwrap();
            assert!((one - 1.0).abs() < 1e-10);
            assert!((pf.eval(p).unwrap() / one - v).abs() < 1e-9);
        }
    }

    #[test]
    fn per_patch_epsilon_hook() {
        let x = grid(&[8, 8], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let f: Vec<f64> = x.iter().map(|p| p[0]).collect();
        let base = Kernel::radial(KernelFamily::WendlandW2, 3.0, 2).unwrap();
        let c = build_cover(&unit_square(), &x, 2, DEFAULT_OVERLAP).unwrap();
        let pum = fit_pum_with(&c, &x, &f, true, &FitOptions::default(), |k, _| {
            base.with_epsilon(2.0 + k as f64).unwrap()
        })
        .unwrap();
        match &pum.locals()[3] {
            LocalModel::Rescaled(m) => assert_eq!(m.base().kernel().epsilon(), 5.0),
            _ => panic!("expected rescaled local"),
        }
    }
}
