//! Uniform-grid bucketing of points for radius and nearest-neighbour queries.
//!
//! Points are hashed into a dense row of cubic cells covering their bounding
//! box. Radius queries visit only the cells overlapping the query ball, so with
//! a cell edge equal to the query radius at most 3^d cells are touched.

#[derive(Clone, Debug)]
pub struct GridIndex {
    dim: usize,
    lo: Vec<f64>,
    cell: f64,
    shape: Vec<usize>,
    /// CSR layout: items of cell `c` are `items[starts[c]..starts[c + 1]]`.
    starts: Vec<usize>,
    items: Vec<usize>,
    coords: Vec<f64>,
}

/// Upper bound on the number of cells; the cell edge grows until it fits.
const MAX_CELLS: usize = 1 << 22;

impl GridIndex {
    /// Buckets the points stored row-wise in `coords` (`dim` values per point)
    /// into cells of edge `cell`.
    pub fn new(coords: &[f64], dim: usize, cell: f64) -> Self {
        assert!(dim > 0 && coords.len() % dim == 0);
        assert!(cell > 0.0 && cell.is_finite(), "cell size must be positive");
        let n = coords.len() / dim;
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in coords.chunks_exact(dim) {
            for a in 0..dim {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        if n == 0 {
            lo.iter_mut().for_each(|v| *v = 0.0);
            hi.iter_mut().for_each(|v| *v = 0.0);
        }

        let mut cell = cell;
        let shape = loop {
            let shape: Vec<usize> = (0..dim)
                .map(|a| ((hi[a] - lo[a]) / cell).floor() as usize + 1)
                .collect();
            let total = shape
                .iter()
                .try_fold(1usize, |acc, &s| acc.checked_mul(s))
                .unwrap_or(usize::MAX);
            if total <= MAX_CELLS {
                break shape;
            }
            cell *= 2.0;
        };

        let mut index = GridIndex {
            dim,
            lo,
            cell,
            shape,
            starts: Vec::new(),
            items: Vec::new(),
            coords: coords.to_vec(),
        };

        let total: usize = index.shape.iter().product();
        let cell_ids: Vec<usize> = (0..n)
            .map(|i| {
                let c = index.clamped_cell(&coords[i * dim..(i + 1) * dim]);
                index.linear(&c)
            })
            .collect();
        let mut counts = vec![0usize; total + 1];
        for &c in &cell_ids {
            counts[c + 1] += 1;
        }
        for c in 0..total {
            counts[c + 1] += counts[c];
        }
        let mut fill = counts.clone();
        let mut items = vec![0usize; n];
        for (i, &c) in cell_ids.iter().enumerate() {
            items[fill[c]] = i;
            fill[c] += 1;
        }
        index.starts = counts;
        index.items = items;
        index
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn clamped_cell(&self, x: &[f64]) -> Vec<usize> {
        (0..self.dim)
            .map(|a| {
                let t = ((x[a] - self.lo[a]) / self.cell).floor();
                if t <= 0.0 {
                    0
                } else {
                    (t as usize).min(self.shape[a] - 1)
                }
            })
            .collect()
    }

    fn linear(&self, c: &[usize]) -> usize {
        let mut id = 0;
        for a in (0..self.dim).rev() {
            id = id * self.shape[a] + c[a];
        }
        id
    }

    fn bucket(&self, c: &[usize]) -> &[usize] {
        let id = self.linear(c);
        &self.items[self.starts[id]..self.starts[id + 1]]
    }

    /// Calls `visit` with every point whose cell overlaps the axis-aligned box
    /// around the ball of radius `r` at `x`. Candidates are not distance-filtered;
    /// the visiting order depends only on the index and the query.
    pub fn for_each_candidate(&self, x: &[f64], r: f64, mut visit: impl FnMut(usize)) {
        debug_assert_eq!(x.len(), self.dim);
        if self.items.is_empty() {
            return;
        }
        let mut lo_cell = Vec::with_capacity(self.dim);
        let mut hi_cell = Vec::with_capacity(self.dim);
        for a in 0..self.dim {
            let lo_t = ((x[a] - r - self.lo[a]) / self.cell).floor();
            let hi_t = ((x[a] + r - self.lo[a]) / self.cell).floor();
            if hi_t < 0.0 || lo_t > (self.shape[a] - 1) as f64 {
                return;
            }
            lo_cell.push(lo_t.max(0.0) as usize);
            hi_cell.push((hi_t as usize).min(self.shape[a] - 1));
        }
        let mut c = lo_cell.clone();
        loop {
            for &i in self.bucket(&c) {
                visit(i);
            }
            let mut a = 0;
            loop {
                if a == self.dim {
                    return;
                }
                if c[a] < hi_cell[a] {
                    c[a] += 1;
                    break;
                }
                c[a] = lo_cell[a];
                a += 1;
            }
        }
    }

    /// Indices of points at Euclidean distance strictly less than `r` from `x`,
    /// in ascending index order.
    pub fn within(&self, x: &[f64], r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_candidate(x, r, |i| {
            if distance(x, self.point(i)) < r {
                out.push(i);
            }
        });
        out.sort_unstable();
        out
    }

    /// Nearest indexed point to `x` and its distance, by expanding rings of
    /// cells around the cell containing `x`.
    pub fn nearest(&self, x: &[f64]) -> Option<(usize, f64)> {
        if self.items.is_empty() {
            return None;
        }
        let center = self.clamped_cell(x);
        let max_ring = (0..self.dim)
            .map(|a| center[a].max(self.shape[a] - 1 - center[a]))
            .max()
            .unwrap_or(0);
        let mut best: Option<(usize, f64)> = None;
        let mut offset = vec![0isize; self.dim];
        let mut cell = vec![0usize; self.dim];
        for ring in 0..=max_ring {
            let k = ring as isize;
            offset.iter_mut().for_each(|o| *o = -k);
            'cube: loop {
                let on_ring = offset.iter().any(|o| o.abs() == k);
                let mut inside = on_ring;
                if inside {
                    for a in 0..self.dim {
                        let c = center[a] as isize + offset[a];
                        if c < 0 || c >= self.shape[a] as isize {
                            inside = false;
                            break;
                        }
                        cell[a] = c as usize;
                    }
                }
                if inside {
                    for &i in self.bucket(&cell) {
                        let d = distance(x, self.point(i));
                        match best {
                            Some((_, bd)) if bd <= d => {}
                            _ => best = Some((i, d)),
                        }
                    }
                }
                let mut a = 0;
                loop {
                    if a == self.dim {
                        break 'cube;
                    }
                    if offset[a] < k {
                        offset[a] += 1;
                        break;
                    }
                    offset[a] = -k;
                    a += 1;
                }
            }
            if let Some((_, bd)) = best {
                if bd <= ring as f64 * self.cell {
                    break;
                }
            }
        }
        best
    }
}

/// Euclidean distance.
#[inline]
pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    squared_distance(x, y).sqrt()
}

#[inline]
pub fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}
