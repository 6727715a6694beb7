//! Uniform grid over `[0, 1]^d` for nearest-neighbor distance queries.

use super::RealPoints;

/// Upper bound on the number of grid cells.
const MAX_CELLS: usize = 1 << 22;

/// Answers `min_i |y - x_i|^2` by searching cell shells outward from `y`.
#[derive(Clone, Debug)]
pub struct NearestIndex {
    dim: usize,
    per_axis: usize,
    /// Points reordered by cell, row-major.
    coords: Vec<f64>,
    /// `cell_start[c]..cell_start[c + 1]` indexes the points of cell `c`.
    cell_start: Vec<usize>,
}

impl NearestIndex {
    pub fn new(points: &RealPoints) -> Self {
        let dim = points.dim();
        let n = points.len().max(1);
        let mut per_axis = ((n as f64).powf(1.0 / dim as f64).round() as usize).max(1);
        while per_axis > 1
            && per_axis
                .checked_pow(dim as u32)
                .is_none_or(|c| c > MAX_CELLS)
        {
            per_axis -= 1;
        }
        let cells = per_axis.pow(dim as u32);

        let mut index = Self {
            dim,
            per_axis,
            coords: Vec::with_capacity(points.flat().len()),
            cell_start: vec![0; cells + 1],
        };
        let ids: Vec<usize> = points.iter().map(|x| index.cell_id(x)).collect();
        for &c in &ids {
            index.cell_start[c + 1] += 1;
        }
        for c in 0..cells {
            index.cell_start[c + 1] += index.cell_start[c];
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by_key(|&i| ids[i]);
        for i in order {
            index.coords.extend_from_slice(points.point(i));
        }
        index
    }

    fn axis_cell(&self, y: f64) -> usize {
        ((y * self.per_axis as f64) as usize).min(self.per_axis - 1)
    }

    fn cell_id(&self, y: &[f64]) -> usize {
        y.iter()
            .fold(0, |acc, &c| acc * self.per_axis + self.axis_cell(c))
    }

    fn scan_cell(&self, cell: usize, y: &[f64], best: &mut f64) {
        let pts =
            &self.coords[self.cell_start[cell] * self.dim..self.cell_start[cell + 1] * self.dim];
        for x in pts.chunks_exact(self.dim) {
            let mut d = 0.0;
            for (a, b) in x.iter().zip(y) {
                d += (a - b) * (a - b);
            }
            if d < *best {
                *best = d;
            }
        }
    }

    /// Squared distance from `y` to the nearest indexed point
    /// (`f64::INFINITY` for an empty index).
    pub fn min_sq_dist(&self, y: &[f64]) -> f64 {
        debug_assert_eq!(y.len(), self.dim);
        let home: Vec<usize> = y.iter().map(|&c| self.axis_cell(c)).collect();
        let side = 1.0 / self.per_axis as f64;
        let last = self.per_axis - 1;
        let mut best = f64::INFINITY;
        let mut offset = vec![0usize; self.dim];
        for r in 0..=last {
            self.scan_shell(&home, r, &mut offset, y, &mut best);
            // Every unvisited cell lies outside the block [home - r, home + r],
            // so it is at least as far as the nearest open face of that block.
            let mut reach = f64::INFINITY;
            for (a, &h) in home.iter().enumerate() {
                if h > r {
                    reach = reach.min(y[a] - (h - r) as f64 * side);
                }
                if h + r < last {
                    reach = reach.min((h + r + 1) as f64 * side - y[a]);
                }
            }
            if reach == f64::INFINITY || best <= reach * reach {
                break;
            }
        }
        best
    }

    /// Scans the cells at Chebyshev distance exactly `r` from `home`.
    fn scan_shell(&self, home: &[usize], r: usize, cell: &mut [usize], y: &[f64], best: &mut f64) {
        self.shell_axis(home, r, 0, false, cell, y, best);
    }

    #[allow(clippy::too_many_arguments)]
    fn shell_axis(
        &self,
        home: &[usize],
        r: usize,
        axis: usize,
        on_face: bool,
        cell: &mut [usize],
        y: &[f64],
        best: &mut f64,
    ) {
        if axis == self.dim {
            if on_face || r == 0 {
                let id = cell.iter().fold(0, |acc, &c| acc * self.per_axis + c);
                self.scan_cell(id, y, best);
            }
            return;
        }
        let h = home[axis];
        let lo = h.saturating_sub(r);
        let hi = (h + r).min(self.per_axis - 1);
        for c in lo..=hi {
            cell[axis] = c;
            let face = on_face || c.abs_diff(h) == r;
            self.shell_axis(home, r, axis + 1, face, cell, y, best);
        }
    }
}
