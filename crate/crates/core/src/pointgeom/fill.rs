//! Certified fill distance by branch-and-bound over boxes of `[0, 1]^d`.
//!
//! With `mind(y) = min_i |y - x_i|`, a box with center `c` and circumradius
//! `r` satisfies `mind(c) <= max_B mind <= mind(c) + r`, because `mind` is
//! 1-Lipschitz. The box with the largest upper bound is split in half along
//! its longest axis until that bound is within `tol` of the best value
//! found. Besides centers, the vertices created by each split are also
//! evaluated, which lets maxima on the boundary of the cube be hit exactly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{NearestIndex, RealPoints};
use crate::digitalseq::PointSet;
use crate::{Error, Result};

pub const DEFAULT_FILL_TOL: f64 = 1e-9;

/// Fill distance bracketed as `h_lo <= h <= h_hi` with `h_hi - h_lo <= tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct FillResult {
    pub h_lo: f64,
    pub h_hi: f64,
    /// An evaluated location with `mind(witness) == h_lo`; the
    /// lexicographically smallest one when several tie.
    pub witness: Vec<f64>,
    pub tol: f64,
}

struct Cell {
    upper: f64,
    seq: u64,
    lo: Box<[f64]>,
    hi: Box<[f64]>,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    // Max-heap on the upper bound; older cells first among ties.
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper
            .total_cmp(&other.upper)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn half_diagonal(lo: &[f64], hi: &[f64]) -> f64 {
    lo.iter()
        .zip(hi)
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt()
        / 2.0
}

fn center(lo: &[f64], hi: &[f64]) -> Vec<f64> {
    lo.iter().zip(hi).map(|(a, b)| (a + b) / 2.0).collect()
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    a.iter()
        .zip(b)
        .find_map(|(x, y)| match x.total_cmp(y) {
            Ordering::Equal => None,
            o => Some(o == Ordering::Less),
        })
        .unwrap_or(false)
}

struct Search<'a> {
    index: &'a NearestIndex,
    best_sq: f64,
    best_at: Vec<f64>,
}

impl Search<'_> {
    /// Evaluates `mind(y)^2` and records `y` if it improves the lower bound.
    fn probe(&mut self, y: &[f64]) -> f64 {
        let v = self.index.min_sq_dist(y);
        if v > self.best_sq || (v == self.best_sq && lex_less(y, &self.best_at)) {
            self.best_sq = v;
            self.best_at.clear();
            self.best_at.extend_from_slice(y);
        }
        v
    }

    /// Probes the vertices of `[lo, hi]`, holding axis `skip` (if any) at `lo`.
    fn probe_vertices(&mut self, lo: &[f64], hi: &[f64], skip: Option<usize>) {
        let dim = lo.len();
        let free: Vec<usize> = (0..dim).filter(|&a| Some(a) != skip).collect();
        let mut y = lo.to_vec();
        for mask in 0u64..1 << free.len() {
            for (bit, &a) in free.iter().enumerate() {
                y[a] = if mask >> bit & 1 == 1 { hi[a] } else { lo[a] };
            }
            self.probe(&y);
        }
    }
}

/// Certified fill distance of a dyadic point set over `[0, 1]^d`.
pub fn fill_distance(ps: &PointSet, tol: f64) -> Result<FillResult> {
    fill_distance_real(&RealPoints::from_point_set(ps), tol)
}

/// Certified fill distance of real-valued points over `[0, 1]^d`.
pub fn fill_distance_real(points: &RealPoints, tol: f64) -> Result<FillResult> {
    if tol.is_nan() || tol <= 0.0 || tol.is_infinite() {
        return Err(Error::Argument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if points.is_empty() {
        return Err(Error::Argument(
            "fill distance needs at least one point".into(),
        ));
    }
    let dim = points.dim();
    let index = NearestIndex::new(points);
    let mut search = Search {
        index: &index,
        best_sq: f64::NEG_INFINITY,
        best_at: vec![f64::INFINITY; dim],
    };

    let root_lo = vec![0.0; dim];
    let root_hi = vec![1.0; dim];
    search.probe_vertices(&root_lo, &root_hi, None);
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let root_c = center(&root_lo, &root_hi);
    let upper = search.probe(&root_c).sqrt() + half_diagonal(&root_lo, &root_hi);
    heap.push(Cell {
        upper,
        seq,
        lo: root_lo.into(),
        hi: root_hi.into(),
    });

    let h_hi = loop {
        let lower = search.best_sq.sqrt();
        let Some(top) = heap.peek() else {
            break lower;
        };
        if top.upper - lower <= tol {
            break top.upper.max(lower);
        }
        let cell = heap.pop().expect("peeked");
        let axis = (0..dim)
            .max_by(|&a, &b| {
                (cell.hi[a] - cell.lo[a])
                    .total_cmp(&(cell.hi[b] - cell.lo[b]))
                    .then(b.cmp(&a))
            })
            .expect("dim >= 1");
        let mid = (cell.lo[axis] + cell.hi[axis]) / 2.0;

        let mut split_lo = cell.lo.to_vec();
        split_lo[axis] = mid;
        let mut split_hi = cell.hi.to_vec();
        split_hi[axis] = mid;
        search.probe_vertices(&split_lo, &split_hi, Some(axis));

        for (lo, hi) in [(cell.lo.to_vec(), split_hi), (split_lo, cell.hi.to_vec())] {
            let c = center(&lo, &hi);
            let upper = search.probe(&c).sqrt() + half_diagonal(&lo, &hi);
            if upper > search.best_sq.sqrt() {
                seq += 1;
                heap.push(Cell {
                    upper,
                    seq,
                    lo: lo.into(),
                    hi: hi.into(),
                });
            }
        }
    };

    Ok(FillResult {
        h_lo: search.best_sq.sqrt(),
        h_hi,
        witness: search.best_at,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(coords: &[f64], dim: usize) -> RealPoints {
        RealPoints::new(coords.to_vec(), dim).unwrap()
    }

    /// Largest nearest-point distance over a regular grid of `(k+1)^2` samples.
    fn grid_estimate(points: &RealPoints, k: usize) -> f64 {
        let mut best: f64 = 0.0;
        for a in 0..=k {
            for b in 0..=k {
                let y = [a as f64 / k as f64, b as f64 / k as f64];
                let d = points
                    .iter()
                    .map(|x| ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min);
                best = best.max(d);
            }
        }
        best
    }

    #[test]
    fn single_corner_point() {
        let r = fill_distance_real(&pts(&[0.0, 0.0], 2), 1e-9).unwrap();
        let s2 = 2f64.sqrt();
        assert!(r.h_lo >= s2 - 1e-9 && r.h_hi <= s2 + 1e-9, "{r:?}");
        assert_eq!(r.witness, vec![1.0, 1.0]);
    }

    #[test]
    fn center_point() {
        let r = fill_distance_real(&pts(&[0.5, 0.5], 2), 1e-6).unwrap();
        assert!((r.h_lo - 0.5f64.sqrt()).abs() < 1e-6);
        assert_eq!(r.witness, vec![0.0, 0.0]);
    }

    #[test]
    fn two_points_against_grid_oracle() {
        let p = pts(&[0.0, 0.0, 0.5, 0.5], 2);
        let r = fill_distance_real(&p, 1e-6).unwrap();
        let grid = grid_estimate(&p, 2000);
        assert!((grid - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(
            r.h_lo <= grid + 1e-12 && grid <= r.h_hi,
            "{r:?} grid={grid}"
        );
        assert!(r.h_hi - r.h_lo <= 1e-6);
    }

    #[test]
    fn interior_maximum() {
        // Maximum sits at the circumcenter of the three points, not on a box vertex.
        let p = pts(&[0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.3, 0.6], 2);
        let r = fill_distance_real(&p, 1e-9).unwrap();
        let grid = grid_estimate(&p, 1000);
        assert!(r.h_hi - r.h_lo <= 1e-9);
        assert!(grid <= r.h_hi + 1e-12);
        assert!(r.h_lo <= grid + 0.5f64.sqrt() / 1000.0);
    }

    #[test]
    fn one_dimensional() {
        let r = fill_distance_real(&pts(&[0.25, 0.5], 1), 1e-9).unwrap();
        assert_eq!(r.h_lo, 0.5);
        assert_eq!(r.witness, vec![1.0]);
    }

    #[test]
    fn bad_arguments() {
        let p = pts(&[0.5, 0.5], 2);
        assert!(matches!(
            fill_distance_real(&p, 0.0),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            fill_distance_real(&p, f64::NAN),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            fill_distance_real(&pts(&[], 2), 1e-6),
            Err(Error::Argument(_))
        ));
    }
}
