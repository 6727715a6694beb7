//! Exact closest pair on integer mantissas.

use std::collections::HashMap;

use rayon::prelude::*;

use super::RealPoints;
use crate::digitalseq::PointSet;
use crate::{Error, Result};

/// Sets up to this size go straight to all-pairs.
const ALL_PAIRS_LIMIT: usize = 1024;

/// Exact separation radius at scale `2^p`.
///
/// `s` is the minimal squared distance between two points measured in units
/// of `2^{-p}`, so `q = sqrt(s) / 2^{p+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SepResult {
    pub s: u128,
    pub p: u32,
    /// Lexicographically smallest `(i, j)`, `i < j`, attaining `s`.
    pub witness: (usize, usize),
}

impl SepResult {
    pub fn q_value(&self) -> f64 {
        (self.s as f64).sqrt() / 2f64.powi(self.p as i32 + 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealSep {
    pub q_value: f64,
    pub witness: (usize, usize),
}

#[inline]
fn sq_dist(a: &[u64], b: &[u64]) -> u128 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u128;
            d * d
        })
        .sum()
}

/// Squared distances must fit: `d * 2^{2p} < 2^127`.
fn check_scale(dim: usize, precision: u32) -> Result<()> {
    let ok = 2 * precision < 127
        && (1u128 << (2 * precision))
            .checked_mul(dim as u128)
            .is_some_and(|v| v < 1u128 << 127);
    if ok {
        Ok(())
    } else {
        Err(Error::Precision(format!(
            "squared distances at precision {precision} in dimension {dim} overflow 128 bits; \
             reduce precision first"
        )))
    }
}

type Candidate = (u128, usize, usize);

/// Exact separation radius with the lexicographically smallest witness pair.
pub fn separation(ps: &PointSet) -> Result<SepResult> {
    let n = ps.len();
    if n < 2 {
        return Err(Error::Argument(format!(
            "separation needs at least two points, got {n}"
        )));
    }
    check_scale(ps.dim(), ps.precision())?;
    let (s, i, j) = if n <= ALL_PAIRS_LIMIT {
        all_pairs(ps)
    } else {
        grid_pairs(ps)
    };
    Ok(SepResult {
        s,
        p: ps.precision(),
        witness: (i, j),
    })
}

/// All-pairs closest pair; also used as the reference in tests.
pub fn brute_force_separation(ps: &PointSet) -> Result<SepResult> {
    if ps.len() < 2 {
        return Err(Error::Argument(
            "separation needs at least two points".into(),
        ));
    }
    check_scale(ps.dim(), ps.precision())?;
    let (s, i, j) = all_pairs(ps);
    Ok(SepResult {
        s,
        p: ps.precision(),
        witness: (i, j),
    })
}

fn all_pairs(ps: &PointSet) -> Candidate {
    let n = ps.len();
    (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let a = ps.coords(i);
            (i + 1..n)
                .map(|j| (sq_dist(a, ps.coords(j)), i, j))
                .min()
                .expect("j range is nonempty")
        })
        .min()
        .expect("at least one pair")
}

/// Grid buckets with cell side `2^k`. Any pair at distance at most `2^k`
/// lies in adjacent cells, so once the best pair found is that close it is
/// the global minimum. Otherwise the cells double and the scan repeats.
fn grid_pairs(ps: &PointSet) -> Candidate {
    let n = ps.len();
    let dim = ps.dim();
    let p = ps.precision();
    let per_axis_bits = (usize::BITS - 1 - n.leading_zeros()) / dim as u32;
    let mut k = p.saturating_sub(per_axis_bits);
    loop {
        let cells = bucket(ps, k);
        let single_cell = cells.len() == 1;
        let best = (0..n)
            .into_par_iter()
            .filter_map(|i| {
                let mut key: Vec<u64> = ps.coords(i).iter().map(|&c| cell_of(c, k)).collect();
                let mut best: Option<Candidate> = None;
                for_each_neighbor(&mut key, 0, &mut |cell| {
                    if let Some(members) = cells.get(cell) {
                        for &j in members.iter().filter(|&&j| j > i) {
                            let cand = (sq_dist(ps.coords(i), ps.coords(j)), i, j);
                            if best.is_none_or(|b| cand < b) {
                                best = Some(cand);
                            }
                        }
                    }
                });
                best
            })
            .min();
        if let Some(b) = best {
            let side_sq = 1u128.checked_shl(2 * k).unwrap_or(u128::MAX);
            if single_cell || b.0 <= side_sq {
                return b;
            }
        }
        k += 1;
    }
}

#[inline]
fn cell_of(c: u64, k: u32) -> u64 {
    c.checked_shr(k).unwrap_or(0)
}

fn bucket(ps: &PointSet, k: u32) -> HashMap<Vec<u64>, Vec<usize>> {
    let mut cells: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    for (i, x) in ps.iter().enumerate() {
        let key = x.iter().map(|&c| cell_of(c, k)).collect();
        cells.entry(key).or_default().push(i);
    }
    cells
}

/// Visits every cell whose index differs from `key` by at most one per axis.
/// `key` is restored before returning.
fn for_each_neighbor(key: &mut [u64], axis: usize, visit: &mut impl FnMut(&[u64])) {
    if axis == key.len() {
        visit(key);
        return;
    }
    let center = key[axis];
    for c in [center.checked_sub(1), Some(center), center.checked_add(1)]
        .into_iter()
        .flatten()
    {
        key[axis] = c;
        for_each_neighbor(key, axis + 1, visit);
    }
    key[axis] = center;
}

/// Running separation of every prefix of a dyadic point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSeparation {
    pub precision: u32,
    /// `s[k]` is the minimal squared scaled distance among the first `k + 2` points.
    pub s: Vec<u128>,
}

impl PrefixSeparation {
    /// `s` of the prefix `P_n`, for `2 <= n <= len`.
    pub fn s_at(&self, n: usize) -> u128 {
        self.s[n - 2]
    }
}

/// Exact `s(P_n)` for every `2 <= n <= ps.len()` in one incremental pass.
///
/// Points are inserted one at a time into a grid whose cell side is the
/// smallest power of two at least the current minimal distance, so every
/// pair that could lower the minimum lies in adjacent cells. The grid is
/// rebuilt whenever the minimum shrinks enough to allow a finer cell.
pub fn prefix_separation(ps: &PointSet) -> Result<PrefixSeparation> {
    let n = ps.len();
    if n < 2 {
        return Err(Error::Argument(
            "separation needs at least two points".into(),
        ));
    }
    check_scale(ps.dim(), ps.precision())?;
    let p = ps.precision();
    let mut k = p;
    let mut cells: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    let mut best = u128::MAX;
    let mut out = Vec::with_capacity(n - 1);
    let mut key = vec![0u64; ps.dim()];
    for i in 0..n {
        let x = ps.coords(i);
        for (slot, &c) in key.iter_mut().zip(x) {
            *slot = cell_of(c, k);
        }
        for_each_neighbor(&mut key, 0, &mut |cell| {
            if let Some(members) = cells.get(cell) {
                for &j in members {
                    best = best.min(sq_dist(x, ps.coords(j)));
                }
            }
        });
        cells.entry(key.clone()).or_default().push(i);
        if i >= 1 {
            out.push(best);
        }
        let wanted = cell_exponent(best);
        if wanted < k {
            k = wanted;
            cells.clear();
            for j in 0..=i {
                let cell = ps.coords(j).iter().map(|&c| cell_of(c, k)).collect();
                cells.entry(cell).or_default().push(j);
            }
        }
    }
    Ok(PrefixSeparation {
        precision: p,
        s: out,
    })
}

/// Smallest `k` with `4^k >= s`.
fn cell_exponent(s: u128) -> u32 {
    let mut k = 0;
    while k < 64 && (1u128 << (2 * k)) < s {
        k += 1;
    }
    k
}

/// Floating-point separation radius by all pairs.
pub fn separation_real(points: &RealPoints) -> Result<RealSep> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Argument(format!(
            "separation needs at least two points, got {n}"
        )));
    }
    let mut best = (f64::INFINITY, 0, 1);
    for i in 0..n - 1 {
        let a = points.point(i);
        for j in i + 1..n {
            let d: f64 = a
                .iter()
                .zip(points.point(j))
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    Ok(RealSep {
        q_value: best.0.sqrt() / 2.0,
        witness: (best.1, best.2),
    })
}
