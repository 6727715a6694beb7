//! Separation radius, fill distance and mesh ratio of point sets in `[0, 1]^d`.
//!
//! For `P_n = (x_0, ..., x_{n-1})`:
//!
//! - separation radius `q = 1/2 min_{i<j} |x_i - x_j|`,
//! - fill distance `h = sup_{x in [0,1]^d} min_i |x - x_i|`,
//! - mesh ratio `h / q`.
//!
//! Dyadic point sets get an exact separation radius; the fill distance is a
//! certified interval from branch-and-bound in either case.

mod fill;
mod grid;
mod separation;

pub use fill::{fill_distance, fill_distance_real, FillResult, DEFAULT_FILL_TOL};
pub use grid::NearestIndex;
pub use separation::{
    brute_force_separation, prefix_separation, separation, separation_real, PrefixSeparation,
    RealSep, SepResult,
};

use crate::digitalseq::PointSet;
use crate::{Error, Result};

/// Real-valued points in `[0, 1]^d`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPoints {
    coords: Vec<f64>,
    dim: usize,
}

impl RealPoints {
    pub fn new(coords: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument("dimension must be at least 1".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::Argument(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::Argument(format!("coordinate {c} outside [0, 1]")));
        }
        Ok(Self { coords, dim })
    }

    pub fn from_point_set(ps: &PointSet) -> Self {
        Self {
            coords: ps.to_f64_flat(),
            dim: ps.dim(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn push(&mut self, point: &[f64]) {
        assert_eq!(point.len(), self.dim, "dimension mismatch");
        self.coords.extend_from_slice(point);
    }

    pub fn truncated(&self, n: usize) -> RealPoints {
        let n = n.min(self.len());
        Self {
            coords: self.coords[..n * self.dim].to_vec(),
            dim: self.dim,
        }
    }
}

/// Separation of a point set: exact for dyadic inputs, floating otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Separation {
    Exact(SepResult),
    Real(RealSep),
}

impl Separation {
    pub fn q_value(&self) -> f64 {
        match self {
            Separation::Exact(s) => s.q_value(),
            Separation::Real(r) => r.q_value,
        }
    }

    pub fn witness(&self) -> (usize, usize) {
        match self {
            Separation::Exact(s) => s.witness,
            Separation::Real(r) => r.witness,
        }
    }

    pub fn exact(&self) -> Option<&SepResult> {
        match self {
            Separation::Exact(s) => Some(s),
            Separation::Real(_) => None,
        }
    }
}

/// Mesh ratio `h / q` bracketed by the fill-distance interval.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshRatioReport {
    pub n: usize,
    pub sep: Separation,
    pub fill: FillResult,
    pub ratio_lo: f64,
    pub ratio_hi: f64,
}

impl MeshRatioReport {
    fn new(n: usize, sep: Separation, fill: FillResult) -> Result<Self> {
        let q = sep.q_value();
        if q <= 0.0 {
            let (i, j) = sep.witness();
            return Err(Error::Degenerate(format!(
                "points {i} and {j} coincide, mesh ratio is unbounded"
            )));
        }
        Ok(Self {
            n,
            ratio_lo: fill.h_lo / q,
            ratio_hi: fill.h_hi / q,
            sep,
            fill,
        })
    }
}

/// Mesh ratio of a dyadic point set. Separation runs exactly at the set's
/// minimal precision.
pub fn mesh_ratio(ps: &PointSet, tol: f64) -> Result<MeshRatioReport> {
    if ps.len() < 2 {
        return Err(Error::Argument(
            "mesh ratio needs at least two points".into(),
        ));
    }
    let sep = separation(&ps.to_minimal_precision())?;
    if sep.s == 0 {
        return Err(Error::Degenerate(format!(
            "points {} and {} coincide, mesh ratio is unbounded",
            sep.witness.0, sep.witness.1
        )));
    }
    let fill = fill_distance(ps, tol)?;
    MeshRatioReport::new(ps.len(), Separation::Exact(sep), fill)
}

/// Mesh ratio of real-valued points, with floating-point separation.
pub fn mesh_ratio_real(points: &RealPoints, tol: f64) -> Result<MeshRatioReport> {
    if points.len() < 2 {
        return Err(Error::Argument(
            "mesh ratio needs at least two points".into(),
        ));
    }
    let sep = separation_real(points)?;
    let fill = fill_distance_real(points, tol)?;
    MeshRatioReport::new(points.len(), Separation::Real(sep), fill)
}
