//! Exact base-2 digital sequences and quasi-uniformity diagnostics.
//!
//! Points of a digital sequence are dyadic rationals, so everything that
//! decides a yes/no question (closest pairs, the Sobol' separation identity,
//! lower-bound sweeps) runs in integer arithmetic. Only the fill distance is
//! computed in floating point, and it is reported as a certified interval.
//!
//! Module map:
//!
//! - [`gf2matrix`]: generating matrices over GF(2) and binomial parity.
//! - [`digitalseq`]: point generation, prefixes, exact precision handling.
//! - [`pointgeom`]: separation radius, fill distance, mesh ratio.
//! - [`claims`]: checks of the Pascal-matrix parity lemma and the 2D Sobol'
//!   separation theorem, plus the lower-bound and mesh-ratio scans.
//! - [`greedypack`]: greedy packing baseline with bounded mesh ratio.
//! - [`io`]: CSV and SVG rendering.
//! - [`cli`]: the command-line front end.

pub mod claims;
pub mod cli;
pub mod digitalseq;
mod error;
pub mod gf2matrix;
pub mod greedypack;
pub mod io;
pub mod pointgeom;

pub use digitalseq::{DyadicPoint, PointSet, SequenceSpec};
pub use error::{Error, Result};
pub use gf2matrix::GenMatrix;
