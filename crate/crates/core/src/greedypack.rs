//! Greedy packing: each new point maximizes the distance to all previous
//! points, starting from the center of the cube. Its mesh ratio stays near
//! 2, which is the baseline the Sobol' scans are compared against.

use crate::pointgeom::{fill_distance_real, RealPoints};
use crate::{Error, Result};

pub const DEFAULT_GREEDY_TOL: f64 = 1e-7;
pub const MAX_GREEDY_POINTS: usize = 512;

#[derive(Clone, Debug, PartialEq)]
pub struct GreedyState {
    points: RealPoints,
    tol: f64,
}

impl GreedyState {
    /// A state holding only the center of `[0, 1]^dim`.
    pub fn centered(dim: usize, tol: f64) -> Result<Self> {
        Self::from_points(RealPoints::new(vec![0.5; dim], dim)?, tol)
    }

    pub fn from_points(points: RealPoints, tol: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Argument(
                "greedy state needs a starting point".into(),
            ));
        }
        if tol.is_nan() || tol <= 0.0 || tol.is_infinite() {
            return Err(Error::Argument(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        Ok(Self { points, tol })
    }

    pub fn points(&self) -> &RealPoints {
        &self.points
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Appends the next greedy point and returns it.
    pub fn advance(&mut self) -> Result<Vec<f64>> {
        let next = greedy_next(self)?;
        self.points.push(&next);
        Ok(next)
    }

    pub fn into_points(self) -> RealPoints {
        self.points
    }
}

/// A point whose distance to the state's points is within `tol` of the
/// largest possible; this is the fill-distance witness.
pub fn greedy_next(state: &GreedyState) -> Result<Vec<f64>> {
    Ok(fill_distance_real(&state.points, state.tol)?.witness)
}

/// The first `n` points of the greedy sequence in `[0, 1]^d`.
pub fn greedy_sequence(d: usize, n: usize, tol: f64) -> Result<RealPoints> {
    if !(1..=3).contains(&d) {
        return Err(Error::Argument(format!("dimension {d} outside 1..=3")));
    }
    if n == 0 {
        return Err(Error::Argument("sequence length must be positive".into()));
    }
    if n > MAX_GREEDY_POINTS {
        return Err(Error::Resource(format!(
            "greedy sequences are limited to {MAX_GREEDY_POINTS} points, got {n}"
        )));
    }
    let mut state = GreedyState::centered(d, tol)?;
    for _ in 1..n {
        state.advance()?;
    }
    Ok(state.into_points())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_picks_origin_corner() {
        let state = GreedyState::centered(2, DEFAULT_GREEDY_TOL).unwrap();
        assert_eq!(greedy_next(&state).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn opposite_corners_then_off_diagonal() {
        let pts = RealPoints::new(vec![0.5, 0.5, 0.0, 0.0, 1.0, 1.0], 2).unwrap();
        let state = GreedyState::from_points(pts, DEFAULT_GREEDY_TOL).unwrap();
        assert_eq!(greedy_next(&state).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn one_dimensional() {
        let state = GreedyState::centered(1, DEFAULT_GREEDY_TOL).unwrap();
        assert_eq!(greedy_next(&state).unwrap(), vec![0.0]);
        let seq = greedy_sequence(1, 3, DEFAULT_GREEDY_TOL).unwrap();
        assert_eq!(seq.flat(), &[0.5, 0.0, 1.0]);
    }

    #[test]
    fn center_plus_corners() {
        let seq = greedy_sequence(2, 5, DEFAULT_GREEDY_TOL).unwrap();
        assert_eq!(seq.point(0), &[0.5, 0.5]);
        let mut corners: Vec<Vec<f64>> = (1..5).map(|i| seq.point(i).to_vec()).collect();
        corners.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(
            corners,
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0]
            ]
        );
    }

    #[test]
    fn single_point_sequence() {
        assert_eq!(greedy_sequence(2, 1, 1e-7).unwrap().flat(), &[0.5, 0.5]);
    }

    #[test]
    fn argument_checks() {
        assert!(matches!(
            greedy_sequence(4, 3, 1e-7),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            greedy_sequence(2, 0, 1e-7),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            greedy_sequence(2, 513, 1e-7),
            Err(Error::Resource(_))
        ));
        assert!(GreedyState::centered(2, 0.0).is_err());
    }
}
