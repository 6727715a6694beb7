//! Machine checks for the 2D Sobol' separation results.
//!
//! - Pascal-matrix row parity: for `m = 2^w - 1` every row of the upper-left
//!   `m x m` block has an odd number of ones.
//! - Separation identity: for `n = 2^m - 1` with `m = 2^w - 1`, `w > 1`,
//!   `q(P_n) = 1 / (sqrt(2) (n + 1))`. At scale `2^m` this reads `s == 2`.
//! - Lower-bound sweeps of the form `q(P_n) >= sqrt(d) / (c n)`.
//! - Mesh-ratio scans showing `h / q` growing along the subsequence above.
//!
//! Every pass/fail decision here is made in integer arithmetic.

use rayon::prelude::*;

use crate::digitalseq::{prefix, reduce_precision, sobol2d_spec, SequenceSpec, DEFAULT_PRECISION};
use crate::gf2matrix::{binomial_parity, is_nonsingular_upper_left, row_parity_all_odd};
use crate::pointgeom::{mesh_ratio, prefix_separation, separation, MeshRatioReport};
use crate::{Error, Result};

/// Largest prefix `verify_theorem` builds unless told otherwise.
pub const DEFAULT_SCALE_CAP: u64 = 1 << 20;

/// Largest `n_max` accepted by [`check_ss07_bound`].
pub const MAX_SS07_N: usize = 1 << 16;

/// Row parity holds for `m = 2^w - 1`, `w = 1..=w_max`.
pub fn verify_lemma(w_max: u32) -> Result<bool> {
    if !(1..=6).contains(&w_max) {
        return Err(Error::Range(format!("w_max {w_max} outside 1..=6")));
    }
    for w in 1..=w_max {
        if !row_parity_all_odd((1usize << w) - 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `sum_{j=i..m} C(j-1, i-1) == C(m, i) (mod 2)` for all `1 <= i <= m <= m_max`.
pub fn check_hockey_stick_parity(m_max: u64) -> Result<bool> {
    if m_max > 64 {
        return Err(Error::Range(format!("m_max {m_max} exceeds 64")));
    }
    for m in 1..=m_max {
        for i in 1..=m {
            let lhs = (i..=m).fold(0u8, |acc, j| acc ^ binomial_parity(j - 1, i - 1));
            if lhs != binomial_parity(m, i) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of checking the separation identity for one `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremCertificate {
    pub w: u32,
    /// `2^w - 1`; the working precision.
    pub m: u32,
    /// `2^m - 1`; the prefix length.
    pub n: usize,
    /// Minimal squared distance among `P_n` at scale `2^m`.
    pub s: u128,
    /// Lexicographically smallest pair attaining `s`.
    pub witness: (usize, usize),
    /// Squared scaled distance between `x_1` and `x_{n-1}`.
    pub proof_pair_s: u128,
    /// Both mantissas of `x_{n-1}` equal `2^{m-1} - 1`.
    pub last_point_ok: bool,
    /// Each coordinate of the first `2^m` points permutes `0..2^m`.
    pub permutation_ok: bool,
    /// Both generating matrices have nonsingular upper-left `m x m` blocks.
    pub nonsingular_ok: bool,
    /// `s == 2`, i.e. `q(P_n) = 1 / (sqrt(2) (n + 1))`.
    pub passed: bool,
}

impl TheoremCertificate {
    /// `s (n+1)^2 == 2 * 2^{2m}`: the claimed closed form, in integers.
    pub fn closed_form_holds(&self) -> bool {
        let n1 = self.n as u128 + 1;
        self.s * n1 * n1 == 2u128 << (2 * self.m)
    }

    /// All recorded sub-checks agree with the proof.
    pub fn all_checks_hold(&self) -> bool {
        self.passed
            && self.proof_pair_s == 2
            && self.last_point_ok
            && self.permutation_ok
            && self.nonsingular_ok
            && self.closed_form_holds()
    }

    pub fn q_value(&self) -> f64 {
        (self.s as f64).sqrt() / 2f64.powi(self.m as i32 + 1)
    }
}

/// Checks `q(P_n) = 1/(sqrt(2)(n+1))` for `n = 2^m - 1`, `m = 2^w - 1`.
pub fn verify_theorem(w: u32, scale_cap: u64) -> Result<TheoremCertificate> {
    if w < 2 {
        return Err(Error::Argument(format!("w must be at least 2, got {w}")));
    }
    if w > 6 {
        return Err(Error::Resource(format!(
            "w = {w} needs more than 2^63 points"
        )));
    }
    let m = (1u32 << w) - 1;
    let net_size = 1u64 << m;
    if net_size > scale_cap {
        return Err(Error::Resource(format!(
            "w = {w} needs 2^{m} points, above the cap of {scale_cap}"
        )));
    }
    let spec = sobol2d_spec();
    let net_size = net_size as usize;
    let n = net_size - 1;
    let net = reduce_precision(&prefix(&spec, net_size, DEFAULT_PRECISION)?, m)?;
    let pn = net.truncated(n);
    let sep = separation(&pn)?;

    let half = (1u64 << (m - 1)) - 1;
    let last_point_ok = pn.coords(n - 1) == [half, half];
    let proof_pair_s = pn
        .coords(1)
        .iter()
        .zip(pn.coords(n - 1))
        .map(|(&a, &b)| (a.abs_diff(b) as u128).pow(2))
        .sum();
    let permutation_ok = (0..net.dim()).all(|axis| {
        let mut seen = vec![false; net_size];
        net.iter()
            .all(|x| !std::mem::replace(&mut seen[x[axis] as usize], true))
    });
    let nonsingular_ok = spec
        .matrices()
        .iter()
        .map(|c| is_nonsingular_upper_left(c, m as usize))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);

    Ok(TheoremCertificate {
        w,
        m,
        n,
        s: sep.s,
        witness: sep.witness,
        proof_pair_s,
        last_point_ok,
        permutation_ok,
        nonsingular_ok,
        passed: sep.s == 2,
    })
}

/// Every `n` in `2..=n_max` where the 2D Sobol' prefix violates
/// `q(P_n) >= sqrt(2) / (c n)`, with `c = 2`, or `c = 4` when `halved`.
///
/// With `q = sqrt(s) / 2^{p+1}` the bound is `s c^2 n^2 >= d 4^{p+1}`;
/// equality counts as satisfied.
pub fn check_ss07_bound(n_max: usize, halved: bool) -> Result<Vec<usize>> {
    if n_max > MAX_SS07_N {
        return Err(Error::Resource(format!(
            "n_max {n_max} exceeds {MAX_SS07_N}"
        )));
    }
    if n_max < 2 {
        return Ok(Vec::new());
    }
    let spec = sobol2d_spec();
    let ps = prefix(&spec, n_max, DEFAULT_PRECISION)?.to_minimal_precision();
    let profile = prefix_separation(&ps)?;
    let c: u128 = if halved { 4 } else { 2 };
    let dim = ps.dim() as u128;
    let rhs = dim << (2 * (profile.precision + 1));
    Ok((2..=n_max)
        .filter(|&n| {
            let n = n as u128;
            profile.s_at(n as usize) * c * c * n * n < rhs
        })
        .collect())
}

/// Mesh-ratio reports for the given prefix lengths, in input order.
pub fn mesh_ratio_scan(
    spec: &SequenceSpec,
    n_list: &[usize],
    tol: f64,
) -> Result<Vec<MeshRatioReport>> {
    if let Some(&n) = n_list.iter().find(|&&n| n < 2) {
        return Err(Error::Argument(format!("prefix length {n} is below 2")));
    }
    let longest = n_list.iter().copied().max().unwrap_or(0);
    if longest == 0 {
        return Ok(Vec::new());
    }
    let precision = spec.depth().min(DEFAULT_PRECISION);
    let full = prefix(spec, longest, precision)?;
    n_list
        .par_iter()
        .map(|&n| mesh_ratio(&full.truncated(n), tol))
        .collect()
}

/// The prefix lengths `2^m - 1`, `m = 2^w - 1`, for `w` in `ws`.
pub fn theorem_lengths(ws: impl IntoIterator<Item = u32>) -> Vec<usize> {
    ws.into_iter()
        .map(|w| (1usize << ((1u32 << w) - 1)) - 1)
        .collect()
}
