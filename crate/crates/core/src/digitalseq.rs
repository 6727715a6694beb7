//! Base-2 digital sequences in exact dyadic arithmetic.
//!
//! The `n`-th point has coordinate `j` equal to `sum_i y_i 2^{-i}`, where the
//! digit vector `y = C_j (n_0, n_1, ...)^T mod 2` and `n_k` are the binary
//! digits of `n`. Coordinates are kept as integer mantissas over `2^p`.

use rayon::prelude::*;

use crate::gf2matrix::{identity_matrix, pascal_matrix, GenMatrix, MAX_SIZE};
use crate::{Error, Result};

/// Working precision used when the caller has no better choice.
pub const DEFAULT_PRECISION: u32 = 64;

/// A point of `[0, 1)^d` with coordinate `j` equal to `mantissas[j] / 2^precision`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicPoint {
    mantissas: Vec<u64>,
    precision: u32,
}

impl DyadicPoint {
    pub fn new(mantissas: Vec<u64>, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        if mantissas.is_empty() {
            return Err(Error::Argument(
                "point must have at least one coordinate".into(),
            ));
        }
        if let Some(m) = mantissas.iter().find(|&&m| !fits(m, precision)) {
            return Err(Error::Argument(format!(
                "mantissa {m} does not fit in {precision} bits"
            )));
        }
        Ok(Self {
            mantissas,
            precision,
        })
    }

    pub fn mantissas(&self) -> &[u64] {
        &self.mantissas
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn dim(&self) -> usize {
        self.mantissas.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.mantissas
            .iter()
            .map(|&m| mantissa_to_f64(m, self.precision))
            .collect()
    }
}

/// The prefix `P_n = (x_0, ..., x_{n-1})` of a sequence, stored flat with a
/// shared dimension and precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    mantissas: Vec<u64>,
    dim: usize,
    precision: u32,
    label: String,
}

impl PointSet {
    /// Builds a point set from row-major mantissas (`dim` per point).
    pub fn from_flat(
        mantissas: Vec<u64>,
        dim: usize,
        precision: u32,
        label: impl Into<String>,
    ) -> Result<Self> {
        check_precision(precision)?;
        if dim == 0 {
            return Err(Error::Argument("dimension must be at least 1".into()));
        }
        if !mantissas.len().is_multiple_of(dim) {
            return Err(Error::Argument(format!(
                "{} mantissas do not split into points of dimension {dim}",
                mantissas.len()
            )));
        }
        if let Some(m) = mantissas.iter().find(|&&m| !fits(m, precision)) {
            return Err(Error::Argument(format!(
                "mantissa {m} does not fit in {precision} bits"
            )));
        }
        Ok(Self {
            mantissas,
            dim,
            precision,
            label: label.into(),
        })
    }

    /// Builds a point set from individual points, which must agree on
    /// dimension and precision.
    pub fn from_points(points: &[DyadicPoint], label: impl Into<String>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::Argument("empty point list".into()))?;
        let (dim, precision) = (first.dim(), first.precision());
        let mut flat = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.dim() != dim || p.precision() != precision {
                return Err(Error::Argument(
                    "points disagree on dimension or precision".into(),
                ));
            }
            flat.extend_from_slice(p.mantissas());
        }
        Self::from_flat(flat, dim, precision, label)
    }

    pub fn len(&self) -> usize {
        self.mantissas.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.mantissas.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Mantissas of point `i`.
    pub fn coords(&self, i: usize) -> &[u64] {
        &self.mantissas[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point(&self, i: usize) -> DyadicPoint {
        DyadicPoint {
            mantissas: self.coords(i).to_vec(),
            precision: self.precision,
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u64]> + '_ {
        self.mantissas.chunks_exact(self.dim)
    }

    /// All mantissas, row-major.
    pub fn flat(&self) -> &[u64] {
        &self.mantissas
    }

    /// Coordinates as `f64`, row-major. Exact for precision up to 53.
    pub fn to_f64_flat(&self) -> Vec<f64> {
        self.mantissas
            .iter()
            .map(|&m| mantissa_to_f64(m, self.precision))
            .collect()
    }

    /// The first `n` points.
    pub fn truncated(&self, n: usize) -> PointSet {
        let n = n.min(self.len());
        PointSet {
            mantissas: self.mantissas[..n * self.dim].to_vec(),
            dim: self.dim,
            precision: self.precision,
            label: self.label.clone(),
        }
    }

    /// Smallest precision at which every coordinate is still exact.
    pub fn minimal_precision(&self) -> u32 {
        let trailing = self
            .mantissas
            .iter()
            .filter(|&&m| m != 0)
            .map(|m| m.trailing_zeros())
            .min()
            .unwrap_or(self.precision);
        self.precision.saturating_sub(trailing).max(1)
    }

    /// The same points at their minimal exact precision.
    pub fn to_minimal_precision(&self) -> PointSet {
        reduce_precision(self, self.minimal_precision())
            .expect("minimal precision never drops set bits")
    }

    /// The same points with every mantissa shifted left by `extra` bits.
    pub fn refined(&self, extra: u32) -> Result<PointSet> {
        let target = self.precision + extra;
        check_precision(target)?;
        Ok(PointSet {
            mantissas: self.mantissas.iter().map(|&m| m << extra).collect(),
            dim: self.dim,
            precision: target,
            label: self.label.clone(),
        })
    }
}

/// A digital sequence over GF(2): one generating matrix per coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    matrices: Vec<GenMatrix>,
    label: String,
}

impl SequenceSpec {
    pub fn new(matrices: Vec<GenMatrix>, label: impl Into<String>) -> Result<Self> {
        let depth = matrices
            .first()
            .map(GenMatrix::depth)
            .ok_or_else(|| Error::Argument("a sequence needs at least one matrix".into()))?;
        if matrices.iter().any(|m| m.depth() != depth) {
            return Err(Error::Argument(
                "generating matrices differ in depth".into(),
            ));
        }
        Ok(Self {
            matrices,
            label: label.into(),
        })
    }

    pub fn matrices(&self) -> &[GenMatrix] {
        &self.matrices
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    pub fn depth(&self) -> u32 {
        self.matrices[0].depth()
    }

    /// Number of index digits every matrix can consume.
    pub fn width(&self) -> usize {
        self.matrices
            .iter()
            .map(GenMatrix::width)
            .min()
            .unwrap_or(0)
    }

    fn check_index(&self, n: u64) -> Result<()> {
        let width = self.width();
        if width < 64 && n >> width != 0 {
            return Err(Error::Range(format!(
                "index {n} needs more than {width} digits"
            )));
        }
        Ok(())
    }

    fn check_output_precision(&self, precision: u32) -> Result<()> {
        check_precision(precision)?;
        if precision > self.depth() {
            return Err(Error::Precision(format!(
                "precision {precision} exceeds matrix depth {}",
                self.depth()
            )));
        }
        Ok(())
    }
}

/// The two-dimensional Sobol' sequence: identity and Pascal matrices.
pub fn sobol2d_spec() -> SequenceSpec {
    let matrices = vec![
        identity_matrix(MAX_SIZE).expect("64 is a valid size"),
        pascal_matrix(MAX_SIZE).expect("64 is a valid size"),
    ];
    SequenceSpec::new(matrices, "sobol2d").expect("equal depths")
}

/// The van der Corput sequence in base 2 (identity matrix, one coordinate).
pub fn van_der_corput_spec() -> SequenceSpec {
    let matrices = vec![identity_matrix(MAX_SIZE).expect("64 is a valid size")];
    SequenceSpec::new(matrices, "vdc").expect("single matrix")
}

/// Looks up a built-in sequence by label.
pub fn builtin_spec(label: &str) -> Option<SequenceSpec> {
    match label {
        "sobol2d" => Some(sobol2d_spec()),
        "vdc" | "van-der-corput" => Some(van_der_corput_spec()),
        _ => None,
    }
}

/// The `n`-th point of `spec`, with digits beyond `precision` truncated.
pub fn digital_point(spec: &SequenceSpec, n: u64, precision: u32) -> Result<DyadicPoint> {
    spec.check_index(n)?;
    spec.check_output_precision(precision)?;
    let mantissas = spec
        .matrices
        .iter()
        .map(|m| digits_to_mantissa(m.apply(n), precision))
        .collect();
    Ok(DyadicPoint {
        mantissas,
        precision,
    })
}

/// The first `n` points of `spec`, in sequence order.
pub fn prefix(spec: &SequenceSpec, n: usize, precision: u32) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::Argument("prefix length must be positive".into()));
    }
    spec.check_index(n as u64 - 1)?;
    spec.check_output_precision(precision)?;
    let dim = spec.dim();
    let mut flat = vec![0u64; n * dim];
    flat.par_chunks_mut(dim)
        .enumerate()
        .with_min_len(1024)
        .for_each(|(i, row)| {
            for (slot, m) in row.iter_mut().zip(&spec.matrices) {
                *slot = digits_to_mantissa(m.apply(i as u64), precision);
            }
        });
    Ok(PointSet {
        mantissas: flat,
        dim,
        precision,
        label: spec.label.clone(),
    })
}

/// Re-expresses `ps` at a lower precision, failing if any dropped bit is set.
pub fn reduce_precision(ps: &PointSet, target: u32) -> Result<PointSet> {
    check_precision(target)?;
    if target > ps.precision {
        return Err(Error::Precision(format!(
            "target precision {target} exceeds current {}",
            ps.precision
        )));
    }
    let shift = ps.precision - target;
    if shift == 0 {
        return Ok(ps.clone());
    }
    let dropped = (1u64 << shift) - 1;
    if let Some(pos) = ps.mantissas.iter().position(|&m| m & dropped != 0) {
        return Err(Error::Precision(format!(
            "point {} needs more than {target} bits",
            pos / ps.dim
        )));
    }
    Ok(PointSet {
        mantissas: ps.mantissas.iter().map(|&m| m >> shift).collect(),
        dim: ps.dim,
        precision: target,
        label: ps.label.clone(),
    })
}

/// Maps output digit `i` (bit `i - 1`) to value `2^{-i}`, keeping `precision` digits.
#[inline]
fn digits_to_mantissa(digits: u64, precision: u32) -> u64 {
    digits.reverse_bits() >> (64 - precision)
}

fn check_precision(precision: u32) -> Result<()> {
    if (1..=64).contains(&precision) {
        Ok(())
    } else {
        Err(Error::Precision(format!(
            "precision {precision} outside 1..=64"
        )))
    }
}

#[inline]
fn fits(m: u64, precision: u32) -> bool {
    precision >= 64 || m >> precision == 0
}

pub(crate) fn mantissa_to_f64(m: u64, precision: u32) -> f64 {
    // Two steps keep the scaling exact for precision 64.
    m as f64 / (1u64 << (precision / 2)) as f64 / (1u64 << (precision - precision / 2)) as f64
}
