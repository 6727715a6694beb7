//! Generating matrices over GF(2).
//!
//! A matrix is stored column-major as one `u64` per column. Row `i` and
//! column `j` in 1-based matrix notation map to bit `i - 1` of `cols[j - 1]`.
//! That convention is used throughout the crate.

use crate::{Error, Result};

/// Largest supported matrix dimension: one column per machine word.
pub const MAX_SIZE: usize = 64;

/// A GF(2) generating matrix with at most 64 rows and 64 columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenMatrix {
    cols: Vec<u64>,
    depth: u32,
}

impl GenMatrix {
    /// Builds a matrix from column masks, keeping the lowest `depth` rows.
    ///
    /// Fails if `depth > 64`, if there are more than 64 columns, or if any
    /// column has a bit set at or above `depth`.
    pub fn new(cols: Vec<u64>, depth: u32) -> Result<Self> {
        if depth as usize > MAX_SIZE {
            return Err(Error::Argument(format!("depth {depth} exceeds {MAX_SIZE}")));
        }
        if cols.len() > MAX_SIZE {
            return Err(Error::Argument(format!(
                "width {} exceeds {MAX_SIZE}",
                cols.len()
            )));
        }
        let mask = row_mask(depth);
        if let Some(j) = cols.iter().position(|&c| c & !mask != 0) {
            return Err(Error::Argument(format!(
                "column {j} has bits at or above depth {depth}"
            )));
        }
        Ok(Self { cols, depth })
    }

    pub fn cols(&self) -> &[u64] {
        &self.cols
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn width(&self) -> usize {
        self.cols.len()
    }

    /// Entry `c_{i,j}` with 1-based indices; zero outside the stored block.
    pub fn entry(&self, i: usize, j: usize) -> bool {
        if i == 0 || j == 0 || i > self.depth as usize || j > self.cols.len() {
            return false;
        }
        self.cols[j - 1] >> (i - 1) & 1 == 1
    }

    /// Multiplies the matrix by the digit vector of `index` over GF(2).
    ///
    /// The caller guarantees `index` has no bits at or above `width`.
    #[inline]
    pub(crate) fn apply(&self, index: u64) -> u64 {
        let mut acc = 0u64;
        let mut rest = index;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            acc ^= self.cols[k];
            rest &= rest - 1;
        }
        acc
    }
}

fn row_mask(rows: u32) -> u64 {
    if rows >= 64 {
        u64::MAX
    } else {
        (1u64 << rows) - 1
    }
}

fn check_size(size: usize) -> Result<()> {
    if (1..=MAX_SIZE).contains(&size) {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "matrix size {size} outside 1..={MAX_SIZE}"
        )))
    }
}

/// The `size x size` identity matrix.
pub fn identity_matrix(size: usize) -> Result<GenMatrix> {
    check_size(size)?;
    let cols = (0..size).map(|j| 1u64 << j).collect();
    GenMatrix::new(cols, size as u32)
}

/// The `size x size` Pascal matrix mod 2, `c_{i,j} = C(j - 1, i - 1) mod 2`.
pub fn pascal_matrix(size: usize) -> Result<GenMatrix> {
    check_size(size)?;
    let cols = (0..size as u64)
        .map(|j| (0..=j).fold(0u64, |col, i| col | (binomial_parity(j, i) as u64) << i))
        .collect();
    GenMatrix::new(cols, size as u32)
}

/// `C(n, k) mod 2`. By Lucas' theorem this is 1 exactly when the binary
/// digits of `k` are a subset of those of `n`.
#[inline]
pub fn binomial_parity(n: u64, k: u64) -> u8 {
    (k & n == k) as u8
}

/// Whether every row of the upper-left `m x m` block of the Pascal matrix
/// has an odd number of ones.
pub fn row_parity_all_odd(m: usize) -> Result<bool> {
    check_size(m)?;
    let pascal = pascal_matrix(m)?;
    // XOR of all columns gives the row-sum parities, one bit per row.
    let parities = pascal.cols().iter().fold(0u64, |acc, &c| acc ^ c);
    Ok(parities == row_mask(m as u32))
}

/// Whether the upper-left `m x m` block of `matrix` is invertible over GF(2).
pub fn is_nonsingular_upper_left(matrix: &GenMatrix, m: usize) -> Result<bool> {
    let limit = (matrix.depth() as usize).min(matrix.width());
    if m == 0 || m > limit {
        return Err(Error::Argument(format!(
            "block size {m} outside 1..={limit}"
        )));
    }
    let mask = row_mask(m as u32);
    // basis[b] holds a reduced vector whose highest set bit is b.
    let mut basis = [0u64; MAX_SIZE];
    for &col in &matrix.cols()[..m] {
        let mut v = col & mask;
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                break;
            }
            v ^= basis[top];
        }
        if v == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}
