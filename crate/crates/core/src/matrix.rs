//! Dense square matrices, classification predicates and the `B⁺ + C` split.
//!
//! Storage is row-major: `entries[i * n + j]` holds `A[i, j]`. All
//! constructors reject non-finite entries, so every `SquareMatrix` in
//! circulation is finite.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::lu::determinant;

/// Default margin used to enforce the strict inequalities of the
/// classification predicates under floating round-off.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest dimension for which all `2ⁿ − 1` principal minors are evaluated.
pub const P_MATRIX_MAX_DIM: usize = 15;

#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry {
                row: pos / n,
                col: pos % n,
            });
        }
        Ok(Self { n, entries })
    }

    /// Builds a matrix from rows; every row must have as many entries as
    /// there are rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "dimension must be at least 1");
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.entries[i * m.n + i] = v;
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks_exact(self.n)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `‖A‖∞`, the maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        self.rows()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self
            .rows()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Principal submatrix on the given (sorted, distinct) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> SquareMatrix {
        let k = idx.len();
        let mut entries = Vec::with_capacity(k * k);
        for &i in idx {
            for &j in idx {
                entries.push(self.get(i, j));
            }
        }
        SquareMatrix { n: k, entries }
    }

    /// Largest entrywise absolute difference, or `None` on a dimension clash.
    pub fn max_abs_diff(&self, other: &SquareMatrix) -> Option<f64> {
        (self.n == other.n).then(|| {
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }

    pub(crate) fn from_raw(n: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.n + j]
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|v| format!("{v:>10.6}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// The diagonal of `D = diag(d)` with every `d_i ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DScaling {
    d: Vec<f64>,
}

impl DScaling {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = d
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::ScalingOutOfRange { index, value });
        }
        Ok(Self { d })
    }

    pub fn ones(n: usize) -> Self {
        Self { d: vec![1.0; n] }
    }

    pub fn zeros(n: usize) -> Self {
        Self { d: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.d
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.d
    }
}

/// `M = B⁺ + C`, where `C` repeats `r⁺_i = max(0, max_{j≠i} m_ij)` across row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BPlusSplit {
    pub b_plus: SquareMatrix,
    pub c: SquareMatrix,
    pub r_plus: Vec<f64>,
}

impl BPlusSplit {
    pub fn n(&self) -> usize {
        self.b_plus.n()
    }

    /// `b_ii > 0` and `b_ii − Σ_{j≠i} |b_ij| > tol` in every row.
    pub fn is_b_matrix_split(&self, tol: f64) -> bool {
        (0..self.n()).all(|i| self.b_plus.get(i, i) > 0.0) && is_sdd(&self.b_plus, tol)
    }
}

/// Why a matrix fails the B-matrix definition; rows and columns are 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BMatrixViolation {
    /// `Σ_k m_ik ≤ tol`.
    RowSumNotPositive { row: usize, row_sum: f64 },
    /// `(1/n) Σ_k m_ik − m_ij ≤ tol`.
    OffDiagonalNotBelowMean {
        row: usize,
        col: usize,
        row_mean: f64,
        entry: f64,
    },
}

impl fmt::Display for BMatrixViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BMatrixViolation::RowSumNotPositive { row, row_sum } => {
                write!(f, "row {}: row sum {row_sum} is not positive", row + 1)
            }
            BMatrixViolation::OffDiagonalNotBelowMean {
                row,
                col,
                row_mean,
                entry,
            } => write!(
                f,
                "row {}: row mean {row_mean} does not exceed m[{}][{}] = {entry}",
                row + 1,
                row + 1,
                col + 1
            ),
        }
    }
}

/// First violated B-matrix condition in row order, or `None` for a B-matrix.
pub fn b_matrix_violation(m: &SquareMatrix, tol: f64) -> Option<BMatrixViolation> {
    let n = m.n();
    for (row, r) in m.rows().enumerate() {
        let row_sum: f64 = r.iter().sum();
        if row_sum <= tol {
            return Some(BMatrixViolation::RowSumNotPositive { row, row_sum });
        }
        let row_mean = row_sum / n as f64;
        for (col, &entry) in r.iter().enumerate() {
            if col != row && row_mean - entry <= tol {
                return Some(BMatrixViolation::OffDiagonalNotBelowMean {
                    row,
                    col,
                    row_mean,
                    entry,
                });
            }
        }
    }
    None
}

pub fn is_b_matrix(m: &SquareMatrix, tol: f64) -> bool {
    b_matrix_violation(m, tol).is_none()
}

/// `|m_ii| − Σ_{j≠i} |m_ij| > tol` for every row.
pub fn is_sdd(m: &SquareMatrix, tol: f64) -> bool {
    m.rows().enumerate().all(|(i, r)| {
        let off: f64 = r
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.abs())
            .sum();
        r[i].abs() - off > tol
    })
}

/// Checks all `2ⁿ − 1` principal minors for positivity.
pub fn is_p_matrix_bruteforce(m: &SquareMatrix) -> Result<bool> {
    let n = m.n();
    if n > P_MATRIX_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: P_MATRIX_MAX_DIM,
        });
    }
    let mut idx = Vec::with_capacity(n);
    for mask in 1u32..(1u32 << n) {
        idx.clear();
        idx.extend((0..n).filter(|&i| mask & (1 << i) != 0));
        if determinant(&m.principal_submatrix(&idx)) <= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Splits any real square matrix into `B⁺ + C`. The split is defined for
/// every matrix; whether `M` is a B-matrix is a separate question.
pub fn split_b_plus(m: &SquareMatrix) -> BPlusSplit {
    let n = m.n();
    let r_plus: Vec<f64> = m
        .rows()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .fold(0.0, f64::max)
        })
        .collect();
    let mut b = Vec::with_capacity(n * n);
    let mut c = Vec::with_capacity(n * n);
    for (r, &rp) in m.rows().zip(&r_plus) {
        for &v in r {
            b.push(v - rp);
            c.push(rp);
        }
    }
    BPlusSplit {
        b_plus: SquareMatrix::from_raw(n, b),
        c: SquareMatrix::from_raw(n, c),
        r_plus,
    }
}

/// `M_D = I − D + DM`.
pub fn scaled_matrix(m: &SquareMatrix, d: &DScaling) -> Result<SquareMatrix> {
    let n = m.n();
    if d.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: d.len(),
        });
    }
    let mut out = Vec::with_capacity(n * n);
    for (i, (r, &di)) in m.rows().zip(d.as_slice()).enumerate() {
        for (j, &v) in r.iter().enumerate() {
            out.push(if i == j { 1.0 - di + di * v } else { di * v });
        }
    }
    Ok(SquareMatrix::from_raw(n, out))
}
