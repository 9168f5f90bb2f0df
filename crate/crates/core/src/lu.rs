//! LU factorization with partial pivoting and the kernels built on it.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// Pivots smaller than this in magnitude are treated as singular.
pub const PIVOT_THRESHOLD: f64 = 1e-13;

/// `PA = LU` packed in one buffer: unit-lower `L` below the diagonal, `U` on
/// and above it.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    parity: f64,
}

impl LuFactorization {
    pub fn factor(a: &SquareMatrix) -> Result<Self> {
        let n = a.n();
        let mut lu = a.entries().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut parity = 1.0;

        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax < PIVOT_THRESHOLD {
                return Err(Error::SingularMatrix {
                    threshold: PIVOT_THRESHOLD,
                });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                parity = -parity;
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor != 0.0 {
                    for j in (k + 1)..n {
                        lu[i * n + j] -= factor * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Self {
            n,
            lu,
            perm,
            parity,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> SquareMatrix {
        let n = self.n;
        let mut inv = vec![0.0; n * n];
        let mut e = vec![0.0; n];
        for col in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[col] = 1.0;
            let x = self.solve(&e).expect("dimension checked");
            for (row, v) in x.into_iter().enumerate() {
                inv[row * n + col] = v;
            }
        }
        SquareMatrix::from_raw(n, inv)
    }

    pub fn determinant(&self) -> f64 {
        (0..self.n)
            .map(|i| self.lu[i * self.n + i])
            .product::<f64>()
            * self.parity
    }
}

/// Determinant by Gaussian elimination with partial pivoting. Unlike
/// [`LuFactorization::factor`] there is no singularity threshold: an exactly
/// zero pivot column yields 0, anything else is carried through.
pub fn determinant(a: &SquareMatrix) -> f64 {
    let n = a.n();
    let mut m = a.entries().to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, m[i * n + k].abs()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pmax == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = m[k * n + k];
        det *= pivot;
        for i in (k + 1)..n {
            let factor = m[i * n + k] / pivot;
            for j in (k + 1)..n {
                m[i * n + j] -= factor * m[k * n + j];
            }
        }
    }
    det
}

pub fn solve(a: &SquareMatrix, b: &[f64]) -> Result<Vec<f64>> {
    LuFactorization::factor(a)?.solve(b)
}

pub fn inverse(a: &SquareMatrix) -> Result<SquareMatrix> {
    Ok(LuFactorization::factor(a)?.inverse())
}

/// `‖A⁻¹‖∞` from the explicit inverse.
pub fn inverse_inf_norm(a: &SquareMatrix) -> Result<f64> {
    Ok(inverse(a)?.inf_norm())
}
