//! Exact LCP solves by complementary-support enumeration, the natural
//! residual, and the a-posteriori error check
//! `‖x − x*‖∞ ≤ bound · ‖r(x)‖∞`.

use crate::error::{Error, Result};
use crate::lu::solve;
use crate::matrix::{is_p_matrix_bruteforce, SquareMatrix, P_MATRIX_MAX_DIM};

pub const MAX_LCP_DIM: usize = 20;
/// Accepted slack on `x ≥ 0` and `Mx + q ≥ 0`.
pub const NONNEG_TOL: f64 = 1e-10;
pub const COMPLEMENTARITY_TOL: f64 = 1e-9;
/// Additive slack in [`validate_error_bound`].
pub const ERROR_BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LcpInstance {
    m: SquareMatrix,
    q: Vec<f64>,
}

impl LcpInstance {
    pub fn new(m: SquareMatrix, q: Vec<f64>) -> Result<Self> {
        if q.len() != m.n() {
            return Err(Error::DimensionMismatch {
                expected: m.n(),
                got: q.len(),
            });
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("q must be finite".into()));
        }
        Ok(Self { m, q })
    }

    pub fn m(&self) -> &SquareMatrix {
        &self.m
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    /// `Mx + q`.
    pub fn affine(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut w = self.m.mul_vec(x)?;
        w.iter_mut().zip(&self.q).for_each(|(w, q)| *w += q);
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcpSolution {
    pub x_star: Vec<f64>,
    pub w_star: Vec<f64>,
    /// Indices with `x*_i > 0`.
    pub support: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Candidate for support mask `mask`, or `None` if it is not admissible.
fn try_support(inst: &LcpInstance, mask: u32) -> Option<Vec<f64>> {
    let n = inst.n();
    let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
    let mut x = vec![0.0; n];
    if !idx.is_empty() {
        let sub = inst.m.principal_submatrix(&idx);
        let rhs: Vec<f64> = idx.iter().map(|&i| -inst.q[i]).collect();
        let xs = solve(&sub, &rhs).ok()?;
        if xs.iter().any(|&v| v < -NONNEG_TOL) {
            return None;
        }
        for (&i, v) in idx.iter().zip(xs) {
            x[i] = v;
        }
    }
    let w = inst.affine(&x).ok()?;
    let feasible = (0..n)
        .filter(|&i| mask & (1 << i) == 0)
        .all(|i| w[i] >= -NONNEG_TOL);
    feasible.then_some(x)
}

fn check_dimension(inst: &LcpInstance) -> Result<()> {
    let n = inst.n();
    if n > MAX_LCP_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: MAX_LCP_DIM,
        });
    }
    if n <= P_MATRIX_MAX_DIM && !is_p_matrix_bruteforce(&inst.m)? {
        return Err(Error::NotPMatrix);
    }
    Ok(())
}

/// Support masks (bit `i` set means `i ∈ S`) that yield an admissible
/// solution, in increasing mask order.
pub fn accepted_supports(inst: &LcpInstance) -> Result<Vec<u32>> {
    check_dimension(inst)?;
    Ok((0..1u32 << inst.n())
        .filter(|&mask| try_support(inst, mask).is_some())
        .collect())
}

/// Returns the first admissible support in increasing mask order. For a
/// P-matrix the solution is unique, so degenerate ties only differ by
/// round-off.
pub fn solve_enumeration(inst: &LcpInstance) -> Result<LcpSolution> {
    check_dimension(inst)?;
    let x_star = (0..1u32 << inst.n())
        .find_map(|mask| try_support(inst, mask))
        .ok_or(Error::NoSolutionFound)?;
    let w_star = inst.affine(&x_star)?;
    if x_star
        .iter()
        .zip(&w_star)
        .any(|(x, w)| (x * w).abs() > COMPLEMENTARITY_TOL)
    {
        return Err(Error::NoSolutionFound);
    }
    let support = (0..inst.n()).filter(|&i| x_star[i] > 0.0).collect();
    Ok(LcpSolution {
        x_star,
        w_star,
        support,
    })
}

/// Natural residual `min(x, Mx + q)`, componentwise.
pub fn residual(inst: &LcpInstance, x: &[f64]) -> Result<Vec<f64>> {
    let w = inst.affine(x)?;
    Ok(x.iter().zip(w).map(|(&a, b)| a.min(b)).collect())
}

pub fn validate_error_bound(inst: &LcpInstance, x: &[f64], bound: f64) -> Result<ErrorBoundCheck> {
    let sol = solve_enumeration(inst)?;
    validate_against(inst, &sol, x, bound)
}

/// As [`validate_error_bound`], reusing an already computed solution.
pub fn validate_against(
    inst: &LcpInstance,
    sol: &LcpSolution,
    x: &[f64],
    bound: f64,
) -> Result<ErrorBoundCheck> {
    let r = residual(inst, x)?;
    let diff: Vec<f64> = x.iter().zip(&sol.x_star).map(|(a, b)| a - b).collect();
    let lhs = inf_norm(&diff);
    let r_norm = inf_norm(&r);
    // 0 · ∞ is taken as 0: a zero residual means x is the solution
    let rhs = if r_norm == 0.0 { 0.0 } else { bound * r_norm };
    Ok(ErrorBoundCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + ERROR_BOUND_SLACK,
    })
}
