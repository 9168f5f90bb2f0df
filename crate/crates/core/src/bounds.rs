//! Upper bounds on `max_{d∈[0,1]ⁿ} ‖(I − D + DM)⁻¹‖∞` for B-matrices.
//!
//! Three competing bounds are computed from the `B⁺` part of the split
//! `M = B⁺ + C`:
//!
//! * `bound_gep = (n−1) / min{β, 1}` with `β = min_i (b_ii − Σ_{j≠i} |b_ij|)`;
//! * `bound_li = Σ_i (n−1)/min{β̄_i, 1} · Π_{j<i} b_jj/β̄_j`, where
//!   `β̄_i = b_ii − Σ_{j>i} |b_ij| · l_i(B⁺)`;
//! * `bound_new = Σ_i (n−1)/min{β̂_i, 1} · Π_{j<i} b_jj/β̄_j`, where
//!   `β̂_i = b_ii − Σ_{k>i} |b_ik| · m̃_ki(B⁺)`.
//!
//! The product in `bound_new` keeps `β̄_j`; only the leading factor changes.
//! Empty sums are 0 and empty products are 1, so `β̄_n = β̂_n = b_nn`.
//! Products may overflow to `+∞`, which is returned as is.
//!
//! Indices in code are 0-based; the formulas above are 1-based.

use crate::error::{Error, Result};
use crate::matrix::{is_sdd, BPlusSplit, SquareMatrix, DEFAULT_TOL};

/// Row-wise recursive quantities of an SDD matrix with positive diagonal.
///
/// `w_pair` and `m_pair` are only meaningful off the diagonal; their
/// diagonal entries are stored as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct YangQuantities {
    pub w: Vec<f64>,
    pub w_pair: SquareMatrix,
    pub m_pair: SquareMatrix,
    pub u: Vec<f64>,
    pub l: Vec<f64>,
}

/// Every intermediate of the three bounds, plus the sharpness inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundQuantities {
    pub beta: f64,
    pub beta_i: Vec<f64>,
    pub beta_bar: Vec<f64>,
    pub beta_hat: Vec<f64>,
    pub l: Vec<f64>,
    pub m_tilde: SquareMatrix,
    pub alpha: f64,
    pub beta_hat_min: f64,
    pub bound_gep: f64,
    pub bound_li: f64,
    pub bound_new: f64,
}

/// Sufficient conditions for `bound_new < bound_gep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharpnessConditions {
    /// `β̂ > 1` and `α < 1/β`.
    pub cond_i: bool,
    /// `β̂ < 1` and `αβ < β̂`.
    pub cond_ii: bool,
    pub new_beats_gep_guaranteed: bool,
}

#[inline]
fn offdiag_abs_from(a: &SquareMatrix, i: usize, from: usize) -> f64 {
    (from..a.n())
        .filter(|&k| k != i)
        .map(|k| a.get(i, k).abs())
        .sum()
}

fn require_sdd_positive_diagonal(a: &SquareMatrix) -> Result<()> {
    if (0..a.n()).all(|i| a.get(i, i) > 0.0) && is_sdd(a, 0.0) {
        Ok(())
    } else {
        Err(Error::NotSdd)
    }
}

/// `w_ij`, `w_i`, `m_ij`, `u_i` and `l_k` of `a`.
///
/// `m_ij` uses the `w_k` of the same matrix.
pub fn compute_yang_quantities(a: &SquareMatrix) -> Result<YangQuantities> {
    require_sdd_positive_diagonal(a)?;
    let n = a.n();

    let mut w_pair = vec![0.0; n * n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let aii = a.get(i, i).abs();
        for j in (0..n).filter(|&j| j != i) {
            let v = a.get(i, j).abs() / (aii - offdiag_abs_from(a, i, j + 1));
            w_pair[i * n + j] = v;
            w[i] = f64::max(w[i], v);
        }
    }

    let mut m_pair = vec![0.0; n * n];
    for i in 0..n {
        let aii = a.get(i, i).abs();
        for j in (0..n).filter(|&j| j != i) {
            let tail: f64 = ((j + 1)..n)
                .filter(|&k| k != i)
                .map(|k| a.get(i, k).abs() * w[k])
                .sum();
            m_pair[i * n + j] = (a.get(i, j).abs() + tail) / aii;
        }
    }

    let u = (0..n)
        .map(|i| offdiag_abs_from(a, i, i + 1) / a.get(i, i).abs())
        .collect();

    Ok(YangQuantities {
        w,
        w_pair: SquareMatrix::from_raw(n, w_pair),
        m_pair: SquareMatrix::from_raw(n, m_pair),
        u,
        l: l_values(a),
    })
}

/// `l_k(A) = max_{k≤i≤n} (1/|a_ii|) Σ_{j≥k, j≠i} |a_ij|`.
fn l_values(a: &SquareMatrix) -> Vec<f64> {
    let n = a.n();
    (0..n)
        .map(|k| {
            (k..n)
                .map(|i| offdiag_abs_from(a, i, k) / a.get(i, i).abs())
                .fold(0.0, f64::max)
        })
        .collect()
}

/// `m̃_ij(B⁺) = (|b_ij| + Σ_{k>j, k≠i} |b_ik| · max_{h≠k} |b_kh| / (b_kk − Σ_{l>h, l≠k} |b_kl|)) / b_ii`.
///
/// The diagonal of the result is 0.
pub fn compute_m_tilde(b_plus: &SquareMatrix) -> Result<SquareMatrix> {
    require_sdd_positive_diagonal(b_plus)?;
    let n = b_plus.n();
    let b = |i: usize, j: usize| b_plus.get(i, j);

    // d-free majorant of w_k over all scalings
    let majorant: Vec<f64> = (0..n)
        .map(|k| {
            (0..n)
                .filter(|&h| h != k)
                .map(|h| {
                    let denom = b(k, k)
                        - ((h + 1)..n)
                            .filter(|&l| l != k)
                            .map(|l| b(k, l).abs())
                            .sum::<f64>();
                    b(k, h).abs() / denom
                })
                .fold(0.0, f64::max)
        })
        .collect();

    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let inner: f64 = ((j + 1)..n)
                .filter(|&k| k != i)
                .map(|k| b(i, k).abs() * majorant[k])
                .sum();
            out[i * n + j] = (b(i, j).abs() + inner) / b(i, i);
        }
    }
    Ok(SquareMatrix::from_raw(n, out))
}

fn require_bound_inputs(split: &BPlusSplit) -> Result<()> {
    let n = split.n();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    if !split.is_b_matrix_split(DEFAULT_TOL) {
        return Err(Error::NotBMatrix);
    }
    Ok(())
}

fn row_dominance(b: &SquareMatrix) -> Vec<f64> {
    (0..b.n())
        .map(|i| b.get(i, i) - offdiag_abs_from(b, i, 0))
        .collect()
}

fn beta_bar_values(b: &SquareMatrix, l: &[f64]) -> Vec<f64> {
    (0..b.n())
        .map(|i| b.get(i, i) - offdiag_abs_from(b, i, i + 1) * l[i])
        .collect()
}

fn beta_hat_values(b: &SquareMatrix, m_tilde: &SquareMatrix) -> Vec<f64> {
    let n = b.n();
    (0..n)
        .map(|i| {
            let s: f64 = ((i + 1)..n)
                .map(|k| b.get(i, k).abs() * m_tilde.get(k, i))
                .sum();
            b.get(i, i) - s
        })
        .collect()
}

/// `Π_{j<i} b_jj/β̄_j` for each `i`; the first entry is the empty product.
fn prefix_products(b: &SquareMatrix, beta_bar: &[f64]) -> Vec<f64> {
    let mut acc = 1.0;
    (0..b.n())
        .map(|i| {
            let current = acc;
            acc *= b.get(i, i) / beta_bar[i];
            current
        })
        .collect()
}

fn weighted_sum(n: usize, lead: &[f64], prods: &[f64]) -> f64 {
    let scale = (n - 1) as f64;
    lead.iter()
        .zip(prods)
        .map(|(&x, &p)| scale / x.min(1.0) * p)
        .sum()
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn compute_bound_gep(split: &BPlusSplit) -> Result<f64> {
    require_bound_inputs(split)?;
    let beta = min_of(&row_dominance(&split.b_plus));
    Ok((split.n() - 1) as f64 / beta.min(1.0))
}

pub fn compute_bound_li(split: &BPlusSplit) -> Result<f64> {
    require_bound_inputs(split)?;
    let b = &split.b_plus;
    let beta_bar = beta_bar_values(b, &l_values(b));
    Ok(weighted_sum(
        b.n(),
        &beta_bar,
        &prefix_products(b, &beta_bar),
    ))
}

pub fn compute_bound_new(split: &BPlusSplit) -> Result<f64> {
    require_bound_inputs(split)?;
    let b = &split.b_plus;
    let beta_bar = beta_bar_values(b, &l_values(b));
    let beta_hat = beta_hat_values(b, &compute_m_tilde(b)?);
    Ok(weighted_sum(
        b.n(),
        &beta_hat,
        &prefix_products(b, &beta_bar),
    ))
}

impl BoundQuantities {
    pub fn compute(split: &BPlusSplit) -> Result<Self> {
        require_bound_inputs(split)?;
        let b = &split.b_plus;
        let n = b.n();

        let beta_i = row_dominance(b);
        let beta = min_of(&beta_i);
        let l = l_values(b);
        let beta_bar = beta_bar_values(b, &l);
        let m_tilde = compute_m_tilde(b)?;
        let beta_hat = beta_hat_values(b, &m_tilde);
        let prods = prefix_products(b, &beta_bar);

        Ok(Self {
            beta,
            bound_gep: (n - 1) as f64 / beta.min(1.0),
            bound_li: weighted_sum(n, &beta_bar, &prods),
            bound_new: weighted_sum(n, &beta_hat, &prods),
            alpha: prods.iter().sum(),
            beta_hat_min: min_of(&beta_hat),
            beta_i,
            beta_bar,
            beta_hat,
            l,
            m_tilde,
        })
    }

    pub fn n(&self) -> usize {
        self.beta_i.len()
    }
}

/// Evaluates the two sufficient conditions with strict comparisons.
pub fn check_sharpness_conditions(q: &BoundQuantities) -> SharpnessConditions {
    let (alpha, beta, beta_hat) = (q.alpha, q.beta, q.beta_hat_min);
    let cond_i = beta_hat > 1.0 && alpha < 1.0 / beta;
    let cond_ii = beta_hat < 1.0 && alpha * beta < beta_hat;
    SharpnessConditions {
        cond_i,
        cond_ii,
        new_beats_gep_guaranteed: cond_i || cond_ii,
    }
}

/// Recursive upper bound on `‖A⁻¹‖∞` for a row-SDD M-matrix:
/// `Σ_i 1/(a_ii − Σ_{k>i} |a_ik| m_ki) · Π_{j<i} 1/(1 − u_j l_j)`.
pub fn yang_inverse_norm_bound(a: &SquareMatrix) -> Result<f64> {
    let n = a.n();
    let z_matrix = (0..n).all(|i| (0..n).all(|j| i == j || a.get(i, j) <= 0.0));
    if !z_matrix || require_sdd_positive_diagonal(a).is_err() {
        return Err(Error::NotSddMMatrix);
    }
    let y = compute_yang_quantities(a)?;

    let mut total = 0.0;
    let mut prod = 1.0;
    for i in 0..n {
        let s: f64 = ((i + 1)..n)
            .map(|k| a.get(i, k).abs() * y.m_pair.get(k, i))
            .sum();
        total += prod / (a.get(i, i) - s);
        prod /= 1.0 - y.u[i] * y.l[i];
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::split_b_plus;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ex2_b_plus() -> SquareMatrix {
        SquareMatrix::from_rows(&[[1.125, -0.9], [0.0, 1.125]]).unwrap()
    }

    #[test]
    fn yang_quantities_of_identity_vanish() {
        let y = compute_yang_quantities(&SquareMatrix::identity(3)).unwrap();
        assert_eq!(y.w, vec![0.0; 3]);
        assert_eq!(y.m_pair, SquareMatrix::zeros(3));
        assert_eq!(y.u, vec![0.0; 3]);
        assert_eq!(y.l, vec![0.0; 3]);
    }

    #[test]
    fn yang_quantities_two_by_two() {
        let y = compute_yang_quantities(&ex2_b_plus()).unwrap();
        assert_relative_eq!(y.l[0], 0.8, max_relative = 1e-15);
        assert_relative_eq!(y.u[0], 0.8, max_relative = 1e-15);
        assert_eq!(y.u[1], 0.0);
        // w_12 = |b_12| / b_11 (empty tail), w_21 = 0
        assert_relative_eq!(y.w[0], 0.8, max_relative = 1e-15);
        assert_eq!(y.w[1], 0.0);
    }

    #[test]
    fn yang_quantities_reject_non_sdd() {
        let m = SquareMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(compute_yang_quantities(&m), Err(Error::NotSdd));
        let neg = SquareMatrix::from_rows(&[[-2.0, 0.5], [0.0, 1.0]]).unwrap();
        assert_eq!(compute_yang_quantities(&neg), Err(Error::NotSdd));
    }

    #[test]
    fn m_tilde_identity_and_two_by_two() {
        assert_eq!(
            compute_m_tilde(&SquareMatrix::identity(3)).unwrap(),
            SquareMatrix::zeros(3)
        );
        let mt = compute_m_tilde(&ex2_b_plus()).unwrap();
        assert_eq!(mt.get(1, 0), 0.0);
    }

    #[test]
    fn bounds_on_identity() {
        let s = split_b_plus(&SquareMatrix::identity(2));
        assert_eq!(compute_bound_gep(&s).unwrap(), 1.0);
        assert_eq!(compute_bound_li(&s).unwrap(), 2.0);
        assert_eq!(compute_bound_new(&s).unwrap(), 2.0);
        let q = BoundQuantities::compute(&s).unwrap();
        assert_eq!((q.beta_hat_min, q.beta, q.alpha), (1.0, 1.0, 2.0));
        let c = check_sharpness_conditions(&q);
        assert!(!c.cond_i && !c.cond_ii && !c.new_beats_gep_guaranteed);
    }

    #[test]
    fn bound_inputs_validated() {
        let one = split_b_plus(&SquareMatrix::from_rows(&[[2.0]]).unwrap());
        assert_eq!(
            compute_bound_gep(&one),
            Err(Error::DimensionTooSmall { n: 1, min: 2 })
        );
        let bad = split_b_plus(&SquareMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap());
        assert_eq!(compute_bound_li(&bad), Err(Error::NotBMatrix));
        assert_eq!(compute_bound_new(&bad), Err(Error::NotBMatrix));
        assert_eq!(BoundQuantities::compute(&bad), Err(Error::NotBMatrix));
    }

    #[test]
    fn last_row_has_empty_tail() {
        let m = SquareMatrix::from_rows(&[[2.0, -0.5, -0.3], [-0.2, 1.5, -0.4], [-0.6, -0.7, 3.0]])
            .unwrap();
        let q = BoundQuantities::compute(&split_b_plus(&m)).unwrap();
        assert_eq!(q.beta_bar[2], 3.0);
        assert_eq!(q.beta_hat[2], 3.0);
    }

    #[test]
    fn tie_between_refinements_is_possible() {
        // l_1 is attained by row 2 itself, so m~_21 = l_1
        let m = SquareMatrix::from_rows(&[[1.0, -0.1], [-0.5, 1.0]]).unwrap();
        let q = BoundQuantities::compute(&split_b_plus(&m)).unwrap();
        assert_relative_eq!(q.beta_bar[0], 0.95, max_relative = 1e-15);
        assert_eq!(q.beta_hat[0], q.beta_bar[0]);
        assert_eq!(q.bound_new, q.bound_li);
    }

    #[test]
    fn overflow_propagates_as_infinity() {
        // tiny β̄ in every row makes the product explode
        let n = 200;
        let mut rows = vec![vec![0.0; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1.0;
            if i + 1 < n {
                row[i + 1] = -0.99;
            }
        }
        let m = SquareMatrix::from_rows(&rows).unwrap();
        let q = BoundQuantities::compute(&split_b_plus(&m)).unwrap();
        assert!(q.bound_li.is_infinite() && q.bound_li > 0.0);
        assert!(q.bound_new.is_infinite());
        assert!(q.alpha.is_infinite());
        assert!(q.bound_gep.is_finite());
    }

    #[test]
    fn yang_bound_diagonal_cases() {
        assert_eq!(
            yang_inverse_norm_bound(&SquareMatrix::identity(4)).unwrap(),
            4.0
        );
        let d = SquareMatrix::from_diagonal(&[2.0, 4.0]);
        assert_eq!(yang_inverse_norm_bound(&d).unwrap(), 0.75);
    }

    #[test]
    fn yang_bound_rejects_non_m_matrix() {
        let pos = SquareMatrix::from_rows(&[[2.0, 0.5], [0.0, 1.0]]).unwrap();
        assert_eq!(yang_inverse_norm_bound(&pos), Err(Error::NotSddMMatrix));
        let weak = SquareMatrix::from_rows(&[[1.0, -1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(yang_inverse_norm_bound(&weak), Err(Error::NotSddMMatrix));
    }

    proptest! {
        #[test]
        fn lemma2_scalar_inequalities(gamma in 1e-3f64..10.0, eta in 0.0f64..10.0, step in 0u32..=10) {
            let x = f64::from(step) / 10.0;
            let denom = 1.0 - x + gamma * x;
            prop_assert!(1.0 / denom <= 1.0 / gamma.min(1.0) * (1.0 + 1e-14));
            prop_assert!(eta * x / denom <= eta / gamma * (1.0 + 1e-14));
        }

        #[test]
        fn lemma3_scalar_inequality(
            diag in 0.1f64..5.0,
            frac in 0.0f64..0.999,
            step in 0u32..=10,
        ) {
            // row tail Σ_{j>i} |a_ij| strictly below a_ii
            let tail = frac * diag;
            let x = f64::from(step) / 10.0;
            let lhs = (1.0 - x + diag * x) / (1.0 - x + diag * x - tail * x);
            let rhs = diag / (diag - tail);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}
