//! The two parametric example families and seeded random test matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// Row-condition margin of [`make_random_b`].
pub const RANDOM_B_MARGIN: f64 = 0.05;
/// Row-condition margin of [`make_random_b_near_singular`].
pub const NEAR_SINGULAR_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    Example1 {
        k: f64,
    },
    Example2 {
        a: f64,
        k: f64,
    },
    RandomB {
        n: usize,
        seed: u64,
        near_singular: bool,
    },
}

impl FamilySpec {
    pub fn example1(k: f64) -> Result<Self> {
        check_example1(k)?;
        Ok(Self::Example1 { k })
    }

    pub fn example2(a: f64, k: f64) -> Result<Self> {
        check_example2(a, k)?;
        Ok(Self::Example2 { a, k })
    }

    pub fn random_b(n: usize, seed: u64, near_singular: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall { n, min: 2 });
        }
        Ok(Self::RandomB {
            n,
            seed,
            near_singular,
        })
    }

    pub fn build(&self) -> Result<SquareMatrix> {
        match *self {
            Self::Example1 { k } => make_example1(k),
            Self::Example2 { a, k } => make_example2(a, k),
            Self::RandomB {
                n,
                seed,
                near_singular: false,
            } => make_random_b(n, seed),
            Self::RandomB {
                n,
                seed,
                near_singular: true,
            } => make_random_b_near_singular(n, seed),
        }
    }
}

fn check_example1(k: f64) -> Result<()> {
    if k.is_finite() && k >= 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name: "k",
            value: k,
            range: "k >= 1".into(),
        })
    }
}

/// Lower limit on `a` for the second family, `(√5 − 1)/2`.
pub fn example2_a_min() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

fn check_example2(a: f64, k: f64) -> Result<()> {
    let a_min = example2_a_min();
    if !(a > a_min && a < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "a",
            value: a,
            range: format!("{a_min} < a < 1"),
        });
    }
    let k_min = (2.0 - a * a) / (1.0 + a);
    if !(k > k_min && k < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "k",
            value: k,
            range: format!("{k_min} < k < 1"),
        });
    }
    Ok(())
}

/// The 4×4 family with entry (3,2) equal to `−0.1·k/(k+1)`, `k ≥ 1`.
pub fn make_example1(k: f64) -> Result<SquareMatrix> {
    check_example1(k)?;
    SquareMatrix::from_rows(&[
        [1.5, 0.5, 0.4, 0.5],
        [-0.1, 1.7, 0.7, 0.6],
        [0.8, -0.1 * k / (k + 1.0), 1.8, 0.7],
        [0.0, 0.7, 0.8, 1.8],
    ])
}

/// `[[1/k, −a/k], [0, 1/k]]` with `(√5−1)/2 < a < 1` and `(2−a²)/(1+a) < k < 1`.
pub fn make_example2(a: f64, k: f64) -> Result<SquareMatrix> {
    check_example2(a, k)?;
    SquareMatrix::from_rows(&[[1.0 / k, -a / k], [0.0, 1.0 / k]])
}

/// Random B-matrix: off-diagonals uniform in `[−1, 1]`, each diagonal set so
/// both row conditions hold with margin at least 0.05, plus a uniform
/// `[0, 1)` slack.
pub fn make_random_b(n: usize, seed: u64) -> Result<SquareMatrix> {
    random_b(n, seed, RANDOM_B_MARGIN, true)
}

/// Like [`make_random_b`] but with margin `1e-3` and no slack, so `β` is
/// close to 0.
pub fn make_random_b_near_singular(n: usize, seed: u64) -> Result<SquareMatrix> {
    random_b(n, seed, NEAR_SINGULAR_MARGIN, false)
}

fn random_b(n: usize, seed: u64, margin: f64, slack: bool) -> Result<SquareMatrix> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![0.0; n * n];
    let nf = n as f64;
    for i in 0..n {
        let row = &mut entries[i * n..(i + 1) * n];
        for (j, v) in row.iter_mut().enumerate() {
            if j != i {
                *v = rng.gen_range(-1.0..=1.0);
            }
        }
        let off_sum: f64 = row.iter().sum();
        let off_max = row
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &v)| v)
            .fold(f64::NEG_INFINITY, f64::max);
        // row sum ≥ 2·margin and row mean − m_ij ≥ 2·margin; the doubled
        // margin absorbs the round-off of the sums
        let needed = f64::max(2.0 * margin, nf * (off_max + 2.0 * margin));
        let extra = if slack { rng.gen_range(0.0..1.0) } else { 0.0 };
        row[i] = needed - off_sum + extra;
    }
    SquareMatrix::new(n, entries)
}

/// Random row-SDD M-matrix: off-diagonals uniform in `[−1, 0]`, diagonal
/// equal to the off-diagonal row sum plus a margin in `[0.01, 1.01)`.
pub fn make_random_sdd_m_matrix(n: usize, seed: u64) -> Result<SquareMatrix> {
    if n < 1 {
        return Err(Error::EmptyMatrix);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        let row = &mut entries[i * n..(i + 1) * n];
        let mut abs_sum = 0.0;
        for (j, v) in row.iter_mut().enumerate() {
            if j != i {
                *v = -rng.gen_range(0.0..=1.0);
                abs_sum -= *v;
            }
        }
        row[i] = abs_sum + rng.gen_range(0.01..1.01);
    }
    SquareMatrix::new(n, entries)
}
