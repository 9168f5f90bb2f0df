//! Rigorous upper bounds on the error constant
//! `max_{d∈[0,1]ⁿ} ‖(I − D + DM)⁻¹‖∞` of linear complementarity problems
//! whose matrix is a B-matrix, together with brute-force oracles that check
//! every bound against exact computation.
//!
//! * [`matrix`]: dense matrices, classification, the `B⁺ + C` split
//! * [`lu`]: LU kernels and `‖A⁻¹‖∞`
//! * [`bounds`]: the three competing bounds and their intermediates
//! * [`oracle`]: sampled lower estimate of the error constant
//! * [`lcp`]: exact small LCP solves and the residual error check
//! * [`generators`]: example families and random test matrices
//! * [`io`]: text formats for matrices and vectors

pub mod bounds;
pub mod error;
pub mod generators;
pub mod io;
pub mod lcp;
pub mod lu;
pub mod matrix;
pub mod oracle;

pub use bounds::{
    check_sharpness_conditions, compute_bound_gep, compute_bound_li, compute_bound_new,
    compute_m_tilde, compute_yang_quantities, yang_inverse_norm_bound, BoundQuantities,
    SharpnessConditions, YangQuantities,
};
pub use error::{Error, Result};
pub use lcp::{LcpInstance, LcpSolution};
pub use lu::inverse_inf_norm;
pub use matrix::{
    is_b_matrix, is_p_matrix_bruteforce, is_sdd, scaled_matrix, split_b_plus, BPlusSplit, DScaling,
    SquareMatrix, DEFAULT_TOL,
};
pub use oracle::{sample_max_norm, OracleConfig, OracleResult};
