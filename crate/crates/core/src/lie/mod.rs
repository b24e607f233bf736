//! Ambient matrix algebra: orthonormal bases of u(n) and sp(n), symmetric
//! pairs, the matrix exponential and deterministic sample points.

pub mod algebra;
pub mod expm;
pub mod matrix;
pub mod sampling;

pub use algebra::{
    build_basis, build_sp_basis, build_symmetric_pair, build_unitary_basis, symplectic_form, GroupKind,
    LieAlgebraBasis, PairResiduals, SymmetricPair,
};
pub use expm::matrix_exp;
pub use matrix::{ComplexMatrix, C64};
pub use sampling::{sample_dual_point, sample_group_point, DEFAULT_DUAL_RADIUS};
