//! Spectral functions `F = f ∘ λ` of symmetric matrices: the ordered
//! eigendecomposition, symmetric functions, derivative formulas and their
//! finite-difference oracles.

mod derivatives;
mod eig;
mod fd;
mod functions;
pub mod random;

pub use derivatives::{
    a_matrix, a_matrix_with_tol, grad_spectral, hess_spectral_apply, hess_spectral_tensor, min_gap, spectral_value,
    HessianAuxiliary, GAP_TOL,
};
pub use eig::{eig_sym_ordered, SpectralDecomposition, JACOBI_TOL, MAX_SWEEPS, SYMMETRY_TOL};
pub use fd::{fd_gradient, fd_hessian_apply, symmetric_basis, DEFAULT_STEP};
pub use functions::{SymmetricFunction, FUNCTION_NAMES};
