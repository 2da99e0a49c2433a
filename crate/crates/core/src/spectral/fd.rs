//! Central finite-difference oracles for the spectral derivative formulas.

use super::derivatives::{grad_spectral, min_gap, spectral_value, GAP_TOL};
use super::eig::{check_symmetric, eig_sym_ordered};
use super::functions::SymmetricFunction;
use crate::error::{Error, Result};
use crate::tensor::{inner, Matrix, Tensor};

pub const DEFAULT_STEP: f64 = 1e-5;

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Usage(format!("finite-difference step must be positive, got {h}")));
    }
    Ok(())
}

/// The symmetric basis matrix `(H_ij + H_ji) / (1 + δ_ij)`.
pub fn symmetric_basis(n: usize, i: usize, j: usize) -> Matrix {
    Tensor::from_fn(2, n, |idx| f64::from((idx[0], idx[1]) == (i, j) || (idx[0], idx[1]) == (j, i)))
}

/// Gradient of `F = f ∘ λ` from central differences of `F` along each
/// symmetric basis direction.
pub fn fd_gradient(f: &SymmetricFunction, x: &Matrix, h: f64) -> Result<Matrix> {
    check_step(h)?;
    check_symmetric(x, "finite-difference gradient")?;
    let n = x.dim();
    let mut g = Tensor::zeros(2, n);
    for i in 0..n {
        for j in i..n {
            let e = symmetric_basis(n, i, j);
            let up = spectral_value(f, &x.lin_comb(1.0, &e, h)?)?;
            let down = spectral_value(f, &x.lin_comb(1.0, &e, -h)?)?;
            let mut d = (up - down) / (2.0 * h);
            if i != j {
                // the direction touches both (i, j) and (j, i)
                d /= 2.0;
            }
            g.set(&[i, j], d);
            g.set(&[j, i], d);
        }
    }
    Ok(g)
}

/// `⟨∇F(X + hE2) − ∇F(X − hE2), E1⟩ / 2h` with exact gradients at the
/// shifted points, which must keep their eigenvalues apart.
pub fn fd_hessian_apply(f: &SymmetricFunction, x: &Matrix, e1: &Matrix, e2: &Matrix, h: f64) -> Result<f64> {
    check_step(h)?;
    check_symmetric(x, "finite-difference Hessian")?;
    check_symmetric(e1, "finite-difference Hessian")?;
    let up = x.lin_comb(1.0, e2, h)?;
    let down = x.lin_comb(1.0, e2, -h)?;
    for shifted in [&up, &down] {
        let gap = min_gap(&eig_sym_ordered(shifted)?.lambda);
        if !(gap >= GAP_TOL) {
            return Err(Error::Degenerate { gap, tol: GAP_TOL });
        }
    }
    let diff = grad_spectral(f, &up)?.sub(&grad_spectral(f, &down)?)?;
    Ok(inner(&diff, e1)? / (2.0 * h))
}
