//! First and second derivatives of spectral functions `F = f ∘ λ`:
//!
//! ```text
//! ∇F(X)         = V Diag(∇f(λ)) V^T
//! ∇²F(X)[E1,E2] = ∇²f(λ)[diag Ẽ1, diag Ẽ2] + ⟨A(λ), Ẽ1 ∘ Ẽ2⟩,   Ẽi = V^T Ei V
//! ∇²F(X)        = V (Diag^{(1)(2)} ∇²f(λ) + Diag^{(12)} A(λ)) V^T
//! ```
//!
//! where `X = V Diag(λ) V^T` is the ordered spectral decomposition and
//! `A^{ij} = (∇f(λ)_i − ∇f(λ)_j) / (λ_i − λ_j)` off the diagonal, `A^{ii} = 0`.
//! The Hessian is only evaluated at matrices with distinct eigenvalues.

use super::eig::{check_symmetric, eig_sym_ordered, SpectralDecomposition};
use super::functions::SymmetricFunction;
use crate::diagop::diag_sigma;
use crate::error::{Error, Result};
use crate::hadamard::inner_hadamard;
use crate::perm::Permutation;
use crate::tensor::{conjugate, Matrix, Tensor};

/// Smallest coordinate (eigenvalue) gap at which `A` is evaluated.
pub const GAP_TOL: f64 = 1e-8;

/// The off-diagonal coefficient matrix `A(x)` of the Hessian formula.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianAuxiliary {
    pub a: Matrix,
}

/// `F(X) = f(λ(X))`.
pub fn spectral_value(f: &SymmetricFunction, x: &Matrix) -> Result<f64> {
    f.value(&eig_sym_ordered(x)?.lambda)
}

/// `V Diag(∇f(λ(X))) V^T`, formed as the conjugation of `Diag^{(1)} ∇f`.
pub fn grad_spectral(f: &SymmetricFunction, x: &Matrix) -> Result<Matrix> {
    let d = eig_sym_ordered(x)?;
    grad_from_decomposition(f, &d)
}

pub(crate) fn grad_from_decomposition(f: &SymmetricFunction, d: &SpectralDecomposition) -> Result<Matrix> {
    let g = Tensor::vector(f.gradient(&d.lambda)?)?;
    conjugate(&d.v, &diag_sigma(&Permutation::identity(1), &g)?)
}

/// Smallest `|x_i − x_j|` over `i ≠ j` (infinite for `n = 1`).
pub fn min_gap(x: &[f64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            gap = gap.min((x[i] - x[j]).abs());
        }
    }
    gap
}

pub fn a_matrix(f: &SymmetricFunction, x: &[f64]) -> Result<HessianAuxiliary> {
    a_matrix_with_tol(f, x, GAP_TOL)
}

/// Divided differences of `∇f` at `x`; requires pairwise gaps `>= gap_tol`.
pub fn a_matrix_with_tol(f: &SymmetricFunction, x: &[f64], gap_tol: f64) -> Result<HessianAuxiliary> {
    let gap = min_gap(x);
    if !(gap >= gap_tol) {
        return Err(Error::Degenerate { gap, tol: gap_tol });
    }
    let g = f.gradient(x)?;
    let a = Tensor::from_fn(2, x.len(), |i| {
        let (p, q) = (i[0], i[1]);
        if p == q {
            0.0
        } else {
            (g[p] - g[q]) / (x[p] - x[q])
        }
    });
    Ok(HessianAuxiliary { a })
}

fn check_direction(x: &Matrix, e: &Matrix) -> Result<()> {
    check_symmetric(e, "Hessian direction")?;
    if e.dim() != x.dim() {
        return Err(Error::shape(
            "Hessian direction",
            format!("a {0}x{0} matrix", x.dim()),
            e.shape_string(),
        ));
    }
    Ok(())
}

/// `∇²F(X)[E1, E2]` in the σ-Hadamard form
/// `⟨∇²f, Ẽ1 ∘_{(1)(2)} Ẽ2⟩ + ⟨A, Ẽ1 ∘_{(12)} Ẽ2⟩`.
pub fn hess_spectral_apply(f: &SymmetricFunction, x: &Matrix, e1: &Matrix, e2: &Matrix) -> Result<f64> {
    check_symmetric(x, "Hessian point")?;
    check_direction(x, e1)?;
    check_direction(x, e2)?;
    let d = eig_sym_ordered(x)?;
    let a = a_matrix(f, &d.lambda)?;
    let h = f.hessian(&d.lambda)?;
    let vt = d.v.transpose()?;
    let t1 = vt.matmul(e1)?.matmul(&d.v)?;
    let t2 = vt.matmul(e2)?.matmul(&d.v)?;
    let pair = [&t1, &t2];
    let diag_part = inner_hadamard(&h, &Permutation::identity(2), &pair)?;
    let swap = Permutation::from_map(vec![1, 0])?;
    let a_part = inner_hadamard(&a.a, &swap, &pair)?;
    Ok(diag_part + a_part)
}

/// The Hessian as a 4-tensor, `V (Diag^{(1)(2)} ∇²f + Diag^{(12)} A) V^T`.
/// Pairing it with `[E1, E2]` (see [`crate::tensor::apply`]) gives
/// [`hess_spectral_apply`].
pub fn hess_spectral_tensor(f: &SymmetricFunction, x: &Matrix) -> Result<Tensor> {
    check_symmetric(x, "Hessian point")?;
    let d = eig_sym_ordered(x)?;
    let a = a_matrix(f, &d.lambda)?;
    let h = f.hessian(&d.lambda)?;
    let swap = Permutation::from_map(vec![1, 0])?;
    let inner = diag_sigma(&Permutation::identity(2), &h)?.add(&diag_sigma(&swap, &a.a)?)?;
    conjugate(&d.v, &inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::{random_orthogonal, random_symmetric_with_gap, random_unit_symmetric, stream_rng};
    use crate::tensor::{apply, inner, next_index};

    fn f(name: &str) -> SymmetricFunction {
        SymmetricFunction::from_name(name).unwrap()
    }

    #[test]
    fn gradient_anchors() {
        let x = random_symmetric_with_gap(4, 0.1, &mut stream_rng(20, 0));
        let g = grad_spectral(&f("trace"), &x).unwrap();
        assert!(g.max_abs_diff(&Tensor::identity(4)).unwrap() <= 1e-12);
        let g = grad_spectral(&f("fro2"), &x).unwrap();
        assert!(g.max_abs_diff(&x.scale(2.0)).unwrap() <= 1e-12 * (1.0 + 2.0 * x.max_abs()));
        let g = grad_spectral(&f("logbarrier"), &Tensor::diag_matrix(&[1.0, 2.0, 4.0])).unwrap();
        assert_eq!(g, Tensor::diag_matrix(&[-1.0, -0.5, -0.25]));
    }

    #[test]
    fn auxiliary_matrix_examples() {
        let a = a_matrix(&f("fro2"), &[3.0, 1.0, -2.0]).unwrap().a;
        assert_eq!(a, Tensor::from_fn(2, 3, |i| if i[0] == i[1] { 0.0 } else { 2.0 }));
        assert_eq!(a_matrix(&f("trace"), &[3.0, 1.0]).unwrap().a, Tensor::zeros(2, 2));
        let a = a_matrix(&f("logbarrier"), &[4.0, 2.0, 1.0]).unwrap().a;
        assert_eq!(a.at(0, 1), 0.125);
        assert_eq!(a.asymmetry(), 0.0);
        let err = a_matrix(&f("fro2"), &[1.0, 1.0 + 1e-10]).unwrap_err();
        assert!(matches!(err, Error::Degenerate { .. }));
    }

    #[test]
    fn hessian_examples() {
        let mut rng = stream_rng(21, 0);
        let x = random_symmetric_with_gap(4, 0.1, &mut rng);
        let e1 = random_unit_symmetric(4, &mut rng);
        let e2 = random_unit_symmetric(4, &mut rng);
        let v = hess_spectral_apply(&f("fro2"), &x, &e1, &e2).unwrap();
        let expected = 2.0 * inner(&e1, &e2).unwrap();
        assert!((v - expected).abs() <= 1e-10 * (1.0 + expected.abs()));
        assert_eq!(hess_spectral_apply(&f("trace"), &x, &e1, &e2).unwrap(), 0.0);
        let e = Tensor::from_fn(2, 3, |i| f64::from((i[0], i[1]) == (0, 1) || (i[0], i[1]) == (1, 0)));
        let x = Tensor::diag_matrix(&[4.0, 2.0, 1.0]);
        assert_eq!(hess_spectral_apply(&f("logbarrier"), &x, &e, &e).unwrap(), 0.25);
    }

    #[test]
    fn repeated_eigenvalues_are_rejected() {
        let x = Tensor::diag_matrix(&[2.0, 2.0, 1.0]);
        let e = Tensor::identity(3);
        let err = hess_spectral_apply(&f("fro2"), &x, &e, &e).unwrap_err();
        assert!(matches!(err, Error::Degenerate { .. }));
        assert!(hess_spectral_tensor(&f("fro2"), &x).is_err());
    }

    #[test]
    fn tensor_form_matches_bilinear_form() {
        let mut rng = stream_rng(22, 0);
        for name in ["logbarrier", "esym2", "separable:exp"] {
            let x = random_symmetric_with_gap(4, 0.1, &mut rng);
            let e1 = random_unit_symmetric(4, &mut rng);
            let e2 = random_unit_symmetric(4, &mut rng);
            let t = hess_spectral_tensor(&f(name), &x).unwrap();
            let a = apply(&t, &[&e1, &e2]).unwrap();
            let b = hess_spectral_apply(&f(name), &x, &e1, &e2).unwrap();
            assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()), "{name}");
        }
    }

    #[test]
    fn tensor_entry_pattern_at_diagonal_points() {
        let lambda = [2.5, 1.5, 0.75];
        let x = Tensor::diag_matrix(&lambda);
        let func = f("logbarrier");
        let t = hess_spectral_tensor(&func, &x).unwrap();
        let h = func.hessian(&lambda).unwrap();
        let a = a_matrix(&func, &lambda).unwrap().a;
        let mut idx = vec![0; 4];
        loop {
            let (i1, i2, j1, j2) = (idx[0], idx[1], idx[2], idx[3]);
            let mut expected = 0.0;
            if (j1, j2) == (i1, i2) {
                expected += h.at(i1, i2);
            }
            if (j1, j2) == (i2, i1) {
                expected += a.at(i1, i2);
            }
            assert_eq!(t.get(&idx), expected, "{idx:?}");
            if !next_index(&mut idx, 3) {
                break;
            }
        }
    }

    #[test]
    fn hessian_is_continuous_along_a_path() {
        // The distance to the Hessian at X shrinks with the perturbation.
        let mut rng = stream_rng(23, 0);
        let x = random_symmetric_with_gap(4, 0.1, &mut rng);
        let e = random_unit_symmetric(4, &mut rng);
        let func = f("separable:exp");
        let base = hess_spectral_tensor(&func, &x).unwrap();
        let mut last = f64::INFINITY;
        for step in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
            let moved = hess_spectral_tensor(&func, &x.lin_comb(1.0, &e, step).unwrap()).unwrap();
            let dist = moved.max_abs_diff(&base).unwrap();
            assert!(dist < last && dist <= 10.0 * step, "step {step}: {dist}");
            last = dist;
        }
    }

    #[test]
    fn gradient_is_orthogonally_equivariant() {
        let mut rng = stream_rng(24, 0);
        let x = random_symmetric_with_gap(4, 0.1, &mut rng);
        let u = random_orthogonal(4, 5);
        for name in ["logbarrier", "esym2", "separable:exp"] {
            let g = grad_spectral(&f(name), &x).unwrap();
            let gu = grad_spectral(&f(name), &conjugate(&u, &x).unwrap()).unwrap();
            assert!(gu.max_abs_diff(&conjugate(&u, &g).unwrap()).unwrap() <= 1e-8);
        }
    }
}
