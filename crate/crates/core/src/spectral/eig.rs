//! Ordered spectral decomposition `X = V Diag(λ) V^T` of a symmetric matrix
//! by cyclic Jacobi rotations.

use crate::error::{Error, Result};
use crate::tensor::{norm, Matrix, Tensor};

/// Largest `max|X - X^T|` accepted as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Sweeps stop once the off-diagonal Frobenius mass is below this fraction
/// of `‖X‖_F`.
pub const JACOBI_TOL: f64 = 1e-14;
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    /// Orthogonal; column `i` is the eigenvector of `lambda[i]`.
    pub v: Matrix,
    /// Non-increasing.
    pub lambda: Vec<f64>,
}

impl SpectralDecomposition {
    /// `V Diag(λ) V^T`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.lambda.len();
        Tensor::from_fn(2, n, |i| {
            (0..n)
                .map(|p| self.v.at(i[0], p) * self.lambda[p] * self.v.at(i[1], p))
                .sum()
        })
    }
}

pub(crate) fn check_symmetric(x: &Matrix, context: &'static str) -> Result<()> {
    x.check_matrix(context)?;
    if x.data().iter().any(|v| !v.is_finite()) {
        return Err(Error::shape(context, "finite entries", "a non-finite entry"));
    }
    let asymmetry = x.asymmetry();
    if asymmetry > SYMMETRY_TOL {
        return Err(Error::NotSymmetric {
            asymmetry,
            tol: SYMMETRY_TOL,
        });
    }
    Ok(())
}

/// Eigenvalues sorted non-increasingly (stable, so ties keep their Jacobi
/// order) and eigenvector columns signed so that their largest-magnitude
/// component is positive. A diagonal input with sorted diagonal returns
/// `V = I` exactly.
pub fn eig_sym_ordered(x: &Matrix) -> Result<SpectralDecomposition> {
    check_symmetric(x, "eigendecomposition")?;
    let n = x.dim();
    let mut a: Vec<f64> = Tensor::from_fn(2, n, |i| 0.5 * (x.at(i[0], i[1]) + x.at(i[1], i[0]))).into_data();
    let mut v = Tensor::identity(n).into_data();
    let target = JACOBI_TOL * norm(x);

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let current = off(&a);
        if current <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off: current });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let lambda: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vs = Tensor::from_fn(2, n, |i| v[i[0] * n + order[i[1]]]);
    for col in 0..n {
        let mut best = 0;
        for row in 1..n {
            if vs.at(row, col).abs() > vs.at(best, col).abs() {
                best = row;
            }
        }
        if vs.at(best, col) < 0.0 {
            for row in 0..n {
                let val = vs.at(row, col);
                vs.set(&[row, col], -val);
            }
        }
    }
    Ok(SpectralDecomposition { v: vs, lambda })
}

/// One Jacobi rotation zeroing `a[p][q]`; `v` accumulates the rotations.
fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let tau = (aqq - app) / (2.0 * apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    for r in 0..n {
        let arp = a[r * n + p];
        let arq = a[r * n + q];
        a[r * n + p] = c * arp - s * arq;
        a[r * n + q] = s * arp + c * arq;
    }
    for r in 0..n {
        let apr = a[p * n + r];
        let aqr = a[q * n + r];
        a[p * n + r] = c * apr - s * aqr;
        a[q * n + r] = s * apr + c * aqr;
    }
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for r in 0..n {
        let vrp = v[r * n + p];
        let vrq = v[r * n + q];
        v[r * n + p] = c * vrp - s * vrq;
        v[r * n + q] = s * vrp + c * vrq;
    }
}
