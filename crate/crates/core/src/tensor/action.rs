//! The conjugation action `T ↦ UTU^T` of `n × n` matrices on k-tensors:
//! every mode of `T` is multiplied by `U`,
//!
//! ```text
//! (UTU^T)^{i_1..i_k} = Σ_p T^{p_1..p_k} U^{i_1 p_1} ⋯ U^{i_k p_k}.
//! ```
//!
//! For `k = 1` this is `Ux`, for `k = 2` the usual `U M U^T`. The formula is
//! evaluated as `k` successive mode products (cost `k·n^{k+1}`), each summing
//! over the contracted index in ascending order.

use super::{Matrix, Tensor};
use crate::error::{Error, Result};
use crate::perm::Permutation;

pub fn conjugate(u: &Matrix, t: &Tensor) -> Result<Tensor> {
    u.check_matrix("conjugate")?;
    if u.dim() != t.dim() {
        return Err(Error::shape(
            "conjugate",
            format!("U of size {0}x{0}", t.dim()),
            format!("U of size {0}x{0}", u.dim()),
        ));
    }
    let n = t.dim();
    let order = t.order();
    let mut current = t.data().to_vec();
    let mut scratch = vec![0.0; current.len()];
    for mode in 0..order {
        mode_product(u.data(), &current, &mut scratch, n, order, mode);
        std::mem::swap(&mut current, &mut scratch);
    }
    Tensor::from_data(order, n, current)
}

fn mode_product(u: &[f64], src: &[f64], dst: &mut [f64], n: usize, order: usize, mode: usize) {
    let stride = n.pow((order - 1 - mode) as u32);
    let outer = n.pow(mode as u32);
    for o in 0..outer {
        let base = o * n * stride;
        for i in 0..n {
            let row = &u[i * n..(i + 1) * n];
            for t in 0..stride {
                let mut acc = 0.0;
                for (p, &w) in row.iter().enumerate() {
                    acc += w * src[base + p * stride + t];
                }
                dst[base + i * stride + t] = acc;
            }
        }
    }
}

/// The permutation matrix `P` with `P^T e^i = e^{π(i)}`, i.e. row `i` has
/// its single 1 in column `π(i)`. With this convention
/// `(PTP^T)^{i_1..i_k} = T^{π(i_1)..π(i_k)}`.
pub fn permutation_matrix(pi: &Permutation) -> Matrix {
    let n = pi.k();
    let mut p = Tensor::zeros(2, n);
    for i in 0..n {
        p.data_mut()[i * n + pi.apply(i)] = 1.0;
    }
    p
}
