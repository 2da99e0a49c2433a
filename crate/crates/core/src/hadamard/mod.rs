//! The σ-Hadamard product of k matrices.
//!
//! For a permutation σ of `{1..k}` the product `H_1 ∘_σ ⋯ ∘_σ H_k` is the
//! k-tensor with entries
//!
//! ```text
//! (H_1 ∘_σ ⋯ ∘_σ H_k)^{i_1..i_k} = Π_s H_s^{i_s, i_{σ⁻¹(s)}}
//! ```
//!
//! On basis matrices this is the 0/1 rule "`i_s = p_s = q_{σ(s)}` for every
//! `s`". For `k = 2` it covers the ordinary Hadamard product (`σ = (12)`
//! gives `H_1 ∘ H_2^T`) and `(diag H_1)(diag H_2)^T` (`σ = id`); for `k = 1`
//! it is `diag H`.

mod transfer;

pub use transfer::{
    transfer_holds, transfer_outcome, transfer_sides, transfer_trial, transfer_witness,
    TransferOutcome, TransferTrial, TRANSFER_TOL,
};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tensor::{next_index, Matrix, Tensor};

/// Checks `σ.k = len(hs) >= 1` and a common square size; returns `n`.
pub(crate) fn check_factors(sigma: &Permutation, hs: &[&Matrix]) -> Result<usize> {
    if hs.len() != sigma.k() {
        return Err(Error::shape(
            "sigma-Hadamard product",
            format!("{} matrices for a permutation on k = {}", sigma.k(), sigma.k()),
            format!("{} matrices", hs.len()),
        ));
    }
    let n = hs[0].dim();
    for (s, h) in hs.iter().enumerate() {
        if h.order() != 2 || h.dim() != n {
            return Err(Error::shape(
                "sigma-Hadamard product",
                format!("matrix {} of size {1}x{1}", s + 1, n),
                h.shape_string(),
            ));
        }
    }
    Ok(n)
}

/// `H_1 ∘_σ ⋯ ∘_σ H_k` as a dense k-tensor.
pub fn hadamard_sigma(sigma: &Permutation, hs: &[&Matrix]) -> Result<Tensor> {
    let n = check_factors(sigma, hs)?;
    let inv = sigma.inverse();
    Ok(Tensor::from_fn(sigma.k(), n, |i| product_entry(&inv, hs, i, n)))
}

#[inline]
fn product_entry(sigma_inv: &Permutation, hs: &[&Matrix], i: &[usize], n: usize) -> f64 {
    let mut w = 1.0;
    for (s, h) in hs.iter().enumerate() {
        w *= h.data()[i[s] * n + i[sigma_inv.apply(s)]];
    }
    w
}

/// `⟨T, H_1 ∘_σ ⋯ ∘_σ H_k⟩`, streamed over the multi-index without forming
/// the product tensor.
pub fn inner_hadamard(t: &Tensor, sigma: &Permutation, hs: &[&Matrix]) -> Result<f64> {
    let n = check_factors(sigma, hs)?;
    if t.order() != sigma.k() || t.dim() != n {
        return Err(Error::shape(
            "inner product with sigma-Hadamard product",
            format!("a tensor of order {} on R^{n}", sigma.k()),
            t.shape_string(),
        ));
    }
    let inv = sigma.inverse();
    let mut idx = vec![0; sigma.k()];
    let mut acc = 0.0;
    for &v in t.data() {
        if v != 0.0 {
            acc += v * product_entry(&inv, hs, &idx, n);
        }
        next_index(&mut idx, n);
    }
    Ok(acc)
}

/// `⟨T, H_{p_1 q_1} ∘_σ ⋯ ∘_σ H_{p_{k-1} q_{k-1}} ∘_σ H⟩` in closed form:
/// with `l = σ⁻¹(k)`,
///
/// * `l = k`: `Π_{t<k} δ(p_t, q_{σ(t)}) · Σ_t T^{p_1..p_{k-1} t} H^{tt}`;
/// * `l ≠ k`: `Π_{t<k, t≠l} δ(p_t, q_{σ(t)}) · T^{p_1..p_{k-1} q_{σ(k)}} H^{q_{σ(k)} p_l}`.
///
/// `basics` holds the 0-based `(p_t, q_t)` of the first `k-1` factors.
pub fn inner_basic_with_general_last(
    t: &Tensor,
    sigma: &Permutation,
    basics: &[(usize, usize)],
    h: &Matrix,
) -> Result<f64> {
    let k = sigma.k();
    let n = t.dim();
    if t.order() != k || basics.len() + 1 != k || h.order() != 2 || h.dim() != n {
        return Err(Error::shape(
            "inner product with basic factors",
            format!("order-{k} tensor, {} basis pairs and an {n}x{n} matrix", k - 1),
            format!(
                "{}, {} basis pairs and a matrix of {}",
                t.shape_string(),
                basics.len(),
                h.shape_string()
            ),
        ));
    }
    if let Some(&(p, q)) = basics.iter().find(|&&(p, q)| p >= n || q >= n) {
        return Err(Error::shape(
            "inner product with basic factors",
            format!("basis indices in 1..={n}"),
            format!("({}, {})", p + 1, q + 1),
        ));
    }
    let last = k - 1;
    let l = sigma.inverse().apply(last);
    let p = |s: usize| basics[s].0;
    let q = |s: usize| basics[s].1;
    let deltas_hold = (0..last)
        .filter(|&s| s != l)
        .all(|s| p(s) == q(sigma.apply(s)));
    if !deltas_hold {
        return Ok(0.0);
    }
    let mut idx: Vec<usize> = (0..last).map(p).collect();
    idx.push(0);
    if l == last {
        let mut acc = 0.0;
        for tt in 0..n {
            idx[last] = tt;
            acc += t.get(&idx) * h.at(tt, tt);
        }
        Ok(acc)
    } else {
        let r = q(sigma.apply(last));
        idx[last] = r;
        Ok(t.get(&idx) * h.at(r, p(l)))
    }
}
