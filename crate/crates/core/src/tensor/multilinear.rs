//! Evaluating 2k-tensors as multilinear forms on k matrices.
//!
//! A 2k-tensor is indexed `(i_1..i_k ; j_1..j_k)`: the first k slots come
//! first in memory, then the last k. Matrix `H_ν` is paired with slots `ν`
//! and `k+ν`:
//!
//! ```text
//! T[H_1, .., H_k] = Σ_{p,q} T^{p_1..p_k q_1..q_k} Π_ν H_ν^{p_ν q_ν}
//! ```

use super::{next_index, Matrix, Tensor};
use crate::error::{Error, Result};

fn check_pairing(t: &Tensor, hs: &[&Matrix], context: &'static str) -> Result<()> {
    if t.order() != 2 * hs.len() {
        return Err(Error::shape(
            context,
            format!("a tensor of order {} for {} matrices", 2 * hs.len(), hs.len()),
            t.shape_string(),
        ));
    }
    for (nu, h) in hs.iter().enumerate() {
        if h.order() != 2 || h.dim() != t.dim() {
            return Err(Error::shape(
                context,
                format!("matrix {} of size {1}x{1}", nu + 1, t.dim()),
                h.shape_string(),
            ));
        }
    }
    Ok(())
}

/// `T[H_1, .., H_k]` for a 2k-tensor, summed directly over all `n^{2k}`
/// entries.
pub fn apply(t: &Tensor, hs: &[&Matrix]) -> Result<f64> {
    check_pairing(t, hs, "multilinear application")?;
    let k = hs.len();
    let n = t.dim();
    let mut idx = vec![0; 2 * k];
    let mut acc = 0.0;
    for &v in t.data() {
        if v != 0.0 {
            let mut w = v;
            for (nu, h) in hs.iter().enumerate() {
                w *= h.data()[idx[nu] * n + idx[k + nu]];
            }
            acc += w;
        }
        next_index(&mut idx, n);
    }
    Ok(acc)
}

/// `T[H]`, the (2k-2)-tensor obtained by feeding `H` to the last pair of
/// slots `(k, 2k)`:
///
/// `result^{i_1..i_{k-1} j_1..j_{k-1}} = Σ_{p,q} T^{i_1..i_{k-1} p j_1..j_{k-1} q} H^{pq}`.
pub fn contract_last_pair(t: &Tensor, h: &Matrix) -> Result<Tensor> {
    if t.order() < 2 || !t.order().is_multiple_of(2) {
        return Err(Error::shape(
            "pair contraction",
            "a tensor of even order >= 2",
            t.shape_string(),
        ));
    }
    check_pairing(t, &vec![h; t.order() / 2], "pair contraction")?;
    let n = t.dim();
    let k = t.order() / 2;
    let half = n.pow((k - 1) as u32);
    let src = t.data();
    let hd = h.data();
    let mut out = vec![0.0; half * half];
    for a in 0..half {
        for b in 0..half {
            let mut acc = 0.0;
            for p in 0..n {
                for q in 0..n {
                    acc += src[((a * n + p) * half + b) * n + q] * hd[p * n + q];
                }
            }
            out[a * half + b] = acc;
        }
    }
    Tensor::from_data(2 * (k - 1), n, out)
}

/// `T[x_1, .., x_k]` for a k-tensor and k vectors.
pub fn apply_vectors(t: &Tensor, xs: &[&[f64]]) -> Result<f64> {
    if xs.len() != t.order() || xs.iter().any(|x| x.len() != t.dim()) {
        return Err(Error::shape(
            "vector application",
            format!("{} vectors of length {}", t.order(), t.dim()),
            format!(
                "{} vectors of lengths {:?}",
                xs.len(),
                xs.iter().map(|x| x.len()).collect::<Vec<_>>()
            ),
        ));
    }
    let mut idx = vec![0; t.order()];
    let mut acc = 0.0;
    for &v in t.data() {
        let mut w = v;
        for (s, x) in xs.iter().enumerate() {
            w *= x[idx[s]];
        }
        acc += w;
        next_index(&mut idx, t.dim());
    }
    Ok(acc)
}
