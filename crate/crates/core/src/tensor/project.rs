//! Generalised-diagonal projections and block-constancy.

use super::{next_index, Partition, Tensor};
use crate::error::{Error, Result};
use crate::perm::Permutation;

fn check_order(mu: &Permutation, t: &Tensor, context: &'static str) -> Result<()> {
    if mu.k() != t.order() {
        return Err(Error::shape(
            context,
            format!("a tensor of order k = {}", mu.k()),
            t.shape_string(),
        ));
    }
    Ok(())
}

fn check_partition(part: &Partition, t: &Tensor, context: &'static str) -> Result<()> {
    if part.n() != t.dim() {
        return Err(Error::shape(
            context,
            format!("a partition of 1..={}", t.dim()),
            format!("a partition of 1..={}", part.n()),
        ));
    }
    Ok(())
}

/// `P_μ(T)`: keeps `T^{i}` where `i_s = i_{μ(s)}` for every `s`, zeroes the
/// rest.
pub fn project(mu: &Permutation, t: &Tensor) -> Result<Tensor> {
    check_order(mu, t, "projection")?;
    Ok(masked(t, |i| (0..i.len()).all(|s| i[s] == i[mu.apply(s)])))
}

/// `P̃_μ(T)`: keeps `T^{i}` where `i_s ∼ i_{μ(s)}` for every `s`.
pub fn project_block(mu: &Permutation, part: &Partition, t: &Tensor) -> Result<Tensor> {
    check_order(mu, t, "block projection")?;
    check_partition(part, t, "block projection")?;
    Ok(masked(t, |i| (0..i.len()).all(|s| part.same_block(i[s], i[mu.apply(s)]))))
}

fn masked(t: &Tensor, keep: impl Fn(&[usize]) -> bool) -> Tensor {
    let mut out = t.clone();
    let mut idx = vec![0; t.order()];
    for v in out.data_mut().iter_mut() {
        if !keep(&idx) {
            *v = 0.0;
        }
        next_index(&mut idx, t.dim());
    }
    out
}

/// Exact test that `T^{i} = T^{j}` whenever `i_s ∼ j_s` for all `s`.
pub fn is_block_constant(t: &Tensor, part: &Partition) -> Result<bool> {
    is_block_constant_approx(t, part, 0.0)
}

/// Like [`is_block_constant`] but accepts entries within `eps` of the value
/// at the block representatives.
pub fn is_block_constant_approx(t: &Tensor, part: &Partition, eps: f64) -> Result<bool> {
    check_partition(part, t, "block-constancy test")?;
    let reps = part.representatives();
    let mut idx = vec![0; t.order()];
    let mut rep_idx = vec![0; t.order()];
    for &v in t.data() {
        for (r, &i) in rep_idx.iter_mut().zip(&idx) {
            *r = reps[part.block_of(i)];
        }
        if (v - t.get(&rep_idx)).abs() > eps || v.is_nan() {
            return Ok(false);
        }
        next_index(&mut idx, t.dim());
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;
    use crate::spectral::random::{random_tensor, stream_rng};
    use crate::tensor::norm;

    fn p(s: &str, k: usize) -> Permutation {
        Permutation::parse(s, Some(k)).unwrap()
    }

    #[test]
    fn identity_projection_keeps_everything() {
        let t = random_tensor(3, 3, &mut stream_rng(1, 0));
        assert_eq!(project(&Permutation::identity(3), &t).unwrap(), t);
    }

    #[test]
    fn transposition_keeps_matrix_diagonal() {
        let m = Tensor::from_fn(2, 3, |i| (3 * i[0] + i[1] + 1) as f64);
        let got = project(&p("(12)", 2), &m).unwrap();
        let expected = Tensor::diag_matrix(&m.diagonal());
        assert_eq!(got, expected);
    }

    #[test]
    fn three_cycle_keeps_only_the_main_diagonal() {
        let t = Tensor::from_fn(3, 3, |_| 1.0);
        let got = project(&p("(123)", 3), &t).unwrap();
        let expected = Tensor::from_fn(3, 3, |i| f64::from(i[0] == i[1] && i[1] == i[2]));
        assert_eq!(got, expected);
    }

    #[test]
    fn block_projection_examples() {
        let m = Tensor::from_fn(2, 3, |i| (3 * i[0] + i[1] + 1) as f64);
        let part = Partition::from_one_based_blocks(3, &[vec![1, 2], vec![3]]).unwrap();
        let got = project_block(&p("(12)", 2), &part, &m).unwrap();
        let mut expected = m.clone();
        for (a, b) in [(0, 2), (2, 0), (1, 2), (2, 1)] {
            expected.set(&[a, b], 0.0);
        }
        assert_eq!(got, expected);
        assert_eq!(project_block(&Permutation::identity(2), &part, &m).unwrap(), m);
    }

    #[test]
    fn block_projection_with_singletons_is_plain_projection() {
        let t = random_tensor(3, 3, &mut stream_rng(4, 0));
        for mu in all_permutations(3).unwrap() {
            assert_eq!(
                project_block(&mu, &Partition::singletons(3), &t).unwrap(),
                project(&mu, &t).unwrap()
            );
        }
    }

    #[test]
    fn projections_are_idempotent_and_contractive() {
        let t = random_tensor(3, 4, &mut stream_rng(9, 0));
        let part = Partition::from_one_based_blocks(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        for mu in all_permutations(3).unwrap() {
            let once = project(&mu, &t).unwrap();
            assert_eq!(project(&mu, &once).unwrap(), once);
            assert!(norm(&once) <= norm(&t));
            let b = project_block(&mu, &part, &t).unwrap();
            assert_eq!(project_block(&mu, &part, &b).unwrap(), b);
            assert!(norm(&b) <= norm(&t));
        }
    }

    #[test]
    fn order_mismatch_is_rejected() {
        assert!(project(&Permutation::identity(2), &Tensor::zeros(3, 2)).is_err());
        let part = Partition::singletons(3);
        assert!(project_block(&Permutation::identity(2), &part, &Tensor::zeros(2, 2)).is_err());
    }

    #[test]
    fn block_constancy_examples() {
        let ones = Tensor::from_fn(3, 3, |_| 1.0);
        assert!(is_block_constant(&ones, &Partition::single_block(3)).unwrap());
        let t = random_tensor(2, 3, &mut stream_rng(2, 0));
        assert!(is_block_constant(&t, &Partition::singletons(3)).unwrap());
        let m = Tensor::from_rows(&[vec![1.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!(!is_block_constant(&m, &Partition::single_block(2)).unwrap());
        let nearly = Tensor::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0 + 1e-12]]).unwrap();
        assert!(!is_block_constant(&nearly, &Partition::single_block(2)).unwrap());
        assert!(is_block_constant_approx(&nearly, &Partition::single_block(2), 1e-10).unwrap());
    }
}
