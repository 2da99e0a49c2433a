//! Seeded random inputs for trials and tests.
//!
//! Every generator draws from a `ChaCha8Rng`. Independent streams of one
//! seed are obtained with [`stream_rng`], so cases can run in any order or
//! in parallel and still see the same numbers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::perm::Permutation;
use crate::tensor::{conjugate, Matrix, Partition, Tensor};

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Entries uniform on `[-1, 1]`.
pub fn random_tensor<R: Rng>(order: usize, n: usize, rng: &mut R) -> Tensor {
    Tensor::from_fn(order, n, |_| rng.random_range(-1.0..=1.0))
}

/// Entries with random sign and magnitude uniform on `[0.5, 1]`.
pub fn random_nonzero_tensor<R: Rng>(order: usize, n: usize, rng: &mut R) -> Tensor {
    Tensor::from_fn(order, n, |_| {
        let m: f64 = rng.random_range(0.5..=1.0);
        if rng.random::<bool>() {
            m
        } else {
            -m
        }
    })
}

pub fn random_matrix<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    random_tensor(2, n, rng)
}

/// Random symmetric matrix, entries uniform on `[-1, 1]`.
pub fn random_symmetric<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    let m = random_matrix(n, rng);
    Tensor::from_fn(2, n, |i| {
        if i[0] <= i[1] {
            m.at(i[0], i[1])
        } else {
            m.at(i[1], i[0])
        }
    })
}

/// Random symmetric matrix scaled to unit Frobenius norm.
pub fn random_unit_symmetric<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    let m = random_symmetric(n, rng);
    let norm = crate::tensor::norm(&m);
    m.scale(1.0 / norm)
}

/// Block-constant matrix: an `r × r` uniform matrix on `[-1, 1]` expanded
/// over the blocks of `part`.
pub fn random_block_matrix<R: Rng>(part: &Partition, rng: &mut R) -> Matrix {
    let core = random_matrix(part.num_blocks(), rng);
    Tensor::from_fn(2, part.n(), |i| core.at(part.block_of(i[0]), part.block_of(i[1])))
}

/// Orthogonal matrix from the Gram-Schmidt factor of a seeded Gaussian
/// matrix.
pub fn random_orthogonal(n: usize, seed: u64) -> Matrix {
    random_orthogonal_from(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

/// Orthonormalises the columns of a Gaussian matrix with modified
/// Gram-Schmidt, applied twice for accuracy. The triangular factor then has
/// a positive diagonal, which fixes the signs.
pub fn random_orthogonal_from<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    for j in 0..n {
        for _ in 0..2 {
            for i in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj: f64 = done[i].iter().zip(&rest[0]).map(|(a, b)| a * b).sum();
                for (c, q) in rest[0].iter_mut().zip(&done[i]) {
                    *c -= proj * q;
                }
            }
        }
        let len = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        for c in cols[j].iter_mut() {
            *c /= len;
        }
    }
    Tensor::from_fn(2, n, |i| cols[i[1]][i[0]])
}

pub fn random_permutation<R: Rng>(k: usize, rng: &mut R) -> Permutation {
    let mut map: Vec<usize> = (0..k).collect();
    map.shuffle(rng);
    Permutation::from_map(map).expect("shuffled identity is a permutation")
}

/// Random eigenvalues in decreasing order: the smallest is uniform on
/// `[0.4, 0.5]` and consecutive gaps are uniform on `[gap, gap + 0.15]`.
/// All values are positive.
pub fn random_spectrum<R: Rng>(n: usize, gap: f64, rng: &mut R) -> Vec<f64> {
    let mut x = vec![0.0; n];
    let mut current: f64 = rng.random_range(0.4..=0.5);
    for slot in x.iter_mut().rev() {
        *slot = current;
        current += rng.random_range(gap..=gap + 0.15);
    }
    x
}

/// Random symmetric matrix `U Diag(λ) U^T` whose eigenvalues are positive
/// and pairwise separated by at least `gap`.
pub fn random_symmetric_with_gap<R: Rng>(n: usize, gap: f64, rng: &mut R) -> Matrix {
    let lambda = random_spectrum(n, gap, rng);
    let u = random_orthogonal_from(rng, n);
    let x = conjugate(&u, &Tensor::diag_matrix(&lambda)).expect("matching sizes");
    // remove rounding asymmetry
    Tensor::from_fn(2, n, |i| 0.5 * (x.at(i[0], i[1]) + x.at(i[1], i[0])))
}
