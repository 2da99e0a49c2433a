//! The `Diag^σ` lift of a k-tensor to a 2k-tensor,
//!
//! ```text
//! (Diag^σ T)^{i_1..i_k ; j_1..j_k} = T^{i_1..i_k}  if i_s = j_{σ(s)} for all s, else 0,
//! ```
//!
//! and its duality with σ-Hadamard products under the conjugation action:
//! `⟨T, H̃_1 ∘_σ ⋯ ∘_σ H̃_k⟩ = (U (Diag^σ T) U^T)[H_1, .., H_k]` with
//! `H̃_i = U^T H_i U`.

use crate::error::{Error, Result};
use crate::hadamard::{check_factors, inner_hadamard};
use crate::perm::Permutation;
use crate::tensor::{apply, conjugate, next_index, Matrix, Tensor};

/// Tolerance of the orthogonality gate on `max|U^T U - I|`.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Relative tolerance of the duality identity: `|lhs - rhs| <= tol (1 + |lhs|)`.
pub const DUAL_TOL: f64 = 1e-9;

fn check_order(sigma: &Permutation, t: &Tensor) -> Result<()> {
    if sigma.k() != t.order() {
        return Err(Error::shape(
            "Diag^sigma",
            format!("a tensor of order k = {}", sigma.k()),
            t.shape_string(),
        ));
    }
    Ok(())
}

/// `j` with `j_{σ(s)} = i_s`.
fn partner(sigma: &Permutation, i: &[usize], j: &mut [usize]) {
    for (s, &v) in i.iter().enumerate() {
        j[sigma.apply(s)] = v;
    }
}

/// Dense `Diag^σ T` with `n^{2k}` entries.
pub fn diag_sigma(sigma: &Permutation, t: &Tensor) -> Result<Tensor> {
    check_order(sigma, t)?;
    let k = t.order();
    let n = t.dim();
    let mut out = Tensor::zeros(2 * k, n);
    let mut idx = vec![0; 2 * k];
    for &v in t.data() {
        let (i, j) = idx.split_at_mut(k);
        partner(sigma, i, j);
        out.set(&idx, v);
        next_index(&mut idx[..k], n);
    }
    Ok(out)
}

/// `Diag^σ T` evaluated on demand, without the `n^{2k}` allocation.
#[derive(Debug, Clone)]
pub struct DiagSigmaView<'a> {
    sigma: &'a Permutation,
    t: &'a Tensor,
}

impl<'a> DiagSigmaView<'a> {
    pub fn new(sigma: &'a Permutation, t: &'a Tensor) -> Result<Self> {
        check_order(sigma, t)?;
        Ok(DiagSigmaView { sigma, t })
    }

    pub fn order(&self) -> usize {
        2 * self.t.order()
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    pub fn entry(&self, idx: &[usize]) -> f64 {
        let k = self.t.order();
        let (i, j) = idx.split_at(k);
        if (0..k).all(|s| i[s] == j[self.sigma.apply(s)]) {
            self.t.get(i)
        } else {
            0.0
        }
    }

    /// `(Diag^σ T)[H_1, .., H_k]`, summed over the `n^k` support only.
    pub fn apply(&self, hs: &[&Matrix]) -> Result<f64> {
        let n = check_factors(self.sigma, hs)?;
        if n != self.dim() {
            return Err(Error::shape(
                "Diag^sigma application",
                format!("matrices of size {0}x{0}", self.dim()),
                format!("matrices of size {n}x{n}"),
            ));
        }
        let k = self.t.order();
        let mut i = vec![0; k];
        let mut j = vec![0; k];
        let mut acc = 0.0;
        for &v in self.t.data() {
            partner(self.sigma, &i, &mut j);
            let mut w = v;
            for (nu, h) in hs.iter().enumerate() {
                w *= h.at(i[nu], j[nu]);
            }
            acc += w;
            next_index(&mut i, n);
        }
        Ok(acc)
    }

    pub fn to_dense(&self) -> Tensor {
        diag_sigma(self.sigma, self.t).expect("order checked on construction")
    }
}

/// Both sides of the duality identity:
/// `lhs = ⟨T, U^T H_1 U ∘_σ ⋯ ∘_σ U^T H_k U⟩` and
/// `rhs = (U (Diag^σ T) U^T)[H_1, .., H_k]`.
pub fn dual_pairing_check(t: &Tensor, sigma: &Permutation, u: &Matrix, hs: &[&Matrix]) -> Result<(f64, f64)> {
    check_order(sigma, t)?;
    let n = check_factors(sigma, hs)?;
    u.check_matrix("dual pairing")?;
    if u.dim() != n || t.dim() != n {
        return Err(Error::shape(
            "dual pairing",
            format!("U and T of dimension {n}"),
            format!("U {}, T {}", u.shape_string(), t.shape_string()),
        ));
    }
    let deviation = u.orthogonality_defect();
    if !(deviation <= ORTHOGONALITY_TOL) {
        return Err(Error::NotOrthogonal {
            deviation,
            tol: ORTHOGONALITY_TOL,
        });
    }
    let ut = u.transpose()?;
    let tilde: Vec<Matrix> = hs
        .iter()
        .map(|h| ut.matmul(h)?.matmul(u))
        .collect::<Result<_>>()?;
    let tilde_refs: Vec<&Matrix> = tilde.iter().collect();
    let lhs = inner_hadamard(t, sigma, &tilde_refs)?;
    let rhs = apply(&conjugate(u, &diag_sigma(sigma, t)?)?, hs)?;
    Ok((lhs, rhs))
}

/// `|lhs - rhs| <= DUAL_TOL (1 + |lhs|)`.
pub fn dual_agrees(lhs: f64, rhs: f64) -> bool {
    (lhs - rhs).abs() <= DUAL_TOL * (1.0 + lhs.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;
    use crate::spectral::random::{random_matrix, random_orthogonal_from, random_permutation, random_tensor, stream_rng};
    use crate::tensor::{apply_vectors, contract_last_pair, norm, permutation_matrix};

    fn p(s: &str, k: usize) -> Permutation {
        Permutation::parse(s, Some(k)).unwrap()
    }

    #[test]
    fn order_one_is_the_diagonal_matrix() {
        let x = Tensor::vector(vec![1.0, -2.0, 3.5]).unwrap();
        assert_eq!(diag_sigma(&Permutation::identity(1), &x).unwrap(), Tensor::diag_matrix(x.data()));
    }

    #[test]
    fn zero_and_identity_patterns() {
        let sigma = p("(12)", 2);
        assert_eq!(diag_sigma(&sigma, &Tensor::zeros(2, 3)).unwrap(), Tensor::zeros(4, 3));
        let m = Tensor::from_fn(2, 3, |i| (3 * i[0] + i[1] + 1) as f64);
        let d = diag_sigma(&Permutation::identity(2), &m).unwrap();
        let mut idx = vec![0; 4];
        loop {
            let expected = if idx[0] == idx[2] && idx[1] == idx[3] {
                m.get(&idx[..2])
            } else {
                0.0
            };
            assert_eq!(d.get(&idx), expected);
            if !next_index(&mut idx, 3) {
                break;
            }
        }
    }

    #[test]
    fn lift_is_an_isometry() {
        let mut rng = stream_rng(3, 0);
        for sigma in all_permutations(3).unwrap() {
            let t = random_tensor(3, 3, &mut rng);
            assert_eq!(norm(&diag_sigma(&sigma, &t).unwrap()), norm(&t));
        }
    }

    #[test]
    fn view_matches_dense() {
        let mut rng = stream_rng(4, 0);
        for sigma in all_permutations(3).unwrap() {
            let t = random_tensor(3, 3, &mut rng);
            let hs: Vec<Tensor> = (0..3).map(|_| random_matrix(3, &mut rng)).collect();
            let refs: Vec<&Tensor> = hs.iter().collect();
            let view = DiagSigmaView::new(&sigma, &t).unwrap();
            let dense = view.to_dense();
            let mut idx = vec![0; 6];
            loop {
                assert_eq!(view.entry(&idx), dense.get(&idx));
                if !next_index(&mut idx, 3) {
                    break;
                }
            }
            let a = view.apply(&refs).unwrap();
            let b = apply(&dense, &refs).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn duality_with_random_orthogonal_matrices() {
        for k in 1..=3 {
            for n in 3..=5 {
                for trial in 0..5 {
                    let mut rng = stream_rng(100 + k as u64, (n * 10 + trial) as u64);
                    let sigma = random_permutation(k, &mut rng);
                    let t = random_tensor(k, n, &mut rng);
                    let u = random_orthogonal_from(&mut rng, n);
                    let hs: Vec<Tensor> = (0..k).map(|_| random_matrix(n, &mut rng)).collect();
                    let refs: Vec<&Tensor> = hs.iter().collect();
                    let (lhs, rhs) = dual_pairing_check(&t, &sigma, &u, &refs).unwrap();
                    assert!(dual_agrees(lhs, rhs), "k={k} n={n} {lhs} vs {rhs}");
                }
            }
        }
    }

    #[test]
    fn identity_u_gives_the_plain_pairing() {
        let mut rng = stream_rng(5, 0);
        for sigma in all_permutations(3).unwrap() {
            let t = random_tensor(3, 3, &mut rng);
            let hs: Vec<Tensor> = (0..3).map(|_| random_matrix(3, &mut rng)).collect();
            let refs: Vec<&Tensor> = hs.iter().collect();
            let (lhs, rhs) = dual_pairing_check(&t, &sigma, &Tensor::identity(3), &refs).unwrap();
            let direct = apply(&diag_sigma(&sigma, &t).unwrap(), &refs).unwrap();
            assert!((lhs - inner_hadamard(&t, &sigma, &refs).unwrap()).abs() <= 1e-12);
            assert!(dual_agrees(lhs, rhs) && dual_agrees(lhs, direct));
        }
    }

    #[test]
    fn identity_sigma_pairs_with_diagonals() {
        let mut rng = stream_rng(6, 0);
        let t = random_tensor(3, 4, &mut rng);
        let hs: Vec<Tensor> = (0..3).map(|_| random_matrix(4, &mut rng)).collect();
        let refs: Vec<&Tensor> = hs.iter().collect();
        let diags: Vec<Vec<f64>> = hs.iter().map(Tensor::diagonal).collect();
        let diag_refs: Vec<&[f64]> = diags.iter().map(Vec::as_slice).collect();
        let expected = apply_vectors(&t, &diag_refs).unwrap();
        let got = apply(&diag_sigma(&Permutation::identity(3), &t).unwrap(), &refs).unwrap();
        assert!((got - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
    }

    #[test]
    fn order_one_reduces_to_the_matrix_identity() {
        // <U Diag(x) U^T, H> = <x, diag(U^T H U)>
        let mut rng = stream_rng(7, 0);
        let x = random_tensor(1, 4, &mut rng);
        let h = random_matrix(4, &mut rng);
        let u = random_orthogonal_from(&mut rng, 4);
        let (lhs, rhs) = dual_pairing_check(&x, &Permutation::identity(1), &u, &[&h]).unwrap();
        let ht = u.transpose().unwrap().matmul(&h).unwrap().matmul(&u).unwrap();
        let expected: f64 = x.data().iter().zip(ht.diagonal()).map(|(a, b)| a * b).sum();
        assert!(dual_agrees(expected, lhs) && dual_agrees(expected, rhs));
    }

    #[test]
    fn conjugated_lift_on_transformed_matrices() {
        let mut rng = stream_rng(8, 0);
        let sigma = p("(132)", 3);
        let t = random_tensor(3, 3, &mut rng);
        let u = random_orthogonal_from(&mut rng, 3);
        let hs: Vec<Tensor> = (0..3).map(|_| random_matrix(3, &mut rng)).collect();
        let refs: Vec<&Tensor> = hs.iter().collect();
        let ut = u.transpose().unwrap();
        let tilde: Vec<Tensor> = hs.iter().map(|h| ut.matmul(h).unwrap().matmul(&u).unwrap()).collect();
        let tilde_refs: Vec<&Tensor> = tilde.iter().collect();
        let d = diag_sigma(&sigma, &t).unwrap();
        let a = apply(&d, &tilde_refs).unwrap();
        let b = apply(&conjugate(&u, &d).unwrap(), &refs).unwrap();
        assert!(dual_agrees(a, b));
    }

    #[test]
    fn permutation_matrices_commute_with_the_lift() {
        let mut rng = stream_rng(9, 0);
        for mu in all_permutations(3).unwrap() {
            let pi = random_permutation(4, &mut rng);
            let pm = permutation_matrix(&pi);
            let t = random_tensor(3, 4, &mut rng);
            let a = conjugate(&pm, &diag_sigma(&mu, &t).unwrap()).unwrap();
            let b = diag_sigma(&mu, &conjugate(&pm, &t).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn conjugation_commutes_with_contraction() {
        for k in 1..=3 {
            let n = 3;
            let mut rng = stream_rng(10, k as u64);
            let t = random_tensor(2 * k, n, &mut rng);
            let u = random_orthogonal_from(&mut rng, n);
            let h = random_matrix(n, &mut rng);
            let ht = u.transpose().unwrap().matmul(&h).unwrap().matmul(&u).unwrap();
            let a = conjugate(&u, &contract_last_pair(&t, &ht).unwrap()).unwrap();
            let b = contract_last_pair(&conjugate(&u, &t).unwrap(), &h).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() <= 1e-9 * (1.0 + b.max_abs()));
        }
    }

    #[test]
    fn rejects_non_orthogonal_and_bad_shapes() {
        let t = Tensor::zeros(2, 2);
        let h = Tensor::identity(2);
        let u = Tensor::from_rows(&[vec![1.0, 0.1], vec![0.0, 1.0]]).unwrap();
        let err = dual_pairing_check(&t, &Permutation::identity(2), &u, &[&h, &h]).unwrap_err();
        assert!(matches!(err, Error::NotOrthogonal { .. }));
        assert!(diag_sigma(&Permutation::identity(2), &Tensor::zeros(3, 2)).is_err());
        assert!(dual_pairing_check(&t, &Permutation::identity(2), &Tensor::identity(3), &[&h, &h]).is_err());
    }
}
