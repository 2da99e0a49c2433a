use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sigma_tensor::diagop::diag_sigma;
use sigma_tensor::hadamard::inner_hadamard;
use sigma_tensor::io::{tensor_from_json, to_json_string, parse_json, tensor_to_json};
use sigma_tensor::perm::Permutation;
use sigma_tensor::spectral::random::random_orthogonal_from;
use sigma_tensor::tensor::{conjugate, norm, project, project_block, Partition, Tensor};

// Permutations of 1..=k via a shuffled map.
fn perm(k: usize) -> impl Strategy<Value = Permutation> {
    Just((0..k).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|m| Permutation::from_map(m).unwrap())
}

fn tensor(order: usize, dim: usize) -> impl Strategy<Value = Tensor> {
    prop::collection::vec(-10.0f64..10.0, dim.pow(order as u32))
        .prop_map(move |d| Tensor::from_data(order, dim, d).unwrap())
}

fn perm_and_tensor() -> impl Strategy<Value = (Permutation, Tensor)> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(k, n)| (perm(k), tensor(k, n)))
}

fn orthogonal(n: usize, seed: u64) -> Tensor {
    random_orthogonal_from(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

proptest! {
    #[test]
    fn prop_inverse_is_an_involution(p in (1usize..=8).prop_flat_map(perm)) {
        prop_assert_eq!(p.inverse().inverse(), p.clone());
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn prop_cycle_notation_round_trips(p in (1usize..=12).prop_flat_map(perm)) {
        let back = Permutation::parse(&p.to_string(), Some(p.k())).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn prop_refinement_is_a_preorder(
        (a, b, c) in (1usize..=6).prop_flat_map(|k| (perm(k), perm(k), perm(k)))
    ) {
        prop_assert!(a.precedes(&a).unwrap());
        prop_assert!(a.precedes(&Permutation::identity(a.k())).unwrap());
        if a.precedes(&b).unwrap() && b.precedes(&c).unwrap() {
            prop_assert!(a.precedes(&c).unwrap());
        }
    }

    #[test]
    fn prop_projection_is_idempotent((mu, t) in perm_and_tensor()) {
        let once = project(&mu, &t).unwrap();
        prop_assert_eq!(project(&mu, &once).unwrap(), once.clone());
        prop_assert!(norm(&once) <= norm(&t));
        let halves = Partition::from_one_based_blocks(
            t.dim(),
            &[(1..=t.dim().div_ceil(2)).collect(), (t.dim().div_ceil(2) + 1..=t.dim()).collect()]
                .into_iter()
                .filter(|b: &Vec<usize>| !b.is_empty())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let blocked = project_block(&mu, &halves, &t).unwrap();
        prop_assert_eq!(project_block(&mu, &halves, &blocked).unwrap(), blocked);
    }

    #[test]
    fn prop_inner_product_is_linear_in_t(
        (sigma, t, u, hs) in (1usize..=3, 2usize..=3).prop_flat_map(|(k, n)| {
            (perm(k), tensor(k, n), tensor(k, n), prop::collection::vec(tensor(2, n), k))
        }),
        a in -3.0f64..3.0,
    ) {
        let refs: Vec<&Tensor> = hs.iter().collect();
        let combined = t.lin_comb(a, &u, 1.0).unwrap();
        let lhs = inner_hadamard(&combined, &sigma, &refs).unwrap();
        let rhs = a * inner_hadamard(&t, &sigma, &refs).unwrap() + inner_hadamard(&u, &sigma, &refs).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn prop_lift_is_linear((sigma, t) in perm_and_tensor(), a in -3.0f64..3.0) {
        let scaled = diag_sigma(&sigma, &t.scale(a)).unwrap();
        let expected = diag_sigma(&sigma, &t).unwrap().scale(a);
        prop_assert!(scaled.max_abs_diff(&expected).unwrap() <= 1e-12 * (1.0 + expected.max_abs()));
    }

    #[test]
    fn prop_json_round_trip_is_exact(t in (0usize..=3, 1usize..=3).prop_flat_map(|(k, n)| {
        prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, n.pow(k as u32))
            .prop_map(move |d| Tensor::from_data(k, n, d).unwrap())
    })) {
        let text = to_json_string(&tensor_to_json(&t));
        let back = tensor_from_json(&parse_json(&text).unwrap()).unwrap();
        prop_assert_eq!(
            back.data().iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            t.data().iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn prop_orthogonal_conjugation_preserves_norm((_, t) in perm_and_tensor(), seed in any::<u64>()) {
        let u = orthogonal(t.dim(), seed);
        let c = conjugate(&u, &t).unwrap();
        prop_assert!((norm(&c) - norm(&t)).abs() <= 1e-10 * norm(&t).max(1.0));
        let back = conjugate(&u.transpose().unwrap(), &c).unwrap();
        prop_assert!(back.max_abs_diff(&t).unwrap() <= 1e-10 * t.max_abs().max(1.0));
    }
}
