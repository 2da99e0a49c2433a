//! Case generators for each suite.

use super::{run_jobs, Case, Suite, VerifyConfig};
use crate::diagop::{dual_agrees, dual_pairing_check, diag_sigma, DUAL_TOL};
use crate::error::Result;
use crate::hadamard::{inner_hadamard, transfer_sides, transfer_trial, transfer_witness, TransferTrial, TRANSFER_TOL};
use crate::perm::{all_permutations, Permutation};
use crate::spectral::random::{
    random_matrix, random_orthogonal_from, random_permutation, random_symmetric, random_symmetric_with_gap,
    random_tensor, random_unit_symmetric, stream_rng,
};
use crate::spectral::{
    eig_sym_ordered, fd_gradient, fd_hessian_apply, grad_spectral, hess_spectral_apply, hess_spectral_tensor,
    SymmetricFunction, DEFAULT_STEP,
};
use crate::tensor::{apply, apply_vectors, conjugate, contract_last_pair, inner, norm, permutation_matrix, Matrix, Partition, Tensor};

use rand_chacha::ChaCha8Rng;

const NORM_TOL: f64 = 1e-10;
const ASSOC_TOL: f64 = 1e-10;
const CONTRACT_TOL: f64 = 1e-9;
const GRAD_TOL: f64 = 1e-6;
const GRAD_ANCHOR_TOL: f64 = 1e-12;
const HESS_FD_TOL: f64 = 1e-5;
const HESS_EXACT_TOL: f64 = 1e-10;
const REDUCTION_TOL: f64 = 1e-9;
/// Eigenvalue separation of the random points in the derivative suites.
const SPECTRAL_GAP: f64 = 0.1;
/// Functions exercised by the derivative suites.
const DERIVATIVE_FUNCTIONS: [&str; 5] = ["trace", "fro2", "logbarrier", "esym2", "separable:exp"];

fn rng(cfg: &VerifyConfig, suite: Suite, index: usize) -> ChaCha8Rng {
    stream_rng(cfg.seed, (suite.tag() << 40) | index as u64)
}

/// Guards a case body: errors become failed cases.
fn guarded(label: String, body: impl FnOnce(String) -> Result<Case>) -> Case {
    let copy = label.clone();
    body(label).unwrap_or_else(|e| Case::errored(copy, &e))
}

/// Entry of largest disagreement: `(a_entry, b_entry, |diff|)`.
fn worst_entry(a: &Tensor, b: &Tensor) -> Result<(f64, f64, f64)> {
    a.check_same_shape(b, "comparison")?;
    let mut worst = (0.0, 0.0, 0.0);
    for (&x, &y) in a.data().iter().zip(b.data()) {
        let d = (x - y).abs();
        if d > worst.2 || d.is_nan() {
            worst = (x, y, d);
        }
    }
    Ok(worst)
}

fn relative_case(label: String, a: &Tensor, b: &Tensor, tol: f64) -> Result<Case> {
    let (x, y, d) = worst_entry(a, b)?;
    Ok(Case::within(label, x, y, d / (1.0 + b.max_abs()), tol))
}

fn matrices(k: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<Matrix> {
    (0..k).map(|_| random_matrix(n, rng)).collect()
}

pub(super) fn cases(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Case>> {
    Ok(match suite {
        Suite::Transfer => transfer(cfg, None)?,
        Suite::TransferBlock => {
            let mut all = Vec::new();
            for part in block_partitions(cfg.n) {
                all.extend(transfer(cfg, Some(&part))?);
            }
            all
        }
        Suite::Dual => dual(cfg, cfg.k, cfg.n),
        Suite::Norm => norm_invariance(cfg),
        Suite::Assoc => associativity(cfg),
        Suite::PermCommute => perm_commute(cfg),
        Suite::Contract => contraction(cfg),
        Suite::Corollary32 => corollary32(cfg),
        Suite::Grad => gradient(cfg),
        Suite::Hess => hessian(cfg),
        Suite::All => unreachable!("handled by run"),
    })
}

/// The partitions `{1..⌈n/2⌉} ∪ rest` and `{1..n-1} ∪ {n}` (the same for
/// `n = 2`); for `n = 4` these are `{{1,2},{3,4}}` and `{{1,2,3},{4}}`.
pub(super) fn block_partitions(n: usize) -> Vec<Partition> {
    let half = n.div_ceil(2);
    let a = Partition::from_labels(&(0..n).map(|i| i >= half).collect::<Vec<_>>());
    let b = Partition::from_labels(&(0..n).map(|i| i + 1 == n).collect::<Vec<_>>());
    if a == b {
        vec![a]
    } else {
        vec![a, b]
    }
}

fn transfer(cfg: &VerifyConfig, block: Option<&Partition>) -> Result<Vec<Case>> {
    let perms = all_permutations(cfg.k)?;
    let m = perms.len();
    let suite = if block.is_some() { Suite::TransferBlock } else { Suite::Transfer };
    let block_label = block.map(|p| format!(" blocks={:?}", crate::io::partition_to_json(p)["blocks"])).unwrap_or_default();
    let block_offset = block.map_or(0, |p| p.num_blocks() * 1_000_000);
    Ok(run_jobs(m * m * m, |job| {
        let mu = &perms[job / (m * m)];
        let s1 = &perms[(job / m) % m];
        let s2 = &perms[job % m];
        let triple = format!("mu={mu} sigma1={s1} sigma2={s2}{block_label}");
        let predicted = match s2.inverse().compose(s1).and_then(|rho| (cfg.precedes)(mu, &rho)) {
            Ok(p) => p,
            Err(e) => return vec![Case::errored(triple, &e)],
        };
        let judge = |label: String, outcome: Result<TransferTrial>| match outcome {
            Ok(t) => Case {
                label,
                lhs: t.lhs,
                rhs: t.rhs,
                error: t.diff(),
                passed: t.agrees() == predicted,
                tracked: predicted,
            },
            Err(e) => Case::errored(label, &e),
        };
        let mut out = Vec::with_capacity(cfg.trials + 1);
        for t in 0..cfg.trials {
            let mut r = rng(cfg, suite, block_offset + job * cfg.trials + t);
            let outcome = transfer_trial(mu, s1, s2, cfg.n, block, &mut r);
            out.push(judge(format!("{triple} trial={t} predicted_equal={predicted}"), outcome));
        }
        let outcome = transfer_witness(mu, s1, s2, cfg.n, block);
        out.push(judge(format!("{triple} witness predicted_equal={predicted}"), outcome));
        out
    }))
}

/// The duality suite over `k ∈ {1,2,3}` and `n ∈ {3,4}`.
pub(super) fn dual_sweep(cfg: &VerifyConfig) -> Vec<Case> {
    let mut out = Vec::new();
    for k in 1..=3 {
        for n in 3..=4 {
            out.extend(dual(cfg, k, n));
        }
    }
    out
}

fn dual_case(label: String, lhs: f64, rhs: f64) -> Case {
    let error = (lhs - rhs).abs() / (1.0 + lhs.abs());
    let mut c = Case::within(label, lhs, rhs, error, DUAL_TOL);
    c.passed = dual_agrees(lhs, rhs);
    c
}

/// Per trial: the general identity with a random orthogonal `U`, the `U = I`
/// case and the `σ = id` case against `T[diag H_1, .., diag H_k]`.
pub(super) fn dual(cfg: &VerifyConfig, k: usize, n: usize) -> Vec<Case> {
    let perms = all_permutations(k).expect("k checked by the caller");
    run_jobs(cfg.trials, |t| {
        let mut r = rng(cfg, Suite::Dual, (k * 16 + n) * 1_000_000 + t);
        let sigma = &perms[t % perms.len()];
        let tensor = random_tensor(k, n, &mut r);
        let u = random_orthogonal_from(&mut r, n);
        let hs = matrices(k, n, &mut r);
        let refs: Vec<&Matrix> = hs.iter().collect();
        let base = format!("k={k} n={n} trial={t} sigma={sigma}");
        let general = guarded(format!("{base} random U"), |label| {
            let (lhs, rhs) = dual_pairing_check(&tensor, sigma, &u, &refs)?;
            Ok(dual_case(label, lhs, rhs))
        });
        let plain = guarded(format!("{base} U=I"), |label| {
            let lhs = inner_hadamard(&tensor, sigma, &refs)?;
            let rhs = apply(&diag_sigma(sigma, &tensor)?, &refs)?;
            Ok(dual_case(label, lhs, rhs))
        });
        let id = Permutation::identity(k);
        let diagonal = guarded(format!("k={k} n={n} trial={t} sigma=id diagonals"), |label| {
            let diags: Vec<Vec<f64>> = hs.iter().map(Tensor::diagonal).collect();
            let diag_refs: Vec<&[f64]> = diags.iter().map(Vec::as_slice).collect();
            let lhs = apply_vectors(&tensor, &diag_refs)?;
            let rhs = apply(&diag_sigma(&id, &tensor)?, &refs)?;
            Ok(dual_case(label, lhs, rhs))
        });
        vec![general, plain, diagonal]
    })
}

fn norm_invariance(cfg: &VerifyConfig) -> Vec<Case> {
    run_jobs(cfg.trials, |t| {
        let mut r = rng(cfg, Suite::Norm, t);
        let tensor = random_tensor(cfg.k, cfg.n, &mut r);
        let u = random_orthogonal_from(&mut r, cfg.n);
        vec![guarded(format!("k={} n={} trial={t}", cfg.k, cfg.n), |label| {
            let lhs = norm(&conjugate(&u, &tensor)?);
            let rhs = norm(&tensor);
            Ok(Case::within(label, lhs, rhs, (lhs - rhs).abs() / rhs, NORM_TOL))
        })]
    })
}

fn associativity(cfg: &VerifyConfig) -> Vec<Case> {
    run_jobs(cfg.trials, |t| {
        let mut r = rng(cfg, Suite::Assoc, t);
        let tensor = random_tensor(cfg.k, cfg.n, &mut r);
        let u = random_orthogonal_from(&mut r, cfg.n);
        let v = random_orthogonal_from(&mut r, cfg.n);
        vec![guarded(format!("k={} n={} trial={t}", cfg.k, cfg.n), |label| {
            let nested = conjugate(&v, &conjugate(&u, &tensor)?)?;
            let product = conjugate(&v.matmul(&u)?, &tensor)?;
            relative_case(label, &nested, &product, ASSOC_TOL)
        })]
    })
}

fn perm_commute(cfg: &VerifyConfig) -> Vec<Case> {
    run_jobs(cfg.trials, |t| {
        let mut r = rng(cfg, Suite::PermCommute, t);
        let mu = random_permutation(cfg.k, &mut r);
        let pi = random_permutation(cfg.n, &mut r);
        let tensor = random_tensor(cfg.k, cfg.n, &mut r);
        vec![guarded(format!("k={} n={} trial={t} mu={mu} P={pi}", cfg.k, cfg.n), |label| {
            let p = permutation_matrix(&pi);
            let a = conjugate(&p, &diag_sigma(&mu, &tensor)?)?;
            let b = diag_sigma(&mu, &conjugate(&p, &tensor)?)?;
            let (x, y, d) = worst_entry(&a, &b)?;
            Ok(Case::within(label, x, y, d, 0.0))
        })]
    })
}

/// `U (T[U^T H U]) U^T = (U T U^T)[H]` for a random 2k-tensor.
fn contraction(cfg: &VerifyConfig) -> Vec<Case> {
    run_jobs(cfg.trials, |t| {
        let mut r = rng(cfg, Suite::Contract, t);
        let tensor = random_tensor(2 * cfg.k, cfg.n, &mut r);
        let u = random_orthogonal_from(&mut r, cfg.n);
        let h = random_matrix(cfg.n, &mut r);
        vec![guarded(format!("k={} n={} trial={t}", cfg.k, cfg.n), |label| {
            let ht = u.transpose()?.matmul(&h)?.matmul(&u)?;
            let a = conjugate(&u, &contract_last_pair(&tensor, &ht)?)?;
            let b = contract_last_pair(&conjugate(&u, &tensor)?, &h)?;
            relative_case(label, &a, &b, CONTRACT_TOL)
        })]
    })
}

/// The displayed small-k transfer identities `(μ, σ1, σ2)`.
pub fn corollary32_identities() -> Vec<(Permutation, Permutation, Permutation)> {
    let p = |s: &str, k: usize| Permutation::parse(s, Some(k)).expect("literal cycle notation");
    let mut out = vec![
        (p("(12)", 2), p("(1)(2)", 2), p("(12)", 2)),
        (p("(13)", 3), p("(132)", 3), p("(12)(3)", 3)),
        (p("(23)", 3), p("(123)", 3), p("(12)(3)", 3)),
        (p("(13)", 3), p("(13)(2)", 3), p("(1)(2)(3)", 3)),
        (p("(23)", 3), p("(1)(23)", 3), p("(1)(2)(3)", 3)),
    ];
    let all3 = all_permutations(3).expect("k = 3");
    for s1 in &all3 {
        for s2 in &all3 {
            out.push((p("(123)", 3), s1.clone(), s2.clone()));
        }
    }
    out
}

/// Alternates symmetric (even trials) and general (odd trials) matrices.
fn corollary32(cfg: &VerifyConfig) -> Vec<Case> {
    let identities = corollary32_identities();
    run_jobs(cfg.trials, |t| {
        let mut r = rng(cfg, Suite::Corollary32, t);
        let symmetric = t % 2 == 0;
        let hs: Vec<Matrix> = (0..3)
            .map(|_| {
                if symmetric {
                    random_symmetric(cfg.n, &mut r)
                } else {
                    random_matrix(cfg.n, &mut r)
                }
            })
            .collect();
        let t2 = random_tensor(2, cfg.n, &mut r);
        let t3 = random_tensor(3, cfg.n, &mut r);
        identities
            .iter()
            .map(|(mu, s1, s2)| {
                let k = mu.k();
                let label = format!("trial={t} symmetric={symmetric} mu={mu} sigma1={s1} sigma2={s2}");
                guarded(label, |label| {
                    let refs: Vec<&Matrix> = hs[..k].iter().collect();
                    let tensor = if k == 2 { &t2 } else { &t3 };
                    let s = transfer_sides(mu, s1, s2, tensor, &refs, None)?;
                    Ok(Case::within(label, s.lhs, s.rhs, s.diff(), TRANSFER_TOL))
                })
            })
            .collect()
    })
}

fn function(name: &str) -> SymmetricFunction {
    SymmetricFunction::from_name(name).expect("registered name")
}

fn gradient(cfg: &VerifyConfig) -> Vec<Case> {
    let m = DERIVATIVE_FUNCTIONS.len();
    run_jobs(cfg.trials * m, |job| {
        let (t, fi) = (job / m, job % m);
        let name = DERIVATIVE_FUNCTIONS[fi];
        let f = function(name);
        let mut r = rng(cfg, Suite::Grad, t);
        let x = random_symmetric_with_gap(cfg.n, SPECTRAL_GAP, &mut r);
        let label = format!("f={name} n={} trial={t}", cfg.n);
        let mut out = vec![guarded(format!("{label} finite differences"), |label| {
            let g = grad_spectral(&f, &x)?;
            let fd = fd_gradient(&f, &x, DEFAULT_STEP)?;
            let (a, b, d) = worst_entry(&g, &fd)?;
            Ok(Case::within(label, a, b, d / (1.0 + g.max_abs()), GRAD_TOL))
        })];
        let anchor = match name {
            "trace" => Some(Tensor::identity(cfg.n)),
            "fro2" => Some(x.scale(2.0)),
            _ => None,
        };
        if let Some(expected) = anchor {
            out.push(guarded(format!("{label} closed form"), |label| {
                relative_case(label, &grad_spectral(&f, &x)?, &expected, GRAD_ANCHOR_TOL)
            }));
        }
        out
    })
}

/// Per function and trial: the formula against finite differences, the
/// 4-tensor against the bilinear form, and the tensor at `X` against the
/// conjugated tensor at `Diag λ(X)`. For `fro2` also the closed form
/// `2⟨E1, E2⟩`.
fn hessian(cfg: &VerifyConfig) -> Vec<Case> {
    let m = DERIVATIVE_FUNCTIONS.len();
    run_jobs(cfg.trials * m, |job| {
        let (t, fi) = (job / m, job % m);
        let name = DERIVATIVE_FUNCTIONS[fi];
        let f = function(name);
        let mut r = rng(cfg, Suite::Hess, t);
        let x = random_symmetric_with_gap(cfg.n, SPECTRAL_GAP, &mut r);
        let e1 = random_unit_symmetric(cfg.n, &mut r);
        let e2 = random_unit_symmetric(cfg.n, &mut r);
        let label = format!("f={name} n={} trial={t}", cfg.n);
        let mut out = vec![
            guarded(format!("{label} finite differences"), |label| {
                let v = hess_spectral_apply(&f, &x, &e1, &e2)?;
                let fd = fd_hessian_apply(&f, &x, &e1, &e2, DEFAULT_STEP)?;
                Ok(Case::within(label, v, fd, (v - fd).abs() / (1.0 + v.abs()), HESS_FD_TOL))
            }),
            guarded(format!("{label} tensor form"), |label| {
                let v = hess_spectral_apply(&f, &x, &e1, &e2)?;
                let w = apply(&hess_spectral_tensor(&f, &x)?, &[&e1, &e2])?;
                Ok(Case::within(label, w, v, (w - v).abs() / (1.0 + v.abs()), HESS_EXACT_TOL))
            }),
            guarded(format!("{label} diagonal reduction"), |label| {
                let d = eig_sym_ordered(&x)?;
                let at_x = hess_spectral_tensor(&f, &x)?;
                let at_diag = hess_spectral_tensor(&f, &Tensor::diag_matrix(&d.lambda))?;
                relative_case(label, &at_x, &conjugate(&d.v, &at_diag)?, REDUCTION_TOL)
            }),
        ];
        if name == "fro2" {
            out.push(guarded(format!("{label} closed form"), |label| {
                let v = hess_spectral_apply(&f, &x, &e1, &e2)?;
                let exact = 2.0 * inner(&e1, &e2)?;
                Ok(Case::within(label, v, exact, (v - exact).abs() / (1.0 + exact.abs()), HESS_EXACT_TOL))
            }));
        }
        out
    })
}
