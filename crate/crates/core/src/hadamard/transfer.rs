//! Empirical test of the diagonal-transfer identity
//!
//! ```text
//! ⟨P_μ(T), H_1 ∘_σ1 ⋯ ∘_σ1 H_k⟩ = ⟨P_μ(T), H_1 ∘_σ2 ⋯ ∘_σ2 H_k⟩
//! ```
//!
//! which holds for all `T` and all `H_s` iff `μ ⪯ σ2⁻¹ ∘ σ1`. With a
//! partition, `P_μ` becomes the block projection `P̃_μ` and the `H_s` range
//! over block-constant matrices.
//!
//! A check consists of seeded random trials plus one deterministic witness.
//! The witness takes `T` equal to 1 on the projected support and basis
//! matrices `H_{p_s q_s}` with `p_s = p_{μ(s)} = q_{σ1(s)}`, where the
//! labels `p_s` are constant on μ-cycles and differ between the cycle of
//! some `s0` and that of `σ2⁻¹σ1(s0)`. When the refinement fails this makes
//! the left side nonzero and the right side zero. In the blocked version
//! labels are blocks and `H_{pq}` is the indicator of block `p` × block `q`.

use rand::Rng;

use super::inner_hadamard;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::spectral::random::{random_block_matrix, random_matrix, random_nonzero_tensor, stream_rng};
use crate::tensor::{project, project_block, Matrix, Partition, Tensor};

/// Absolute tolerance for the two sides to count as equal (inputs are
/// scaled to unit magnitude).
pub const TRANSFER_TOL: f64 = 1e-10;

/// Both sides of the identity for one choice of `T` and `H_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferTrial {
    pub lhs: f64,
    pub rhs: f64,
}

impl TransferTrial {
    pub fn diff(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn agrees(&self) -> bool {
        self.diff() <= TRANSFER_TOL
    }
}

#[derive(Debug, Clone)]
pub struct TransferOutcome {
    pub trials: Vec<TransferTrial>,
    pub witness: TransferTrial,
}

impl TransferOutcome {
    /// True iff every random trial and the witness agree.
    pub fn holds(&self) -> bool {
        self.witness.agrees() && self.trials.iter().all(TransferTrial::agrees)
    }
}

fn check_triple(mu: &Permutation, s1: &Permutation, s2: &Permutation) -> Result<usize> {
    for other in [s1, s2] {
        if other.k() != mu.k() {
            return Err(Error::DomainSize {
                expected: mu.k(),
                actual: other.k(),
            });
        }
    }
    Ok(mu.k())
}

/// Evaluates both sides for given `T` and `H_s`.
pub fn transfer_sides(
    mu: &Permutation,
    s1: &Permutation,
    s2: &Permutation,
    t: &Tensor,
    hs: &[&Matrix],
    block: Option<&Partition>,
) -> Result<TransferTrial> {
    check_triple(mu, s1, s2)?;
    let projected = match block {
        Some(part) => project_block(mu, part, t)?,
        None => project(mu, t)?,
    };
    Ok(TransferTrial {
        lhs: inner_hadamard(&projected, s1, hs)?,
        rhs: inner_hadamard(&projected, s2, hs)?,
    })
}

/// One random trial: `T` with every entry of magnitude in `[0.5, 1]`, and
/// matrices uniform on `[-1, 1]` (block-constant when `block` is given).
pub fn transfer_trial<R: Rng>(
    mu: &Permutation,
    s1: &Permutation,
    s2: &Permutation,
    n: usize,
    block: Option<&Partition>,
    rng: &mut R,
) -> Result<TransferTrial> {
    let k = check_triple(mu, s1, s2)?;
    let n = resolve_n(n, block)?;
    let t = random_nonzero_tensor(k, n, rng);
    let hs: Vec<Matrix> = (0..k)
        .map(|_| match block {
            Some(part) => random_block_matrix(part, rng),
            None => random_matrix(n, rng),
        })
        .collect();
    let refs: Vec<&Matrix> = hs.iter().collect();
    transfer_sides(mu, s1, s2, &t, &refs, block)
}

fn resolve_n(n: usize, block: Option<&Partition>) -> Result<usize> {
    match block {
        Some(part) if part.n() != n => Err(Error::shape(
            "transfer check",
            format!("a partition of 1..={n}"),
            format!("a partition of 1..={}", part.n()),
        )),
        _ if n == 0 => Err(Error::shape("transfer check", "n >= 1", "n = 0")),
        _ => Ok(n),
    }
}

/// The deterministic witness described in the module docs.
///
/// Labels are assigned per μ-cycle: the cycle of `s0` gets label 0, the
/// cycle of `σ2⁻¹σ1(s0)` label 1 and the remaining cycles 2, 3, …, capped
/// at the number of available labels (`n`, or the number of blocks). With at
/// least two labels the disproof works whenever the refinement fails; with a
/// single label no witness exists.
pub fn transfer_witness(
    mu: &Permutation,
    s1: &Permutation,
    s2: &Permutation,
    n: usize,
    block: Option<&Partition>,
) -> Result<TransferTrial> {
    let k = check_triple(mu, s1, s2)?;
    let n = resolve_n(n, block)?;
    let ids = mu.cycle_ids();
    let rho = s2.inverse().compose(s1)?;
    let s0 = (0..k).find(|&s| ids[s] != ids[rho.apply(s)]).unwrap_or(0);
    let r0 = rho.apply(s0);

    let num_cycles = mu.cycles().len();
    let available = block.map_or(n, Partition::num_blocks);
    let mut order: Vec<usize> = vec![ids[s0]];
    if ids[r0] != ids[s0] {
        order.push(ids[r0]);
    }
    order.extend((0..num_cycles).filter(|c| *c != ids[s0] && *c != ids[r0]));
    let mut label_of_cycle = vec![0; num_cycles];
    for (rank, &c) in order.iter().enumerate() {
        label_of_cycle[c] = rank.min(available - 1);
    }
    let p: Vec<usize> = (0..k).map(|s| label_of_cycle[ids[s]]).collect();
    let s1_inv = s1.inverse();
    let q: Vec<usize> = (0..k).map(|r| p[s1_inv.apply(r)]).collect();

    let hs: Vec<Matrix> = (0..k)
        .map(|s| match block {
            Some(part) => Tensor::from_fn(2, n, |i| {
                f64::from(part.block_of(i[0]) == p[s] && part.block_of(i[1]) == q[s])
            }),
            None => Tensor::basis_matrix(n, p[s], q[s]),
        })
        .collect();
    let refs: Vec<&Matrix> = hs.iter().collect();
    let ones = Tensor::from_fn(k, n, |_| 1.0);
    transfer_sides(mu, s1, s2, &ones, &refs, block)
}

/// Runs `trials` random trials (trial `t` draws from stream `t` of `seed`)
/// and the witness.
pub fn transfer_outcome(
    mu: &Permutation,
    s1: &Permutation,
    s2: &Permutation,
    n: usize,
    trials: usize,
    seed: u64,
    block: Option<&Partition>,
) -> Result<TransferOutcome> {
    let trials = (0..trials)
        .map(|t| {
            let mut rng = stream_rng(seed, t as u64);
            transfer_trial(mu, s1, s2, n, block, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let witness = transfer_witness(mu, s1, s2, n, block)?;
    Ok(TransferOutcome { trials, witness })
}

/// Whether the identity held on every trial and on the witness. Uses
/// `n = k + 1` (or the partition's `n`).
pub fn transfer_holds(
    mu: &Permutation,
    s1: &Permutation,
    s2: &Permutation,
    trials: usize,
    seed: u64,
    block: Option<&Partition>,
) -> Result<bool> {
    if trials == 0 {
        return Err(Error::Usage("at least one trial is required".into()));
    }
    let n = block.map_or(mu.k() + 1, Partition::n);
    Ok(transfer_outcome(mu, s1, s2, n, trials, seed, block)?.holds())
}
