//! Brute-force ground truth: k-block set partitions, seeded sampling of
//! k-separable states, and a scan that hammers a criterion with states it must
//! never flag.
//!
//! A criterion is sound when every k-separable state evaluates non-positive,
//! so any sampled value above [`SOUNDNESS_TOL`] falsifies the implementation.
//! The samplers are deterministic in their seeds, and the scan derives one
//! seed per trial so parallel order cannot change what is sampled.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::criteria::{detect, CriterionContext};
use crate::error::{Error, Result};
use crate::qstate::{position_bit, DensityMatrix, PureState};

/// Sampled criterion values above this falsify soundness. Looser than the
/// evaluator's verdict band to absorb rounding accumulated over 2^n-term
/// constructions.
pub const SOUNDNESS_TOL: f64 = 1e-9;

/// Partition enumeration cap: Bell(10) = 115 975 partitions is comfortable,
/// two qubits more would be millions.
pub const MAX_PARTITION_QUBITS: u32 = 10;

/// Terms in each mixed-state trial of [`soundness_scan`].
const MIXTURE_TERMS: usize = 8;

/// A split of the qubit positions {1,…,n} into disjoint nonempty blocks.
///
/// Canonical form: positions ascending within each block, blocks ordered by
/// their minimum element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Partition {
    n_qubits: u32,
    blocks: Vec<Vec<u32>>,
}

impl Partition {
    /// Blocks must be nonempty, disjoint, and cover 1..=n_qubits exactly.
    /// Input order is normalized to canonical form.
    pub fn new(n_qubits: u32, mut blocks: Vec<Vec<u32>>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_PARTITION_QUBITS {
            return Err(Error::Parameter(format!(
                "partitions support 1..={MAX_PARTITION_QUBITS} qubits, got {n_qubits}"
            )));
        }
        let mut seen = vec![false; n_qubits as usize + 1];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::Parameter("blocks must be nonempty".into()));
            }
            block.sort_unstable();
            for &pos in block.iter() {
                if pos < 1 || pos > n_qubits {
                    return Err(Error::Parameter(format!(
                        "position {pos} outside 1..={n_qubits}"
                    )));
                }
                if seen[pos as usize] {
                    return Err(Error::Parameter(format!(
                        "position {pos} appears in more than one block"
                    )));
                }
                seen[pos as usize] = true;
            }
        }
        if seen[1..].iter().any(|&s| !s) {
            return Err(Error::Parameter(format!(
                "blocks must cover every position in 1..={n_qubits}"
            )));
        }
        blocks.sort();
        Ok(Self { n_qubits, blocks })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Number of blocks.
    pub fn k(&self) -> u32 {
        self.blocks.len() as u32
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }
}

impl fmt::Display for Partition {
    /// `1|2|34` below ten qubits, comma-separated positions from ten up.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.n_qubits >= 10;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, pos) in block.iter().enumerate() {
                if wide && j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{pos}")?;
            }
        }
        Ok(())
    }
}

/// All partitions of {1,…,n} into exactly k blocks, in lexicographic order of
/// their canonical block lists. The count is the Stirling number S(n, k).
pub fn enumerate_partitions(n_qubits: u32, k: u32) -> Result<Vec<Partition>> {
    if n_qubits == 0 || n_qubits > MAX_PARTITION_QUBITS {
        return Err(Error::Parameter(format!(
            "partitions support 1..={MAX_PARTITION_QUBITS} qubits, got {n_qubits}"
        )));
    }
    if k < 1 || k > n_qubits {
        return Err(Error::Parameter(format!(
            "block count must lie in 1..={n_qubits}, got {k}"
        )));
    }

    fn rec(pos: u32, n: u32, k: u32, blocks: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if pos > n {
            if blocks.len() as u32 == k {
                out.push(blocks.clone());
            }
            return;
        }
        // Every remaining position would have to open a block to reach k.
        if (blocks.len() as u32) + (n - pos + 1) < k {
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(pos);
            rec(pos + 1, n, k, blocks, out);
            blocks[i].pop();
        }
        if (blocks.len() as u32) < k {
            blocks.push(vec![pos]);
            rec(pos + 1, n, k, blocks, out);
            blocks.pop();
        }
    }

    let mut raw = Vec::new();
    rec(1, n_qubits, k, &mut Vec::new(), &mut raw);
    // Positions are visited in ascending order, so each block list is already
    // canonical; only the list order needs fixing.
    raw.sort();
    Ok(raw
        .into_iter()
        .map(|blocks| Partition { n_qubits, blocks })
        .collect())
}

/// A random pure product state across the partition's blocks: each block gets
/// an independent amplitude vector of complex standard normals, normalized
/// (uniform on the block's state sphere). Bit-reproducible from the seed.
pub fn random_product_state(partition: &Partition, seed: u64) -> Result<PureState> {
    sample_product(partition, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn sample_product<R: Rng>(partition: &Partition, rng: &mut R) -> Result<PureState> {
    let n = partition.n_qubits();
    let mut acc: Vec<(u64, Complex64)> = vec![(0, Complex64::new(1.0, 0.0))];
    for block in partition.blocks() {
        let dim = 1usize << block.len();
        let amps = loop {
            let raw: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                break raw.into_iter().map(|a| a / norm).collect::<Vec<_>>();
            }
        };
        // Local index bit t (MSB first) belongs to the t-th position of the
        // sorted block.
        let masks: Vec<u64> = (0..dim)
            .map(|ib| {
                block.iter().enumerate().fold(0u64, |m, (t, &pos)| {
                    if (ib >> (block.len() - 1 - t)) & 1 == 1 {
                        m | position_bit(n, pos)
                    } else {
                        m
                    }
                })
            })
            .collect();
        let next: Vec<(u64, Complex64)> = acc
            .iter()
            .flat_map(|&(bits, amp)| {
                masks
                    .iter()
                    .zip(&amps)
                    .map(move |(&mask, &block_amp)| (bits | mask, amp * block_amp))
            })
            .collect();
        acc = next;
    }
    PureState::new(n, acc)
}

/// A random k-separable mixed state: Dirichlet(1,…,1) weights over `terms`
/// random product states, each across an independently drawn k-block
/// partition. Deterministic in (n, k, terms, seed).
pub fn random_separable_mixture(
    n_qubits: u32,
    k: u32,
    terms: usize,
    seed: u64,
) -> Result<DensityMatrix> {
    if terms < 1 {
        return Err(Error::Parameter(format!("need at least one term, got {terms}")));
    }
    let partitions = enumerate_partitions(n_qubits, k)?;
    sample_mixture(&partitions, terms, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn sample_mixture<R: Rng>(
    partitions: &[Partition],
    terms: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let n = partitions[0].n_qubits();
    // Exponentials normalized to the simplex = Dirichlet(1,…,1).
    let mut weights: Vec<f64> = (0..terms)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    if total <= f64::MIN_POSITIVE {
        weights = vec![1.0 / terms as f64; terms];
    } else {
        for w in &mut weights {
            *w /= total;
        }
    }
    let mut acc: BTreeMap<(u64, u64), Complex64> = BTreeMap::new();
    for w in weights {
        let which = rng.random_range(0..partitions.len());
        let psi = sample_product(&partitions[which], rng)?;
        let support: Vec<(u64, Complex64)> = psi.iter().collect();
        for (i, &(x, ax)) in support.iter().enumerate() {
            for &(y, ay) in &support[i..] {
                *acc.entry((x, y)).or_default() += ax * ay.conj() * w;
            }
        }
    }
    DensityMatrix::from_entries(n, 0.0, acc)
}

/// A random k-separable pure projector: a uniformly chosen k-block partition,
/// then a random product state across it. Deterministic in (n, k, seed).
pub fn random_separable_pure(n_qubits: u32, k: u32, seed: u64) -> Result<PureState> {
    let partitions = enumerate_partitions(n_qubits, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let which = rng.random_range(0..partitions.len());
    sample_product(&partitions[which], &mut rng)
}

/// Kind of state a scan trial sampled.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TrialKind {
    Pure,
    Mixed,
}

impl fmt::Display for TrialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrialKind::Pure => "pure",
            TrialKind::Mixed => "mixed",
        })
    }
}

/// A sampled k-separable state whose criterion value exceeded
/// [`SOUNDNESS_TOL`]: proof of an implementation bug, preserved for debugging.
#[derive(Clone, Debug)]
pub struct Violation {
    pub kind: TrialKind,
    pub trial: usize,
    pub value: f64,
    pub state: DensityMatrix,
}

/// Outcome of a [`soundness_scan`].
#[derive(Clone, Debug)]
pub struct SoundnessReport {
    pub n_qubits: u32,
    pub k: u32,
    pub pure_trials: usize,
    pub mixed_trials: usize,
    /// Largest criterion value seen across every trial.
    pub max_value: f64,
    pub violation: Option<Violation>,
}

/// Evaluates the criterion on `trials` random k-separable pure states and
/// `trials / 10` mixed states (k taken from the context) and reports the
/// maximum value seen, with the offending state attached if it crosses
/// [`SOUNDNESS_TOL`].
///
/// Trials run in parallel; each derives its own seed from (`seed`, kind,
/// index), so the report does not depend on scheduling. Ties in the maximum
/// resolve to the earliest trial, pure before mixed.
pub fn soundness_scan(
    ctx: &CriterionContext,
    trials: usize,
    seed: u64,
) -> Result<SoundnessReport> {
    if trials < 1 {
        return Err(Error::Parameter(format!("need at least one trial, got {trials}")));
    }
    let partitions = enumerate_partitions(ctx.n_qubits(), ctx.k())?;
    let mixed_trials = trials / 10;

    let identity = || (f64::NEG_INFINITY, usize::MAX);
    let keep_max = |a: (f64, usize), b: (f64, usize)| -> Result<(f64, usize)> {
        Ok(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
    };

    let pure_best = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(f64, usize)> {
            let rho = pure_trial(&partitions, seed, t)?;
            Ok((detect(&rho, ctx)?.value, t))
        })
        .try_reduce(identity, keep_max)?;
    let mixed_best = (0..mixed_trials)
        .into_par_iter()
        .map(|t| -> Result<(f64, usize)> {
            let rho = mixed_trial(&partitions, seed, t)?;
            Ok((detect(&rho, ctx)?.value, t))
        })
        .try_reduce(identity, keep_max)?;

    let (kind, (value, trial)) = if mixed_best.0 > pure_best.0 {
        (TrialKind::Mixed, mixed_best)
    } else {
        (TrialKind::Pure, pure_best)
    };
    let violation = if value > SOUNDNESS_TOL {
        let state = match kind {
            TrialKind::Pure => pure_trial(&partitions, seed, trial)?,
            TrialKind::Mixed => mixed_trial(&partitions, seed, trial)?,
        };
        Some(Violation { kind, trial, value, state })
    } else {
        None
    };
    Ok(SoundnessReport {
        n_qubits: ctx.n_qubits(),
        k: ctx.k(),
        pure_trials: trials,
        mixed_trials,
        max_value: pure_best.0.max(mixed_best.0),
        violation,
    })
}

fn pure_trial(partitions: &[Partition], seed: u64, index: usize) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1, index as u64));
    let which = rng.random_range(0..partitions.len());
    Ok(DensityMatrix::from_pure(&sample_product(&partitions[which], &mut rng)?))
}

fn mixed_trial(partitions: &[Partition], seed: u64, index: usize) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 2, index as u64));
    sample_mixture(partitions, MIXTURE_TERMS, &mut rng)
}

/// splitmix64-style finalizer over a (seed, stream, index) mix; decorrelates
/// per-trial generators.
fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0xA076_1D64_78BD_642F))
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
