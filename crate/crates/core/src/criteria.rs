//! Pattern-sum criteria whose positive values certify that an n-qubit state
//! admits no k-separable decomposition.
//!
//! Every criterion value has the shape
//!
//! ```text
//! value = off_diagonal_part - diagonal_part
//! ```
//!
//! where the first part sums |off-diagonal element| minus a geometric-mean
//! correction sqrt(d_reduced * d_extended) over ordered pattern pairs, and the
//! second multiplies the pattern diagonals by a combinatorial constant that
//! depends only on (n, k) and the pattern family. Non-positive values say
//! nothing: the criteria are one-sided.

use crate::error::{Error, Result};
use crate::qstate::{
    position_bit, positions, weight_masks, BasisState, DensityMatrix,
};

/// Values within this relative band around zero are reported as inconclusive
/// rather than trusting the last float digit.
pub const VERDICT_EPS: f64 = 1e-12;

/// What a criterion evaluation concluded.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// The state admits no k-separable decomposition.
    KNonseparable,
    /// Nothing follows; the state may or may not be k-separable.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::KNonseparable => "k_nonseparable",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A criterion evaluation broken into its two parts.
#[derive(Clone, Copy, Debug)]
pub struct CriterionValue {
    /// Ordered pattern-pair sum of |element| minus the swap correction.
    pub off_diagonal_part: f64,
    /// Combinatorial constant times the pattern diagonal sum.
    pub diagonal_part: f64,
    /// `off_diagonal_part - diagonal_part`.
    pub value: f64,
    /// [`Verdict::KNonseparable`] iff `value` clears [`VERDICT_EPS`] relative
    /// to the parts' scale.
    pub verdict: Verdict,
}

impl CriterionValue {
    pub(crate) fn new(off_diagonal_part: f64, diagonal_part: f64) -> Self {
        let value = off_diagonal_part - diagonal_part;
        let scale = 1f64.max(off_diagonal_part.abs() + diagonal_part.abs());
        let verdict = if value > VERDICT_EPS * scale {
            Verdict::KNonseparable
        } else {
            Verdict::Inconclusive
        };
        Self { off_diagonal_part, diagonal_part, value, verdict }
    }
}

fn check_k(n_qubits: u32, k: u32) -> Result<()> {
    if k < 2 || k > n_qubits {
        return Err(Error::Parameter(format!(
            "block count must lie in 2..={n_qubits}, got {k}"
        )));
    }
    Ok(())
}

/// Constant for the two-excitation pattern family: max(2(n - k - 1), n - k).
pub fn nk_two_excitation(n_qubits: u32, k: u32) -> Result<u32> {
    check_k(n_qubits, k)?;
    let n = n_qubits as i64;
    let k = k as i64;
    Ok((2 * (n - k - 1)).max(n - k).max(0) as u32)
}

/// Constant for the weight-m pattern family: max over t in 1..=m of
/// t(n - k + 1 - t), clamped at zero.
pub fn nk_m_excitation(n_qubits: u32, k: u32, m: u32) -> Result<u32> {
    check_k(n_qubits, k)?;
    if m < 1 || m > n_qubits - 1 {
        return Err(Error::Parameter(format!(
            "excitation count must lie in 1..={}, got {m}",
            n_qubits - 1
        )));
    }
    let n = n_qubits as i64;
    let k = k as i64;
    let best = (1..=m as i64)
        .map(|t| t * (n - k + 1 - t))
        .max()
        .expect("m >= 1");
    Ok(best.max(0) as u32)
}

/// The subset witnessing [`nk_product_basis`]: among all (n-k+1)-qubit subsets,
/// `subset` captures the most distance-2 neighbor pairs of `alpha`'s state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NkWitness {
    /// Index into the basis of the maximizing state.
    pub alpha: usize,
    /// Qubit positions (1-based, ascending) of the maximizing subset.
    pub subset: Vec<u32>,
    /// Neighbor pairs of `alpha` whose differing qubits both lie in `subset`.
    pub count: u32,
}

/// A list of distinct computational-basis states with their Hamming-distance-2
/// neighbor structure precomputed.
#[derive(Clone, Debug)]
pub struct ProductBasis {
    n_qubits: u32,
    states: Vec<u64>,
    neighbors: Vec<Vec<usize>>,
}

impl ProductBasis {
    /// States must be nonempty, distinct, and share one register width. Input
    /// order is preserved and fixes the evaluation order.
    pub fn new(states: Vec<BasisState>) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::Parameter("basis must contain at least one state".into()))?;
        let n_qubits = first.n_qubits();
        let mut bits = Vec::with_capacity(states.len());
        for state in &states {
            if state.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    actual: state.n_qubits(),
                });
            }
            if bits.contains(&state.bits()) {
                return Err(Error::DuplicateState(state.bitstring()));
            }
            bits.push(state.bits());
        }
        let neighbors = bits
            .iter()
            .map(|&a| {
                bits.iter()
                    .enumerate()
                    .filter(|(_, &b)| (a ^ b).count_ones() == 2)
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        Ok(Self { n_qubits, states: bits, neighbors })
    }

    /// Convenience constructor from raw bitmasks.
    pub fn from_bits(n_qubits: u32, bits: impl IntoIterator<Item = u64>) -> Result<Self> {
        let states = bits
            .into_iter()
            .map(|b| BasisState::new(n_qubits, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(states)
    }

    /// The full weight-m basis in ascending mask order.
    pub fn full_weight(n_qubits: u32, m: u32) -> Result<Self> {
        if m > n_qubits {
            return Err(Error::Parameter(format!(
                "weight must lie in 0..={n_qubits}, got {m}"
            )));
        }
        BasisState::new(n_qubits, 0)?;
        Ok(Self::from_bits(n_qubits, weight_masks(n_qubits, m))
            .expect("weight masks are distinct and in range"))
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Bitmask of the state at `index`.
    pub fn state_bits(&self, index: usize) -> u64 {
        self.states[index]
    }

    /// Indices of states at Hamming distance exactly 2 from state `index`.
    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.neighbors[index]
    }
}

/// Constant for an explicit basis: the largest number of distance-2 neighbor
/// pairs of any single state whose differing qubits fit inside one
/// (n - k + 1)-qubit subset. Exhaustive over states and subsets; the witness
/// records the lexicographically first maximizer.
pub fn nk_product_basis(basis: &ProductBasis, k: u32) -> Result<(u32, NkWitness)> {
    let n = basis.n_qubits();
    check_k(n, k)?;
    let subset_size = n - k + 1;
    let mut best = 0u32;
    // Seed with a concrete zero-count witness so a basis the constant cannot
    // credit still reports a checkable (state, subset) pair.
    let mut witness = NkWitness {
        alpha: 0,
        subset: positions(n, (1 << subset_size) - 1).collect(),
        count: 0,
    };
    for alpha in 0..basis.len() {
        let diffs: Vec<u64> = basis
            .neighbors(alpha)
            .iter()
            .map(|&beta| basis.state_bits(alpha) ^ basis.state_bits(beta))
            .collect();
        if diffs.is_empty() {
            continue;
        }
        for subset in weight_masks(n, subset_size) {
            let count = diffs.iter().filter(|&&d| d & subset == d).count() as u32;
            if count > best {
                best = count;
                witness = NkWitness {
                    alpha,
                    subset: positions(n, subset).collect(),
                    count,
                };
            }
        }
    }
    Ok((best, witness))
}

/// The geometric-mean correction paired with one off-diagonal element: the
/// diagonal pattern shrunk to the overlap and grown to the union.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SwapTerm {
    /// The lighter of the two diagonal patterns.
    pub reduced: BasisState,
    /// The heavier one.
    pub extended: BasisState,
}

/// Builds the correction pair for an off-diagonal element between two basis
/// states at Hamming distance exactly 2: flip their first differing qubit in
/// both. Flipping the second differing qubit instead yields the same unordered
/// pair.
pub fn swap_term(a: &BasisState, b: &BasisState) -> Result<SwapTerm> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: a.n_qubits(),
            actual: b.n_qubits(),
        });
    }
    if (a.bits() ^ b.bits()).count_ones() != 2 {
        return Err(Error::Parameter(format!(
            "states |{a}> and |{b}> must differ in exactly two positions"
        )));
    }
    let (reduced, extended) = swap_images_bits(a.bits(), b.bits());
    Ok(SwapTerm {
        reduced: BasisState::new_unchecked(a.n_qubits(), reduced),
        extended: BasisState::new_unchecked(a.n_qubits(), extended),
    })
}

/// Correction-pair bitmasks for states differing in exactly two bit positions,
/// lighter pattern first.
pub(crate) fn swap_images_bits(a: u64, b: u64) -> (u64, u64) {
    let diff = a ^ b;
    debug_assert_eq!(diff.count_ones(), 2);
    let top = 1u64 << (63 - diff.leading_zeros());
    let (x, y) = (a ^ top, b ^ top);
    if x.count_ones() <= y.count_ones() {
        (x, y)
    } else {
        (y, x)
    }
}

fn swap_sqrt(rho: &DensityMatrix, a: u64, b: u64) -> f64 {
    let (x, y) = swap_images_bits(a, b);
    // Clamp before the product: validated diagonals may sit within
    // DIAG_NEG_TOL below zero and must not poison the square root.
    (rho.diagonal(x).max(0.0) * rho.diagonal(y).max(0.0)).sqrt()
}

/// Two-excitation criterion.
///
/// Sums over ordered triples (i, j, j') of pairwise-distinct positions the
/// element between |e_i e_j> and |e_i e_j'> minus its correction, then
/// subtracts [`nk_two_excitation`] times the weight-2 diagonal sum. Needs at
/// least 3 qubits.
pub fn two_excitation_value(rho: &DensityMatrix, k: u32) -> Result<CriterionValue> {
    let nk = nk_two_excitation(rho.n_qubits(), k)?;
    two_excitation_with_nk(rho, nk)
}

fn two_excitation_with_nk(rho: &DensityMatrix, nk: u32) -> Result<CriterionValue> {
    let n = rho.n_qubits();
    if n < 3 {
        return Err(Error::Parameter(format!(
            "the two-excitation criterion needs at least 3 qubits, got {n}"
        )));
    }
    let mut off = 0.0;
    for i in 1..=n {
        let bi = position_bit(n, i);
        for j in 1..=n {
            if j == i {
                continue;
            }
            let bj = position_bit(n, j);
            for jp in 1..=n {
                if jp == i || jp == j {
                    continue;
                }
                let bjp = position_bit(n, jp);
                off += rho.entry_bits(bi | bj, bi | bjp).norm()
                    - swap_sqrt(rho, bi | bj, bi | bjp);
            }
        }
    }
    let diag: f64 = weight_masks(n, 2).map(|p| rho.diagonal(p)).sum();
    Ok(CriterionValue::new(off, nk as f64 * diag))
}

/// Weight-m generalization of the two-excitation criterion.
///
/// Sums over ordered pairs of weight-m patterns differing by one moved
/// excitation (pattern P, j in P, j' not in P), with [`nk_m_excitation`] as the
/// diagonal constant. At m = 1 the correction pattern pair is the empty and the
/// doubly-excited state.
pub fn m_excitation_value(rho: &DensityMatrix, k: u32, m: u32) -> Result<CriterionValue> {
    let nk = nk_m_excitation(rho.n_qubits(), k, m)?;
    m_excitation_with_nk(rho, m, nk)
}

fn m_excitation_with_nk(rho: &DensityMatrix, m: u32, nk: u32) -> Result<CriterionValue> {
    let n = rho.n_qubits();
    let mut off = 0.0;
    let mut diag = 0.0;
    for p in weight_masks(n, m) {
        diag += rho.diagonal(p);
        for j in 1..=n {
            let bj = position_bit(n, j);
            if p & bj == 0 {
                continue;
            }
            for jp in 1..=n {
                let bjp = position_bit(n, jp);
                if p & bjp != 0 {
                    continue;
                }
                let q = (p & !bj) | bjp;
                off += rho.entry_bits(p, q).norm() - swap_sqrt(rho, p, q);
            }
        }
    }
    Ok(CriterionValue::new(off, nk as f64 * diag))
}

/// Explicit-basis criterion: for each state in the basis, sum the elements to
/// its distance-2 neighbors (ordered pairs) minus their corrections, against
/// [`nk_product_basis`] times the basis diagonal sum.
pub fn product_basis_value(
    rho: &DensityMatrix,
    basis: &ProductBasis,
    k: u32,
) -> Result<CriterionValue> {
    let (nk, _) = nk_product_basis(basis, k)?;
    product_basis_with_nk(rho, basis, nk)
}

fn product_basis_with_nk(
    rho: &DensityMatrix,
    basis: &ProductBasis,
    nk: u32,
) -> Result<CriterionValue> {
    if basis.n_qubits() != rho.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_qubits(),
            actual: basis.n_qubits(),
        });
    }
    let mut off = 0.0;
    let mut diag = 0.0;
    for alpha in 0..basis.len() {
        let sa = basis.state_bits(alpha);
        diag += rho.diagonal(sa);
        for &beta in basis.neighbors(alpha) {
            let sb = basis.state_bits(beta);
            off += rho.entry_bits(sa, sb).norm() - swap_sqrt(rho, sa, sb);
        }
    }
    Ok(CriterionValue::new(off, nk as f64 * diag))
}

/// Hand-expanded four-qubit form of [`two_excitation_value`]: the 12 unordered
/// weight-2 element pairs with doubled magnitudes. Kept as an independent route
/// for cross-checking; agrees with the triple sum to rounding.
pub fn four_qubit_expanded_value(rho: &DensityMatrix, k: u32) -> Result<CriterionValue> {
    if rho.n_qubits() != 4 {
        return Err(Error::Parameter(format!(
            "the expanded form is fixed at 4 qubits, got {}",
            rho.n_qubits()
        )));
    }
    // (row, col, correction diagonal, correction diagonal).
    const PAIRS: [(u64, u64, u64, u64); 12] = [
        (0b0011, 0b0101, 0b0001, 0b0111),
        (0b0011, 0b0110, 0b0010, 0b0111),
        (0b0011, 0b1001, 0b0001, 0b1011),
        (0b0011, 0b1010, 0b0010, 0b1011),
        (0b0101, 0b0110, 0b0100, 0b0111),
        (0b0101, 0b1001, 0b0001, 0b1101),
        (0b0101, 0b1100, 0b0100, 0b1101),
        (0b0110, 0b1010, 0b0010, 0b1110),
        (0b0110, 0b1100, 0b0100, 0b1110),
        (0b1001, 0b1010, 0b1000, 0b1011),
        (0b1001, 0b1100, 0b1000, 0b1101),
        (0b1010, 0b1100, 0b1000, 0b1110),
    ];
    const DIAGS: [u64; 6] = [0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100];
    let nk = nk_two_excitation(4, k)?;
    let mut off = 0.0;
    for (row, col, d1, d2) in PAIRS {
        off += 2.0
            * (rho.entry_bits(row, col).norm()
                - (rho.diagonal(d1).max(0.0) * rho.diagonal(d2).max(0.0)).sqrt());
    }
    let diag: f64 = DIAGS.iter().map(|&p| rho.diagonal(p)).sum();
    Ok(CriterionValue::new(off, nk as f64 * diag))
}

/// Which pattern family a [`CriterionContext`] evaluates.
#[derive(Clone, Debug)]
pub enum CriterionKind {
    /// Ordered two-excitation triples.
    TwoExcitation,
    /// Weight-m patterns differing by one moved excitation.
    MExcitation { m: u32 },
    /// An explicit basis with its distance-2 neighbor graph.
    ProductBasis(ProductBasis),
}

/// A criterion fixed to a register width, a block count k, and a pattern
/// family, with the combinatorial constant precomputed.
#[derive(Clone, Debug)]
pub struct CriterionContext {
    n_qubits: u32,
    k: u32,
    kind: CriterionKind,
    nk: u32,
}

impl CriterionContext {
    pub fn new(n_qubits: u32, k: u32, kind: CriterionKind) -> Result<Self> {
        check_k(n_qubits, k)?;
        let nk = match &kind {
            CriterionKind::TwoExcitation => {
                if n_qubits < 3 {
                    return Err(Error::Parameter(format!(
                        "the two-excitation criterion needs at least 3 qubits, got {n_qubits}"
                    )));
                }
                nk_two_excitation(n_qubits, k)?
            }
            CriterionKind::MExcitation { m } => nk_m_excitation(n_qubits, k, *m)?,
            CriterionKind::ProductBasis(basis) => {
                if basis.n_qubits() != n_qubits {
                    return Err(Error::DimensionMismatch {
                        expected: n_qubits,
                        actual: basis.n_qubits(),
                    });
                }
                nk_product_basis(basis, k)?.0
            }
        };
        Ok(Self { n_qubits, k, kind, nk })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn kind(&self) -> &CriterionKind {
        &self.kind
    }

    /// The precomputed diagonal constant.
    pub fn nk(&self) -> u32 {
        self.nk
    }
}

/// Evaluates the context's criterion on `rho`.
pub fn detect(rho: &DensityMatrix, ctx: &CriterionContext) -> Result<CriterionValue> {
    if rho.n_qubits() != ctx.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: ctx.n_qubits(),
            actual: rho.n_qubits(),
        });
    }
    match ctx.kind() {
        CriterionKind::TwoExcitation => two_excitation_with_nk(rho, ctx.nk),
        CriterionKind::MExcitation { m } => m_excitation_with_nk(rho, *m, ctx.nk),
        CriterionKind::ProductBasis(basis) => product_basis_with_nk(rho, basis, ctx.nk),
    }
}
