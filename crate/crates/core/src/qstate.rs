//! Sparse n-qubit state types.
//!
//! Qubit positions are 1-based and qubit 1 is the most significant bit: on four
//! qubits the basis state |0011> has `bits = 0b0011`, i.e. qubits 3 and 4
//! excited, and bit strings print left to right as qubits 1..n.
//!
//! Operators keep only their nonzero structure. A uniform background diagonal
//! (the identity part of a noisy state) is held as a single offset instead of
//! 2^n stored entries, so white-noise families stay cheap at any width the
//! bitmask supports.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub mod parse;

/// Stored amplitudes and matrix entries below this magnitude are dropped.
pub const PRUNE_EPS: f64 = 1e-15;
/// Pure-state norms must equal 1 within this bound.
pub const NORM_TOL: f64 = 1e-12;
/// Operator traces must equal 1 within this bound.
pub const TRACE_TOL: f64 = 1e-10;
/// Diagonal elements may dip below zero by at most this much.
pub const DIAG_NEG_TOL: f64 = 1e-12;
/// Register width cap; keeps masks inside u64 and 2^n exact in f64.
pub const MAX_QUBITS: u32 = 32;

/// Imaginary parts of diagonal entries above this magnitude are rejected.
const DIAG_IM_TOL: f64 = 1e-12;
/// Cap on stored amplitudes for constructed superpositions.
const MAX_SUPPORT: u64 = 1 << 20;

fn check_width(n_qubits: u32) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::Parameter(format!(
            "qubit count must lie in 1..={MAX_QUBITS}, got {n_qubits}"
        )));
    }
    Ok(())
}

fn check_bits(n_qubits: u32, bits: u64) -> Result<()> {
    if bits >> n_qubits != 0 {
        return Err(Error::Parameter(format!(
            "basis bits {bits:#b} exceed a {n_qubits}-qubit register"
        )));
    }
    Ok(())
}

/// Mask of qubit `pos` (1-based, qubit 1 = most significant bit).
pub(crate) fn position_bit(n_qubits: u32, pos: u32) -> u64 {
    debug_assert!(pos >= 1 && pos <= n_qubits);
    1 << (n_qubits - pos)
}

/// Excited positions of `bits`, ascending.
pub(crate) fn positions(n_qubits: u32, bits: u64) -> impl Iterator<Item = u32> {
    (1..=n_qubits).filter(move |&pos| bits & position_bit(n_qubits, pos) != 0)
}

/// All n-bit masks of popcount `m` in increasing numeric order (equivalently,
/// lexicographic order of their bit strings).
pub(crate) fn weight_masks(n_qubits: u32, m: u32) -> WeightMasks {
    debug_assert!(m <= n_qubits && n_qubits <= MAX_QUBITS);
    if m == 0 {
        return WeightMasks { cur: 0, last: 0, done: false };
    }
    let first = (1u64 << m) - 1;
    WeightMasks { cur: first, last: first << (n_qubits - m), done: false }
}

pub(crate) struct WeightMasks {
    cur: u64,
    last: u64,
    done: bool,
}

impl Iterator for WeightMasks {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let out = self.cur;
        if out == self.last {
            self.done = true;
        } else {
            // Gosper's hack: next mask with the same popcount.
            let v = self.cur;
            let c = v & v.wrapping_neg();
            let r = v + c;
            self.cur = (((r ^ v) >> 2) / c) | r;
        }
        Some(out)
    }
}

/// One computational-basis state of an n-qubit register.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisState {
    n_qubits: u32,
    bits: u64,
}

impl BasisState {
    pub fn new(n_qubits: u32, bits: u64) -> Result<Self> {
        check_width(n_qubits)?;
        check_bits(n_qubits, bits)?;
        Ok(Self { n_qubits, bits })
    }

    pub(crate) fn new_unchecked(n_qubits: u32, bits: u64) -> Self {
        debug_assert!(bits >> n_qubits == 0);
        Self { n_qubits, bits }
    }

    /// Parses a string of '0'/'1' characters, qubit 1 first.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        let n_qubits = s.len() as u32;
        check_width(n_qubits).map_err(|_| {
            Error::Parse(format!(
                "bit string must have 1..={MAX_QUBITS} characters, got {:?}",
                s
            ))
        })?;
        let mut bits = 0u64;
        for ch in s.chars() {
            bits <<= 1;
            match ch {
                '0' => {}
                '1' => bits |= 1,
                other => {
                    return Err(Error::Parse(format!(
                        "bit string {s:?} contains {other:?}; only '0' and '1' are allowed"
                    )))
                }
            }
        }
        Ok(Self { n_qubits, bits })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Number of excited qubits.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn bitstring(&self) -> String {
        bitstring(self.n_qubits, self.bits)
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bitstring())
    }
}

pub(crate) fn bitstring(n_qubits: u32, bits: u64) -> String {
    (1..=n_qubits)
        .map(|pos| if bits & position_bit(n_qubits, pos) != 0 { '1' } else { '0' })
        .collect()
}

/// A set of excited qubit positions (1-based) in an n-qubit register.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExcitationPattern {
    n_qubits: u32,
    excited: Vec<u32>,
}

impl ExcitationPattern {
    /// Positions must be distinct and lie in 1..=n_qubits. They are stored
    /// ascending; the empty pattern is allowed.
    pub fn new(n_qubits: u32, excited: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_width(n_qubits)?;
        let mut excited: Vec<u32> = excited.into_iter().collect();
        excited.sort_unstable();
        for pair in excited.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::Parameter(format!("duplicate position {}", pair[0])));
            }
        }
        if let Some(&last) = excited.last() {
            if excited[0] < 1 || last > n_qubits {
                return Err(Error::Parameter(format!(
                    "positions must lie in 1..={n_qubits}, got {excited:?}"
                )));
            }
        }
        Ok(Self { n_qubits, excited })
    }

    pub fn from_basis(state: &BasisState) -> Self {
        Self {
            n_qubits: state.n_qubits,
            excited: positions(state.n_qubits, state.bits).collect(),
        }
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Excited positions, ascending.
    pub fn positions(&self) -> &[u32] {
        &self.excited
    }

    /// The basis state with exactly these qubits excited: {3,4} on four qubits
    /// gives |0011>.
    pub fn to_basis(&self) -> BasisState {
        let bits = self
            .excited
            .iter()
            .fold(0u64, |acc, &pos| acc | position_bit(self.n_qubits, pos));
        BasisState { n_qubits: self.n_qubits, bits }
    }
}

/// Sparse pure state: only nonzero computational-basis amplitudes are stored.
#[derive(Clone, Debug)]
pub struct PureState {
    n_qubits: u32,
    amps: BTreeMap<u64, Complex64>,
}

impl PureState {
    /// Builds a normalized state from (bits, amplitude) pairs.
    ///
    /// Amplitudes with magnitude below [`PRUNE_EPS`] are dropped; what remains
    /// must have unit norm within [`NORM_TOL`]. Duplicate basis states are
    /// rejected.
    pub fn new(
        n_qubits: u32,
        amps: impl IntoIterator<Item = (u64, Complex64)>,
    ) -> Result<Self> {
        check_width(n_qubits)?;
        let mut map = BTreeMap::new();
        for (bits, amp) in amps {
            check_bits(n_qubits, bits)?;
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(Error::Parameter(format!(
                    "amplitude at |{}> is not finite",
                    bitstring(n_qubits, bits)
                )));
            }
            if map.insert(bits, amp).is_some() {
                return Err(Error::DuplicateState(bitstring(n_qubits, bits)));
            }
        }
        map.retain(|_, amp| amp.norm() >= PRUNE_EPS);
        let state = Self { n_qubits, amps: map };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Norm { norm, tol: NORM_TOL });
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Amplitude at `bits`; zero when not stored.
    pub fn amplitude(&self, bits: u64) -> Complex64 {
        self.amps.get(&bits).copied().unwrap_or_default()
    }

    pub fn support_size(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Stored (bits, amplitude) pairs in ascending bit order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amps.iter().map(|(&bits, &amp)| (bits, amp))
    }
}

/// The symmetric n-qubit state with m excitations: an equal superposition of
/// every weight-m basis state with amplitude C(n,m)^(-1/2).
pub fn dicke_state(n_qubits: u32, m: u32) -> Result<PureState> {
    check_width(n_qubits)?;
    if m < 1 || m > n_qubits - 1 {
        return Err(Error::Parameter(format!(
            "excitation count must lie in 1..={}, got {m}",
            n_qubits - 1
        )));
    }
    let count = num_integer::binomial(n_qubits as u64, m as u64);
    if count > MAX_SUPPORT {
        return Err(Error::Parameter(format!(
            "support C({n_qubits},{m}) = {count} exceeds the supported size {MAX_SUPPORT}"
        )));
    }
    let amp = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
    let amps: BTreeMap<u64, Complex64> =
        weight_masks(n_qubits, m).map(|bits| (bits, amp)).collect();
    Ok(PureState { n_qubits, amps })
}

/// Sparse Hermitian unit-trace operator on an n-qubit register.
///
/// Only the upper triangle (row <= col as bitmask integers) is stored; the
/// lower triangle is the implicit conjugate. `diag_offset` adds a uniform value
/// to every diagonal element on top of the stored entries, which is how the
/// identity part of a noisy state is represented without touching 2^n slots.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    n_qubits: u32,
    diag_offset: f64,
    entries: BTreeMap<(u64, u64), Complex64>,
}

impl DensityMatrix {
    /// Validates and stores explicit upper-triangle entries over a uniform
    /// diagonal offset.
    ///
    /// Requirements: keys satisfy row <= col with both inside the register;
    /// diagonal entries are real within 1e-12; every effective diagonal element
    /// (offset included) stays above -[`DIAG_NEG_TOL`]; the trace equals 1
    /// within [`TRACE_TOL`]. Entries below [`PRUNE_EPS`] are dropped.
    pub fn from_entries(
        n_qubits: u32,
        diag_offset: f64,
        entries: impl IntoIterator<Item = ((u64, u64), Complex64)>,
    ) -> Result<Self> {
        check_width(n_qubits)?;
        if !diag_offset.is_finite() || diag_offset < 0.0 {
            return Err(Error::Parameter(format!(
                "diagonal offset must be finite and non-negative, got {diag_offset}"
            )));
        }
        let mut map = BTreeMap::new();
        for ((row, col), val) in entries {
            check_bits(n_qubits, row)?;
            check_bits(n_qubits, col)?;
            if row > col {
                return Err(Error::Parameter(format!(
                    "entries must be keyed row <= col; got ({}, {})",
                    bitstring(n_qubits, row),
                    bitstring(n_qubits, col)
                )));
            }
            if !val.re.is_finite() || !val.im.is_finite() {
                return Err(Error::Parameter(format!(
                    "entry at ({}, {}) is not finite",
                    bitstring(n_qubits, row),
                    bitstring(n_qubits, col)
                )));
            }
            let val = if row == col {
                if val.im.abs() > DIAG_IM_TOL {
                    return Err(Error::NonHermitian(format!(
                        "diagonal entry at |{}> has imaginary part {:e}",
                        bitstring(n_qubits, row),
                        val.im
                    )));
                }
                Complex64::new(val.re, 0.0)
            } else {
                val
            };
            if map.insert((row, col), val).is_some() {
                return Err(Error::DuplicateState(format!(
                    "({}, {})",
                    bitstring(n_qubits, row),
                    bitstring(n_qubits, col)
                )));
            }
        }
        map.retain(|_, val| val.norm() >= PRUNE_EPS);
        let rho = Self { n_qubits, diag_offset, entries: map };
        for (&(row, col), val) in &rho.entries {
            if row == col && diag_offset + val.re < -DIAG_NEG_TOL {
                return Err(Error::Parameter(format!(
                    "diagonal element at |{}> is {:e}, below -{DIAG_NEG_TOL:e}",
                    bitstring(n_qubits, row),
                    diag_offset + val.re
                )));
            }
        }
        let trace = rho.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace { trace, tol: TRACE_TOL });
        }
        Ok(rho)
    }

    /// I / 2^n.
    pub fn maximally_mixed(n_qubits: u32) -> Result<Self> {
        check_width(n_qubits)?;
        Ok(Self {
            n_qubits,
            diag_offset: 1.0 / exp2(n_qubits),
            entries: BTreeMap::new(),
        })
    }

    /// |psi><psi| as an explicit sparse operator.
    pub fn from_pure(psi: &PureState) -> Self {
        white_noise_mix(psi, 1.0).expect("projector onto a validated state is a valid operator")
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Uniform value implicitly added to every diagonal element.
    pub fn diag_offset(&self) -> f64 {
        self.diag_offset
    }

    /// Number of explicitly stored entries.
    pub fn stored_entries(&self) -> usize {
        self.entries.len()
    }

    /// Sum of all 2^n diagonal elements.
    pub fn trace(&self) -> f64 {
        let stored: f64 = self
            .entries
            .iter()
            .filter(|((row, col), _)| row == col)
            .map(|(_, val)| val.re)
            .sum();
        self.diag_offset * exp2(self.n_qubits) + stored
    }

    /// Hermitian-aware element access by raw bitmasks. No range checks; bits
    /// must fit the register.
    pub fn entry_bits(&self, row: u64, col: u64) -> Complex64 {
        debug_assert!(row >> self.n_qubits == 0 && col >> self.n_qubits == 0);
        if row == col {
            return Complex64::new(self.diagonal(row), 0.0);
        }
        if row < col {
            self.entries.get(&(row, col)).copied().unwrap_or_default()
        } else {
            self.entries
                .get(&(col, row))
                .map(|v| v.conj())
                .unwrap_or_default()
        }
    }

    /// Effective diagonal element at `bits` (offset plus stored part).
    pub fn diagonal(&self, bits: u64) -> f64 {
        self.diag_offset
            + self
                .entries
                .get(&(bits, bits))
                .map(|v| v.re)
                .unwrap_or_default()
    }

    /// Element access with dimension checking.
    pub fn element(&self, row: &BasisState, col: &BasisState) -> Result<Complex64> {
        for state in [row, col] {
            if state.n_qubits() != self.n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: self.n_qubits,
                    actual: state.n_qubits(),
                });
            }
        }
        Ok(self.entry_bits(row.bits(), col.bits()))
    }

    /// Stored upper-triangle entries, ascending by (row, col). Diagonal entries
    /// do not include the uniform offset.
    pub fn stored(&self) -> impl Iterator<Item = ((u64, u64), Complex64)> + '_ {
        self.entries.iter().map(|(&key, &val)| (key, val))
    }
}

fn exp2(n_qubits: u32) -> f64 {
    // Exact: MAX_QUBITS keeps 2^n inside f64's integer range.
    (1u64 << n_qubits) as f64
}

/// a |psi><psi| + (1 - a) I / 2^n.
///
/// The uniform noise lands in the diagonal offset, so the stored entry count is
/// O(support^2) regardless of 2^n. At a = 0 this is the maximally mixed state,
/// at a = 1 the pure projector.
pub fn white_noise_mix(psi: &PureState, a: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Parameter(format!(
            "noise parameter must lie in [0, 1], got {a}"
        )));
    }
    let n_qubits = psi.n_qubits();
    let support: Vec<(u64, Complex64)> = psi.iter().collect();
    let mut entries = Vec::with_capacity(support.len() * (support.len() + 1) / 2);
    for (i, &(x, ax)) in support.iter().enumerate() {
        for &(y, ay) in &support[i..] {
            entries.push(((x, y), ax * ay.conj() * a));
        }
    }
    DensityMatrix::from_entries(n_qubits, (1.0 - a) / exp2(n_qubits), entries)
}

/// The one-parameter family a |psi><psi| + (1 - a) I / 2^n, a in [0, 1].
#[derive(Clone, Debug)]
pub struct NoiseFamily {
    base: PureState,
}

impl NoiseFamily {
    pub fn new(base: PureState) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &PureState {
        &self.base
    }

    pub fn n_qubits(&self) -> u32 {
        self.base.n_qubits()
    }

    /// The operator at noise parameter `a` (1 = pure, 0 = maximally mixed).
    pub fn realize(&self, a: f64) -> Result<DensityMatrix> {
        white_noise_mix(&self.base, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn pattern_maps_positions_to_msb_first_bits() {
        let p = ExcitationPattern::new(4, [3, 4]).unwrap();
        assert_eq!(p.to_basis().bits(), 0b0011);
        assert_eq!(p.to_basis().bitstring(), "0011");

        let empty = ExcitationPattern::new(4, []).unwrap();
        assert_eq!(empty.to_basis().bits(), 0b0000);

        let p = ExcitationPattern::new(5, [1, 3]).unwrap();
        assert_eq!(p.to_basis().bitstring(), "10100");
    }

    #[test]
    fn pattern_round_trips_through_basis_state() {
        for n in 1..=8u32 {
            for bits in 0..(1u64 << n) {
                let state = BasisState::new(n, bits).unwrap();
                let pattern = ExcitationPattern::from_basis(&state);
                assert_eq!(pattern.positions().len() as u32, state.weight());
                assert_eq!(pattern.to_basis(), state);
            }
        }
    }

    #[test]
    fn pattern_rejects_bad_positions() {
        assert!(ExcitationPattern::new(4, [0]).is_err());
        assert!(ExcitationPattern::new(4, [5]).is_err());
        assert!(ExcitationPattern::new(4, [2, 2]).is_err());
    }

    #[test]
    fn bitstring_parsing_round_trips() {
        let state = BasisState::from_bitstring("10100").unwrap();
        assert_eq!(state.n_qubits(), 5);
        assert_eq!(state.bits(), 0b10100);
        assert_eq!(state.bitstring(), "10100");
        assert!(BasisState::from_bitstring("01x1").is_err());
        assert!(BasisState::from_bitstring("").is_err());
    }

    #[test]
    fn weight_masks_are_sorted_and_complete() {
        let masks: Vec<u64> = weight_masks(4, 2).collect();
        assert_eq!(masks, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(weight_masks(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(weight_masks(4, 4).collect::<Vec<_>>(), vec![0b1111]);
        assert_eq!(weight_masks(10, 3).count(), 120);
    }

    #[test]
    fn dicke_state_is_uniform_over_weight_m_masks() {
        let d = dicke_state(4, 2).unwrap();
        assert_eq!(d.support_size(), 6);
        let amp = 1.0 / 6f64.sqrt();
        for bits in [0b1100u64, 0b1010, 0b1001, 0b0110, 0b0011, 0b0101] {
            let got = d.amplitude(bits);
            assert!((got.re - amp).abs() < 1e-15 && got.im == 0.0);
        }
        assert_eq!(d.amplitude(0b0001), Complex64::default());

        let bell = dicke_state(2, 1).unwrap();
        assert_eq!(bell.support_size(), 2);
        let amp = 1.0 / 2f64.sqrt();
        assert!((bell.amplitude(0b10).re - amp).abs() < 1e-15);
        assert!((bell.amplitude(0b01).re - amp).abs() < 1e-15);

        let d = dicke_state(5, 3).unwrap();
        assert_eq!(d.support_size(), 10);
        let amp = 1.0 / 10f64.sqrt();
        for (_, a) in d.iter() {
            assert!((a.re - amp).abs() < 1e-15);
        }
        assert!((d.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dicke_state_rejects_bad_excitation_counts() {
        assert!(dicke_state(4, 0).is_err());
        assert!(dicke_state(4, 4).is_err());
        assert!(dicke_state(1, 1).is_err());
    }

    #[test]
    fn pure_state_validates_norm_and_duplicates() {
        let amp = c(1.0 / 2f64.sqrt());
        assert!(PureState::new(2, [(0b00, amp), (0b11, amp)]).is_ok());
        assert!(matches!(
            PureState::new(2, [(0b00, amp)]),
            Err(Error::Norm { .. })
        ));
        assert!(matches!(
            PureState::new(2, [(0b00, amp), (0b00, amp)]),
            Err(Error::DuplicateState(_))
        ));
        assert!(PureState::new(2, [(0b100, c(1.0))]).is_err());
    }

    #[test]
    fn pure_state_prunes_tiny_amplitudes() {
        let s = PureState::new(2, [(0b00, c(1.0)), (0b01, c(1e-16))]).unwrap();
        assert_eq!(s.support_size(), 1);
    }

    #[test]
    fn white_noise_diagonal_and_coherence() {
        let d = dicke_state(4, 2).unwrap();
        let rho = white_noise_mix(&d, 0.5).unwrap();
        let want = 1.0 / 12.0 + 1.0 / 32.0;
        assert!((rho.diagonal(0b0011) - want).abs() < 1e-15);
        // Off the support only the uniform background remains.
        assert!((rho.diagonal(0b0001) - 1.0 / 32.0).abs() < 1e-15);
        assert!((rho.trace() - 1.0).abs() < 1e-12);

        for a in [0.0, 0.3, 1.0] {
            let rho = white_noise_mix(&d, a).unwrap();
            let elem = rho.entry_bits(0b0011, 0b0101);
            assert!((elem.re - a / 6.0).abs() < 1e-15 && elem.im == 0.0);
            assert!((rho.trace() - 1.0).abs() < 1e-12);
        }

        assert!(white_noise_mix(&d, -0.1).is_err());
        assert!(white_noise_mix(&d, 1.1).is_err());
        assert!(white_noise_mix(&d, f64::NAN).is_err());
    }

    #[test]
    fn white_noise_keeps_sparse_structure() {
        let d = dicke_state(4, 2).unwrap();
        let rho = white_noise_mix(&d, 0.5).unwrap();
        assert_eq!(rho.stored_entries(), 6 * 7 / 2);
        let mixed = white_noise_mix(&d, 0.0).unwrap();
        assert_eq!(mixed.stored_entries(), 0);
        assert!((mixed.diag_offset() - 1.0 / 16.0).abs() < 1e-18);
    }

    #[test]
    fn element_is_hermitian_and_checks_dimensions() {
        let d = dicke_state(4, 2).unwrap();
        let rho = white_noise_mix(&d, 0.7).unwrap();
        let a = BasisState::new(4, 0b0011).unwrap();
        let b = BasisState::new(4, 0b0101).unwrap();
        let up = rho.element(&a, &b).unwrap();
        let down = rho.element(&b, &a).unwrap();
        assert_eq!(up, down.conj());

        let wrong = BasisState::new(3, 0b011).unwrap();
        assert!(matches!(
            rho.element(&wrong, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn from_entries_validates_structure() {
        let half = c(0.5);
        // Valid 1-qubit mixed state.
        assert!(DensityMatrix::from_entries(1, 0.0, [((0, 0), half), ((1, 1), half)]).is_ok());

        let bad_trace = DensityMatrix::from_entries(1, 0.0, [((0, 0), c(0.6)), ((1, 1), half)]);
        assert!(matches!(bad_trace, Err(Error::Trace { .. })));

        let lower = DensityMatrix::from_entries(1, 0.0, [
            ((0, 0), half),
            ((1, 1), half),
            ((1, 0), c(0.1)),
        ]);
        assert!(matches!(lower, Err(Error::Parameter(_))));

        let complex_diag = DensityMatrix::from_entries(1, 0.0, [
            ((0, 0), Complex64::new(0.5, 0.1)),
            ((1, 1), half),
        ]);
        assert!(matches!(complex_diag, Err(Error::NonHermitian(_))));

        let negative_diag = DensityMatrix::from_entries(1, 0.0, [
            ((0, 0), c(1.5)),
            ((1, 1), c(-0.5)),
        ]);
        assert!(matches!(negative_diag, Err(Error::Parameter(_))));

        let dup = DensityMatrix::from_entries(1, 0.0, [((0, 0), half), ((0, 0), half)]);
        assert!(matches!(dup, Err(Error::DuplicateState(_))));
    }

    #[test]
    fn maximally_mixed_matches_zero_noise() {
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        assert_eq!(mixed.stored_entries(), 0);
        assert!((mixed.trace() - 1.0).abs() < 1e-15);
        assert!((mixed.diagonal(0b1011) - 1.0 / 16.0).abs() < 1e-18);
        assert_eq!(mixed.entry_bits(0b0001, 0b0010), Complex64::default());
    }

    #[test]
    fn family_realize_matches_direct_mix() {
        let family = NoiseFamily::new(dicke_state(4, 2).unwrap());
        let direct = white_noise_mix(family.base(), 0.25).unwrap();
        let via = family.realize(0.25).unwrap();
        assert_eq!(via.stored_entries(), direct.stored_entries());
        assert_eq!(via.entry_bits(0b0011, 0b0101), direct.entry_bits(0b0011, 0b0101));
        assert!(family.realize(2.0).is_err());
    }
}
