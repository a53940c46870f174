//! Combinatorial k-nonseparability certificates for n-qubit states.
//!
//! An n-qubit state is k-separable when it is a mixture of pure states, each a
//! product across some partition of the qubits into k blocks. This crate
//! evaluates three pattern-sum criteria whose positive value certifies that no
//! such decomposition exists (the converse does not hold: non-positive values
//! are inconclusive). On white-noise families a |psi><psi| + (1 - a) I / 2^n
//! the crossing point can be computed exactly for symmetric excitation states
//! or located by guarded bisection, and a brute-force oracle samples genuinely
//! k-separable states to stress the certificates' soundness.
//!
//! States are sparse: only nonzero amplitudes and matrix entries are stored,
//! and the uniform noise diagonal is a single offset, so wide registers with
//! narrow support stay cheap.
//!
//! ```
//! use ksep::{
//!     detect, dicke_state, white_noise_mix, CriterionContext, CriterionKind, Verdict,
//! };
//!
//! // Two excitations over four qubits, mixed with 40% white noise: enough
//! // survives to rule out any biseparable decomposition (threshold 9/17).
//! let base = dicke_state(4, 2)?;
//! let rho = white_noise_mix(&base, 0.6)?;
//! let ctx = CriterionContext::new(4, 2, CriterionKind::TwoExcitation)?;
//! let result = detect(&rho, &ctx)?;
//! assert_eq!(result.verdict, Verdict::KNonseparable);
//! assert!((result.value - 0.30).abs() < 1e-12);
//! # Ok::<(), ksep::Error>(())
//! ```

pub mod criteria;
pub mod error;
pub mod oracle;
pub mod qstate;
pub mod threshold;

pub use criteria::{
    detect, four_qubit_expanded_value, m_excitation_value, nk_m_excitation,
    nk_product_basis, nk_two_excitation, product_basis_value, swap_term,
    two_excitation_value, CriterionContext, CriterionKind, CriterionValue, NkWitness,
    ProductBasis, SwapTerm, Verdict, VERDICT_EPS,
};
pub use error::{Error, Result};
pub use oracle::{
    enumerate_partitions, random_product_state, random_separable_mixture,
    random_separable_pure, soundness_scan, Partition, SoundnessReport, TrialKind,
    Violation, MAX_PARTITION_QUBITS, SOUNDNESS_TOL,
};
pub use qstate::parse::{
    density_json, format_f64, parse_basis_file, parse_state_file, StateFile,
};
pub use qstate::{
    dicke_state, white_noise_mix, BasisState, DensityMatrix, ExcitationPattern,
    NoiseFamily, PureState, DIAG_NEG_TOL, MAX_QUBITS, NORM_TOL, PRUNE_EPS, TRACE_TOL,
};
pub use threshold::{
    bisection_threshold, dicke_threshold, dicke_threshold_exact, scan, ThresholdMethod,
    ThresholdResult, DEFAULT_BISECTION_TOL,
};

pub use num_complex::Complex64;
pub use num_rational::BigRational;
