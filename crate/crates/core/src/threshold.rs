//! White-noise robustness thresholds: the noise parameter above which a
//! criterion certifies k-nonseparability of a |psi><psi| + (1 - a) I / 2^n.
//!
//! For the symmetric m-excitation family the criterion value is affine in `a`
//! and its root has a closed rational form; for everything else a guarded
//! bisection finds the crossing numerically.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::criteria::{detect, nk_m_excitation, CriterionContext, CriterionValue, Verdict};
use crate::error::{Error, Result};
use crate::qstate::NoiseFamily;

/// Interval width at which bisection stops.
pub const DEFAULT_BISECTION_TOL: f64 = 1e-10;

/// Points of the pre-bisection grid used to bracket the root and reject
/// non-monotone inputs.
const GRID_POINTS: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ThresholdMethod {
    ClosedForm,
    Bisection,
}

impl std::fmt::Display for ThresholdMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ThresholdMethod::ClosedForm => "closed_form",
            ThresholdMethod::Bisection => "bisection",
        })
    }
}

/// Where a criterion's value crosses zero along a noise family.
#[derive(Clone, Debug)]
pub struct ThresholdResult {
    pub method: ThresholdMethod,
    /// The crossing point. Bisection leaves this empty when the value stays
    /// non-positive on all of [0, 1]; the closed form always reports the
    /// algebraic root, which may lie at or above 1 for families the criterion
    /// never detects.
    pub a_star: Option<f64>,
    /// Exact rational root (closed form only).
    pub exact: Option<BigRational>,
    /// |value(a_star)|, a sanity figure (bisection only).
    pub residual: Option<f64>,
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

/// Exact white-noise threshold of the m-excitation criterion on the symmetric
/// m-excitation family: the root of the affine criterion value, as a reduced
/// fraction.
///
/// With C = C(n,m) and N the constant from [`nk_m_excitation`], the root is
///
/// ```text
/// (m C (n-m) + N C) / (m C (n-m) + N C - 2^n N + 2^n m (n-m))
/// ```
///
/// A non-positive denominator means the value stays negative for every a and
/// is reported as [`Error::Undetectable`].
pub fn dicke_threshold_exact(n_qubits: u32, m: u32, k: u32) -> Result<BigRational> {
    let nk = big(nk_m_excitation(n_qubits, k, m)? as u64);
    let c = num_integer::binomial(big(n_qubits as u64), big(m as u64));
    let pow = big(1) << n_qubits;
    let mn = big(m as u64 * (n_qubits - m) as u64);
    let num = (&mn + &nk) * &c;
    let den = &num + pow * (&mn - &nk);
    if den <= BigInt::zero() {
        return Err(Error::Undetectable(format!(
            "threshold denominator {den} is not positive for n={n_qubits}, m={m}, k={k}"
        )));
    }
    Ok(BigRational::new(num, den))
}

/// [`dicke_threshold_exact`] packaged as a [`ThresholdResult`].
pub fn dicke_threshold(n_qubits: u32, m: u32, k: u32) -> Result<ThresholdResult> {
    let exact = dicke_threshold_exact(n_qubits, m, k)?;
    let a_star = exact.to_f64().expect("rational threshold fits in f64");
    Ok(ThresholdResult {
        method: ThresholdMethod::ClosedForm,
        a_star: Some(a_star),
        exact: Some(exact),
        residual: None,
    })
}

/// Finds the criterion's zero crossing along a noise family by bisection.
///
/// The value is probed on a 32-point grid first: it must be non-positive at
/// a = 0 and nondecreasing across the grid (the family's structure, not a
/// universal fact, so it is checked rather than assumed). If the value never
/// turns positive the result carries no crossing point; otherwise the bracket
/// is narrowed to `tol` and the midpoint reported.
pub fn bisection_threshold(
    family: &NoiseFamily,
    ctx: &CriterionContext,
    tol: f64,
) -> Result<ThresholdResult> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Parameter(format!(
            "bisection tolerance must be positive and finite, got {tol}"
        )));
    }
    let mut eval = |a: f64| -> Result<Probe> {
        let cv = detect(&family.realize(a)?, ctx)?;
        Ok(Probe {
            value: cv.value,
            detects: cv.verdict == Verdict::KNonseparable,
        })
    };
    let found = bisect_root(&mut eval, tol)?;
    Ok(match found {
        Some((a_star, residual)) => ThresholdResult {
            method: ThresholdMethod::Bisection,
            a_star: Some(a_star),
            exact: None,
            residual: Some(residual),
        },
        None => ThresholdResult {
            method: ThresholdMethod::Bisection,
            a_star: None,
            exact: None,
            residual: None,
        },
    })
}

/// One criterion probe: the raw value for the monotonicity check, plus the
/// verdict's noise-tolerant positivity for the crossing search. Bisecting on
/// the verdict keeps a family whose value grazes zero within rounding (for
/// example one whose algebraic root sits exactly at a = 1) from reporting a
/// spurious crossing.
struct Probe {
    value: f64,
    detects: bool,
}

fn bisect_root(
    eval: &mut dyn FnMut(f64) -> Result<Probe>,
    tol: f64,
) -> Result<Option<(f64, f64)>> {
    let grid_a = |i: usize| i as f64 / (GRID_POINTS - 1) as f64;
    let mut probes = Vec::with_capacity(GRID_POINTS);
    for i in 0..GRID_POINTS {
        probes.push(eval(grid_a(i))?);
    }
    if probes[0].detects {
        return Err(Error::Parameter(format!(
            "criterion value at a = 0 must be non-positive, got {}",
            probes[0].value
        )));
    }
    // The bracket search needs a value that rises with a. A value that falls
    // everywhere can never cross upward and is a legitimate no-crossing
    // outcome (the combinatorial constant can exceed the off-diagonal weight,
    // tilting the whole line downward); anything that changes direction is
    // out of scope for bisection and gets rejected.
    let slack = |v: f64| 1e-12 * 1f64.max(v.abs());
    let rising = probes
        .windows(2)
        .all(|w| w[1].value >= w[0].value - slack(w[0].value));
    if !rising {
        let falling = probes
            .windows(2)
            .all(|w| w[1].value <= w[0].value + slack(w[0].value));
        if falling && probes.iter().all(|p| !p.detects) {
            return Ok(None);
        }
        let i = probes
            .windows(2)
            .position(|w| w[1].value < w[0].value - slack(w[0].value))
            .expect("a non-rising sequence has a falling step");
        return Err(Error::NonMonotone {
            a_lo: grid_a(i),
            v_lo: probes[i].value,
            a_hi: grid_a(i + 1),
            v_hi: probes[i + 1].value,
        });
    }
    let first_detect = match probes.iter().position(|p| p.detects) {
        None => return Ok(None),
        Some(i) => i,
    };
    let mut lo = grid_a(first_detect - 1);
    let mut hi = grid_a(first_detect);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if eval(mid)?.detects {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let a_star = 0.5 * (lo + hi);
    Ok(Some((a_star, eval(a_star)?.value.abs())))
}

/// Evaluates the criterion at each grid point, in the given order.
pub fn scan(
    family: &NoiseFamily,
    ctx: &CriterionContext,
    grid: &[f64],
) -> Result<Vec<(f64, CriterionValue)>> {
    grid.iter()
        .map(|&a| Ok((a, detect(&family.realize(a)?, ctx)?)))
        .collect()
}
