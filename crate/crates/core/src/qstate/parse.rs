//! JSON file formats for states and product-basis lists.
//!
//! Bit strings in files are exactly n characters of '0'/'1' with qubit 1
//! first. Floats serialize with 17 significant digits so values round-trip.

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::qstate::{
    bitstring, dicke_state, BasisState, DensityMatrix, NoiseFamily, PureState,
};

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawState {
    DickeNoise { n: u32, m: u32 },
    PureNoise { n: u32, amplitudes: Vec<(String, f64, f64)> },
    Density { n: u32, entries: Vec<(String, String, f64, f64)> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasis {
    n: u32,
    states: Vec<String>,
}

/// A parsed state file: either an explicit operator or a white-noise family
/// still parameterized by the noise level.
pub enum StateFile {
    Density(DensityMatrix),
    Family(NoiseFamily),
}

/// Parses a state file. Three formats, one JSON object per file:
///
/// ```json
/// {"kind": "dicke_noise", "n": 4, "m": 2}
/// {"kind": "pure_noise", "n": 2, "amplitudes": [["01", 0.7071067811865476, 0.0],
///                                               ["10", 0.7071067811865476, 0.0]]}
/// {"kind": "density", "n": 1, "entries": [["0", "0", 0.5, 0.0],
///                                          ["1", "1", 0.5, 0.0]]}
/// ```
///
/// `dicke_noise` and `pure_noise` yield a [`NoiseFamily`]; `density` yields the
/// explicit operator. Density entries are the upper triangle only (row <= col
/// as binary numbers), amplitudes and entries are [string, re, im] with the
/// usual Hermiticity, trace, and normalization rules enforced.
pub fn parse_state_file(text: &str) -> Result<StateFile> {
    let raw: RawState =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match raw {
        RawState::DickeNoise { n, m } => {
            Ok(StateFile::Family(NoiseFamily::new(dicke_state(n, m)?)))
        }
        RawState::PureNoise { n, amplitudes } => {
            let mut amps = Vec::with_capacity(amplitudes.len());
            for (s, re, im) in amplitudes {
                amps.push((parse_bits(&s, n)?, Complex64::new(re, im)));
            }
            Ok(StateFile::Family(NoiseFamily::new(PureState::new(n, amps)?)))
        }
        RawState::Density { n, entries } => {
            let mut parsed = Vec::with_capacity(entries.len());
            for (row, col, re, im) in entries {
                let row = parse_bits(&row, n)?;
                let col = parse_bits(&col, n)?;
                if row > col {
                    return Err(Error::Parse(format!(
                        "entries must satisfy row <= col; got ({}, {})",
                        bitstring(n, row),
                        bitstring(n, col)
                    )));
                }
                parsed.push(((row, col), Complex64::new(re, im)));
            }
            Ok(StateFile::Density(DensityMatrix::from_entries(n, 0.0, parsed)?))
        }
    }
}

/// Parses a product-basis file: `{"n": 4, "states": ["0011", "0101", ...]}`.
pub fn parse_basis_file(text: &str) -> Result<Vec<BasisState>> {
    let raw: RawBasis =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.states
        .iter()
        .map(|s| BasisState::new(raw.n, parse_bits(s, raw.n)?))
        .collect()
}

fn parse_bits(s: &str, n_qubits: u32) -> Result<u64> {
    if s.len() as u32 != n_qubits {
        return Err(Error::Parse(format!(
            "bit string {s:?} must have exactly {n_qubits} characters"
        )));
    }
    Ok(BasisState::from_bitstring(s)?.bits())
}

/// Serializes an operator in the explicit `density` file format, entries in
/// ascending (row, col) order with 17-significant-digit floats.
///
/// A nonzero diagonal offset is folded into explicit entries, which enumerates
/// all 2^n diagonal slots; that path is refused above 16 qubits.
pub fn density_json(rho: &DensityMatrix) -> Result<String> {
    let n = rho.n_qubits();
    let mut lines = Vec::new();
    let mut push = |row: u64, col: u64, val: Complex64| {
        lines.push(format!(
            "[\"{}\", \"{}\", {}, {}]",
            bitstring(n, row),
            bitstring(n, col),
            format_f64(val.re),
            format_f64(val.im)
        ));
    };
    if rho.diag_offset() == 0.0 {
        for ((row, col), val) in rho.stored() {
            push(row, col, val);
        }
    } else {
        if n > 16 {
            return Err(Error::Parameter(format!(
                "cannot expand a uniform diagonal over 2^{n} slots"
            )));
        }
        let mut stored = rho.stored().peekable();
        for row in 0..(1u64 << n) {
            push(row, row, Complex64::new(rho.diagonal(row), 0.0));
            while let Some(&((r, c), val)) = stored.peek() {
                if r > row {
                    break;
                }
                stored.next();
                if r != c {
                    push(r, c, val);
                }
            }
        }
    }
    Ok(format!(
        "{{\"kind\": \"density\", \"n\": {n}, \"entries\": [{}]}}",
        lines.join(", ")
    ))
}

/// Fixed 17-significant-digit scientific form; round-trips every f64 and is
/// identical run to run.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}
