//! Helpers shared by the integration suites. Everything here is written
//! independently of the library internals (own bit conventions, dense matrix
//! algebra, textbook recurrences) so agreement is evidence, not tautology.

#![allow(dead_code)]

use ksep::{Complex64, DensityMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Bitmask selecting position `pos` (1-based, qubit 1 = most significant).
pub fn pos_bit(n: u32, pos: u32) -> u64 {
    1u64 << (n - pos)
}

/// Expands a sparse matrix into a dense row-major 2^n x 2^n array.
pub fn dense_from_sparse(rho: &DensityMatrix) -> Vec<Vec<Complex64>> {
    let n = rho.n_qubits();
    assert!(n <= 10, "dense expansion capped at 10 qubits in tests");
    let d = 1usize << n;
    let off = Complex64::new(rho.diag_offset(), 0.0);
    let mut m = vec![vec![Complex64::default(); d]; d];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = off;
    }
    for ((r, c), v) in rho.stored() {
        let (r, c) = (r as usize, c as usize);
        m[r][c] += v;
        if r != c {
            m[c][r] += v.conj();
        }
    }
    m
}

/// Two-copy exchange contraction evaluated from first principles.
///
/// Builds the vector obtained by exchanging qubit `swap_pos` between the two
/// copies of |a> ⊗ |b>, applies rho ⊗ rho to it entry by entry through the
/// Kronecker index map, and closes with the bra of the same exchanged vector.
/// No diagonal-product shortcut anywhere: this is the expression the library
/// replaces algebraically.
pub fn swap_contraction_oracle(
    dense: &[Vec<Complex64>],
    n: u32,
    a: u64,
    b: u64,
    swap_pos: u32,
) -> f64 {
    let d = dense.len();
    let pb = pos_bit(n, swap_pos);
    // Exchange the swap_pos qubit between the copies.
    let a2 = ((a & !pb) | (b & pb)) as usize;
    let b2 = ((b & !pb) | (a & pb)) as usize;
    // y = (rho ⊗ rho) |a2>⊗|b2>, one Kronecker entry at a time.
    let mut y = vec![Complex64::default(); d * d];
    for u1 in 0..d {
        for u2 in 0..d {
            y[u1 * d + u2] = dense[u1][a2] * dense[u2][b2];
        }
    }
    let val = y[a2 * d + b2];
    assert!(val.im.abs() < 1e-12, "contraction of a Hermitian product drifted complex");
    val.re
}

/// Random Hermitian matrix with unit trace and nonnegative diagonal, dense
/// over the full register. Off-diagonals are unconstrained complex Gaussians,
/// so the result is generally not positive semidefinite; the algebraic
/// identities under test hold for any Hermitian input.
pub fn random_hermitian(n: u32, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let d = 1u64 << n;
    let raw: Vec<f64> = (0..d).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    let mut entries = Vec::with_capacity((d * (d + 1) / 2) as usize);
    for x in 0..d {
        entries.push(((x, x), Complex64::new(raw[x as usize] / total, 0.0)));
        for y in (x + 1)..d {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            entries.push(((x, y), Complex64::new(re, im) * 0.25));
        }
    }
    DensityMatrix::from_entries(n, 0.0, entries).expect("generated matrix is valid")
}

/// Deterministic rng for a given test stream and case index.
pub fn test_rng(stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index)
}

/// Moves the bit at position t to position perm[t-1] for every t.
pub fn permute_bits(n: u32, bits: u64, perm: &[u32]) -> u64 {
    (1..=n)
        .filter(|&t| bits & pos_bit(n, t) != 0)
        .fold(0, |acc, t| acc | pos_bit(n, perm[(t - 1) as usize]))
}

/// Relabels qubits: the returned matrix assigns to qubit perm[t-1] whatever
/// role qubit t played in the input.
pub fn permute_density(rho: &DensityMatrix, perm: &[u32]) -> DensityMatrix {
    let n = rho.n_qubits();
    assert_eq!(perm.len(), n as usize);
    let mut entries = Vec::new();
    for ((x, y), v) in rho.stored() {
        let (px, py) = (permute_bits(n, x, perm), permute_bits(n, y, perm));
        if px <= py {
            entries.push(((px, py), v));
        } else {
            entries.push(((py, px), v.conj()));
        }
    }
    // The uniform diagonal background is permutation-invariant.
    DensityMatrix::from_entries(n, rho.diag_offset(), entries)
        .expect("relabeling preserves validity")
}

/// Uniformly random permutation of {1,..,n}, Fisher-Yates.
pub fn random_permutation(n: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut perm: Vec<u32> = (1..=n).collect();
    for i in (1..perm.len()).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Number of ways to partition an n-set into exactly k nonempty blocks,
/// by the standard recurrence S(n,k) = k S(n-1,k) + S(n-1,k-1).
pub fn stirling2(n: u32, k: u32) -> u64 {
    if k == 0 {
        return u64::from(n == 0);
    }
    if k > n {
        return 0;
    }
    let mut prev = vec![0u64; (k + 1) as usize];
    prev[0] = 1;
    for _ in 1..=n {
        let mut cur = vec![0u64; (k + 1) as usize];
        for j in 1..=k {
            cur[j as usize] = (j as u64) * prev[j as usize] + prev[(j - 1) as usize];
        }
        // S(i,0) = 0 once i >= 1.
        prev = cur;
    }
    prev[k as usize]
}

pub fn binomial(n: u32, m: u32) -> u64 {
    if m > n {
        return 0;
    }
    let m = m.min(n - m) as u64;
    let mut acc = 1u64;
    for t in 0..m {
        acc = acc * (n as u64 - t) / (t + 1);
    }
    acc
}

/// Least-squares line through the points; returns (slope, intercept,
/// max |y - fit|).
pub fn fit_line(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let residual = points
        .iter()
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0, f64::max);
    (slope, intercept, residual)
}

/// All unordered pairs of basis states at Hamming distance exactly 2, with
/// the two differing positions attached (ascending).
pub fn distance_two_pairs(n: u32) -> Vec<(u64, u64, u32, u32)> {
    let d = 1u64 << n;
    let mut out = Vec::new();
    for a in 0..d {
        for b in (a + 1)..d {
            let diff = a ^ b;
            if diff.count_ones() == 2 {
                let mut ps: Vec<u32> =
                    (1..=n).filter(|&t| diff & pos_bit(n, t) != 0).collect();
                ps.sort_unstable();
                out.push((a, b, ps[0], ps[1]));
            }
        }
    }
    out
}
