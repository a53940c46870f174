//! Shared setup for the benchmark targets; see `benches/evaluation.rs`.

use ksep::{dicke_state, DensityMatrix, NoiseFamily};

/// A realized symmetric-family state at the given width, two excitations,
/// noise level 0.7.
pub fn two_excitation_noise_state(n_qubits: u32) -> DensityMatrix {
    NoiseFamily::new(dicke_state(n_qubits, 2).expect("valid width"))
        .realize(0.7)
        .expect("valid noise level")
}
