//! Input states: TFIM ground states, synthetic decay profiles and files.

pub mod lanczos;
mod synthetic;
mod tfim;

use std::path::Path;

pub use synthetic::{synthetic_state, SignPattern, SyntheticSpec};
pub use tfim::{
    rotate_sites, tfim_ground_state, tfim_ground_state_with, Eigensolver, GroundState, TfimSpec,
    DENSE_MAX_SITES, MAX_SITES, MIN_SITES,
};

use crate::amplitudes::AmplitudeVector;
use crate::error::Result;
use crate::io;
use crate::scalar::Real;

/// Reads a state file or a plain list of decimals.
///
/// `n_qubits` overrides the register size; without it a state file keeps its
/// own size and a plain list gets the smallest register that holds it.
pub fn load_state<T: Real>(path: impl AsRef<Path>, n_qubits: Option<u32>) -> Result<AmplitudeVector<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let psi = io::parse_state(&text, n_qubits)?;
    Ok(psi.with_label(format!("file:{}", path.display())))
}
