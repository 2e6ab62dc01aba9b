//! Quantum Fourier transform circuits and the DFT matrix they implement.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::ir::{Block, Circuit, Gate, IrError, QubitId};
use crate::sim::Matrix;

/// Largest register accepted by [`dft_matrix`].
pub const DFT_LIMIT: usize = 10;

/// With qubit 0 least significant, the phase ladder leaves the output
/// bit-reversed, so a final reversal is required for `n ≥ 2`.
pub const QFT_REVERSES_OUTPUT: bool = true;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QftError {
    #[error("QFT needs at least one qubit")]
    Empty,
    #[error("{0} qubits exceeds the DFT matrix limit of {DFT_LIMIT}")]
    TooLarge(usize),
    #[error(transparent)]
    Ir(#[from] IrError),
}

/// Entry `(x, y) = e^{2πi·xy/N}/√N` with `N = 2^n`.
pub fn dft_matrix(n_qubits: usize) -> Result<Matrix, QftError> {
    if n_qubits == 0 {
        return Err(QftError::Empty);
    }
    if n_qubits > DFT_LIMIT {
        return Err(QftError::TooLarge(n_qubits));
    }
    let dim = 1usize << n_qubits;
    let scale = 1.0 / (dim as f64).sqrt();
    Ok(Matrix::from_fn(dim, |x, y| {
        let k = (x * y) % dim;
        Complex64::from_polar(scale, 2.0 * PI * k as f64 / dim as f64)
    }))
}

/// H/controlled-phase ladder from the most significant qubit down, then a
/// qubit reversal built from CNOT triples. For `n = 2` the ladder is
/// H(q1), controlled-S(q0, q1), H(q0).
pub fn build_qft(n_qubits: usize) -> Result<Circuit, QftError> {
    if n_qubits == 0 {
        return Err(QftError::Empty);
    }
    let mut c = Circuit::plain(n_qubits)?;
    for t in (0..n_qubits).rev() {
        c.append(Gate::h(QubitId(t)))?;
        for ctl in (0..t).rev() {
            c.append(Gate::cphase((t - ctl) as u32, QubitId(ctl), QubitId(t)))?;
        }
    }
    if QFT_REVERSES_OUTPUT {
        for i in 0..n_qubits / 2 {
            let (a, b) = (QubitId(i), QubitId(n_qubits - 1 - i));
            c.append(Block::from_gates(
                "SWAP",
                [Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)],
            ))?;
        }
    }
    Ok(c)
}
