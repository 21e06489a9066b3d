// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Pulse-level realisation of the algorithm.
//!
//! Rotations follow `R_axis(θ) = exp(−iθσ_axis/2)` on one spin, and every
//! sequence or program is written in operator order, so the rightmost pulse
//! acts first.

mod compile;
mod program;
mod sequence;
mod verify;

use thiserror::Error;

pub use compile::{
    compile_any, compile_diagonal, compile_phase_program, Compiled, CompiledProgram,
    CompiledSequence, MAX_COMPILE_QUBITS,
};
pub use program::{
    gate_unitary, lower_cnot, lower_gate, lower_gates, lower_scheme, prep_pulse_program, Element,
    LoweredExperiment, PulseProgram, LOWERING_TOLERANCE,
};
pub use sequence::{
    apply_sequence, hadamard, parse_sequence, reduce, sequence_to_unitary, Axis, Pulse,
    PulseSequence,
};
pub use verify::{
    verify_table_sequence, CatalogRow, EquivalenceCheck, OrderVerification, TableVerification,
    CATALOG, CATALOG_QUBITS, CATALOG_SOLUTION_ORDER, EQUIVALENCE_TOLERANCE,
};

use crate::hogg::OperatorError;
use crate::spin_sim::SpinError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PulseError {
    #[error("pulse parse error at position {position}: {reason}")]
    Parse { position: usize, reason: String },
    #[error("spin {spin} is outside 1..={n}")]
    InvalidSpin { spin: usize, n: usize },
    #[error("coupling element needs two distinct spins, got {0}{0}")]
    SameSpin(usize),
    #[error("spin count {n} is outside 1..={max}")]
    SpinCount { n: usize, max: usize },
    #[error("diagonal is not unitary (largest | |d| - 1 | = {modulus_error:.3e})")]
    NotUnitary { modulus_error: f64 },
    #[error("not tensor-factorable: single-spin phases leave a residual of {residual:.3e}")]
    NotTensorFactorable { residual: f64 },
    #[error("phase pattern has terms beyond pairwise couplings (residual {residual:.3e})")]
    BeyondPairwise { residual: f64 },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}
