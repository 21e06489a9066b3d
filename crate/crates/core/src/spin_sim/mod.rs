// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Ensemble (NMR) emulation in the deviation-density-matrix picture.
//!
//! Spin `k` (1-based) occupies bit `n - k` of a basis index, the same slot as
//! variable `V_k` in [`crate::formula`]. The single-spin operator `I_z` is
//! `diag(1/2, −1/2)` in the `{|0⟩, |1⟩}` basis.

mod deviation;
mod gates;
mod product_op;
mod readout;
mod scheme;
mod spectrum;

use thiserror::Error;

pub use deviation::{target_pseudo_pure, thermal_state, DeviationMatrix, MAX_SPINS};
pub use gates::{apply_gate, apply_gates, Gate};
pub use product_op::{decompose, decompose_longitudinal, ProductSum, ProductTerm, SpinFactor};
pub use readout::{
    basis_ideal, diag_tomography, error_metrics, measured_readout, parse_vector, ErrorMetrics,
    Readout, ReadoutSource, LOW_CONTRAST_RATIO, TOMOGRAPHY_CONVENTION,
};
pub use scheme::{
    four_spin_scheme, lint_scheme, minimum_experiments, run_prep_scheme, three_spin_scheme,
    Experiment, LintFinding, PrepOutcome, PrepScheme, T2_DELAY_FRACTION,
};
pub use spectrum::{stick_spectrum, Coupling, SpinSystem, StickLine};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpinError {
    #[error("spin count {n} is outside 1..={max}")]
    SpinCount { n: usize, max: usize },
    #[error("spin {spin} is outside 1..={n}")]
    InvalidSpin { spin: usize, n: usize },
    #[error("CN gate needs distinct control and target, got {0}{0}")]
    SameSpin(usize),
    #[error("matrix is for {got} spins, expected {expected}")]
    SpinMismatch { got: usize, expected: usize },
    #[error("no population contrast: all diagonal elements are equal")]
    NoContrast,
    #[error("length mismatch: measured has {measured} entries, ideal has {ideal}")]
    LengthMismatch { measured: usize, ideal: usize },
    #[error("scheme line {line}, column {column}: {reason}")]
    SchemeParse {
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("gate parse error at position {position}: {reason}")]
    GateParse { position: usize, reason: String },
    #[error("vector line {line}: {reason}")]
    VectorParse { line: usize, reason: String },
    #[error("spin-system parameters: {0}")]
    Params(String),
}
