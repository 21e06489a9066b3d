// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulator and verification toolkit for Hogg's single-step structured
//! quantum search over 1-SAT, with an NMR ensemble emulation layer.
//!
//! Modules, bottom-up:
//!
//! - [`formula`]: SAT formulas, assignments, conflict counting and the
//!   brute-force solution oracle.
//! - [`hogg`]: the phase matrix `R`, mixing matrix `U`, its `WΓW`
//!   factorization and the `U·R·W|0…0⟩` pipeline.
//! - [`spin_sim`]: deviation density matrices, product operators, permutation
//!   gates, temporal-averaging preparation, readout and stick spectra.
//! - [`pulse`]: single-spin pulse sequences, diagonal compilation and
//!   equivalence checks against `U·R·W`.
//! - [`commands`]: the command implementations behind the `hogg-nmr` binary.
//!
//! Bit convention: variable `V_k` (spin `k`) is bit `n − k` of an index, so
//! `V_1` is the most significant bit. [`formula::BitOrder::LsbV1`] renders the
//! reversed order at the text boundary.

pub mod commands;
pub mod formula;
pub mod hogg;
pub mod linalg;
pub mod pulse;
pub mod report;
pub mod spin_sim;
