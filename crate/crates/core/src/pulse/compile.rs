// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Compilation of diagonal unitaries into z-rotations and couplings.
//!
//! Write a diagonal as `d_s = g · exp(iφ(s))` with `φ(0) = 0`. It is a tensor
//! product of single-spin phases iff `φ` is linear in the bits, and then spin
//! `k` needs `diag(1, e^{ia_k}) ∝ R_z(a_k)` with `a_k = φ(e_k)`. If `φ` also
//! has pairwise terms `b_kl·s_k·s_l`, each one is a controlled phase, realised
//! as `R_z(b/2)` on both spins and a coupling element of angle `−b/2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::program::{Element, PulseProgram};
use super::sequence::{Axis, Pulse, PulseSequence};
use super::PulseError;
use crate::hogg::{DiagonalOperator, OPERATOR_TOLERANCE};
use crate::linalg;

/// Largest register accepted by the compilers (the fit is `O(n² 2^n)`).
pub const MAX_COMPILE_QUBITS: usize = 16;

/// A diagonal realised by single-spin z-rotations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompiledSequence {
    pub sequence: PulseSequence,
    pub rendered: String,
    /// `g` with `target = g · sequence_unitary`.
    #[serde(serialize_with = "crate::report::serialize_complex")]
    pub global_phase: Complex64,
    pub max_abs_error: f64,
}

/// A diagonal realised by z-rotations and pairwise coupling evolutions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompiledProgram {
    pub program: PulseProgram,
    pub rendered: String,
    #[serde(serialize_with = "crate::report::serialize_complex")]
    pub global_phase: Complex64,
    pub max_abs_error: f64,
}

/// Wraps into `(−π, π]`.
fn wrap_pi(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if t <= -PI + 1e-12 {
        PI
    } else {
        t
    }
}

/// Snaps angles within `1e-9` of a multiple of `π/4` onto it.
fn snap(theta: f64) -> f64 {
    let k = theta / (PI / 4.0);
    if (k - k.round()).abs() < 1e-9 {
        k.round() * PI / 4.0
    } else {
        theta
    }
}

fn check_input(op: &DiagonalOperator) -> Result<(Vec<f64>, Complex64), PulseError> {
    let n = op.num_qubits();
    if n == 0 || n > MAX_COMPILE_QUBITS {
        return Err(PulseError::SpinCount {
            n,
            max: MAX_COMPILE_QUBITS,
        });
    }
    let err = op.modulus_error();
    if err > OPERATOR_TOLERANCE {
        return Err(PulseError::NotUnitary { modulus_error: err });
    }
    let d0 = op.diag()[0];
    let g = d0 / d0.norm();
    let phases = op.diag().iter().map(|z| (z / g).arg()).collect();
    Ok((phases, g))
}

fn bit(n: usize, k: usize) -> usize {
    1 << (n - k)
}

fn z_pulse(spin: usize, angle: f64) -> Option<Pulse> {
    let angle = snap(wrap_pi(angle));
    (angle.abs() > 1e-12).then(|| Pulse::new(spin, Axis::Z, angle))
}

fn finish_alignment(op: &DiagonalOperator, realized: &DiagonalOperator) -> (Complex64, f64) {
    let al = linalg::align_global_phase(op.diag().iter(), realized.diag().iter());
    (al.global_phase, al.max_abs_error)
}

/// Single-spin z-rotations realising `op` up to a global phase.
///
/// Fails with [`PulseError::NotTensorFactorable`] when the phase pattern is
/// not a sum of single-bit terms; [`compile_phase_program`] handles the
/// pairwise case.
pub fn compile_diagonal(op: &DiagonalOperator) -> Result<CompiledSequence, PulseError> {
    let n = op.num_qubits();
    let (phases, _) = check_input(op)?;
    let a: Vec<f64> = (1..=n).map(|k| phases[bit(n, k)]).collect();

    let mut residual: f64 = 0.0;
    for (s, &phi) in phases.iter().enumerate() {
        let model: f64 = (1..=n)
            .filter(|&k| s & bit(n, k) != 0)
            .map(|k| a[k - 1])
            .sum();
        residual = residual.max((linalg::cis(phi) - linalg::cis(model)).norm());
    }
    if residual > OPERATOR_TOLERANCE {
        return Err(PulseError::NotTensorFactorable { residual });
    }

    let sequence = PulseSequence::new((1..=n).filter_map(|k| z_pulse(k, a[k - 1])).collect());
    let realized = PulseProgram {
        n,
        elements: sequence
            .pulses
            .iter()
            .copied()
            .map(Element::Pulse)
            .collect(),
    }
    .diagonal()?
    .expect("z-rotations are diagonal");
    let (global_phase, max_abs_error) = finish_alignment(op, &realized);
    Ok(CompiledSequence {
        rendered: sequence.to_string(),
        sequence,
        global_phase,
        max_abs_error,
    })
}

/// Z-rotations plus coupling evolutions realising `op` up to a global phase,
/// for phase patterns with at most pairwise bit interactions.
pub fn compile_phase_program(op: &DiagonalOperator) -> Result<CompiledProgram, PulseError> {
    let n = op.num_qubits();
    let (phases, _) = check_input(op)?;
    let a: Vec<f64> = (1..=n).map(|k| phases[bit(n, k)]).collect();
    let mut b = vec![vec![0.0; n + 1]; n + 1];
    for k in 1..=n {
        for l in k + 1..=n {
            b[k][l] = phases[bit(n, k) | bit(n, l)] - a[k - 1] - a[l - 1];
        }
    }

    let mut residual: f64 = 0.0;
    for (s, &phi) in phases.iter().enumerate() {
        let on: Vec<usize> = (1..=n).filter(|&k| s & bit(n, k) != 0).collect();
        let mut model: f64 = on.iter().map(|&k| a[k - 1]).sum();
        for (x, &k) in on.iter().enumerate() {
            for &l in &on[x + 1..] {
                model += b[k][l];
            }
        }
        residual = residual.max((linalg::cis(phi) - linalg::cis(model)).norm());
    }
    if residual > OPERATOR_TOLERANCE {
        return Err(PulseError::BeyondPairwise { residual });
    }

    let mut program = PulseProgram::new(n);
    for k in 1..=n {
        let total = a[k - 1]
            + (1..=n)
                .filter(|&l| l != k)
                .map(|l| b[k.min(l)][k.max(l)] / 2.0)
                .sum::<f64>();
        if let Some(p) = z_pulse(k, total) {
            program.push_pulse(p);
        }
    }
    for (k, row) in b.iter().enumerate().skip(1) {
        for (l, &bkl) in row.iter().enumerate().skip(k + 1) {
            // Coupling angles only matter modulo 2π up to a global phase.
            let theta = snap(wrap_pi(-bkl / 2.0));
            if theta.abs() > 1e-12 {
                program.push_coupling(k, l, theta);
            }
        }
    }
    let realized = program.diagonal()?.expect("program is diagonal");
    let (global_phase, max_abs_error) = finish_alignment(op, &realized);
    Ok(CompiledProgram {
        rendered: program.to_string(),
        program,
        global_phase,
        max_abs_error,
    })
}

/// Either form, whichever applies.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum Compiled {
    Pulses(CompiledSequence),
    PulsesAndCouplings(CompiledProgram),
}

impl Compiled {
    pub fn rendered(&self) -> &str {
        match self {
            Compiled::Pulses(c) => &c.rendered,
            Compiled::PulsesAndCouplings(c) => &c.rendered,
        }
    }

    pub fn max_abs_error(&self) -> f64 {
        match self {
            Compiled::Pulses(c) => c.max_abs_error,
            Compiled::PulsesAndCouplings(c) => c.max_abs_error,
        }
    }

    pub fn global_phase(&self) -> Complex64 {
        match self {
            Compiled::Pulses(c) => c.global_phase,
            Compiled::PulsesAndCouplings(c) => c.global_phase,
        }
    }
}

/// Tries [`compile_diagonal`] first and falls back to
/// [`compile_phase_program`] for entangling diagonals.
pub fn compile_any(op: &DiagonalOperator) -> Result<Compiled, PulseError> {
    match compile_diagonal(op) {
        Ok(c) => Ok(Compiled::Pulses(c)),
        Err(PulseError::NotTensorFactorable { .. }) => {
            compile_phase_program(op).map(Compiled::PulsesAndCouplings)
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::hogg::{gamma_matrix, phase_matrix};
    use crate::linalg::CVector;
    use crate::pulse::sequence_to_unitary;

    #[test]
    fn phase_matrix_of_all_positive_clauses() {
        let f = Formula::parse("v1 & v2 & v3").unwrap();
        let c = compile_diagonal(&phase_matrix(&f)).unwrap();
        assert_eq!(c.rendered, "Z~1 Z~2 Z~3");
        assert!(c.max_abs_error < 1e-12);
        assert!((c.global_phase.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_odd_m() {
        let c = compile_diagonal(&gamma_matrix(3, 3).unwrap()).unwrap();
        assert_eq!(c.rendered, "Z1 Z2 Z3");
        assert!(c.max_abs_error < 1e-12);
    }

    #[test]
    fn identity_compiles_to_nothing() {
        let op = DiagonalOperator::new(2, CVector::from_elem(4, linalg::I));
        let c = compile_diagonal(&op).unwrap();
        assert!(c.sequence.is_empty());
        assert!((c.global_phase - linalg::I).norm() < 1e-12);
    }

    #[test]
    fn even_m_needs_couplings() {
        let g = gamma_matrix(2, 2).unwrap();
        assert!(matches!(
            compile_diagonal(&g),
            Err(PulseError::NotTensorFactorable { .. })
        ));
        let c = compile_phase_program(&g).unwrap();
        assert_eq!(c.program.num_couplings(), 1);
        assert!(c.max_abs_error < 1e-12);
        let dense = c.program.to_unitary().unwrap();
        let al = linalg::align_global_phase(g.to_dense().entries().iter(), dense.entries().iter());
        assert!(al.max_abs_error < 1e-12);
    }

    #[test]
    fn three_body_phase_is_rejected() {
        let diag: CVector = (0..8)
            .map(|s| if s == 7 { -linalg::ONE } else { linalg::ONE })
            .collect();
        let op = DiagonalOperator::new(3, diag);
        assert!(matches!(
            compile_phase_program(&op),
            Err(PulseError::BeyondPairwise { .. })
        ));
        assert!(compile_any(&op).is_err());
    }

    #[test]
    fn non_unitary_input_is_rejected() {
        let op = DiagonalOperator::new(1, CVector::from_vec(vec![linalg::ONE, linalg::ONE * 2.0]));
        assert!(matches!(
            compile_diagonal(&op),
            Err(PulseError::NotUnitary { .. })
        ));
    }

    #[test]
    fn sequence_round_trip_through_dense() {
        let f = Formula::parse("!v1 & v2 & !v3").unwrap();
        let r = phase_matrix(&f);
        let c = compile_diagonal(&r).unwrap();
        let u = sequence_to_unitary(&c.sequence, 3).unwrap();
        let al = linalg::align_global_phase(r.to_dense().entries().iter(), u.entries().iter());
        assert!(al.max_abs_error < 1e-12);
    }
}
