// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Pulse programs: single-spin pulses interleaved with scalar-coupling
//! evolutions, and the lowering of permutation gates onto them.
//!
//! A coupling element `J_ij[θ]` is the ideal evolution
//! `exp(−i(θ/2)σ_z^i σ_z^j)` under the `i`–`j` coupling alone. A free delay
//! of `1/(2J_ij)` gives `θ = π/2` and is rendered `J_ij[1/2J]`; `θ = −π/2` is
//! rendered `J_ij[-1/2J]`. Spins listed as refocused receive symbolic `π`
//! pulses half-way through the delay so that their own couplings and all
//! chemical shifts drop out; the ideal element already assumes this.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::Serialize;

use super::sequence::{apply_pulse_rows, check_dense, Axis, Pulse, PulseSequence};
use super::PulseError;
use crate::hogg::{DenseOperator, DiagonalOperator};
use crate::linalg::{self, cis, CMatrix, CVector};
use crate::spin_sim::{Experiment, Gate, PrepScheme};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Element {
    Pulse(Pulse),
    Coupling {
        i: usize,
        j: usize,
        angle: f64,
        refocused: Vec<usize>,
    },
}

impl Element {
    fn spins(&self) -> Vec<usize> {
        match self {
            Element::Pulse(p) => vec![p.spin],
            Element::Coupling {
                i, j, refocused, ..
            } => {
                let mut v = vec![*i, *j];
                v.extend(refocused);
                v
            }
        }
    }

    pub fn is_diagonal(&self) -> bool {
        match self {
            Element::Pulse(p) => p.axis == Axis::Z,
            Element::Coupling { .. } => true,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Pulse(p) => write!(f, "{p}"),
            Element::Coupling {
                i,
                j,
                angle,
                refocused,
            } => {
                if (angle - FRAC_PI_2).abs() < 1e-12 {
                    write!(f, "J{i}{j}[1/2J]")?;
                } else if (angle + FRAC_PI_2).abs() < 1e-12 {
                    write!(f, "J{i}{j}[-1/2J]")?;
                } else {
                    write!(f, "J{i}{j}[{}]", crate::report::format_sig(*angle))?;
                }
                if !refocused.is_empty() {
                    let spins: Vec<String> = refocused.iter().map(usize::to_string).collect();
                    write!(f, "{{refocus {}}}", spins.join(","))?;
                }
                Ok(())
            }
        }
    }
}

/// Elements in written (operator) order: the last element acts first.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct PulseProgram {
    pub n: usize,
    pub elements: Vec<Element>,
}

impl PulseProgram {
    pub fn new(n: usize) -> Self {
        PulseProgram {
            n,
            elements: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn push_pulse(&mut self, p: Pulse) {
        self.elements.push(Element::Pulse(p));
    }

    pub fn push_coupling(&mut self, i: usize, j: usize, angle: f64) {
        let refocused = (1..=self.n).filter(|&k| k != i && k != j).collect();
        self.elements.push(Element::Coupling {
            i,
            j,
            angle,
            refocused,
        });
    }

    /// Appends `other` on the right, so it acts before the current contents.
    pub fn extend_after(&mut self, other: PulseProgram) {
        self.elements.extend(other.elements);
    }

    pub fn num_pulses(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, Element::Pulse(_)))
            .count()
    }

    pub fn num_couplings(&self) -> usize {
        self.elements.len() - self.num_pulses()
    }

    pub fn validate(&self) -> Result<(), PulseError> {
        for e in &self.elements {
            for s in e.spins() {
                if s == 0 || s > self.n {
                    return Err(PulseError::InvalidSpin { spin: s, n: self.n });
                }
            }
            if let Element::Coupling { i, j, .. } = e {
                if i == j {
                    return Err(PulseError::SameSpin(*i));
                }
            }
        }
        Ok(())
    }

    /// Exact diagonal when every element is a z-rotation or coupling.
    pub fn diagonal(&self) -> Result<Option<DiagonalOperator>, PulseError> {
        self.validate()?;
        if !self.elements.iter().all(Element::is_diagonal) {
            return Ok(None);
        }
        let n = self.n;
        let z = |s: usize, k: usize| if (s >> (n - k)) & 1 == 0 { 1.0 } else { -1.0 };
        let diag: CVector = (0..1usize << n)
            .map(|s| {
                let mut phase = 0.0;
                for e in &self.elements {
                    match e {
                        Element::Pulse(p) => phase -= p.angle / 2.0 * z(s, p.spin),
                        Element::Coupling { i, j, angle, .. } => {
                            phase -= angle / 2.0 * z(s, *i) * z(s, *j)
                        }
                    }
                }
                cis(phase)
            })
            .collect();
        Ok(Some(DiagonalOperator::new(n, diag)))
    }

    /// Dense unitary of the ideal program.
    pub fn to_unitary(&self) -> Result<DenseOperator, PulseError> {
        check_dense(self.n)?;
        self.validate()?;
        let n = self.n;
        let mut u = linalg::identity(1 << n);
        for e in self.elements.iter().rev() {
            match e {
                Element::Pulse(p) => apply_pulse_rows(&mut u, n, p),
                Element::Coupling { i, j, angle, .. } => {
                    apply_coupling_rows(&mut u, n, *i, *j, *angle)
                }
            }
        }
        Ok(DenseOperator::new(n, u))
    }
}

impl From<&PulseSequence> for PulseProgram {
    fn from(seq: &PulseSequence) -> Self {
        PulseProgram {
            n: seq.max_spin(),
            elements: seq.pulses.iter().copied().map(Element::Pulse).collect(),
        }
    }
}

impl fmt::Display for PulseProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elements.is_empty() {
            return write!(f, "E");
        }
        let parts: Vec<String> = self.elements.iter().map(Element::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn apply_coupling_rows(data: &mut CMatrix, n: usize, i: usize, j: usize, angle: f64) {
    let same = cis(-angle / 2.0);
    let differ = cis(angle / 2.0);
    for (r, mut row) in data.rows_mut().into_iter().enumerate() {
        let parity = ((r >> (n - i)) ^ (r >> (n - j))) & 1;
        let phase = if parity == 0 { same } else { differ };
        row.mapv_inplace(|z| z * phase);
    }
}

/// Weak-coupling CN lowering, operator order:
/// `Y_t · Z̄_c Z̄_t · J_ct[1/2J] · Ȳ_t`. The middle three elements form a
/// controlled-Z up to a global phase and the `y` pulses turn it into a
/// controlled-NOT on the target.
pub fn lower_cnot(n: usize, control: usize, target: usize) -> PulseProgram {
    let mut p = PulseProgram::new(n);
    p.push_pulse(Pulse::quarter(target, Axis::Y, false));
    p.push_pulse(Pulse::quarter(control, Axis::Z, true));
    p.push_pulse(Pulse::quarter(target, Axis::Z, true));
    p.push_coupling(control, target, FRAC_PI_2);
    p.push_pulse(Pulse::quarter(target, Axis::Y, true));
    p
}

/// Lowers one gate; `N_i` becomes an `x` inversion pulse `X_i^2`.
pub fn lower_gate(n: usize, gate: Gate) -> PulseProgram {
    match gate {
        Gate::Cnot { control, target } => lower_cnot(n, control, target),
        Gate::Not(spin) => {
            let mut p = PulseProgram::new(n);
            p.push_pulse(Pulse::new(spin, Axis::X, PI));
            p
        }
    }
}

/// Lowers a gate list written in operator order, keeping that order.
pub fn lower_gates(n: usize, gates: &[Gate]) -> Result<PulseProgram, PulseError> {
    let mut program = PulseProgram::new(n);
    for &g in gates {
        g.validate(n)?;
        program.extend_after(lower_gate(n, g));
    }
    Ok(program)
}

/// Permutation unitary of a gate list written in operator order.
pub fn gate_unitary(n: usize, gates: &[Gate]) -> Result<DenseOperator, PulseError> {
    check_dense(n)?;
    let mut u = linalg::identity(1 << n);
    for g in gates {
        u = u.dot(&g.unitary(n)?);
    }
    Ok(DenseOperator::new(n, u))
}

/// A lowered preparation experiment and its gate-level check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoweredExperiment {
    pub gates: String,
    pub program: PulseProgram,
    pub rendered: String,
    /// Max elementwise error of the lowered unitary against the permutation
    /// product after global-phase alignment.
    pub max_abs_error: f64,
    pub saturate: Vec<usize>,
}

/// Tolerance for a lowered program to count as matching its gates.
pub const LOWERING_TOLERANCE: f64 = 1e-10;

fn lower_experiment(n: usize, e: &Experiment) -> Result<LoweredExperiment, PulseError> {
    let program = lower_gates(n, &e.gates)?;
    let got = program.to_unitary()?;
    let want = gate_unitary(n, &e.gates)?;
    let al = linalg::align_global_phase(got.entries().iter(), want.entries().iter());
    Ok(LoweredExperiment {
        gates: if e.gates.is_empty() {
            "E".to_string()
        } else {
            e.gates
                .iter()
                .map(Gate::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        },
        rendered: program.to_string(),
        program,
        max_abs_error: al.max_abs_error,
        saturate: e.saturate.clone(),
    })
}

/// Lowers every experiment of a scheme.
pub fn lower_scheme(scheme: &PrepScheme) -> Result<Vec<LoweredExperiment>, PulseError> {
    scheme
        .experiments
        .iter()
        .map(|e| lower_experiment(scheme.n, e))
        .collect()
}

/// Pulse programs for the built-in three-spin preparation scheme.
pub fn prep_pulse_program(n: usize) -> Result<Vec<LoweredExperiment>, PulseError> {
    if n != 3 {
        return Err(PulseError::Unsupported(format!(
            "built-in preparation programs exist for 3 spins, not {n}"
        )));
    }
    lower_scheme(&crate::spin_sim::three_spin_scheme())
}

#[cfg(test)]
fn zz(n: usize, i: usize, j: usize, angle: f64) -> CMatrix {
    let mut u = linalg::identity(1 << n);
    apply_coupling_rows(&mut u, n, i, j, angle);
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_sim::{apply_gates, thermal_state};

    #[test]
    fn coupling_matches_exponential() {
        // exp(−iθ/2 Z⊗Z) from the Pauli expansion.
        let theta: f64 = 0.7;
        let zzm = linalg::kron(&linalg::pauli_z(), &linalg::pauli_z());
        let (s, c) = (theta / 2.0).sin_cos();
        let want = linalg::identity(4).mapv(|z| z * c) - zzm.mapv(|z| z * linalg::I * s);
        assert!(linalg::max_abs_diff(&zz(2, 1, 2, theta), &want) < 1e-15);
    }

    #[test]
    fn every_cnot_lowers_exactly() {
        for n in 2..=4 {
            for c in 1..=n {
                for t in (1..=n).filter(|&t| t != c) {
                    let got = lower_cnot(n, c, t).to_unitary().unwrap();
                    let want = Gate::cn(c, t).unitary(n).unwrap();
                    let al = linalg::align_global_phase(got.entries().iter(), want.iter());
                    assert!(al.max_abs_error < 1e-12, "CN{c}{t} n={n}");
                }
            }
        }
    }

    #[test]
    fn three_spin_programs_match_gates() {
        let lowered = prep_pulse_program(3).unwrap();
        assert_eq!(lowered.len(), 3);
        assert!(lowered[0].program.is_empty());
        assert_eq!(lowered[0].rendered, "E");
        assert_eq!(lowered[1].gates, "CN32 CN21 N3");
        for l in &lowered {
            assert!(l.max_abs_error < LOWERING_TOLERANCE, "{}", l.gates);
        }
        assert_eq!(lowered[1].program.num_couplings(), 2);
        assert!(lowered[1].rendered.contains("J32[1/2J]{refocus 1}"));
        assert!(prep_pulse_program(4).is_err());
    }

    #[test]
    fn lowered_program_reproduces_gate_conjugation() {
        let scheme = crate::spin_sim::three_spin_scheme();
        let rho = thermal_state(3).unwrap();
        for e in &scheme.experiments {
            let u = lower_gates(3, &e.gates).unwrap().to_unitary().unwrap();
            let a = rho.conjugate(u.entries());
            let b = apply_gates(&rho, &e.gates).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn diagonal_fast_path_agrees_with_dense() {
        let mut p = PulseProgram::new(3);
        p.push_pulse(Pulse::new(2, Axis::Z, 0.4));
        p.push_coupling(1, 3, -1.3);
        p.push_pulse(Pulse::quarter(1, Axis::Z, true));
        let diag = p.diagonal().unwrap().unwrap().to_dense();
        let dense = p.to_unitary().unwrap();
        assert!(linalg::max_abs_diff(diag.entries(), dense.entries()) < 1e-15);
        p.push_pulse(Pulse::quarter(1, Axis::X, false));
        assert!(p.diagonal().unwrap().is_none());
    }

    #[test]
    fn invalid_programs() {
        let mut p = PulseProgram::new(2);
        p.push_coupling(1, 3, 1.0);
        assert!(matches!(
            p.to_unitary(),
            Err(PulseError::InvalidSpin { spin: 3, n: 2 })
        ));
        assert!(lower_gates(3, &[Gate::cn(1, 4)]).is_err());
    }
}
