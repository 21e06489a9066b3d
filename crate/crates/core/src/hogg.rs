// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Operators and the single-step pipeline of Hogg's structured search.
//!
//! The pipeline prepares the uniform superposition `W|0…0⟩`, applies the
//! conflict-dependent phase matrix `R`, then the distance-dependent mixing
//! matrix `U = WΓW`. For a soluble 1-SAT formula the result is supported
//! exactly on the solutions.
//!
//! Dense constructors ([`walsh_hadamard`], [`mixing_matrix`]) are the
//! reference; [`run_pipeline`] uses the Walsh-Hadamard butterfly so it also
//! works for the widest formulas.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{Assignment, Formula, MAX_VARIABLES};
use crate::linalg::{self, cis, i_pow, CMatrix, CVector, ONE};

/// Widest register for which dense `2^n × 2^n` matrices are built.
pub const MAX_DENSE_QUBITS: usize = 12;

pub const OPERATOR_TOLERANCE: f64 = 1e-10;
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("qubit count {n} is outside 1..={max}")]
    QubitCount { n: usize, max: usize },
}

fn check_qubits(n: usize, max: usize) -> Result<(), OperatorError> {
    if n == 0 || n > max {
        Err(OperatorError::QubitCount { n, max })
    } else {
        Ok(())
    }
}

/// `2^n` complex amplitudes indexed by assignment bits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: CVector,
}

impl StateVector {
    pub fn basis(n: usize, index: usize) -> Self {
        let mut amplitudes = CVector::zeros(1 << n);
        amplitudes[index] = ONE;
        StateVector { n, amplitudes }
    }

    pub fn uniform(n: usize) -> Self {
        let dim = 1usize << n;
        let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        StateVector {
            n,
            amplitudes: CVector::from_elem(dim, amp),
        }
    }

    pub fn from_amplitudes(n: usize, amplitudes: CVector) -> Self {
        assert_eq!(amplitudes.len(), 1 << n, "amplitude count must be 2^n");
        StateVector { n, amplitudes }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_dense(&self, op: &DenseOperator) -> StateVector {
        assert_eq!(op.n, self.n, "operator width mismatch");
        StateVector {
            n: self.n,
            amplitudes: op.entries.dot(&self.amplitudes),
        }
    }

    pub fn apply_diagonal(&self, op: &DiagonalOperator) -> StateVector {
        assert_eq!(op.n, self.n, "operator width mismatch");
        StateVector {
            n: self.n,
            amplitudes: &self.amplitudes * &op.diag,
        }
    }

    /// Applies `W` with the `O(n 2^n)` butterfly.
    pub fn apply_walsh_hadamard(&self) -> StateVector {
        let mut data = self.amplitudes.to_vec();
        linalg::fwht(&mut data);
        let scale = 2f64.powf(-(self.n as f64) / 2.0);
        StateVector {
            n: self.n,
            amplitudes: data.into_iter().map(|z| z * scale).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    n: usize,
    diag: CVector,
}

impl DiagonalOperator {
    pub fn new(n: usize, diag: CVector) -> Self {
        assert_eq!(diag.len(), 1 << n, "diagonal length must be 2^n");
        DiagonalOperator { n, diag }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn diag(&self) -> &CVector {
        &self.diag
    }

    pub fn to_dense(&self) -> DenseOperator {
        DenseOperator {
            n: self.n,
            entries: CMatrix::from_diag(&self.diag),
        }
    }

    /// Largest `||entry| − 1|`.
    pub fn modulus_error(&self) -> f64 {
        self.diag
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn compose(&self, other: &DiagonalOperator) -> DiagonalOperator {
        assert_eq!(self.n, other.n, "operator width mismatch");
        DiagonalOperator {
            n: self.n,
            diag: &self.diag * &other.diag,
        }
    }

    /// Divides out the phase of the first entry.
    pub fn normalized_phase(&self) -> DiagonalOperator {
        let g = self.diag[0];
        let g = if g.norm() > 0.0 { g / g.norm() } else { ONE };
        DiagonalOperator {
            n: self.n,
            diag: self.diag.mapv(|z| z / g),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n: usize,
    entries: CMatrix,
}

impl DenseOperator {
    pub fn new(n: usize, entries: CMatrix) -> Self {
        assert_eq!(entries.dim(), (1 << n, 1 << n), "matrix must be 2^n x 2^n");
        DenseOperator { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        DenseOperator {
            n,
            entries: linalg::identity(1 << n),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    /// `self · other`.
    pub fn compose(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.n, other.n, "operator width mismatch");
        DenseOperator {
            n: self.n,
            entries: self.entries.dot(&other.entries),
        }
    }

    pub fn unitarity_error(&self) -> f64 {
        linalg::unitarity_error(&self.entries)
    }

    /// Column `0`, i.e. the action on `|0…0⟩`.
    pub fn first_column(&self) -> StateVector {
        StateVector {
            n: self.n,
            amplitudes: self.entries.column(0).to_owned(),
        }
    }
}

/// Dense `W` with entries `2^{−n/2} (−1)^{|r∧s|}`.
pub fn walsh_hadamard(n: usize) -> Result<DenseOperator, OperatorError> {
    check_qubits(n, MAX_DENSE_QUBITS)?;
    let dim = 1usize << n;
    let scale = 2f64.powf(-(n as f64) / 2.0);
    let entries = CMatrix::from_shape_fn((dim, dim), |(r, s)| {
        if (r & s).count_ones() % 2 == 0 {
            Complex64::new(scale, 0.0)
        } else {
            Complex64::new(-scale, 0.0)
        }
    });
    Ok(DenseOperator { n, entries })
}

/// Phase of an assignment with `c` conflicts out of `m` clauses.
pub fn phase_entry(c: usize, m: usize) -> Complex64 {
    if m % 2 == 0 {
        Complex64::new(SQRT_2 * ((2.0 * c as f64 - 1.0) * FRAC_PI_4).cos(), 0.0)
    } else {
        i_pow(c as i64)
    }
}

/// Diagonal `R` built from the conflict counts of `f`.
pub fn phase_matrix(f: &Formula) -> DiagonalOperator {
    let m = f.num_clauses();
    let diag = f
        .assignments()
        .map(|a| phase_entry(f.conflicts(a), m))
        .collect();
    DiagonalOperator {
        n: f.num_variables(),
        diag,
    }
}

/// `γ_h` for Hamming weight `h`.
pub fn gamma_entry(h: usize, m: usize) -> Complex64 {
    if m % 2 == 0 {
        let arg = (m as f64 - 2.0 * h as f64 - 1.0) * FRAC_PI_4;
        Complex64::new(SQRT_2 * arg.cos(), 0.0)
    } else {
        i_pow(h as i64) * cis(-std::f64::consts::PI * m as f64 / 4.0)
    }
}

/// Diagonal `Γ`, depending only on the weight of each index.
pub fn gamma_matrix(n: usize, m: usize) -> Result<DiagonalOperator, OperatorError> {
    check_qubits(n, MAX_VARIABLES)?;
    let diag = (0..1u32 << n)
        .map(|r| gamma_entry(r.count_ones() as usize, m))
        .collect();
    Ok(DiagonalOperator { n, diag })
}

/// `U_d`, the mixing amplitude between assignments at distance `d`.
pub fn mixing_entry(n: usize, m: usize, d: u32) -> Complex64 {
    let (nf, mf, df) = (n as f64, m as f64, d as f64);
    if m % 2 == 0 {
        let scale = 2f64.powf(-(nf - 1.0) / 2.0);
        Complex64::new(scale * ((nf - mf + 1.0 - 2.0 * df) * FRAC_PI_4).cos(), 0.0)
    } else {
        let scale = 2f64.powf(-nf / 2.0);
        cis(std::f64::consts::PI * (nf - mf) / 4.0) * i_pow(-(d as i64)) * scale
    }
}

/// Dense `U` with entries depending on the Hamming distance only.
pub fn mixing_matrix(n: usize, m: usize) -> Result<DenseOperator, OperatorError> {
    check_qubits(n, MAX_DENSE_QUBITS)?;
    let dim = 1usize << n;
    let by_distance: Vec<Complex64> = (0..=n as u32).map(|d| mixing_entry(n, m, d)).collect();
    let entries = CMatrix::from_shape_fn((dim, dim), |(r, s)| {
        by_distance[(r ^ s).count_ones() as usize]
    });
    Ok(DenseOperator { n, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WgwReport {
    pub n: usize,
    pub m: usize,
    pub max_abs_error: f64,
    #[serde(serialize_with = "crate::report::serialize_complex")]
    pub global_phase: Complex64,
    pub passed: bool,
}

/// Checks `U = WΓW` up to a global phase.
pub fn verify_wgw(n: usize, m: usize) -> Result<WgwReport, OperatorError> {
    let w = walsh_hadamard(n)?;
    let gamma = gamma_matrix(n, m)?;
    let u = mixing_matrix(n, m)?;
    // W·diag(γ)·W, scaling columns of W by γ before the second product.
    let mut wg = w.entries.clone();
    for (mut col, g) in wg.columns_mut().into_iter().zip(gamma.diag.iter()) {
        col.mapv_inplace(|z| z * g);
    }
    let wgw = wg.dot(&w.entries);
    let al = linalg::align_global_phase(wgw.iter(), u.entries.iter());
    Ok(WgwReport {
        n,
        m,
        max_abs_error: al.max_abs_error,
        global_phase: al.global_phase,
        passed: al.max_abs_error <= OPERATOR_TOLERANCE,
    })
}

/// Applies `U = WΓW` with two butterflies.
fn apply_mixing(psi: &StateVector, m: usize) -> StateVector {
    let n = psi.n;
    let gamma: CVector = (0..1u32 << n)
        .map(|r| gamma_entry(r.count_ones() as usize, m))
        .collect();
    let gamma = DiagonalOperator { n, diag: gamma };
    psi.apply_walsh_hadamard()
        .apply_diagonal(&gamma)
        .apply_walsh_hadamard()
}

/// `|ψ_f⟩ = U·R·W·|0…0⟩`.
pub fn run_pipeline(f: &Formula) -> StateVector {
    let n = f.num_variables();
    let psi = StateVector::basis(n, 0).apply_walsh_hadamard();
    let psi = psi.apply_diagonal(&phase_matrix(f));
    apply_mixing(&psi, f.num_clauses())
}

/// Dense `U·R·W`, the full algorithm unitary.
pub fn algorithm_unitary(f: &Formula) -> Result<DenseOperator, OperatorError> {
    let n = f.num_variables();
    let w = walsh_hadamard(n)?;
    let r = phase_matrix(f).to_dense();
    let u = mixing_matrix(n, f.num_clauses())?;
    Ok(u.compose(&r).compose(&w))
}

/// Exact outcome probabilities of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    n: usize,
    probabilities: Vec<f64>,
}

impl Distribution {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, a: Assignment) -> f64 {
        self.probabilities[a.index()]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Most probable assignment; ties go to the lowest index.
    pub fn top(&self) -> Assignment {
        let mut best = 0;
        for (i, &p) in self.probabilities.iter().enumerate() {
            if p > self.probabilities[best] + NORM_TOLERANCE {
                best = i;
            }
        }
        Assignment::new(best as u32, self.n)
    }

    /// Assignments carrying more than `threshold` probability.
    pub fn support(&self, threshold: f64) -> Vec<(Assignment, f64)> {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > threshold)
            .map(|(i, &p)| (Assignment::new(i as u32, self.n), p))
            .collect()
    }

    /// Relabels outcomes by flipping variable `k` in every index.
    pub fn flip_variable(&self, k: usize) -> Distribution {
        let mask = crate::formula::variable_mask(self.n, k) as usize;
        let mut probabilities = vec![0.0; self.probabilities.len()];
        for (i, &p) in self.probabilities.iter().enumerate() {
            probabilities[i ^ mask] = p;
        }
        Distribution {
            n: self.n,
            probabilities,
        }
    }
}

pub fn measure_distribution(psi: &StateVector) -> Distribution {
    Distribution {
        n: psi.n,
        probabilities: psi.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
    }
}
