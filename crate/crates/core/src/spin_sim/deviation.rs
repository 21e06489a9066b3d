// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, Sub};

use num_complex::Complex64;

use super::SpinError;
use crate::linalg::{self, CMatrix, ZERO};

pub const MAX_SPINS: usize = 8;

pub(crate) fn check_spins(n: usize) -> Result<(), SpinError> {
    if n == 0 || n > MAX_SPINS {
        Err(SpinError::SpinCount { n, max: MAX_SPINS })
    } else {
        Ok(())
    }
}

pub(crate) fn check_spin(spin: usize, n: usize) -> Result<(), SpinError> {
    if spin == 0 || spin > n {
        Err(SpinError::InvalidSpin { spin, n })
    } else {
        Ok(())
    }
}

/// Traceless Hermitian part of an ensemble density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationMatrix {
    n: usize,
    entries: CMatrix,
}

impl DeviationMatrix {
    pub fn new(n: usize, entries: CMatrix) -> Result<Self, SpinError> {
        check_spins(n)?;
        assert_eq!(entries.dim(), (1 << n, 1 << n), "matrix must be 2^n x 2^n");
        Ok(DeviationMatrix { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        DeviationMatrix {
            n,
            entries: CMatrix::zeros((1 << n, 1 << n)),
        }
    }

    pub fn from_diagonal(n: usize, diag: &[f64]) -> Self {
        assert_eq!(diag.len(), 1 << n);
        let entries = CMatrix::from_diag(
            &diag
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<ndarray::Array1<_>>(),
        );
        DeviationMatrix { n, entries }
    }

    pub fn num_spins(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.diag().sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::max_abs_diff(&self.entries, &linalg::dagger(&self.entries))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.entries.diag().iter().map(|z| z.re).collect()
    }

    pub fn max_abs_diff(&self, other: &DeviationMatrix) -> f64 {
        linalg::max_abs_diff(&self.entries, &other.entries)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &CMatrix) -> DeviationMatrix {
        DeviationMatrix {
            n: self.n,
            entries: linalg::conjugate(u, &self.entries),
        }
    }

    /// Ideal field-gradient dephasing: every off-diagonal element is zeroed.
    pub fn dephase(&self) -> DeviationMatrix {
        let mut entries = self.entries.clone();
        for ((r, s), z) in entries.indexed_iter_mut() {
            if r != s {
                *z = ZERO;
            }
        }
        DeviationMatrix { n: self.n, entries }
    }

    /// `tr(ρ^k)`; the first `2^n` power sums fix the eigenvalue multiset.
    pub fn power_trace(&self, k: u32) -> Complex64 {
        let mut acc = linalg::identity(self.dim());
        for _ in 0..k {
            acc = acc.dot(&self.entries);
        }
        acc.diag().sum()
    }
}

impl Add for &DeviationMatrix {
    type Output = DeviationMatrix;

    fn add(self, rhs: &DeviationMatrix) -> DeviationMatrix {
        assert_eq!(self.n, rhs.n, "spin count mismatch");
        DeviationMatrix {
            n: self.n,
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl Sub for &DeviationMatrix {
    type Output = DeviationMatrix;

    fn sub(self, rhs: &DeviationMatrix) -> DeviationMatrix {
        assert_eq!(self.n, rhs.n, "spin count mismatch");
        DeviationMatrix {
            n: self.n,
            entries: &self.entries - &rhs.entries,
        }
    }
}

fn iz_sign(index: usize, n: usize, spin: usize) -> f64 {
    if (index >> (n - spin)) & 1 == 0 {
        0.5
    } else {
        -0.5
    }
}

/// `Σ_k I_kz` with equal (homonuclear) weights.
pub fn thermal_state(n: usize) -> Result<DeviationMatrix, SpinError> {
    check_spins(n)?;
    let diag: Vec<f64> = (0..1usize << n)
        .map(|s| (1..=n).map(|k| iz_sign(s, n, k)).sum())
        .collect();
    Ok(DeviationMatrix::from_diagonal(n, &diag))
}

/// `Σ_{S ≠ ∅} 2^{|S|−1} Π_{k∈S} I_kz`, the deviation of `|0…0⟩`.
pub fn target_pseudo_pure(n: usize) -> Result<DeviationMatrix, SpinError> {
    check_spins(n)?;
    let dim = 1usize << n;
    let mut diag = vec![0.0; dim];
    for subset in 1u32..(1 << n) {
        let weight = subset.count_ones() as i32;
        let coeff = 2f64.powi(weight - 1);
        for (s, d) in diag.iter_mut().enumerate() {
            let prod: f64 = (1..=n)
                .filter(|&k| subset >> (k - 1) & 1 == 1)
                .map(|k| iz_sign(s, n, k))
                .product();
            *d += coeff * prod;
        }
    }
    Ok(DeviationMatrix::from_diagonal(n, &diag))
}
