// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Product-operator basis: expansion of terms such as `4 I1z I2z I3z` into
//! matrices and projection of a deviation matrix back onto the basis.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::deviation::{check_spin, check_spins, DeviationMatrix};
use super::SpinError;
use crate::linalg::{self, CMatrix, I, ONE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SpinFactor {
    Identity,
    X,
    Y,
    Z,
}

impl SpinFactor {
    /// `I_x`, `I_y`, `I_z` are half the Pauli matrices.
    pub fn matrix(self) -> CMatrix {
        match self {
            SpinFactor::Identity => linalg::identity(2),
            SpinFactor::X => linalg::pauli_x().mapv(|z| z * 0.5),
            SpinFactor::Y => linalg::pauli_y().mapv(|z| z * 0.5),
            SpinFactor::Z => linalg::pauli_z().mapv(|z| z * 0.5),
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            SpinFactor::Identity => "",
            SpinFactor::X => "x",
            SpinFactor::Y => "y",
            SpinFactor::Z => "z",
        }
    }
}

/// `coefficient · Π_k factor_k`, one factor per spin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductTerm {
    pub coefficient: f64,
    pub factors: Vec<SpinFactor>,
}

impl ProductTerm {
    /// `coefficient · Π_{k ∈ spins} I_kz` on an `n`-spin register.
    pub fn longitudinal(n: usize, coefficient: f64, spins: &[usize]) -> Result<Self, SpinError> {
        check_spins(n)?;
        let mut factors = vec![SpinFactor::Identity; n];
        for &k in spins {
            check_spin(k, n)?;
            factors[k - 1] = SpinFactor::Z;
        }
        Ok(ProductTerm {
            coefficient,
            factors,
        })
    }

    pub fn num_spins(&self) -> usize {
        self.factors.len()
    }

    /// Spins carrying a non-identity factor.
    pub fn active_spins(&self) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| **f != SpinFactor::Identity)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn to_matrix(&self) -> CMatrix {
        let mut m = linalg::identity(1);
        for f in &self.factors {
            m = linalg::kron(&m, &f.matrix());
        }
        m.mapv(|z| z * self.coefficient)
    }

    fn operator_label(&self) -> String {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| **f != SpinFactor::Identity)
            .map(|(i, f)| format!("I{}{}", i + 1, f.suffix()))
            .collect()
    }
}

fn format_magnitude(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.6}")
    }
}

impl fmt::Display for ProductTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = self.operator_label();
        let c = self.coefficient;
        if label.is_empty() {
            return write!(f, "{}", format_magnitude(c));
        }
        if (c - 1.0).abs() < 1e-9 {
            write!(f, "{label}")
        } else if (c + 1.0).abs() < 1e-9 {
            write!(f, "-{label}")
        } else {
            write!(f, "{}{label}", format_magnitude(c))
        }
    }
}

/// A sum of product-operator terms over the same register.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductSum {
    pub n: usize,
    pub terms: Vec<ProductTerm>,
}

impl ProductSum {
    pub fn to_matrix(&self) -> CMatrix {
        let dim = 1usize << self.n;
        self.terms
            .iter()
            .fold(CMatrix::zeros((dim, dim)), |acc, t| acc + t.to_matrix())
    }

    pub fn to_deviation(&self) -> Result<DeviationMatrix, SpinError> {
        DeviationMatrix::new(self.n, self.to_matrix())
    }

    /// Coefficient of the term whose `I_z` factors sit on exactly `spins`.
    pub fn longitudinal_coefficient(&self, spins: &[usize]) -> f64 {
        let mut want = spins.to_vec();
        want.sort_unstable();
        self.terms
            .iter()
            .filter(|t| {
                t.factors
                    .iter()
                    .all(|f| matches!(f, SpinFactor::Identity | SpinFactor::Z))
            })
            .find(|t| t.active_spins() == want)
            .map_or(0.0, |t| t.coefficient)
    }
}

impl fmt::Display for ProductSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let s = t.to_string();
            if i == 0 {
                write!(f, "{s}")?;
            } else if let Some(rest) = s.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {s}")?;
            }
        }
        Ok(())
    }
}

const COEFF_EPS: f64 = 1e-12;

fn sort_terms(terms: &mut [ProductTerm]) {
    terms.sort_by(|a, b| {
        let (sa, sb) = (a.active_spins(), b.active_spins());
        sa.len()
            .cmp(&sb.len())
            .then_with(|| sa.cmp(&sb))
            .then_with(|| a.factors.cmp(&b.factors))
    });
}

/// Projects a diagonal onto the `{1, I_z}` product basis with one
/// Walsh-Hadamard butterfly: for the subset `S` of spins the coefficient of
/// `Π_{k∈S} I_kz` is `2^{|S|−n} Σ_s (−1)^{|S∧s|} ρ_ss`.
pub fn decompose_longitudinal(rho: &DeviationMatrix) -> ProductSum {
    let n = rho.num_spins();
    let mut spectrum = rho.diagonal();
    linalg::fwht(&mut spectrum);
    let mut terms = Vec::new();
    for (mask, &sum) in spectrum.iter().enumerate() {
        let weight = mask.count_ones() as i32;
        let coefficient = 2f64.powi(weight - n as i32) * sum;
        if coefficient.abs() <= COEFF_EPS {
            continue;
        }
        let factors = (1..=n)
            .map(|k| {
                if (mask >> (n - k)) & 1 == 1 {
                    SpinFactor::Z
                } else {
                    SpinFactor::Identity
                }
            })
            .collect();
        terms.push(ProductTerm {
            coefficient,
            factors,
        });
    }
    sort_terms(&mut terms);
    ProductSum { n, terms }
}

/// Full projection onto the `{1, I_x, I_y, I_z}^{⊗n}` basis. The real part
/// of each coefficient is kept; Hermitian input has real coefficients.
pub fn decompose(rho: &DeviationMatrix) -> ProductSum {
    let n = rho.num_spins();
    let dim = 1usize << n;
    let entries = rho.entries();
    let mut terms = Vec::new();
    for code in 0..4usize.pow(n as u32) {
        let factors: Vec<SpinFactor> = (0..n)
            .map(|k| match (code / 4usize.pow((n - 1 - k) as u32)) % 4 {
                0 => SpinFactor::Identity,
                1 => SpinFactor::X,
                2 => SpinFactor::Y,
                _ => SpinFactor::Z,
            })
            .collect();
        // Pauli string σ: σ|u⟩ = phase(u)|u ⊕ flip⟩, tr(σρ) = Σ_u phase(u) ρ[u, u⊕flip].
        let mut flip = 0usize;
        for (k, f) in factors.iter().enumerate() {
            if matches!(f, SpinFactor::X | SpinFactor::Y) {
                flip |= 1 << (n - 1 - k);
            }
        }
        let mut trace = Complex64::new(0.0, 0.0);
        for u in 0..dim {
            let mut phase = ONE;
            for (k, f) in factors.iter().enumerate() {
                let bit = (u >> (n - 1 - k)) & 1;
                match f {
                    SpinFactor::Y => phase *= if bit == 0 { I } else { -I },
                    SpinFactor::Z if bit == 1 => phase = -phase,
                    _ => {}
                }
            }
            trace += phase * entries[[u, u ^ flip]];
        }
        let weight = factors
            .iter()
            .filter(|f| **f != SpinFactor::Identity)
            .count() as i32;
        let coefficient = (trace * 2f64.powi(weight) / dim as f64).re;
        if coefficient.abs() > COEFF_EPS {
            terms.push(ProductTerm {
                coefficient,
                factors,
            });
        }
    }
    sort_terms(&mut terms);
    ProductSum { n, terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_sim::{target_pseudo_pure, thermal_state};

    #[test]
    fn thermal_decomposes_to_single_spin_terms() {
        let sum = decompose_longitudinal(&thermal_state(3).unwrap());
        assert_eq!(sum.to_string(), "I1z + I2z + I3z");
    }

    #[test]
    fn target_decomposes_to_seven_terms() {
        let sum = decompose_longitudinal(&target_pseudo_pure(3).unwrap());
        assert_eq!(
            sum.to_string(),
            "I1z + I2z + I3z + 2I1zI2z + 2I1zI3z + 2I2zI3z + 4I1zI2zI3z"
        );
        assert_eq!(sum.longitudinal_coefficient(&[3, 1, 2]), 4.0);
    }

    #[test]
    fn full_and_longitudinal_agree_on_diagonals() {
        let rho = target_pseudo_pure(3).unwrap();
        assert_eq!(decompose(&rho), decompose_longitudinal(&rho));
    }

    #[test]
    fn transverse_terms_round_trip() {
        let terms = vec![
            ProductTerm {
                coefficient: 0.7,
                factors: vec![SpinFactor::X, SpinFactor::Identity],
            },
            ProductTerm {
                coefficient: -2.0,
                factors: vec![SpinFactor::Y, SpinFactor::Z],
            },
            ProductTerm {
                coefficient: 1.5,
                factors: vec![SpinFactor::Identity, SpinFactor::Z],
            },
        ];
        let sum = ProductSum { n: 2, terms };
        let back = decompose(&sum.to_deviation().unwrap());
        for t in &sum.terms {
            let got = back
                .terms
                .iter()
                .find(|b| b.factors == t.factors)
                .expect("term survives");
            assert!((got.coefficient - t.coefficient).abs() < 1e-12);
        }
        assert_eq!(back.terms.len(), 3);
    }

    #[test]
    fn display_signs() {
        let t = ProductTerm::longitudinal(3, -1.0, &[3]).unwrap();
        assert_eq!(t.to_string(), "-I3z");
        let sum = ProductSum {
            n: 3,
            terms: vec![
                ProductTerm::longitudinal(3, 4.0, &[1, 2, 3]).unwrap(),
                ProductTerm::longitudinal(3, -1.0, &[3]).unwrap(),
            ],
        };
        assert_eq!(sum.to_string(), "4I1zI2zI3z - I3z");
        assert!(ProductTerm::longitudinal(3, 1.0, &[4]).is_err());
    }
}
