// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::deviation::{check_spin, DeviationMatrix};
use super::SpinError;
use crate::linalg::{CMatrix, ONE};

/// Permutation gates used for temporal averaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Gate {
    /// `CN_ij`: flips `target` iff `control` is `|1⟩`.
    Cnot { control: usize, target: usize },
    /// `N_i`: unconditional flip.
    Not(usize),
}

impl Gate {
    pub fn cn(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn validate(&self, n: usize) -> Result<(), SpinError> {
        match *self {
            Gate::Cnot { control, target } => {
                check_spin(control, n)?;
                check_spin(target, n)?;
                if control == target {
                    return Err(SpinError::SameSpin(control));
                }
                Ok(())
            }
            Gate::Not(spin) => check_spin(spin, n),
        }
    }

    /// Image of basis index `index` under the gate.
    pub fn permute(&self, n: usize, index: usize) -> usize {
        let bit = |k: usize| 1usize << (n - k);
        match *self {
            Gate::Cnot { control, target } => {
                if index & bit(control) != 0 {
                    index ^ bit(target)
                } else {
                    index
                }
            }
            Gate::Not(spin) => index ^ bit(spin),
        }
    }

    /// Permutation matrix of the gate.
    pub fn unitary(&self, n: usize) -> Result<CMatrix, SpinError> {
        self.validate(n)?;
        let dim = 1usize << n;
        let mut u = CMatrix::zeros((dim, dim));
        for s in 0..dim {
            u[[self.permute(n, s), s]] = ONE;
        }
        Ok(u)
    }

    /// Spins whose mutual coupling the gate relies on.
    pub fn coupling(&self) -> Option<(usize, usize)> {
        match *self {
            Gate::Cnot { control, target } => Some((control, target)),
            Gate::Not(_) => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cnot { control, target } => write!(f, "CN{control}{target}"),
            Gate::Not(spin) => write!(f, "N{spin}"),
        }
    }
}

impl FromStr for Gate {
    type Err = SpinError;

    /// `CN<i><j>` or `N<i>` with single-digit spin indices.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |position: usize, reason: &str| SpinError::GateParse {
            position,
            reason: reason.to_string(),
        };
        let digit = |c: char, pos: usize| {
            c.to_digit(10)
                .filter(|&d| d > 0)
                .map(|d| d as usize)
                .ok_or_else(|| err(pos, "expected spin digit 1-9"))
        };
        let chars: Vec<char> = s.chars().collect();
        if let Some(rest) = s.strip_prefix("CN") {
            let rest: Vec<char> = rest.chars().collect();
            if rest.len() != 2 {
                return Err(err(2, "CN needs exactly two spin digits"));
            }
            let control = digit(rest[0], 2)?;
            let target = digit(rest[1], 3)?;
            if control == target {
                return Err(SpinError::SameSpin(control));
            }
            Ok(Gate::Cnot { control, target })
        } else if chars.first() == Some(&'N') {
            if chars.len() != 2 {
                return Err(err(1, "N needs exactly one spin digit"));
            }
            Ok(Gate::Not(digit(chars[1], 1)?))
        } else {
            Err(err(0, "expected CN<i><j> or N<i>"))
        }
    }
}

/// `ρ → GρG†` for the permutation `G`: entries move as `ρ'[π(r), π(s)] = ρ[r, s]`.
pub fn apply_gate(rho: &DeviationMatrix, gate: Gate) -> Result<DeviationMatrix, SpinError> {
    let n = rho.num_spins();
    gate.validate(n)?;
    let dim = rho.dim();
    let src = rho.entries();
    let perm: Vec<usize> = (0..dim).map(|s| gate.permute(n, s)).collect();
    let mut out = CMatrix::zeros((dim, dim));
    for r in 0..dim {
        for s in 0..dim {
            out[[perm[r], perm[s]]] = src[[r, s]];
        }
    }
    DeviationMatrix::new(n, out)
}

/// Applies gates written in operator order: the rightmost acts first.
pub fn apply_gates(rho: &DeviationMatrix, gates: &[Gate]) -> Result<DeviationMatrix, SpinError> {
    gates
        .iter()
        .rev()
        .try_fold(rho.clone(), |acc, &g| apply_gate(&acc, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_sim::{decompose_longitudinal, thermal_state};

    fn gates(text: &str) -> Vec<Gate> {
        text.split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect()
    }

    #[test]
    fn second_experiment_terms() {
        let rho = apply_gates(&thermal_state(3).unwrap(), &gates("CN32 CN21 N3")).unwrap();
        assert_eq!(
            decompose_longitudinal(&rho).to_string(),
            "-I3z + 2I2zI3z + 4I1zI2zI3z"
        );
    }

    #[test]
    fn third_experiment_terms() {
        let rho = apply_gates(&thermal_state(3).unwrap(), &gates("CN21 CN12 CN32")).unwrap();
        assert_eq!(
            decompose_longitudinal(&rho).to_string(),
            "I3z + 2I1zI2z + 2I1zI3z"
        );
    }

    #[test]
    fn not_is_an_involution() {
        let rho = thermal_state(3).unwrap();
        for k in 1..=3 {
            let twice = apply_gates(&rho, &[Gate::Not(k), Gate::Not(k)]).unwrap();
            assert_eq!(twice, rho);
        }
    }

    #[test]
    fn permutation_matches_dense_conjugation() {
        let rho = thermal_state(3).unwrap();
        let g = Gate::cn(1, 3);
        let dense = rho.conjugate(&g.unitary(3).unwrap());
        assert!(apply_gate(&rho, g).unwrap().max_abs_diff(&dense) < 1e-15);
    }

    #[test]
    fn invalid_gates_are_rejected() {
        let rho = thermal_state(3).unwrap();
        assert_eq!(
            apply_gate(&rho, Gate::Not(4)),
            Err(SpinError::InvalidSpin { spin: 4, n: 3 })
        );
        assert_eq!(
            apply_gate(&rho, Gate::cn(2, 2)),
            Err(SpinError::SameSpin(2))
        );
        assert!("CN22".parse::<Gate>().is_err());
        assert!("CN2".parse::<Gate>().is_err());
        assert!("X3".parse::<Gate>().is_err());
        assert!("N0".parse::<Gate>().is_err());
        assert_eq!("CN31".parse::<Gate>().unwrap().to_string(), "CN31");
    }
}
