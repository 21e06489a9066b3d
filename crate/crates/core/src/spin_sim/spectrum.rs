// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Spin-system parameters and first-order stick spectra.

use serde::{Deserialize, Serialize};

use super::deviation::{check_spin, check_spins, DeviationMatrix};
use super::SpinError;
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub hz: f64,
}

/// Chemical shifts, scalar couplings and optional relaxation times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinSystem {
    #[serde(default)]
    pub name: String,
    pub shifts_hz: Vec<f64>,
    #[serde(default)]
    pub couplings: Vec<Coupling>,
    #[serde(default)]
    pub t1_s: Option<Vec<f64>>,
    #[serde(default)]
    pub t2_s: Option<Vec<f64>>,
}

impl SpinSystem {
    /// ¹³C-labelled alanine (C′, Cα, Cβ as spins 1, 2, 3).
    pub fn alanine() -> SpinSystem {
        SpinSystem {
            name: "alanine".to_string(),
            shifts_hz: vec![-4320.0, 0.0, 15793.0],
            couplings: vec![
                Coupling {
                    i: 1,
                    j: 2,
                    hz: 34.94,
                },
                Coupling {
                    i: 2,
                    j: 3,
                    hz: 53.81,
                },
                Coupling {
                    i: 1,
                    j: 3,
                    hz: 1.21,
                },
            ],
            t1_s: Some(vec![20.3, 2.8, 1.5]),
            t2_s: Some(vec![1.3, 0.41, 0.81]),
        }
    }

    pub fn num_spins(&self) -> usize {
        self.shifts_hz.len()
    }

    pub fn from_toml_str(text: &str) -> Result<SpinSystem, SpinError> {
        let sys: SpinSystem = toml::from_str(text).map_err(|e| SpinError::Params(e.to_string()))?;
        sys.validate()?;
        Ok(sys)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("spin system serializes")
    }

    pub fn validate(&self) -> Result<(), SpinError> {
        let n = self.num_spins();
        check_spins(n)?;
        for c in &self.couplings {
            check_spin(c.i, n)?;
            check_spin(c.j, n)?;
            if c.i == c.j {
                return Err(SpinError::Params(format!(
                    "coupling J{}{} couples a spin to itself",
                    c.i, c.j
                )));
            }
        }
        for (label, times) in [("t1_s", &self.t1_s), ("t2_s", &self.t2_s)] {
            if let Some(t) = times {
                if t.len() != n {
                    return Err(SpinError::Params(format!(
                        "{label} has {} entries for {n} spins",
                        t.len()
                    )));
                }
                if t.iter().any(|&x| !x.is_finite() || x <= 0.0) {
                    return Err(SpinError::Params(format!(
                        "{label} entries must be positive"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `J_ij` in Hz, zero when the pair is not listed.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.couplings
            .iter()
            .find(|c| (c.i, c.j) == (i, j) || (c.i, c.j) == (j, i))
            .map_or(0.0, |c| c.hz)
    }

    pub fn min_t2(&self) -> Option<f64> {
        self.t2_s
            .as_ref()
            .and_then(|t| t.iter().copied().min_by(f64::total_cmp))
    }
}

impl Default for SpinSystem {
    fn default() -> Self {
        SpinSystem::alanine()
    }
}

/// One line of a stick spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StickLine {
    pub frequency_hz: f64,
    /// Absorptive intensity, equal to the population difference across the
    /// observed transition before readout.
    pub amplitude: f64,
    /// States of the other spins, spin order, e.g. `"0-1"`.
    pub partners: String,
}

const LINE_EPS: f64 = 1e-12;

/// Applies an ideal `(π/2)_y` readout pulse to `spin` and lists the
/// single-quantum lines of that spin in the weak-coupling limit. A partner
/// spin in `|0⟩` shifts the line by `+J/2`, in `|1⟩` by `−J/2`.
pub fn stick_spectrum(
    rho: &DeviationMatrix,
    spin: usize,
    system: &SpinSystem,
) -> Result<Vec<StickLine>, SpinError> {
    let n = rho.num_spins();
    check_spin(spin, n)?;
    if system.num_spins() != n {
        return Err(SpinError::SpinMismatch {
            got: system.num_spins(),
            expected: n,
        });
    }
    let pulse = linalg::embed_single(
        n,
        spin,
        &linalg::rotation(&linalg::pauli_y(), std::f64::consts::FRAC_PI_2),
    );
    let after = rho.conjugate(&pulse);
    let entries = after.entries();
    let bit = 1usize << (n - spin);
    let partners: Vec<usize> = (1..=n).filter(|&k| k != spin).collect();

    let mut lines = Vec::new();
    for r in (0..rho.dim()).filter(|r| r & bit == 0) {
        let s = r | bit;
        // I_x has ⟨0|I_x|1⟩ = 1/2, so a unit population difference gives 1/2 here.
        let amplitude = 2.0 * entries[[r, s]].re;
        if amplitude.abs() <= LINE_EPS {
            continue;
        }
        let mut frequency_hz = system.shifts_hz[spin - 1];
        let mut label = Vec::with_capacity(partners.len());
        for &k in &partners {
            let up = (r >> (n - k)) & 1 == 0;
            let j = system.coupling(spin, k);
            frequency_hz += if up { j / 2.0 } else { -j / 2.0 };
            label.push(if up { "0" } else { "1" });
        }
        lines.push(StickLine {
            frequency_hz,
            amplitude,
            partners: label.join("-"),
        });
    }
    lines.sort_by(|a, b| a.frequency_hz.total_cmp(&b.frequency_hz));
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_sim::{target_pseudo_pure, thermal_state};

    #[test]
    fn pseudo_pure_gives_single_line() {
        let lines =
            stick_spectrum(&target_pseudo_pure(3).unwrap(), 2, &SpinSystem::alanine()).unwrap();
        assert_eq!(lines.len(), 1);
        let want = 0.0 + 34.94 / 2.0 + 53.81 / 2.0;
        assert!((lines[0].frequency_hz - want).abs() < 1e-9);
        assert!(lines[0].amplitude > 0.0);
        assert_eq!(lines[0].partners, "0-0");
    }

    #[test]
    fn thermal_gives_full_multiplet() {
        let lines = stick_spectrum(&thermal_state(3).unwrap(), 1, &SpinSystem::alanine()).unwrap();
        assert_eq!(lines.len(), 4);
        for l in &lines {
            assert!((l.amplitude - lines[0].amplitude).abs() < 1e-12);
            assert!((l.amplitude - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_matrix_has_no_lines() {
        let lines = stick_spectrum(&DeviationMatrix::zeros(3), 3, &SpinSystem::alanine()).unwrap();
        assert!(lines.is_empty());
    }

    #[test]
    fn invalid_spin() {
        let err = stick_spectrum(&thermal_state(3).unwrap(), 4, &SpinSystem::alanine());
        assert_eq!(err, Err(SpinError::InvalidSpin { spin: 4, n: 3 }));
    }

    #[test]
    fn params_round_trip_through_toml() {
        let sys = SpinSystem::alanine();
        let back = SpinSystem::from_toml_str(&sys.to_toml_string()).unwrap();
        assert_eq!(back, sys);
        assert_eq!(back.coupling(3, 1), 1.21);
        assert_eq!(back.min_t2(), Some(0.41));
    }

    #[test]
    fn params_validation() {
        let bad = "shifts_hz = [0.0, 1.0]\n[[couplings]]\ni = 1\nj = 3\nhz = 5.0\n";
        assert!(SpinSystem::from_toml_str(bad).is_err());
        let bad_t2 = "shifts_hz = [0.0, 1.0]\nt2_s = [1.0]\n";
        assert!(SpinSystem::from_toml_str(bad_t2).is_err());
        let ok = "shifts_hz = [0.0, 100.0]\n";
        assert_eq!(SpinSystem::from_toml_str(ok).unwrap().coupling(1, 2), 0.0);
    }
}
