// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Diagonal tomography readout, measured-vector ingestion and error metrics.

use serde::Serialize;

use super::deviation::DeviationMatrix;
use super::SpinError;

/// Normalization applied by [`diag_tomography`], echoed in reports.
pub const TOMOGRAPHY_CONVENTION: &str =
    "real diagonal minus its minimum (uniform background), divided by the largest result";

/// A readout is flagged low-contrast when the second-largest normalized
/// entry exceeds this ratio.
pub const LOW_CONTRAST_RATIO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReadoutSource {
    Simulated,
    Measured,
}

/// Normalized diagonal populations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Readout {
    pub values: Vec<f64>,
    /// Subtracted background (zero for measured data).
    pub background: f64,
    /// Divisor applied after background removal (one for measured data).
    pub scale: f64,
    pub convention: String,
    pub low_contrast: bool,
    pub source: ReadoutSource,
}

impl Readout {
    /// Index of the largest entry; ties go to the lowest index.
    pub fn peak(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }
}

const CONTRAST_EPS: f64 = 1e-12;

fn second_largest(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.get(1).copied().unwrap_or(f64::NEG_INFINITY)
}

/// Normalized diagonal of a simulated deviation matrix.
pub fn diag_tomography(rho: &DeviationMatrix) -> Result<Readout, SpinError> {
    let diag = rho.diagonal();
    let background = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = diag.iter().map(|d| d - background).fold(0.0, f64::max);
    if scale <= CONTRAST_EPS {
        return Err(SpinError::NoContrast);
    }
    let values: Vec<f64> = diag.iter().map(|d| (d - background) / scale).collect();
    let low_contrast = second_largest(&values) > LOW_CONTRAST_RATIO;
    Ok(Readout {
        values,
        background,
        scale,
        convention: TOMOGRAPHY_CONVENTION.to_string(),
        low_contrast,
        source: ReadoutSource::Simulated,
    })
}

/// Wraps an already-normalized measured vector without modification.
pub fn measured_readout(values: Vec<f64>) -> Readout {
    let low_contrast = second_largest(&values) > LOW_CONTRAST_RATIO;
    Readout {
        values,
        background: 0.0,
        scale: 1.0,
        convention: "measured data, used as given".to_string(),
        low_contrast,
        source: ReadoutSource::Measured,
    }
}

/// Unit vector `e_index` of length `dim`.
pub fn basis_ideal(dim: usize, index: usize) -> Vec<f64> {
    assert!(index < dim, "index {index} outside 0..{dim}");
    let mut v = vec![0.0; dim];
    v[index] = 1.0;
    v
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorMetrics {
    pub max_abs_dev: f64,
    /// Signed `measured − ideal` per entry.
    pub per_entry: Vec<f64>,
    /// Entry attaining `max_abs_dev` (lowest index on ties).
    pub argmax: usize,
}

/// Largest absolute deviation between a measured and an ideal vector on the
/// unit-normalized scale.
pub fn error_metrics(measured: &[f64], ideal: &[f64]) -> Result<ErrorMetrics, SpinError> {
    if measured.len() != ideal.len() || measured.is_empty() {
        return Err(SpinError::LengthMismatch {
            measured: measured.len(),
            ideal: ideal.len(),
        });
    }
    let per_entry: Vec<f64> = measured.iter().zip(ideal).map(|(m, i)| m - i).collect();
    let mut argmax = 0;
    for (i, d) in per_entry.iter().enumerate() {
        if d.abs() > per_entry[argmax].abs() {
            argmax = i;
        }
    }
    Ok(ErrorMetrics {
        max_abs_dev: per_entry[argmax].abs(),
        per_entry,
        argmax,
    })
}

/// Parses a vector of reals: one per line, comma-separated rows, or a mix.
/// `#` starts a comment.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, SpinError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for field in line.split([',', ';']) {
            let field = field.trim().trim_matches(|c| c == '[' || c == ']');
            if field.is_empty() {
                continue;
            }
            let value: f64 = field.parse().map_err(|_| SpinError::VectorParse {
                line: lineno + 1,
                reason: format!("'{field}' is not a number"),
            })?;
            if !value.is_finite() {
                return Err(SpinError::VectorParse {
                    line: lineno + 1,
                    reason: format!("'{field}' is not finite"),
                });
            }
            out.push(value);
        }
    }
    if out.is_empty() {
        return Err(SpinError::VectorParse {
            line: 0,
            reason: "no values".into(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_sim::{target_pseudo_pure, thermal_state};

    #[test]
    fn ideal_target_reads_as_unit_vector() {
        let r = diag_tomography(&target_pseudo_pure(3).unwrap()).unwrap();
        for (i, v) in r.values.iter().enumerate() {
            let want = if i == 0 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12);
        }
        assert!(!r.low_contrast);
        assert_eq!(r.source, ReadoutSource::Simulated);
        assert_eq!(r.peak(), 0);
    }

    #[test]
    fn thermal_is_low_contrast() {
        let r = diag_tomography(&thermal_state(3).unwrap()).unwrap();
        assert!(r.low_contrast);
    }

    #[test]
    fn flat_diagonal_has_no_contrast() {
        let flat = DeviationMatrix::zeros(2);
        assert_eq!(diag_tomography(&flat), Err(SpinError::NoContrast));
    }

    #[test]
    fn measured_data_passes_through() {
        let v = vec![1.0, 0.03, -0.05];
        let r = measured_readout(v.clone());
        assert_eq!(r.values, v);
        assert_eq!(r.source, ReadoutSource::Measured);
    }

    #[test]
    fn metrics_report_signed_entries() {
        let m = error_metrics(&[0.9, -0.2, 0.1], &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(m.argmax, 1);
        assert!((m.max_abs_dev - 0.2).abs() < 1e-15);
        assert!((m.per_entry[0] + 0.1).abs() < 1e-15);
        assert_eq!(error_metrics(&[1.0], &[1.0]).unwrap().max_abs_dev, 0.0);
        assert!(matches!(
            error_metrics(&[1.0, 0.0], &[1.0]),
            Err(SpinError::LengthMismatch {
                measured: 2,
                ideal: 1
            })
        ));
    }

    #[test]
    fn vector_formats() {
        assert_eq!(
            parse_vector("1\n2.5\n\n-3e-2\n").unwrap(),
            vec![1.0, 2.5, -0.03]
        );
        assert_eq!(
            parse_vector("1, 0.5,0 # row\n").unwrap(),
            vec![1.0, 0.5, 0.0]
        );
        assert_eq!(parse_vector("[1.0, -0.5]").unwrap(), vec![1.0, -0.5]);
        assert!(matches!(
            parse_vector("1\nabc\n"),
            Err(SpinError::VectorParse { line: 2, .. })
        ));
        assert!(parse_vector("# only a comment\n").is_err());
        assert!(parse_vector("nan").is_err());
    }
}
