// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Temporal-averaging preparation schemes.
//!
//! Each experiment permutes the thermal populations with a short gate
//! program; the deviation matrices of all experiments are summed. Gates are
//! written in operator order, so `CN32 CN21 N3` applies `N3` first.
//!
//! Scheme text format, one experiment per line:
//!
//! ```text
//! # comment
//! gradient
//! E
//! CN32 CN21 N3
//! CN12 CN42 ; saturate 3
//! ```
//!
//! `gradient` switches on ideal dephasing after every experiment. A
//! `; saturate k…` suffix applies a selective `(π/2)_y` pulse to each listed
//! spin followed by dephasing, which removes every term carrying `I_kz`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::deviation::{check_spin, check_spins, thermal_state, DeviationMatrix};
use super::gates::{apply_gates, Gate};
use super::spectrum::SpinSystem;
use super::SpinError;
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Experiment {
    /// Operator order; empty means `E` (no operation).
    pub gates: Vec<Gate>,
    pub saturate: Vec<usize>,
}

impl Experiment {
    pub fn identity() -> Self {
        Experiment::default()
    }

    pub fn new(gates: Vec<Gate>) -> Self {
        Experiment {
            gates,
            saturate: Vec::new(),
        }
    }

    pub fn with_saturation(mut self, spins: Vec<usize>) -> Self {
        self.saturate = spins;
        self
    }

    pub fn is_identity(&self) -> bool {
        self.gates.is_empty()
    }

    fn validate(&self, n: usize) -> Result<(), SpinError> {
        for g in &self.gates {
            g.validate(n)?;
        }
        for &k in &self.saturate {
            check_spin(k, n)?;
        }
        Ok(())
    }

    /// Result of the experiment on the thermal state, before the
    /// scheme-level gradient.
    pub fn run(&self, n: usize) -> Result<DeviationMatrix, SpinError> {
        self.validate(n)?;
        let mut rho = apply_gates(&thermal_state(n)?, &self.gates)?;
        if !self.saturate.is_empty() {
            let ry = linalg::rotation(&linalg::pauli_y(), std::f64::consts::FRAC_PI_2);
            for &k in &self.saturate {
                rho = rho.conjugate(&linalg::embed_single(n, k, &ry));
            }
            rho = rho.dephase();
        }
        Ok(rho)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gates.is_empty() {
            write!(f, "E")?;
        } else {
            let names: Vec<String> = self.gates.iter().map(Gate::to_string).collect();
            write!(f, "{}", names.join(" "))?;
        }
        if !self.saturate.is_empty() {
            let spins: Vec<String> = self.saturate.iter().map(usize::to_string).collect();
            write!(f, " ; saturate {}", spins.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrepScheme {
    pub n: usize,
    pub experiments: Vec<Experiment>,
    /// Ideal gradient after every experiment.
    pub gradient: bool,
}

/// Per-experiment results and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct PrepOutcome {
    pub experiments: Vec<DeviationMatrix>,
    pub sum: DeviationMatrix,
}

impl PrepScheme {
    pub fn new(n: usize, experiments: Vec<Experiment>, gradient: bool) -> Result<Self, SpinError> {
        check_spins(n)?;
        for e in &experiments {
            e.validate(n)?;
        }
        Ok(PrepScheme {
            n,
            experiments,
            gradient,
        })
    }

    pub fn parse(text: &str, n: usize) -> Result<Self, SpinError> {
        check_spins(n)?;
        let mut experiments = Vec::new();
        let mut gradient = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let err = |column: usize, reason: String| SpinError::SchemeParse {
                line: lineno + 1,
                column: column + 1,
                reason,
            };
            if line.trim() == "gradient" {
                gradient = true;
                continue;
            }
            let (gate_part, suffix) = match line.find(';') {
                Some(p) => (&line[..p], Some((p + 1, &line[p + 1..]))),
                None => (line, None),
            };
            let mut gates = Vec::new();
            let mut saw_identity = false;
            for (col, token) in tokens(gate_part) {
                if token == "E" {
                    saw_identity = true;
                    continue;
                }
                let gate: Gate = token.parse().map_err(|e| err(col, format!("{e}")))?;
                gate.validate(n).map_err(|e| err(col, format!("{e}")))?;
                gates.push(gate);
            }
            if saw_identity && !gates.is_empty() {
                return Err(err(0, "E must appear alone in its experiment".into()));
            }
            if !saw_identity && gates.is_empty() {
                return Err(err(
                    0,
                    "experiment has no gates (write E for no operation)".into(),
                ));
            }
            let mut saturate = Vec::new();
            if let Some((offset, suffix)) = suffix {
                let mut toks = tokens(suffix).into_iter();
                match toks.next() {
                    Some((_, "saturate")) => {}
                    Some((col, other)) => {
                        return Err(err(offset + col, format!("unknown directive '{other}'")))
                    }
                    None => return Err(err(offset, "empty directive after ';'".into())),
                }
                for (col, tok) in toks {
                    let spin: usize = tok
                        .parse()
                        .map_err(|_| err(offset + col, format!("'{tok}' is not a spin index")))?;
                    check_spin(spin, n).map_err(|e| err(offset + col, format!("{e}")))?;
                    saturate.push(spin);
                }
                if saturate.is_empty() {
                    return Err(err(offset, "saturate needs at least one spin".into()));
                }
            }
            experiments.push(Experiment { gates, saturate });
        }
        if experiments.is_empty() {
            return Err(SpinError::SchemeParse {
                line: 0,
                column: 0,
                reason: "scheme has no experiments".into(),
            });
        }
        Ok(PrepScheme {
            n,
            experiments,
            gradient,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.gradient {
            out.push_str("gradient\n");
        }
        for e in &self.experiments {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

/// Runs every experiment (in parallel) and sums them in scheme order.
pub fn run_prep_scheme(scheme: &PrepScheme) -> Result<PrepOutcome, SpinError> {
    let experiments: Vec<DeviationMatrix> = scheme
        .experiments
        .par_iter()
        .map(|e| {
            let rho = e.run(scheme.n)?;
            Ok(if scheme.gradient { rho.dephase() } else { rho })
        })
        .collect::<Result<_, SpinError>>()?;
    let sum = experiments
        .iter()
        .fold(DeviationMatrix::zeros(scheme.n), |acc, m| &acc + m);
    Ok(PrepOutcome { experiments, sum })
}

/// `⌈(2^n − 1)/n⌉`, the fewest experiments that can supply all `2^n − 1`
/// product terms when each experiment contributes `n`.
pub fn minimum_experiments(n: usize) -> usize {
    ((1usize << n) - 1).div_ceil(n)
}

/// Three-spin scheme avoiding the weak 1–3 coupling: `E`, `CN32 CN21 N3`,
/// `CN21 CN12 CN32`, followed by a gradient.
pub fn three_spin_scheme() -> PrepScheme {
    PrepScheme {
        n: 3,
        experiments: vec![
            Experiment::identity(),
            Experiment::new(vec![Gate::cn(3, 2), Gate::cn(2, 1), Gate::Not(3)]),
            Experiment::new(vec![Gate::cn(2, 1), Gate::cn(1, 2), Gate::cn(3, 2)]),
        ],
        gradient: true,
    }
}

/// Five-experiment four-spin scheme. Twenty product terms are produced;
/// four cancel pairwise and the surplus `I3z` of the third experiment is
/// removed by saturating spin 3 before the gradient.
pub fn four_spin_scheme() -> PrepScheme {
    let cn = Gate::cn;
    PrepScheme {
        n: 4,
        experiments: vec![
            Experiment::new(vec![cn(3, 1), cn(1, 4), cn(1, 2)]),
            Experiment::new(vec![cn(3, 4), cn(4, 2), cn(2, 1)]),
            Experiment::new(vec![cn(4, 2), cn(1, 2)]).with_saturation(vec![3]),
            Experiment::new(vec![Gate::Not(3), cn(1, 4), cn(1, 2)]),
            Experiment::new(vec![Gate::Not(1), cn(2, 4), cn(2, 3)]),
        ],
        gradient: true,
    }
}

/// A gate whose coupling delay is too long for the transverse relaxation of
/// the sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LintFinding {
    pub experiment: usize,
    pub gate: String,
    pub delay_s: f64,
    pub min_t2_s: f64,
}

/// Flags a CN gate when its `1/(2J)` delay reaches this fraction of the
/// shortest `T2`.
pub const T2_DELAY_FRACTION: f64 = 0.5;

/// Lists CN gates whose coupling evolution is comparable to the shortest
/// `T2` of `system`. Without `T2` data nothing is flagged.
pub fn lint_scheme(scheme: &PrepScheme, system: &SpinSystem) -> Vec<LintFinding> {
    let Some(min_t2) = system.min_t2() else {
        return Vec::new();
    };
    if system.num_spins() != scheme.n {
        return Vec::new();
    }
    let mut findings = Vec::new();
    for (i, e) in scheme.experiments.iter().enumerate() {
        for g in &e.gates {
            let Some((a, b)) = g.coupling() else { continue };
            let j = system.coupling(a, b);
            let delay_s = if j > 0.0 {
                1.0 / (2.0 * j)
            } else {
                f64::INFINITY
            };
            if delay_s >= T2_DELAY_FRACTION * min_t2 {
                findings.push(LintFinding {
                    experiment: i + 1,
                    gate: g.to_string(),
                    delay_s,
                    min_t2_s: min_t2,
                });
            }
        }
    }
    findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_sim::{decompose_longitudinal, target_pseudo_pure};

    #[test]
    fn three_spin_scheme_is_exact() {
        let out = run_prep_scheme(&three_spin_scheme()).unwrap();
        let target = target_pseudo_pure(3).unwrap();
        assert!(out.sum.max_abs_diff(&target) < 1e-12);
        assert_eq!(out.experiments.len(), minimum_experiments(3));
    }

    #[test]
    fn four_spin_scheme_is_exact() {
        let scheme = four_spin_scheme();
        let out = run_prep_scheme(&scheme).unwrap();
        assert!(out.sum.max_abs_diff(&target_pseudo_pure(4).unwrap()) < 1e-12);
        let terms: usize = scheme
            .experiments
            .iter()
            .map(|e| {
                decompose_longitudinal(&Experiment::new(e.gates.clone()).run(4).unwrap())
                    .terms
                    .len()
            })
            .sum();
        assert_eq!(terms, 20);
    }

    #[test]
    fn saturation_only_removes_the_surplus_term() {
        let plain = Experiment::new(vec![Gate::cn(4, 2), Gate::cn(1, 2)])
            .run(4)
            .unwrap();
        let sat = four_spin_scheme().experiments[2].run(4).unwrap();
        let diff = decompose_longitudinal(&(&plain - &sat));
        assert_eq!(diff.to_string(), "I3z");
    }

    #[test]
    fn identity_scheme_is_thermal() {
        let scheme = PrepScheme::parse("E\n", 3).unwrap();
        let out = run_prep_scheme(&scheme).unwrap();
        assert_eq!(out.sum, thermal_state(3).unwrap());
    }

    #[test]
    fn minimum_experiment_counts() {
        assert_eq!(minimum_experiments(3), 3);
        assert_eq!(minimum_experiments(4), 4);
        assert_eq!(minimum_experiments(5), 7);
    }

    #[test]
    fn text_round_trip() {
        for scheme in [three_spin_scheme(), four_spin_scheme()] {
            let back = PrepScheme::parse(&scheme.to_text(), scheme.n).unwrap();
            assert_eq!(back, scheme);
        }
    }

    #[test]
    fn parse_errors_locate_the_problem() {
        match PrepScheme::parse("E\nCN32 XX1\n", 3) {
            Err(SpinError::SchemeParse { line, column, .. }) => assert_eq!((line, column), (2, 6)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            PrepScheme::parse("E N3\n", 3),
            Err(SpinError::SchemeParse { line: 1, .. })
        ));
        assert!(matches!(
            PrepScheme::parse("CN34\n", 3),
            Err(SpinError::SchemeParse {
                line: 1,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            PrepScheme::parse("N1 ; saturate 9\n", 3),
            Err(SpinError::SchemeParse { .. })
        ));
        assert!(matches!(
            PrepScheme::parse("N1 ; dephase\n", 3),
            Err(SpinError::SchemeParse { .. })
        ));
        assert!(PrepScheme::parse("# nothing\n", 3).is_err());
    }

    #[test]
    fn lint_flags_weak_coupling_only() {
        let sys = SpinSystem::alanine();
        assert!(lint_scheme(&three_spin_scheme(), &sys).is_empty());
        let bad = PrepScheme::parse("CN13\nCN31 N2\nCN12\n", 3).unwrap();
        let found = lint_scheme(&bad, &sys);
        let gates: Vec<&str> = found.iter().map(|f| f.gate.as_str()).collect();
        assert_eq!(gates, ["CN13", "CN31"]);
        assert!((found[0].delay_s - 1.0 / 2.42).abs() < 1e-12);
    }
}
