// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Command implementations behind the `hogg-nmr` binary.
//!
//! Every command takes already-read text inputs and returns an [`Outcome`]:
//! a deterministic [`RunReport`] for `--json` and a plain-text table. File
//! handling and argument parsing live in the binary.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::formula::{grover_success_probability, Assignment, BitOrder, Formula, FormulaError};
use crate::hogg::{
    gamma_matrix, measure_distribution, mixing_matrix, phase_matrix, run_pipeline, verify_wgw,
    walsh_hadamard, OperatorError, NORM_TOLERANCE, OPERATOR_TOLERANCE,
};
use crate::linalg;
use crate::pulse::{
    self, compile_any, lower_scheme, parse_sequence, reduce, verify_table_sequence, PulseError,
    CATALOG, CATALOG_SOLUTION_ORDER, EQUIVALENCE_TOLERANCE, LOWERING_TOLERANCE,
};
use crate::report::{format_sig, Check, RunReport};
use crate::spin_sim::{
    basis_ideal, decompose, diag_tomography, error_metrics, four_spin_scheme, lint_scheme,
    measured_readout, minimum_experiments, parse_vector, run_prep_scheme, stick_spectrum,
    target_pseudo_pure, thermal_state, three_spin_scheme, DeviationMatrix, PrepScheme, SpinError,
    SpinSystem,
};

/// Residual allowed between a preparation sum and the pseudo-pure target.
pub const PREP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Pulse(#[from] PulseError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("{0}")]
    Usage(String),
}

/// Flags shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    /// Overrides the command's default pass/fail tolerance.
    pub tolerance: Option<f64>,
    pub bit_order: BitOrder,
    pub params: SpinSystem,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tolerance: None,
            bit_order: BitOrder::MsbV1,
            params: SpinSystem::alanine(),
        }
    }
}

impl Options {
    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

/// Report plus its human-readable rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: RunReport,
    pub text: String,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

fn finish(report: RunReport, mut text: String) -> Outcome {
    if !report.checks.is_empty() {
        text.push('\n');
        let rows: Vec<Vec<String>> = report
            .checks
            .iter()
            .map(|c| {
                vec![
                    if c.passed { "PASS" } else { "FAIL" }.to_string(),
                    c.name.clone(),
                    format_sig(c.value),
                    format_sig(c.tolerance),
                ]
            })
            .collect();
        text.push_str(&render_table(
            &["check", "name", "value", "tolerance"],
            &rows,
        ));
    }
    Outcome { report, text }
}

/// Left-aligned columns separated by two spaces.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

fn parse_formula(text: &str, n: Option<usize>) -> Result<Formula, CommandError> {
    Ok(match n {
        Some(n) => Formula::parse_with_n(text, n)?,
        None => Formula::parse(text)?,
    })
}

/// Reorders an internally indexed vector into `order`.
fn to_external_order<T: Copy + Default>(values: &[T], n: usize, order: BitOrder) -> Vec<T> {
    let mut out = vec![T::default(); values.len()];
    for (i, &v) in values.iter().enumerate() {
        out[order.to_external(i as u32, n) as usize] = v;
    }
    out
}

fn sorted_labels<'a>(
    items: impl IntoIterator<Item = &'a Assignment>,
    order: BitOrder,
) -> Vec<String> {
    let mut labels: Vec<String> = items.into_iter().map(|a| a.to_string_in(order)).collect();
    labels.sort();
    labels
}

fn bits_label(index: usize, n: usize) -> String {
    format!("{index:0n$b}")
}

#[derive(Serialize)]
struct WeightedAssignment {
    assignment: String,
    probability: f64,
    conflicts: usize,
}

/// `solve`: runs the pipeline and reports the outcome distribution.
pub fn cmd_solve(formula: &str, n: Option<usize>, opts: &Options) -> Result<Outcome, CommandError> {
    let f = parse_formula(formula, n)?;
    let n = f.num_variables();
    let m = f.num_clauses();
    let order = opts.bit_order;
    let tol = opts.tol(OPERATOR_TOLERANCE);
    let dist = measure_distribution(&run_pipeline(&f));
    let mut support: Vec<WeightedAssignment> = dist
        .support(tol)
        .into_iter()
        .map(|(a, p)| WeightedAssignment {
            assignment: a.to_string_in(order),
            probability: p,
            conflicts: f.conflicts(a),
        })
        .collect();
    support.sort_by(|a, b| a.assignment.cmp(&b.assignment));
    let top = dist.top();
    let top_conflicts = f.conflicts(top);
    let verdict = if top_conflicts == 0 { "SAT" } else { "UNSAT" };
    let solutions = f.solutions();

    let mut report = RunReport::new(vec!["solve".into(), f.to_string()]).with_input(&json!({
        "formula": f.to_string(),
        "n": n,
        "m": m,
        "bit_order": order,
    }));
    let total = dist.total();
    report.check(Check::below(
        "normalization",
        (total - 1.0).abs(),
        NORM_TOLERANCE,
    ));
    if f.is_one_sat() && !solutions.is_empty() {
        let off_support: f64 = dist
            .probabilities()
            .iter()
            .enumerate()
            .filter(|(i, _)| !solutions.contains(&Assignment::new(*i as u32, n)))
            .map(|(_, p)| *p)
            .sum();
        report.check(Check::below(
            "probability_outside_solutions",
            off_support,
            tol,
        ));
        let want = 2f64.powi(-((n - m) as i32));
        let worst = solutions
            .iter()
            .map(|&a| (dist.probability(a) - want).abs())
            .fold(0.0, f64::max);
        report.check(Check::below("uniform_solution_weight", worst, tol));
    }

    let k_opt =
        (std::f64::consts::FRAC_PI_4 / (2f64.powf(-(n as f64) / 2.0)).asin()).floor() as usize;
    let grover: Vec<_> = (0..=k_opt)
        .map(|k| json!({"iterations": k, "probability": grover_success_probability(n, k)}))
        .collect();
    report = report.with_output(&json!({
        "distribution": support,
        "top": {
            "assignment": top.to_string_in(order),
            "probability": dist.probability(top),
            "conflicts": top_conflicts,
        },
        "verdict": verdict,
        "brute_force_solutions": sorted_labels(&solutions, order),
        "grover_single_target": grover,
    }));
    report.metric("total_probability", total);

    let mut text = format!(
        "formula  {f}\nn = {n}, m = {m}, bit order {}\n\n",
        order.as_str()
    );
    let rows: Vec<Vec<String>> = support
        .iter()
        .map(|w| {
            vec![
                w.assignment.clone(),
                format!("{:.12}", w.probability),
                w.conflicts.to_string(),
            ]
        })
        .collect();
    text.push_str(&render_table(
        &["assignment", "probability", "conflicts"],
        &rows,
    ));
    text.push_str(&format!(
        "\ntop assignment {}  probability {:.12}  conflicts {}\nverdict {verdict}\n",
        top.to_string_in(order),
        dist.probability(top),
        top_conflicts
    ));
    Ok(finish(report, text))
}

/// Grid for `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyGrid {
    Single { n: usize, m: usize },
    All { max_n: usize },
}

#[derive(Debug, Clone, Serialize)]
struct VerifyRow {
    n: usize,
    m: usize,
    wgw_error: f64,
    mixing_unitarity_error: f64,
    gamma_modulus_error: f64,
    walsh_involution_error: f64,
}

impl VerifyRow {
    fn worst(&self) -> f64 {
        self.wgw_error
            .max(self.mixing_unitarity_error)
            .max(self.gamma_modulus_error)
            .max(self.walsh_involution_error)
    }
}

fn verify_pair(n: usize, m: usize) -> Result<VerifyRow, OperatorError> {
    let wgw = verify_wgw(n, m)?;
    let w = walsh_hadamard(n)?;
    Ok(VerifyRow {
        n,
        m,
        wgw_error: wgw.max_abs_error,
        mixing_unitarity_error: mixing_matrix(n, m)?.unitarity_error(),
        gamma_modulus_error: gamma_matrix(n, m)?.modulus_error(),
        walsh_involution_error: linalg::max_abs_diff(
            w.compose(&w).entries(),
            &linalg::identity(1 << n),
        ),
    })
}

/// `verify`: `U = WΓW`, unitarity and `W² = I` over a grid of `(n, m)`.
pub fn cmd_verify(grid: VerifyGrid, opts: &Options) -> Result<Outcome, CommandError> {
    let tol = opts.tol(OPERATOR_TOLERANCE);
    let (pairs, echo): (Vec<(usize, usize)>, Vec<String>) = match grid {
        VerifyGrid::Single { n, m } => (
            vec![(n, m)],
            vec!["verify".into(), n.to_string(), m.to_string()],
        ),
        VerifyGrid::All { max_n } => (
            (1..=max_n)
                .flat_map(|n| (1..=n).map(move |m| (n, m)))
                .collect(),
            vec![
                "verify".into(),
                "--all".into(),
                "--max-n".into(),
                max_n.to_string(),
            ],
        ),
    };
    if pairs.is_empty() {
        return Err(CommandError::Usage("empty verification grid".into()));
    }
    let rows: Vec<VerifyRow> = pairs
        .par_iter()
        .map(|&(n, m)| verify_pair(n, m))
        .collect::<Result<_, _>>()?;

    let worst = rows.iter().map(VerifyRow::worst).fold(0.0, f64::max);
    let mut report = RunReport::new(echo)
        .with_input(&json!({"pairs": pairs}))
        .with_output(&rows);
    for r in &rows {
        report.check(Check::below(format!("n={} m={}", r.n, r.m), r.worst(), tol));
    }
    report.metric("max_error", worst);
    report.metric("pairs", rows.len());

    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.m.to_string(),
                format_sig(r.wgw_error),
                format_sig(r.mixing_unitarity_error),
                format_sig(r.gamma_modulus_error),
                format_sig(r.walsh_involution_error),
            ]
        })
        .collect();
    let mut text = render_table(
        &["n", "m", "|WΓW - U|", "|U†U - I|", "||γ| - 1|", "|W² - I|"],
        &table,
    );
    text.push_str(&format!(
        "\nmax error {}  tolerance {}\n",
        format_sig(worst),
        format_sig(tol)
    ));
    Ok(finish(report, text))
}

fn builtin_scheme(n: usize) -> Result<PrepScheme, CommandError> {
    match n {
        3 => Ok(three_spin_scheme()),
        4 => Ok(four_spin_scheme()),
        _ => Err(CommandError::Usage(format!(
            "no built-in preparation scheme for n = {n}; pass a scheme file"
        ))),
    }
}

fn scheme_for(n: usize, scheme_text: Option<&str>) -> Result<PrepScheme, CommandError> {
    match scheme_text {
        Some(text) => Ok(PrepScheme::parse(text, n)?),
        None => builtin_scheme(n),
    }
}

fn real_diagonal(rho: &DeviationMatrix, order: BitOrder) -> Vec<f64> {
    to_external_order(&rho.diagonal(), rho.num_spins(), order)
}

/// `prep`: temporal-averaging preparation against the pseudo-pure target.
pub fn cmd_prep(
    n: usize,
    scheme_text: Option<&str>,
    opts: &Options,
) -> Result<Outcome, CommandError> {
    let scheme = scheme_for(n, scheme_text)?;
    let order = opts.bit_order;
    let tol = opts.tol(PREP_TOLERANCE);
    let outcome = run_prep_scheme(&scheme)?;
    let target = target_pseudo_pure(n)?;
    let diff = &outcome.sum - &target;
    let residual = diff.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);

    let experiments: Vec<_> = scheme
        .experiments
        .iter()
        .zip(&outcome.experiments)
        .map(|(e, rho)| {
            json!({
                "experiment": e.to_string(),
                "product_operators": decompose(rho).to_string(),
                "diagonal": real_diagonal(rho, order),
            })
        })
        .collect();
    let sum_terms = decompose(&outcome.sum).to_string();
    let readout = diag_tomography(&outcome.sum).ok().map(|mut r| {
        r.values = to_external_order(&r.values, n, order);
        r
    });
    let lint = if opts.params.num_spins() == n {
        lint_scheme(&scheme, &opts.params)
    } else {
        Vec::new()
    };

    let mut report = RunReport::new(vec!["prep".into(), n.to_string()]).with_input(&json!({
        "n": n,
        "scheme": scheme.to_text(),
        "builtin": scheme_text.is_none(),
        "bit_order": order,
    }));
    report.check(Check::below("residual_vs_target", residual, tol));
    report.check(Check::below(
        "sum_hermiticity",
        outcome.sum.hermiticity_error(),
        NORM_TOLERANCE,
    ));
    report.check(Check::below(
        "sum_trace",
        outcome.sum.trace().norm(),
        NORM_TOLERANCE,
    ));
    report.metric("residual_max_abs", residual);
    report.metric("residual_frobenius", diff.frobenius_norm());
    report.metric("experiments", scheme.experiments.len());
    report.metric("minimum_experiments", minimum_experiments(n));
    report = report.with_output(&json!({
        "experiments": experiments,
        "sum": {
            "product_operators": sum_terms,
            "diagonal": real_diagonal(&outcome.sum, order),
        },
        "target_product_operators": decompose(&target).to_string(),
        "readout": readout,
        "t2_lint": lint,
        "params": opts.params.name,
    }));

    let mut text = format!(
        "scheme for n = {n} ({} experiments",
        scheme.experiments.len()
    );
    text.push_str(&format!(
        ", minimum {}{})\n\n",
        minimum_experiments(n),
        if scheme.gradient { ", gradient" } else { "" }
    ));
    let rows: Vec<Vec<String>> = scheme
        .experiments
        .iter()
        .zip(&outcome.experiments)
        .enumerate()
        .map(|(i, (e, rho))| {
            vec![
                (i + 1).to_string(),
                e.to_string(),
                decompose(rho).to_string(),
            ]
        })
        .collect();
    text.push_str(&render_table(
        &["#", "experiment", "product operators"],
        &rows,
    ));
    text.push_str(&format!("\nsum     {sum_terms}\n"));
    text.push_str(&format!("target  {}\n", decompose(&target)));
    text.push_str(&format!(
        "residual max |sum - target| = {}  frobenius {}\n",
        format_sig(residual),
        format_sig(diff.frobenius_norm())
    ));
    if let Some(r) = &readout {
        let vals: Vec<String> = r.values.iter().map(|v| format!("{v:.4}")).collect();
        text.push_str(&format!(
            "normalized diagonal ({}) [{}]{}\n",
            order.as_str(),
            vals.join(", "),
            if r.low_contrast { "  low contrast" } else { "" }
        ));
    }
    for l in &lint {
        text.push_str(&format!(
            "T2 lint: experiment {} gate {} needs {:.3} s against min T2 {:.3} s\n",
            l.experiment, l.gate, l.delay_s, l.min_t2_s
        ));
    }
    Ok(finish(report, text))
}

/// Ideal vector for `compare`.
#[derive(Debug, Clone, PartialEq)]
pub enum IdealSpec {
    /// Basis state written as a bit string; its binary value is the index.
    Basis(String),
    /// Pipeline output of a formula, scaled to a unit maximum and laid out
    /// in the `--bit-order` index order.
    Formula(String),
    /// Explicit vector text.
    Vector(String),
    /// Basis state at the largest measured entry.
    Peak,
}

/// `compare`: error metrics of a measured diagonal against an ideal one.
pub fn cmd_compare(
    measured_text: &str,
    ideal: &IdealSpec,
    threshold: Option<f64>,
    opts: &Options,
) -> Result<Outcome, CommandError> {
    let measured = parse_vector(measured_text)?;
    let dim = measured.len();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(CommandError::Usage(format!(
            "measured vector has {dim} entries; expected 2^n with n >= 1"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    let order = opts.bit_order;
    let readout = measured_readout(measured.clone());
    let (ideal_vec, label) = match ideal {
        IdealSpec::Basis(bits) => {
            if bits.len() != n || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(CommandError::Usage(format!(
                    "ideal basis state '{bits}' must be {n} binary digits"
                )));
            }
            let index = usize::from_str_radix(bits, 2).expect("validated bit string");
            (basis_ideal(dim, index), format!("|{bits}>"))
        }
        IdealSpec::Formula(text) => {
            let f = Formula::parse_with_n(text, n)?;
            let probs = measure_distribution(&run_pipeline(&f))
                .probabilities()
                .to_vec();
            let max = probs.iter().copied().fold(0.0, f64::max);
            let scaled: Vec<f64> = probs.iter().map(|p| p / max).collect();
            (
                to_external_order(&scaled, n, order),
                format!("pipeline({f}) in {}", order.as_str()),
            )
        }
        IdealSpec::Vector(text) => (parse_vector(text)?, "explicit vector".to_string()),
        IdealSpec::Peak => {
            let p = readout.peak();
            (
                basis_ideal(dim, p),
                format!("|{}> (measured peak)", bits_label(p, n)),
            )
        }
    };
    let metrics = error_metrics(&measured, &ideal_vec)?;

    let mut echo = vec!["compare".to_string(), label.clone()];
    if let Some(t) = threshold {
        echo.push(format!("--threshold={t}"));
    }
    let mut report = RunReport::new(echo).with_input(&json!({
        "measured": measured,
        "ideal": ideal_vec,
        "ideal_label": label,
        "threshold": threshold,
        "bit_order": order,
    }));
    if let Some(t) = threshold {
        report.check(Check::below("max_abs_dev", metrics.max_abs_dev, t));
    }
    report.metric("max_abs_dev", metrics.max_abs_dev);
    report.metric("argmax", bits_label(metrics.argmax, n));
    report = report.with_output(&json!({
        "metrics": metrics,
        "readout": readout,
    }));

    let rows: Vec<Vec<String>> = (0..dim)
        .map(|i| {
            vec![
                bits_label(i, n),
                format!("{:.4}", measured[i]),
                format!("{:.4}", ideal_vec[i]),
                format!("{:+.4}", metrics.per_entry[i]),
            ]
        })
        .collect();
    let mut text = format!("ideal {label}\n\n");
    text.push_str(&render_table(
        &["index", "measured", "ideal", "deviation"],
        &rows,
    ));
    text.push_str(&format!(
        "\nmax |measured - ideal| = {:.4} ({:.2}%) at index {}\n",
        metrics.max_abs_dev,
        metrics.max_abs_dev * 100.0,
        bits_label(metrics.argmax, n)
    ));
    Ok(finish(report, text))
}

/// `pulse` subcommands.
#[derive(Debug, Clone, PartialEq)]
pub enum PulseCommand {
    CompileR {
        formula: String,
        n: Option<usize>,
    },
    CompileGamma {
        n: usize,
        m: usize,
    },
    Verify {
        formula: String,
        sequence: String,
        n: Option<usize>,
    },
    Lower {
        n: usize,
        scheme_text: Option<String>,
    },
    Table,
    Reduce {
        sequence: String,
    },
}

/// `pulse`: compilation, verification and lowering.
pub fn cmd_pulse(cmd: &PulseCommand, opts: &Options) -> Result<Outcome, CommandError> {
    match cmd {
        PulseCommand::CompileR { formula, n } => {
            let f = parse_formula(formula, *n)?;
            let compiled = compile_any(&phase_matrix(&f))?;
            compiled_outcome(
                vec!["pulse".into(), "compile-R".into(), f.to_string()],
                &format!("R for {f}"),
                &compiled,
                opts,
            )
        }
        PulseCommand::CompileGamma { n, m } => {
            let compiled = compile_any(&gamma_matrix(*n, *m)?)?;
            compiled_outcome(
                vec![
                    "pulse".into(),
                    "compile-gamma".into(),
                    n.to_string(),
                    m.to_string(),
                ],
                &format!("Γ for n = {n}, m = {m}"),
                &compiled,
                opts,
            )
        }
        PulseCommand::Verify {
            formula,
            sequence,
            n,
        } => pulse_verify(formula, sequence, *n, opts),
        PulseCommand::Lower { n, scheme_text } => pulse_lower(*n, scheme_text.as_deref(), opts),
        PulseCommand::Table => pulse_table(opts),
        PulseCommand::Reduce { sequence } => {
            let seq = parse_sequence(sequence)?;
            let reduced = reduce(&seq);
            let n = seq.max_spin().max(1);
            let a = pulse::sequence_to_unitary(&seq, n)?;
            let b = pulse::sequence_to_unitary(&reduced, n)?;
            let err = linalg::max_abs_diff(a.entries(), b.entries());
            let mut report = RunReport::new(vec!["pulse".into(), "reduce".into(), seq.to_string()])
                .with_input(&json!({"sequence": seq.to_string()}))
                .with_output(&json!({
                    "reduced": reduced.to_string(),
                    "pulses_before": seq.len(),
                    "pulses_after": reduced.len(),
                }));
            report.check(Check::below(
                "unitary_change",
                err,
                opts.tol(OPERATOR_TOLERANCE),
            ));
            let text = format!(
                "input    {seq}\nreduced  {}\npulses   {} -> {}\n",
                if reduced.is_empty() {
                    "(empty)".to_string()
                } else {
                    reduced.to_string()
                },
                seq.len(),
                reduced.len()
            );
            Ok(finish(report, text))
        }
    }
}

fn compiled_outcome(
    echo: Vec<String>,
    what: &str,
    compiled: &pulse::Compiled,
    opts: &Options,
) -> Result<Outcome, CommandError> {
    let mut report = RunReport::new(echo).with_output(compiled);
    report.check(Check::below(
        "round_trip",
        compiled.max_abs_error(),
        opts.tol(OPERATOR_TOLERANCE),
    ));
    let g = compiled.global_phase();
    let form = match compiled {
        pulse::Compiled::Pulses(_) => "single-spin z-rotations",
        pulse::Compiled::PulsesAndCouplings(_) => {
            "z-rotations and couplings (not tensor-factorable)"
        }
    };
    let rendered = if compiled.rendered().is_empty() {
        "(empty)"
    } else {
        compiled.rendered()
    };
    let text = format!(
        "{what}\nform          {form}\nsequence      {rendered}\nglobal phase  {}\nmax error     {}\n",
        phase_text(g),
        format_sig(compiled.max_abs_error())
    );
    Ok(finish(report, text))
}

fn pulse_verify(
    formula: &str,
    sequence: &str,
    n: Option<usize>,
    opts: &Options,
) -> Result<Outcome, CommandError> {
    let seq = parse_sequence(sequence)?;
    let base = Formula::parse(formula)?;
    let n = n.unwrap_or(0).max(base.num_variables()).max(seq.max_spin());
    let f = Formula::parse_with_n(formula, n)?;
    let v = verify_table_sequence(&f, &seq)?;
    let tol = opts.tol(EQUIVALENCE_TOLERANCE);

    let mut report = RunReport::new(vec![
        "pulse".into(),
        "verify".into(),
        f.to_string(),
        seq.to_string(),
    ])
    .with_input(&json!({"formula": f.to_string(), "sequence": seq.to_string(), "n": n}))
    .with_output(&v);
    report.check(Check::below(
        "zero_state_action",
        v.msb_v1.on_zero_state.max_abs_error,
        tol,
    ));
    if let Some(full) = v.msb_v1.full {
        report.metric("full_unitary_error", full.max_abs_error);
    }

    let mut rows = Vec::new();
    for ov in [&v.msb_v1, &v.lsb_v1] {
        let z = &ov.on_zero_state;
        rows.push(vec![
            ov.bit_order.as_str().to_string(),
            "|0…0> action".to_string(),
            yes_no(z.max_abs_error < tol),
            format_sig(z.max_abs_error),
            phase_text(z.global_phase),
        ]);
        if let Some(full) = &ov.full {
            rows.push(vec![
                ov.bit_order.as_str().to_string(),
                "full unitary".to_string(),
                yes_no(full.max_abs_error < tol),
                format_sig(full.max_abs_error),
                phase_text(full.global_phase),
            ]);
        }
    }
    let mut text = format!(
        "formula   {f} (n = {n})\nsequence  {}\n\n",
        if seq.is_empty() {
            "(empty)".to_string()
        } else {
            seq.to_string()
        }
    );
    text.push_str(&render_table(
        &[
            "spin labels",
            "check",
            "equivalent",
            "max error",
            "global phase",
        ],
        &rows,
    ));
    Ok(finish(report, text))
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn phase_text(z: num_complex::Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn pulse_lower(
    n: usize,
    scheme_text: Option<&str>,
    opts: &Options,
) -> Result<Outcome, CommandError> {
    let scheme = match scheme_text {
        Some(t) => PrepScheme::parse(t, n)?,
        None if n == 3 => three_spin_scheme(),
        None => {
            return Err(CommandError::Pulse(PulseError::Unsupported(format!(
                "built-in preparation programs exist for 3 spins, not {n}; pass a scheme file"
            ))))
        }
    };
    let lowered = lower_scheme(&scheme)?;
    let tol = opts.tol(LOWERING_TOLERANCE);
    let mut report = RunReport::new(vec!["pulse".into(), "lower".into(), n.to_string()])
        .with_input(&json!({"n": n, "scheme": scheme.to_text()}))
        .with_output(&lowered);
    let mut text = String::new();
    for (i, l) in lowered.iter().enumerate() {
        report.check(Check::below(
            format!("experiment {}", i + 1),
            l.max_abs_error,
            tol,
        ));
        text.push_str(&format!(
            "experiment {}: {}\n  {}\n",
            i + 1,
            l.gates,
            l.rendered
        ));
        if !l.saturate.is_empty() {
            text.push_str(&format!("  then saturate spins {:?}\n", l.saturate));
        }
    }
    if scheme.gradient {
        text.push_str("gradient after each experiment\n");
    }
    text.push_str(
        "J_ij[1/2J]: free evolution for 1/(2 J_ij); {refocus k}: π pulses on spin k mid-delay\n",
    );
    Ok(finish(report, text))
}

fn pulse_table(opts: &Options) -> Result<Outcome, CommandError> {
    let tol = opts.tol(EQUIVALENCE_TOLERANCE);
    let order = opts.bit_order;
    let mut report = RunReport::new(vec!["pulse".into(), "table".into()]);
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for row in &CATALOG {
        let f = row.formula();
        let v = verify_table_sequence(&f, &row.sequence())?;
        let oracle = sorted_labels(&f.solutions(), order);
        let listed_match_order = row.listed_solutions() == f.solutions();
        let literal_match = {
            let mut listed: Vec<&str> = row.solutions.to_vec();
            listed.sort_unstable();
            listed == oracle
        };
        report.check(Check::below(
            format!("{} on |000>", row.formula),
            v.msb_v1.on_zero_state.max_abs_error,
            tol,
        ));
        report.check(Check::flag(
            format!(
                "{} listed solutions ({})",
                row.formula,
                CATALOG_SOLUTION_ORDER.as_str()
            ),
            listed_match_order,
        ));
        rows.push(vec![
            row.formula.to_string(),
            row.sequence.to_string(),
            format_sig(v.msb_v1.on_zero_state.max_abs_error),
            v.msb_v1
                .full
                .map_or("-".into(), |c| format_sig(c.max_abs_error)),
            row.solutions.join("+"),
            oracle.join("+"),
            yes_no(literal_match),
        ]);
        entries.push(json!({
            "formula": row.formula,
            "sequence": row.sequence,
            "listed_solutions": row.solutions,
            "oracle_solutions": oracle,
            "listed_equals_oracle_as_written": literal_match,
            "verification": v,
        }));
    }
    report = report
        .with_input(&json!({"bit_order": order, "catalog_solution_order": CATALOG_SOLUTION_ORDER}))
        .with_output(&entries);
    let mut text = format!("solutions rendered in {}\n\n", order.as_str());
    text.push_str(&render_table(
        &[
            "formula",
            "sequence",
            "|0> error",
            "full error",
            "listed",
            "oracle",
            "same text",
        ],
        &rows,
    ));
    Ok(finish(report, text))
}

/// Deviation matrix fed to `spectrum`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumState {
    Thermal,
    Target,
    /// Sum of a preparation scheme (built-in when `None`).
    Prep(Option<String>),
    /// Diagonal deviation matrix from vector text, indexed in `--bit-order`.
    Diagonal(String),
}

/// `spectrum`: stick spectrum of one spin after a `(π/2)_y` readout pulse.
pub fn cmd_spectrum(
    spin: usize,
    state: &SpectrumState,
    opts: &Options,
) -> Result<Outcome, CommandError> {
    let sys = &opts.params;
    sys.validate()?;
    let n = sys.num_spins();
    let (rho, label) = match state {
        SpectrumState::Thermal => (thermal_state(n)?, "thermal".to_string()),
        SpectrumState::Target => (target_pseudo_pure(n)?, "pseudo-pure target".to_string()),
        SpectrumState::Prep(text) => {
            let scheme = scheme_for(n, text.as_deref())?;
            (run_prep_scheme(&scheme)?.sum, "preparation sum".to_string())
        }
        SpectrumState::Diagonal(text) => {
            let v = parse_vector(text)?;
            if v.len() != 1 << n {
                return Err(SpinError::LengthMismatch {
                    measured: v.len(),
                    ideal: 1 << n,
                }
                .into());
            }
            let internal = to_external_order(&v, n, opts.bit_order);
            (
                DeviationMatrix::from_diagonal(n, &internal),
                "diagonal input".to_string(),
            )
        }
    };
    let lines = stick_spectrum(&rho, spin, sys)?;
    let mut report = RunReport::new(vec!["spectrum".into(), spin.to_string(), label.clone()])
        .with_input(&json!({"spin": spin, "state": label, "params": sys}))
        .with_output(&lines);
    report.metric("lines", lines.len());
    let rows: Vec<Vec<String>> = lines
        .iter()
        .map(|l| {
            vec![
                format!("{:.3}", l.frequency_hz),
                format!("{:+.6}", l.amplitude),
                l.partners.clone(),
            ]
        })
        .collect();
    let mut text = format!(
        "spin {spin} of {} ({label}), first-order lines\n\n",
        if sys.name.is_empty() {
            "spin system"
        } else {
            &sys.name
        }
    );
    text.push_str(&render_table(
        &["frequency Hz", "amplitude", "partner states"],
        &rows,
    ));
    Ok(finish(report, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_examples() {
        let o = cmd_solve("v1 & v2 & v3", None, &Options::default()).unwrap();
        assert!(o.passed());
        assert!(o
            .text
            .contains("top assignment 111  probability 1.000000000000"));
        assert!(o.text.contains("verdict SAT"));

        let o = cmd_solve("v1 & !v1", None, &Options::default()).unwrap();
        assert!(o.text.contains("verdict UNSAT"));

        let o = cmd_solve("!v2", Some(3), &Options::default()).unwrap();
        assert_eq!(o.text.matches("0.250000000000  0\n").count(), 4);
    }

    #[test]
    fn verify_grid() {
        let o = cmd_verify(VerifyGrid::All { max_n: 3 }, &Options::default()).unwrap();
        assert!(o.passed());
        assert_eq!(o.report.checks.len(), 6);
    }

    #[test]
    fn prep_builtin_and_identity() {
        let o = cmd_prep(3, None, &Options::default()).unwrap();
        assert!(o.passed());
        assert!(o.text.contains("-I3z + 2I2zI3z + 4I1zI2zI3z"));
        let o = cmd_prep(3, Some("E\n"), &Options::default()).unwrap();
        assert!(!o.passed());
        let frob = o.report.metrics["residual_frobenius"].as_f64().unwrap();
        let want = (&target_pseudo_pure(3).unwrap() - &thermal_state(3).unwrap()).frobenius_norm();
        assert!((frob - want).abs() < 1e-12 && frob > 0.0);
        assert!(cmd_prep(5, None, &Options::default()).is_err());
    }

    #[test]
    fn compare_threshold() {
        let measured = "1.000,0.0314,-0.0291,-0.0032,0.0520,0.0114,-0.0535,-0.0277";
        let o = cmd_compare(
            measured,
            &IdealSpec::Basis("000".into()),
            Some(0.06),
            &Options::default(),
        )
        .unwrap();
        assert!(o.passed());
        assert!(o.text.contains("0.0535 (5.35%)"));
        let o = cmd_compare(
            measured,
            &IdealSpec::Basis("000".into()),
            Some(0.05),
            &Options::default(),
        )
        .unwrap();
        assert!(!o.passed());
        assert!(cmd_compare("1,0,0", &IdealSpec::Peak, None, &Options::default()).is_err());
    }

    #[test]
    fn pulse_subcommands() {
        let opts = Options::default();
        let o = cmd_pulse(
            &PulseCommand::CompileR {
                formula: "v1 & v2 & v3".into(),
                n: None,
            },
            &opts,
        )
        .unwrap();
        assert!(o.text.contains("Z~1 Z~2 Z~3"));
        let o = cmd_pulse(&PulseCommand::CompileGamma { n: 3, m: 3 }, &opts).unwrap();
        assert!(o.text.contains("Z1 Z2 Z3"));
        let o = cmd_pulse(
            &PulseCommand::Verify {
                formula: "v1 & v2 & v3".into(),
                sequence: "(XY~X)1(XY~X)2(XY~X)3".into(),
                n: None,
            },
            &opts,
        )
        .unwrap();
        assert!(o.passed());
        let o = cmd_pulse(
            &PulseCommand::Verify {
                formula: "v1".into(),
                sequence: "".into(),
                n: None,
            },
            &opts,
        )
        .unwrap();
        assert!(!o.passed());
        assert!(cmd_pulse(&PulseCommand::Table, &opts).unwrap().passed());
        assert!(cmd_pulse(
            &PulseCommand::Lower {
                n: 3,
                scheme_text: None
            },
            &opts
        )
        .unwrap()
        .passed());
    }

    #[test]
    fn spectrum_single_line() {
        let o = cmd_spectrum(2, &SpectrumState::Target, &Options::default()).unwrap();
        assert_eq!(o.report.metrics["lines"], 1);
        let o = cmd_spectrum(2, &SpectrumState::Prep(None), &Options::default()).unwrap();
        assert_eq!(o.report.metrics["lines"], 1);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = cmd_prep(4, None, &Options::default())
            .unwrap()
            .report
            .to_json();
        let b = cmd_prep(4, None, &Options::default())
            .unwrap()
            .report
            .to_json();
        assert_eq!(a, b);
    }
}
