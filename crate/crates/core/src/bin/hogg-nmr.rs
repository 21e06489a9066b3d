// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Exit status is 0 when every check passes, 1 when a
//! check fails and 2 on input or usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hogg_nmr::commands::{
    cmd_compare, cmd_prep, cmd_pulse, cmd_solve, cmd_spectrum, cmd_verify, IdealSpec, Options,
    Outcome, PulseCommand, SpectrumState, VerifyGrid,
};
use hogg_nmr::formula::BitOrder;
use hogg_nmr::spin_sim::SpinSystem;

#[derive(Debug, Parser)]
#[command(
    name = "hogg-nmr",
    version,
    about = "Hogg 1-SAT structured search with an NMR emulation layer"
)]
struct Cli {
    /// Emit the full run report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Override the pass/fail tolerance of the command's checks.
    #[arg(long, global = true, value_name = "EPS")]
    tolerance: Option<f64>,
    /// Bit order used to render and read bit strings.
    #[arg(long, global = true, default_value = "msb-v1", value_parser = parse_bit_order)]
    bit_order: BitOrder,
    /// Spin-system parameter file (TOML); defaults to the built-in alanine values.
    #[arg(long, global = true, value_name = "FILE")]
    params: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn parse_bit_order(s: &str) -> Result<BitOrder, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the pipeline on a formula and report the outcome distribution.
    Solve {
        formula: String,
        /// Number of variables (defaults to the largest index in the formula).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check U = WΓW, unitarity and W² = I.
    Verify {
        #[arg(required_unless_present = "all")]
        n: Option<usize>,
        #[arg(required_unless_present = "all")]
        m: Option<usize>,
        /// Every pair 1 <= m <= n <= max-n.
        #[arg(long, conflicts_with_all = ["n", "m"])]
        all: bool,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Run a temporal-averaging preparation scheme.
    Prep {
        n: usize,
        /// Scheme file; built-in schemes exist for n = 3 and 4.
        #[arg(long)]
        scheme: Option<PathBuf>,
    },
    /// Compare a measured diagonal with an ideal one.
    Compare(CompareArgs),
    /// Pulse-sequence compilation, verification and lowering.
    Pulse {
        #[command(subcommand)]
        command: PulseCli,
    },
    /// Stick spectrum of one spin after a (π/2)_y readout pulse.
    Spectrum {
        spin: usize,
        #[arg(long, value_enum, default_value_t = StateKind::Thermal)]
        state: StateKind,
        /// Scheme file for --state prep.
        #[arg(long)]
        scheme: Option<PathBuf>,
        /// Diagonal file for --state diagonal.
        #[arg(long)]
        diag: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Measured vector: one real per line or a comma-separated row.
    measured: PathBuf,
    /// Ideal basis state as a bit string; its binary value is the index.
    #[arg(long, group = "ideal_spec")]
    ideal: Option<String>,
    /// Ideal from the pipeline output of a formula, laid out in --bit-order.
    #[arg(long, group = "ideal_spec")]
    formula: Option<String>,
    /// Ideal vector file.
    #[arg(long, group = "ideal_spec")]
    ideal_file: Option<PathBuf>,
    /// Fail when the max absolute deviation reaches this value.
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum PulseCli {
    /// Compile the phase matrix R of a formula.
    #[command(name = "compile-R", alias = "compile-r")]
    CompileR {
        formula: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Compile Γ for n variables and m clauses.
    CompileGamma { n: usize, m: usize },
    /// Check a sequence against U·R·W of a formula.
    Verify {
        formula: String,
        sequence: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Lower a preparation scheme to pulses and coupling evolutions.
    Lower {
        #[arg(default_value_t = 3)]
        n: usize,
        #[arg(long)]
        scheme: Option<PathBuf>,
    },
    /// Verify the catalog of reduced sequences for 3 variables.
    Table,
    /// Merge adjacent rotations about the same axis.
    Reduce { sequence: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StateKind {
    Thermal,
    Target,
    Prep,
    Diagonal,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_opt(path: Option<&PathBuf>) -> Result<Option<String>> {
    path.map(|p| read(p)).transpose()
}

fn run(cli: &Cli) -> Result<Outcome> {
    let params = match &cli.params {
        Some(p) => SpinSystem::from_toml_str(&read(p)?)?,
        None => SpinSystem::alanine(),
    };
    let opts = Options {
        tolerance: cli.tolerance,
        bit_order: cli.bit_order,
        params,
    };
    let outcome = match &cli.command {
        Command::Solve { formula, n } => cmd_solve(formula, *n, &opts)?,
        Command::Verify { n, m, all, max_n } => {
            let grid = match (all, n, m) {
                (true, _, _) => VerifyGrid::All { max_n: *max_n },
                (false, Some(n), Some(m)) => VerifyGrid::Single { n: *n, m: *m },
                _ => anyhow::bail!("verify needs <N> <M> or --all"),
            };
            cmd_verify(grid, &opts)?
        }
        Command::Prep { n, scheme } => cmd_prep(*n, read_opt(scheme.as_ref())?.as_deref(), &opts)?,
        Command::Compare(args) => {
            let measured = read(&args.measured)?;
            let ideal = if let Some(bits) = &args.ideal {
                IdealSpec::Basis(bits.clone())
            } else if let Some(f) = &args.formula {
                IdealSpec::Formula(f.clone())
            } else if let Some(p) = &args.ideal_file {
                IdealSpec::Vector(read(p)?)
            } else {
                IdealSpec::Peak
            };
            cmd_compare(&measured, &ideal, args.threshold, &opts)?
        }
        Command::Pulse { command } => {
            let cmd = match command {
                PulseCli::CompileR { formula, n } => PulseCommand::CompileR {
                    formula: formula.clone(),
                    n: *n,
                },
                PulseCli::CompileGamma { n, m } => PulseCommand::CompileGamma { n: *n, m: *m },
                PulseCli::Verify {
                    formula,
                    sequence,
                    n,
                } => PulseCommand::Verify {
                    formula: formula.clone(),
                    sequence: sequence.clone(),
                    n: *n,
                },
                PulseCli::Lower { n, scheme } => PulseCommand::Lower {
                    n: *n,
                    scheme_text: read_opt(scheme.as_ref())?,
                },
                PulseCli::Table => PulseCommand::Table,
                PulseCli::Reduce { sequence } => PulseCommand::Reduce {
                    sequence: sequence.clone(),
                },
            };
            cmd_pulse(&cmd, &opts)?
        }
        Command::Spectrum {
            spin,
            state,
            scheme,
            diag,
        } => {
            let state = match state {
                StateKind::Thermal => SpectrumState::Thermal,
                StateKind::Target => SpectrumState::Target,
                StateKind::Prep => SpectrumState::Prep(read_opt(scheme.as_ref())?),
                StateKind::Diagonal => {
                    let path = diag
                        .as_ref()
                        .context("--state diagonal needs --diag <FILE>")?;
                    SpectrumState::Diagonal(read(path)?)
                }
            };
            cmd_spectrum(*spin, &state, &opts)?
        }
    };
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = if cli.json {
                writeln!(out, "{}", outcome.report.to_json())
            } else {
                write!(out, "{}", outcome.text)
            };
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
