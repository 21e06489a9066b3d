// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Lowers every CN gate on three spins to pulses and a coupling evolution
//! and checks the result against the permutation matrix.

use hogg_nmr::linalg;
use hogg_nmr::pulse::{gate_unitary, lower_gate};
use hogg_nmr::spin_sim::Gate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 3;
    for c in 1..=n {
        for t in (1..=n).filter(|&t| t != c) {
            let gate = Gate::cn(c, t);
            let program = lower_gate(n, gate);
            let realized = program.to_unitary()?;
            let want = gate_unitary(n, &[gate])?;
            let al = linalg::align_global_phase(realized.entries().iter(), want.entries().iter());
            println!("{gate}: {program}  error {:.1e}", al.max_abs_error);
        }
    }
    Ok(())
}
