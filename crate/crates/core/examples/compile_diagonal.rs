// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Compiles phase matrices R and Γ into z-rotations, adding couplings when
//! the diagonal does not factor into single-spin phases.

use hogg_nmr::formula::Formula;
use hogg_nmr::hogg::{gamma_matrix, phase_matrix};
use hogg_nmr::pulse::compile_any;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for text in ["v1 & v2 & v3", "!v1 & v2 & !v3", "v1 & !v2"] {
        let f = Formula::parse(text)?;
        let c = compile_any(&phase_matrix(&f))?;
        println!("R({f}) = {}  error {:.1e}", c.rendered(), c.max_abs_error());
    }
    for (n, m) in [(3, 1), (3, 3), (4, 2), (5, 5)] {
        let c = compile_any(&gamma_matrix(n, m)?)?;
        println!(
            "Γ(n={n}, m={m}) = {}  error {:.1e}",
            c.rendered(),
            c.max_abs_error()
        );
    }
    Ok(())
}
