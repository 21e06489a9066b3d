// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-target success probability: one structured step against Grover
//! iterations for small registers.

use hogg_nmr::formula::{grover_success_probability, Formula, Literal};
use hogg_nmr::hogg::{measure_distribution, run_pipeline};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 2..=8 {
        let literals: Vec<Literal> = (1..=n).map(Literal::pos).collect();
        let f = Formula::one_sat(n, &literals)?;
        let dist = measure_distribution(&run_pipeline(&f));
        let structured = dist.probability(dist.top());
        let grover: Vec<String> = (1..=3)
            .map(|k| format!("k={k}: {:.4}", grover_success_probability(n, k)))
            .collect();
        println!(
            "n={n}  structured {structured:.4}  grover {}",
            grover.join("  ")
        );
    }
    Ok(())
}
