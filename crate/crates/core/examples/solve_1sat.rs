// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Runs the pipeline on a few 1-SAT formulas and prints the outcome
//! distribution next to brute-force enumeration.
//!
//! cargo run --example solve_1sat -- "v1 & !v3" 4

use hogg_nmr::formula::{BitOrder, Formula};
use hogg_nmr::hogg::{measure_distribution, run_pipeline};

fn show(f: &Formula) {
    let dist = measure_distribution(&run_pipeline(f));
    println!("{f}  (n = {}, m = {})", f.num_variables(), f.num_clauses());
    for (a, p) in dist.support(1e-10) {
        println!(
            "  {}  {p:.12}  conflicts {}",
            a.to_string_in(BitOrder::MsbV1),
            f.conflicts(a)
        );
    }
    let solutions: Vec<String> = f
        .solutions()
        .iter()
        .map(|a| a.to_string_in(BitOrder::MsbV1))
        .collect();
    println!("  brute force: {}", solutions.join(" "));
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let Some(text) = args.first() {
        let f = match args.get(1) {
            Some(n) => Formula::parse_with_n(text, n.parse()?)?,
            None => Formula::parse(text)?,
        };
        show(&f);
        return Ok(());
    }
    for (text, n) in [
        ("v1 & v2 & v3", 3),
        ("!v2", 3),
        ("v1 & !v4", 5),
        ("v1 & !v1", 2),
    ] {
        show(&Formula::parse_with_n(text, n)?);
    }
    Ok(())
}
