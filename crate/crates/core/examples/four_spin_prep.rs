// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Four-spin preparation with five experiments, one of which saturates
//! spin 3 before the gradient.

use hogg_nmr::spin_sim::{
    decompose, four_spin_scheme, minimum_experiments, run_prep_scheme, target_pseudo_pure,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scheme = four_spin_scheme();
    println!("{}", scheme.to_text());
    let outcome = run_prep_scheme(&scheme)?;
    for (i, rho) in outcome.experiments.iter().enumerate() {
        println!("experiment {}: {}", i + 1, decompose(rho));
    }
    let target = target_pseudo_pure(4)?;
    println!(
        "{} experiments (lower bound {}), max |sum - target| = {:.3e}",
        scheme.experiments.len(),
        minimum_experiments(4),
        outcome.sum.max_abs_diff(&target)
    );
    Ok(())
}
