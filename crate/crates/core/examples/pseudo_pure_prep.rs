// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Three-spin temporal averaging: the thermal state and two CN permutations
//! sum to the pseudo-pure deviation matrix.

use hogg_nmr::spin_sim::{decompose, run_prep_scheme, target_pseudo_pure, three_spin_scheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scheme = three_spin_scheme();
    let outcome = run_prep_scheme(&scheme)?;
    for (e, rho) in scheme.experiments.iter().zip(&outcome.experiments) {
        println!("{:<16} {}", e.to_string(), decompose(rho));
    }
    let target = target_pseudo_pure(3)?;
    println!("sum              {}", decompose(&outcome.sum));
    println!("target           {}", decompose(&target));
    println!(
        "max |sum - target| = {:.3e}",
        outcome.sum.max_abs_diff(&target)
    );
    println!("diagonal {:?}", outcome.sum.diagonal());
    Ok(())
}
