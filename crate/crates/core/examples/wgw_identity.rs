// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Checks that the closed-form mixing matrix equals W·Γ·W for every
//! 1 <= m <= n <= 8.

use hogg_nmr::hogg::verify_wgw;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        for m in 1..=n {
            let r = verify_wgw(n, m)?;
            worst = worst.max(r.max_abs_error);
            println!(
                "n={n} m={m}  max |WΓW - U| = {:.3e}  phase {:.6}{:+.6}i",
                r.max_abs_error, r.global_phase.re, r.global_phase.im
            );
        }
    }
    println!("worst {worst:.3e}");
    Ok(())
}
