// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Stick spectra of each alanine carbon for the thermal and pseudo-pure
//! states. The pseudo-pure state leaves one line per spin.

use hogg_nmr::spin_sim::{stick_spectrum, target_pseudo_pure, thermal_state, SpinSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sys = SpinSystem::alanine();
    for (label, rho) in [
        ("thermal", thermal_state(3)?),
        ("pseudo-pure", target_pseudo_pure(3)?),
    ] {
        println!("{label}");
        for spin in 1..=3 {
            for line in stick_spectrum(&rho, spin, &sys)? {
                println!(
                    "  spin {spin}  {:>10.3} Hz  {:+.3}  partners {}",
                    line.frequency_hz, line.amplitude, line.partners
                );
            }
        }
    }
    Ok(())
}
