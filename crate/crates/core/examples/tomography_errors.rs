// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Error metrics of a measured diagonal against its ideal basis state.
//!
//! cargo run --example tomography_errors -- measured.csv 110

use hogg_nmr::spin_sim::{basis_ideal, error_metrics, parse_vector};

const PSEUDO_PURE_READOUT: &str =
    "1.000, 0.0314, -0.0291, -0.0032, 0.0520, 0.0114, -0.0535, -0.0277";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (text, ideal_bits) = match args.as_slice() {
        [path, bits] => (std::fs::read_to_string(path)?, bits.clone()),
        _ => (PSEUDO_PURE_READOUT.to_string(), "000".to_string()),
    };
    let measured = parse_vector(&text)?;
    let ideal = basis_ideal(measured.len(), usize::from_str_radix(&ideal_bits, 2)?);
    let m = error_metrics(&measured, &ideal)?;
    let n = measured.len().trailing_zeros() as usize;
    for (i, d) in m.per_entry.iter().enumerate() {
        println!("{i:0n$b}  {:+.4}  {:+.4}", measured[i], d);
    }
    println!("max deviation {:.4} at {:0n$b}", m.max_abs_dev, m.argmax);
    Ok(())
}
