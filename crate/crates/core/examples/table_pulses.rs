// Copyright 2026 The hogg-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Verifies every catalog sequence against U·R·W on |000⟩ and shows how
//! the listed solution strings read under each bit order.

use hogg_nmr::formula::BitOrder;
use hogg_nmr::pulse::{verify_table_sequence, CATALOG};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for row in &CATALOG {
        let f = row.formula();
        let v = verify_table_sequence(&f, &row.sequence())?;
        let msb: Vec<String> = f
            .solutions()
            .iter()
            .map(|a| a.to_string_in(BitOrder::MsbV1))
            .collect();
        println!(
            "{:<16} {:<28} |000> err {:.1e}  listed {:<16} msb-v1 oracle {}",
            row.formula,
            row.sequence,
            v.msb_v1.on_zero_state.max_abs_error,
            row.solutions.join(","),
            msb.join(",")
        );
    }
    Ok(())
}
