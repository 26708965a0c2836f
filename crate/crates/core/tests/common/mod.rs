#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use casimir_core::specfun::{build_zero_table, BesselZeroTable};

/// Order and index covered by the shared table.
pub const FULL: u32 = 500;

fn cache_path() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bessel_zeros_500x500.bin")
}

/// The 500 x 500 zero table, computed once and cached under the target
/// directory so that later test binaries only load it.
pub fn zeros() -> &'static BesselZeroTable {
    static TABLE: OnceLock<BesselZeroTable> = OnceLock::new();
    TABLE.get_or_init(|| build_zero_table(FULL, FULL, Some(&cache_path())).expect("zero table"))
}

pub fn small_zeros(max_order: u32, max_index: u32) -> BesselZeroTable {
    zeros().truncated(max_order, max_index).expect("sub-table")
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}
