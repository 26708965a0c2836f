//! CSV and JSON emission.
//!
//! Every float is written in its shortest round-trip form, so parsing an
//! emitted file gives back the computed values bit for bit.

use std::collections::BTreeMap;
use std::path::Path;

use casimir_core::constants::{HBAR, HBAR_C, SPEED_OF_LIGHT};
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}'")),
        }
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            text: format!("{}\n", header.join(",")),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

#[derive(Debug, Serialize)]
pub struct Constants {
    pub hbar: f64,
    pub speed_of_light: f64,
    pub hbar_c: f64,
    /// Speed used to turn `omega_p` into a cutoff wavenumber.
    pub cutoff_c: f64,
}

impl Constants {
    pub fn new(cutoff_c: f64) -> Self {
        Self {
            hbar: HBAR,
            speed_of_light: SPEED_OF_LIGHT,
            hbar_c: HBAR_C,
            cutoff_c,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: String,
    pub config: BTreeMap<String, Value>,
    pub constants: Constants,
    pub results: Value,
    pub checksums: BTreeMap<String, String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Compute(format!("cannot write output: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.0, -0.0, 1.0, 51.185_251_566_9, 3.746e-9, 1e-300, 6.02e23, -2.5e-5, f64::MAX] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(2.5), "2.5");
        assert_eq!(fmt_f64(3.5e-9), "3.5e-9");
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(&["k", "I_a", "I_b"]);
        csv.row(&["10".into(), fmt_f64(1.5), fmt_f64(2.0)]);
        assert_eq!(csv.into_string(), "k,I_a,I_b\n10,1.5,2\n");
    }
}
