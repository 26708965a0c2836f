//! Binary zero-table cache.
//!
//! Layout, all little-endian:
//!
//! | offset | size | field                                    |
//! |--------|------|------------------------------------------|
//! | 0      | 8    | magic `b"BESSZERO"`                      |
//! | 8      | 4    | format version (`u32`, currently 1)      |
//! | 12     | 4    | `max_order` (`u32`)                      |
//! | 16     | 4    | `max_index` (`u32`)                      |
//! | 20     | 8    | accuracy (`f64`)                         |
//! | 28     | 8·R  | zeros, row-major, `R = (max_order+1)·max_index` |
//! | 28+8R  | 32   | SHA-256 of every preceding byte          |

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::specfun::zeros::BesselZeroTable;

pub const MAGIC: [u8; 8] = *b"BESSZERO";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 28;
pub const CHECKSUM_LEN: usize = 32;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "CASIMIR_ZERO_CACHE_DIR";

/// What [`build_zero_table_with`](crate::specfun::build_zero_table_with) did with the cache.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheOutcome {
    /// No cache path was given.
    Uncached,
    /// A valid cache covering the range was loaded.
    Loaded,
    /// No cache existed; the table was computed and written.
    Computed,
    /// A valid cache existed but was too small; a larger table replaced it.
    Extended,
    /// The cache failed validation and was recomputed.
    Recomputed { reason: String },
}

/// Default cache file for a table of the given size, if the environment
/// variable is set.
pub fn default_cache_path(max_order: u32, max_index: u32) -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(|d| PathBuf::from(d).join(cache_file_name(max_order, max_index)))
}

pub fn cache_file_name(max_order: u32, max_index: u32) -> String {
    format!("bessel_zeros_m{max_order}_n{max_index}.bin")
}

pub fn encode(table: &BesselZeroTable) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * table.len() + CHECKSUM_LEN);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&table.max_order().to_le_bytes());
    out.extend_from_slice(&table.max_index().to_le_bytes());
    out.extend_from_slice(&table.accuracy().to_le_bytes());
    for z in table.as_slice() {
        out.extend_from_slice(&z.to_le_bytes());
    }
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    out
}

/// Parses and verifies a serialized table; the error string says why it was rejected.
pub fn decode(bytes: &[u8]) -> std::result::Result<BesselZeroTable, String> {
    if bytes.len() < HEADER_LEN + CHECKSUM_LEN {
        return Err(format!("file too short ({} bytes)", bytes.len()));
    }
    if bytes[..8] != MAGIC {
        return Err("bad magic".into());
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let version = u32_at(8);
    if version != VERSION {
        return Err(format!("unsupported version {version}"));
    }
    let max_order = u32_at(12);
    let max_index = u32_at(16);
    let accuracy = f64::from_le_bytes(bytes[20..28].try_into().unwrap());
    let count = (max_order as usize + 1)
        .checked_mul(max_index as usize)
        .ok_or("table dimensions overflow")?;
    let expected = HEADER_LEN + 8 * count + CHECKSUM_LEN;
    if max_index == 0 || bytes.len() != expected {
        return Err(format!("length {} does not match header (expected {expected})", bytes.len()));
    }
    let body = &bytes[..expected - CHECKSUM_LEN];
    if Sha256::digest(body).as_slice() != &bytes[expected - CHECKSUM_LEN..] {
        return Err("checksum mismatch".into());
    }
    let zeros = body[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(BesselZeroTable::from_parts(max_order, max_index, zeros, accuracy))
}

/// Reads a cache file. `Ok(None)` if it does not exist; `Err(Error::Cache)`
/// if it exists but is corrupt; `Err(Error::Io)` if it cannot be read.
pub fn read(path: &Path) -> Result<Option<BesselZeroTable>> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    decode(&bytes).map(Some).map_err(|reason| Error::Cache {
        path: path.to_path_buf(),
        reason,
    })
}

/// Writes a cache file atomically (temporary file + rename).
pub fn write(path: &Path, table: &BesselZeroTable) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, encode(table))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn checksum_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
