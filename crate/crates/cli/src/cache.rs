//! On-disk prime tables.
//!
//! Layout, all integers little-endian:
//!
//! | offset | size      | field                    |
//! |--------|-----------|--------------------------|
//! | 0      | 4         | magic `BCPC`             |
//! | 4      | 4         | format version (`u32`)   |
//! | 8      | 8         | sieve limit (`u64`)      |
//! | 16     | 8         | prime count (`u64`)      |
//! | 24     | 8 × count | primes, ascending (`u64`) |

use std::fs;
use std::path::{Path, PathBuf};

use bcp_core::arith::{self, PrimeTable};

use crate::error::{CliError, CliResult};

pub const MAGIC: &[u8; 4] = b"BCPC";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 24;

pub fn encode(table: &PrimeTable) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * table.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&table.limit().to_le_bytes());
    buf.extend_from_slice(&(table.len() as u64).to_le_bytes());
    for &p in table.primes() {
        buf.extend_from_slice(&p.to_le_bytes());
    }
    buf
}

fn u64_at(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
}

/// Parses a cache image; the error names the first field that is wrong.
pub fn decode(bytes: &[u8], path: &Path) -> CliResult<PrimeTable> {
    let fail =
        |field: &'static str, detail: String| CliError::Cache { path: path.display().to_string(), field, detail };
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(fail("magic", format!("expected {:?}", std::str::from_utf8(MAGIC).unwrap())));
    }
    if bytes.len() < 8 {
        return Err(fail("version", "file ends inside the header".into()));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(fail("version", format!("found {version}, supported {VERSION}")));
    }
    if bytes.len() < HEADER_LEN {
        return Err(fail("count mismatch", "file ends inside the header".into()));
    }
    let limit = u64_at(bytes, 8);
    let count = u64_at(bytes, 16);
    let body = (bytes.len() - HEADER_LEN) as u64;
    if body % 8 != 0 || body / 8 != count {
        return Err(fail("count mismatch", format!("header says {count} primes, body holds {body} bytes")));
    }
    let primes: Vec<u64> = (0..count as usize).map(|k| u64_at(bytes, HEADER_LEN + 8 * k)).collect();
    if let Some(k) = primes.windows(2).position(|w| w[0] >= w[1]) {
        return Err(fail("order", format!("entry {} = {} is not above {}", k + 1, primes[k + 1], primes[k])));
    }
    if let Some(&last) = primes.last() {
        if last > limit {
            return Err(fail("limit", format!("prime {last} exceeds limit {limit}")));
        }
    }
    PrimeTable::from_parts_checked(limit, primes).map_err(|e| fail("primes", e.to_string()))
}

pub fn write_table(path: &Path, table: &PrimeTable) -> CliResult<()> {
    let tmp = path.with_extension("bcpc.tmp");
    fs::write(&tmp, encode(table))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_table(path: &Path) -> CliResult<PrimeTable> {
    decode(&fs::read(path)?, path)
}

pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("primes-{limit}.bcpc"))
}

/// Primes up to `limit`, through the cache when a directory is given.
/// A corrupt cache file is an error, never silently rebuilt.
pub fn load_or_build(dir: Option<&Path>, limit: u64) -> CliResult<PrimeTable> {
    let Some(dir) = dir else {
        return Ok(arith::sieve_primes(limit)?);
    };
    let path = cache_path(dir, limit);
    if path.exists() {
        log::info!("loading primes from {}", path.display());
        let table = read_table(&path)?;
        if table.limit() != limit {
            return Err(CliError::Cache {
                path: path.display().to_string(),
                field: "limit",
                detail: format!("file holds limit {}, wanted {limit}", table.limit()),
            });
        }
        return Ok(table);
    }
    let table = arith::sieve_primes(limit)?;
    fs::create_dir_all(dir)?;
    write_table(&path, &table)?;
    log::info!("wrote {} primes to {}", table.len(), path.display());
    Ok(table)
}
