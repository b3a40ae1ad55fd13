//! Optional on-disk cache for invariant-subspace bases.
//!
//! Keyed by (Cartan type, generator subset, degree); files store one
//! polynomial per line in the text format, preceded by a header line. The
//! directory comes from the FLAGCOH_CACHE environment variable (or an
//! explicit override); the cache is disabled when unset. Reads are strict:
//! any malformed or inconsistent file is treated as a miss.

use crate::invariants::{invariant_subspace, GradedBasis};
use crate::polyalg::Polynomial;
use crate::rootsys::{ParabolicSubset, RootSystem};
use std::fs;
use std::path::PathBuf;

pub const CACHE_ENV_VAR: &str = "FLAGCOH_CACHE";

#[derive(Debug, Clone)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    /// Cache configured from the environment; None when the variable is
    /// unset or empty.
    pub fn from_env() -> Option<Self> {
        match std::env::var(CACHE_ENV_VAR) {
            Ok(dir) if !dir.trim().is_empty() => Some(DiskCache::new(dir)),
            _ => None,
        }
    }

    fn file_path(&self, rs: &RootSystem, gens: &ParabolicSubset, degree: u32) -> PathBuf {
        let gens_part = if gens.is_empty() {
            "none".to_string()
        } else {
            gens.nodes()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join("-")
        };
        self.dir
            .join(rs.cartan_type().to_string())
            .join(format!("g{gens_part}_d{degree}.basis"))
    }

    pub fn load(&self, rs: &RootSystem, gens: &ParabolicSubset, degree: u32) -> Option<GradedBasis> {
        let path = self.file_path(rs, gens, degree);
        let text = fs::read_to_string(path).ok()?;
        parse_basis_file(&text, rs.rank(), degree)
    }

    pub fn store(&self, rs: &RootSystem, gens: &ParabolicSubset, degree: u32, basis: &GradedBasis) {
        let path = self.file_path(rs, gens, degree);
        if let Some(parent) = path.parent() {
            if fs::create_dir_all(parent).is_err() {
                return;
            }
        }
        let mut text = format!(
            "basis type={} gens={} degree={} count={}\n",
            rs.cartan_type(),
            if gens.is_empty() {
                "none".to_string()
            } else {
                gens.nodes()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            },
            degree,
            basis.basis.len()
        );
        for p in &basis.basis {
            text.push_str(&p.to_text());
            text.push('\n');
        }
        // best effort: a failed write only disables reuse
        let tmp = path.with_extension("tmp");
        if fs::write(&tmp, text).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
    }
}

/// Strict parse of a cache file: header `basis ... degree=<d> count=<k>`
/// followed by k polynomial lines, all homogeneous of the expected degree.
pub fn parse_basis_file(text: &str, rank: usize, degree: u32) -> Option<GradedBasis> {
    let mut lines = text.lines();
    let header = lines.next()?;
    if !header.starts_with("basis ") {
        return None;
    }
    let mut count: Option<usize> = None;
    let mut header_degree: Option<u32> = None;
    for field in header.split_whitespace().skip(1) {
        let (key, value) = field.split_once('=')?;
        match key {
            "count" => count = value.parse().ok(),
            "degree" => header_degree = value.parse().ok(),
            _ => {}
        }
    }
    let count = count?;
    if header_degree != Some(degree) || count > 100_000 {
        return None;
    }
    let mut basis = Vec::with_capacity(count);
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let p = Polynomial::parse_text(line, rank).ok()?;
        if !p.is_homogeneous_of(degree) || p.is_zero() {
            return None;
        }
        basis.push(p);
    }
    if basis.len() != count {
        return None;
    }
    Some(GradedBasis { degree, basis })
}

/// Invariant subspace with optional read-through cache.
pub fn invariant_subspace_cached(
    rs: &RootSystem,
    gens: &ParabolicSubset,
    degree: u32,
    cache: Option<&DiskCache>,
) -> GradedBasis {
    if let Some(c) = cache {
        if let Some(hit) = c.load(rs, gens, degree) {
            return hit;
        }
    }
    let basis = invariant_subspace(rs, gens, degree);
    if let Some(c) = cache {
        c.store(rs, gens, degree, &basis);
    }
    basis
}
