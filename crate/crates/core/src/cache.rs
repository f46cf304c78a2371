//! Structure cache files.
//!
//! A cache is a text file: a header of `key value` lines, the scenario as
//! one JSON line, one lowercase-hex mask per element in canonical order,
//! and a final `atoms` line of element indices. `body-sha256` covers every
//! line after the header and is verified on load, as is the scenario
//! digest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::algebra::{EffectStructure, StructureKind};
use crate::boxes::Scenario;
use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::product::scenario_factorization;

const MAGIC: &str = "boxlogic-structure 1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheHeader {
    pub scenario_sha256: String,
    pub k: usize,
    pub kind: StructureKind,
    pub cells: usize,
    pub elements: usize,
    pub atoms: usize,
    pub body_sha256: String,
    pub note: Option<String>,
}

fn kind_name(kind: StructureKind) -> &'static str {
    match kind {
        StructureKind::Logic => "logic",
        StructureKind::EffectAlgebra => "effect",
        StructureKind::Orthoposet => "omp",
        StructureKind::Abstract => "abstract",
    }
}

fn parse_kind(s: &str) -> Result<StructureKind> {
    Ok(match s {
        "logic" => StructureKind::Logic,
        "effect" => StructureKind::EffectAlgebra,
        "omp" => StructureKind::Orthoposet,
        other => return Err(Error::Cache(format!("unknown structure kind {other:?}"))),
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Default file name for a structure: scenario digest prefix, box count, kind.
pub fn cache_file_name(sc: &Scenario, kind: StructureKind) -> String {
    format!("{}-k{}-{}.cache", &sc.digest()[..16], sc.k(), kind_name(kind))
}

pub fn cache_path(dir: &Path, sc: &Scenario, kind: StructureKind) -> PathBuf {
    dir.join(cache_file_name(sc, kind))
}

/// Serializes a generated structure.
pub fn to_cache_string(s: &EffectStructure) -> Result<String> {
    let f = s
        .factorization()
        .ok_or_else(|| Error::Cache("only generated structures can be cached".into()))?;
    let mut body = String::new();
    body.push_str(&serde_json::to_string(&f.scenario)?);
    body.push('\n');
    for m in s.elements() {
        body.push_str(&m.to_hex());
        body.push('\n');
    }
    body.push_str("atoms");
    for a in s.atoms() {
        let _ = write!(body, " {a}");
    }
    body.push('\n');
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(out, "scenario-sha256 {}", f.scenario.digest());
    let _ = writeln!(out, "k {}", f.scenario.k());
    let _ = writeln!(out, "kind {}", kind_name(s.kind()));
    let _ = writeln!(out, "cells {}", s.cells());
    let _ = writeln!(out, "elements {}", s.len());
    let _ = writeln!(out, "atoms {}", s.atoms().len());
    if s.kind() == StructureKind::Orthoposet {
        out.push_str(
            "note states: one variable per atom; rho(1) = 1 and rho(q+a) = rho(q) + rho(a) \
             for every element q and atom a with a defined sum, elements valued by canonical atom covers\n",
        );
    }
    let _ = writeln!(out, "body-sha256 {}", hex(&Sha256::digest(body.as_bytes())));
    out.push_str(&body);
    Ok(out)
}

pub fn save(s: &EffectStructure, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, to_cache_string(s)?)?;
    Ok(())
}

/// Parses and verifies a cache, rebuilding the structure with its box
/// structure.
pub fn from_cache_str(text: &str) -> Result<(EffectStructure, CacheHeader)> {
    let bad = |m: &str| Error::Cache(m.to_string());
    let mut lines = text.split_inclusive('\n');
    if lines.next().map(str::trim_end) != Some(MAGIC) {
        return Err(bad("not a structure cache"));
    }
    let mut fields = std::collections::HashMap::new();
    let mut consumed = MAGIC.len() + 1;
    for line in lines.by_ref() {
        consumed += line.len();
        let (k, v) = line
            .trim_end()
            .split_once(' ')
            .ok_or_else(|| bad("malformed header line"))?;
        fields.insert(k.to_string(), v.to_string());
        if k == "body-sha256" {
            break;
        }
    }
    let field = |k: &str| fields.get(k).cloned().ok_or_else(|| Error::Cache(format!("missing header field {k}")));
    let num = |k: &str| -> Result<usize> { field(k)?.parse().map_err(|_| Error::Cache(format!("bad {k}"))) };
    let header = CacheHeader {
        scenario_sha256: field("scenario-sha256")?,
        k: num("k")?,
        kind: parse_kind(&field("kind")?)?,
        cells: num("cells")?,
        elements: num("elements")?,
        atoms: num("atoms")?,
        body_sha256: field("body-sha256")?,
        note: fields.get("note").cloned(),
    };
    let body = &text[consumed..];
    if hex(&Sha256::digest(body.as_bytes())) != header.body_sha256 {
        return Err(bad("body checksum mismatch"));
    }
    let mut body_lines = body.lines();
    let scenario: Scenario = serde_json::from_str(body_lines.next().ok_or_else(|| bad("missing scenario"))?)?;
    if scenario.digest() != header.scenario_sha256 || scenario.k() != header.k {
        return Err(bad("scenario does not match its digest"));
    }
    let mut elements = Vec::with_capacity(header.elements);
    let mut atoms_line = None;
    for line in body_lines {
        if let Some(rest) = line.strip_prefix("atoms") {
            atoms_line = Some(rest);
            break;
        }
        elements.push(Mask::from_hex(header.cells, line)?);
    }
    let atoms: Vec<usize> = atoms_line
        .ok_or_else(|| bad("missing atom list"))?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad("bad atom index")))
        .collect::<Result<_>>()?;
    if elements.len() != header.elements || atoms.len() != header.atoms {
        return Err(bad("counts differ from the header"));
    }
    if !elements.windows(2).all(|w| w[0] < w[1]) || atoms.iter().any(|&a| a >= elements.len()) {
        return Err(bad("elements are not in canonical order"));
    }
    let f = scenario_factorization(&scenario)?;
    if f.cells() != header.cells {
        return Err(bad("cell count differs from the scenario"));
    }
    let s = EffectStructure::concrete_sorted(header.cells, elements, atoms, header.kind, Some(Arc::new(f)))?;
    Ok((s, header))
}

pub fn load(path: &Path) -> Result<(EffectStructure, CacheHeader)> {
    let text = fs::read_to_string(path)?;
    from_cache_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::BoxSpec;
    use crate::product::{generate, GenerationKind};

    #[test]
    fn round_trip_and_tamper() {
        let sc = Scenario::homogeneous(&BoxSpec::binary(), 2);
        let (s, _) = generate(&sc, GenerationKind::Orthoposet, &Default::default()).unwrap();
        let text = to_cache_string(&s).unwrap();
        let (t, h) = from_cache_str(&text).unwrap();
        assert_eq!(h.elements, 82);
        assert!(h.note.is_some());
        assert_eq!(t.elements(), s.elements());
        assert_eq!(t.atoms(), s.atoms());
        assert_eq!(t.kind(), s.kind());
        assert_eq!(t.factorization().unwrap().events, s.factorization().unwrap().events);
        assert_eq!(to_cache_string(&t).unwrap(), text);

        let tampered = text.replacen("\n0000\n", "\n0001\n", 1);
        assert_ne!(tampered, text);
        assert!(matches!(from_cache_str(&tampered), Err(Error::Cache(_))));
        assert!(from_cache_str("hello").is_err());
    }
}
