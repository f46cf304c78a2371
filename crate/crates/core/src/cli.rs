//! The `boxlogic` command line.
//!
//! Every command prints one JSON document on standard output; diagnostics
//! go to standard error. Exit codes: 0 success, 1 check mismatch or other
//! failure, 2 missing or unreadable input, 3 resource cap.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    check_coherence_law, check_effect_algebra, check_lattice_and_boolean, check_orthoposet, CheckOptions,
    EffectStructure, StructureKind,
};
use crate::boxes::{BoxSpec, Scenario};
use crate::cache::{self, CacheHeader};
use crate::error::{Error, Result};
use crate::lo::{
    build_orthogonality_graph, check_lo_copies, check_lo_violations, enumerate_lo_inequalities, CliqueOptions,
    CopiesOptions,
};
use crate::product::{generate, localized_elements, GenerationKind, GenerationOptions};
use crate::rational::{self, Q};
use crate::states::{
    build_state_polytope, check_order_determining, classical_states, PRState, PrJson, StatePolytope,
};

#[derive(Debug, Parser)]
#[command(name = "boxlogic", version, about = "Propositional structures of k-box no-signaling models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a structure and write it to the cache.
    Generate(GenerateArgs),
    /// Run structural checks on a cached structure.
    Check(CheckArgs),
    /// LP bounds of LO inequalities on a cached structure.
    LoCheck(LoArgs),
    /// Maximize a linear objective over a state polytope.
    LpMax(LpArgs),
    /// Elements localized on a subset of boxes.
    Localized(LocalizedArgs),
    /// Test copies of a PR-state against LO inequalities.
    Copies(CopiesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Effect,
    Omp,
}

impl From<KindArg> for GenerationKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Effect => GenerationKind::EffectAlgebra,
            KindArg::Omp => GenerationKind::Orthoposet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolytopeArg {
    /// One variable per event, normalization and no-signaling rows.
    Ns,
    /// One variable per atom of the structure, additivity rows.
    Additivity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum CheckName {
    Axioms,
    Coherence,
    Omp,
    Lattice,
    OrderDet,
}

#[derive(Debug, Args)]
pub struct CacheDir {
    /// Structure cache directory.
    #[arg(long, env = "BOXLOGIC_CACHE_DIR", default_value = ".boxlogic-cache")]
    pub cache_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Box specification JSON: {"inputs": [{"name": .., "outcomes": [..]}]}.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(short, long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "effect")]
    pub kind: KindArg,
    #[command(flatten)]
    pub cache: CacheDir,
    #[arg(long, default_value_t = crate::product::DEFAULT_MAX_ELEMENTS)]
    pub max_elements: usize,
    /// Single-threaded closure.
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Args)]
pub struct StructureArg {
    /// Cache file, absolute or relative to the cache directory.
    #[arg(long)]
    pub structure: PathBuf,
    #[command(flatten)]
    pub cache: CacheDir,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: StructureArg,
    /// Checks to run (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub checks: Vec<CheckName>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct LoArgs {
    #[command(flatten)]
    pub input: StructureArg,
    /// Largest inequality size. Without --maximal-only, every clique up to
    /// this size is checked.
    #[arg(long)]
    pub max_size: Option<usize>,
    #[arg(long)]
    pub maximal_only: bool,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_cliques: usize,
    /// Defaults to `additivity` for orthoposets and `ns` otherwise.
    #[arg(long, value_enum)]
    pub polytope: Option<PolytopeArg>,
}

#[derive(Debug, Args)]
pub struct LpArgs {
    #[command(flatten)]
    pub input: StructureArg,
    /// Objective file: one `event [coefficient]` per line; events by name
    /// (e.g. `x0y1`) or index, coefficients as `num/den` (default 1).
    #[arg(long)]
    pub objective: PathBuf,
    #[arg(long, value_enum, default_value = "ns")]
    pub polytope: PolytopeArg,
}

#[derive(Debug, Args)]
pub struct LocalizedArgs {
    #[command(flatten)]
    pub input: StructureArg,
    /// Zero-based box indices.
    #[arg(long, value_delimiter = ',', required = true)]
    pub boxes: Vec<usize>,
    /// Second structure whose localized elements are compared.
    #[arg(long)]
    pub compare: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CopiesArgs {
    /// PR-state JSON: {"contexts": [{"inputs": [..], "probs": {"0,1": "1/2", ..}}]}.
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(short, long)]
    pub k: usize,
    #[arg(short, long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = CopiesOptions::default().node_limit)]
    pub node_limit: usize,
}

/// Outcome of a command: the JSON document and whether it matched expectations.
struct Output {
    doc: Value,
    ok: bool,
}

impl Output {
    fn ok(doc: Value) -> Self {
        Output { doc, ok: true }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource { .. } => 3,
        Error::Io(_) | Error::Json(_) | Error::Parse(_) | Error::Cache(_) | Error::InvalidSpec(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = serde_json::to_writer_pretty(&mut stdout, &out.doc);
            let _ = writeln!(stdout);
            if out.ok {
                0
            } else {
                eprintln!("boxlogic: results differ from the expected classification");
                1
            }
        }
        Err(e) => {
            eprintln!("boxlogic: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Generate(a) => cmd_generate(a),
        Command::Check(a) => cmd_check(a),
        Command::LoCheck(a) => cmd_lo(a),
        Command::LpMax(a) => cmd_lp(a),
        Command::Localized(a) => cmd_localized(a),
        Command::Copies(a) => cmd_copies(a),
    }
}

fn read_spec(path: &Path) -> Result<BoxSpec> {
    BoxSpec::from_json(&fs::read_to_string(path)?)
}

fn resolve(path: &Path, dir: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        path.to_path_buf()
    } else {
        dir.join(path)
    }
}

fn load_structure(a: &StructureArg) -> Result<(EffectStructure, CacheHeader)> {
    let path = resolve(&a.structure, &a.cache.cache_dir);
    eprintln!("loading {}", path.display());
    cache::load(&path).map_err(|e| with_path(e, &path))
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    }
}

fn kind_label(kind: StructureKind) -> &'static str {
    match kind {
        StructureKind::Logic => "logic",
        StructureKind::EffectAlgebra => "effect",
        StructureKind::Orthoposet => "omp",
        StructureKind::Abstract => "abstract",
    }
}

fn cmd_generate(a: &GenerateArgs) -> Result<Output> {
    let spec = read_spec(&a.spec)?;
    let sc = Scenario::homogeneous(&spec, a.k);
    let opts = GenerationOptions {
        parallel: !a.serial,
        max_elements: a.max_elements,
        ..Default::default()
    };
    let (s, report) = generate(&sc, a.kind.into(), &opts)?;
    let path = cache::cache_path(&a.cache.cache_dir, &sc, s.kind());
    cache::save(&s, &path)?;
    eprintln!("wrote {}", path.display());
    Ok(Output::ok(json!({
        "elements": report.element_count,
        "atoms": report.atom_count,
        "closure_rounds": report.closure_rounds,
        "wall_time_ms": report.wall_time.as_millis() as u64,
        "kind": kind_label(s.kind()),
        "k": a.k,
        "cache": path,
    })))
}

/// Label of an element for reports: the event name when it is an event,
/// otherwise its hex mask.
pub fn element_label(s: &EffectStructure, p: usize) -> String {
    if let Some(f) = s.factorization() {
        if let Some(e) = f.events.iter().position(|m| m == s.element(p)) {
            return f.scenario.event_name(e);
        }
    }
    s.element(p).to_hex()
}

fn labels(s: &EffectStructure, w: &[usize]) -> Vec<String> {
    w.iter().map(|&p| element_label(s, p)).collect()
}

/// Expected outcome per check for the binary box, from the classification
/// of k-box models: one box gives an orthomodular lattice, two boxes an
/// orthomodular poset, three boxes an effect algebra violating the
/// coherence law; classical point-mass states determine the order.
pub fn expected_classification(s: &EffectStructure) -> Vec<(CheckName, bool)> {
    let Some(f) = s.factorization() else { return Vec::new() };
    if f.scenario.boxes.iter().any(|b| *b != BoxSpec::binary()) {
        return Vec::new();
    }
    let k = f.scenario.k();
    let omp = s.kind() == StructureKind::Orthoposet;
    let mut out = vec![(CheckName::Axioms, true)];
    match k {
        1 => out.extend([
            (CheckName::Coherence, true),
            (CheckName::Omp, true),
            (CheckName::Lattice, true),
            (CheckName::OrderDet, true),
        ]),
        2 => out.extend([(CheckName::Coherence, true), (CheckName::Omp, true), (CheckName::OrderDet, true)]),
        3 if omp => out.extend([(CheckName::Coherence, true), (CheckName::Omp, true)]),
        3 => out.extend([(CheckName::Coherence, false), (CheckName::Omp, false), (CheckName::OrderDet, true)]),
        _ => {}
    }
    out
}

fn cmd_check(a: &CheckArgs) -> Result<Output> {
    let (s, header) = load_structure(&a.input)?;
    let checks: Vec<CheckName> = if a.checks.is_empty() {
        CheckName::value_variants().to_vec()
    } else {
        a.checks.clone()
    };
    let opts = CheckOptions {
        seed: a.seed,
        ..Default::default()
    };
    let expected = expected_classification(&s);
    let mut results = serde_json::Map::new();
    let mut ok = true;
    for c in checks {
        let (name, pass, doc) = match c {
            CheckName::Axioms => {
                let r = check_effect_algebra(&s, &opts)?;
                let pass = r.iter().all(|x| x.pass);
                ("axioms", pass, serde_json::to_value(&r)?)
            }
            CheckName::Coherence => {
                let r = check_coherence_law(&s, &opts);
                let mut v = serde_json::to_value(&r)?;
                v["witness_labels"] = json!(labels(&s, &r.witness));
                ("coherence", r.pass, v)
            }
            CheckName::Omp => {
                let r = check_orthoposet(&s, &opts);
                ("omp", r.iter().all(|x| x.pass), serde_json::to_value(&r)?)
            }
            CheckName::Lattice => {
                let r = check_lattice_and_boolean(&s, &opts);
                ("lattice", r.is_lattice, serde_json::to_value(&r)?)
            }
            CheckName::OrderDet => {
                let r = check_order_determining(&s, &classical_states(&s))?;
                let mut v = serde_json::to_value(&r)?;
                v["witness_labels"] = json!(labels(&s, &r.witness));
                ("order-det", r.pass, v)
            }
        };
        let want = expected.iter().find(|e| e.0 == c).map(|e| e.1);
        if want.is_some_and(|w| w != pass) {
            ok = false;
        }
        results.insert(
            name.to_string(),
            json!({ "pass": pass, "expected": want, "report": doc }),
        );
    }
    Ok(Output {
        doc: json!({
            "structure": header_json(&header),
            "checks": results,
            "matches_expected": ok,
        }),
        ok,
    })
}

fn header_json(h: &CacheHeader) -> Value {
    json!({
        "k": h.k,
        "kind": kind_label(h.kind),
        "cells": h.cells,
        "elements": h.elements,
        "atoms": h.atoms,
        "scenario_sha256": h.scenario_sha256,
    })
}

fn polytope_for(s: &EffectStructure, which: PolytopeArg) -> Result<StatePolytope> {
    match which {
        PolytopeArg::Ns => build_state_polytope(s),
        PolytopeArg::Additivity => StatePolytope::additivity(s),
    }
}

fn cmd_lo(a: &LoArgs) -> Result<Output> {
    let (s, _) = load_structure(&a.input)?;
    let g = build_orthogonality_graph(&s)?;
    let opts = CliqueOptions {
        max_size: a.max_size.unwrap_or(usize::MAX),
        maximal_only: a.maximal_only || a.max_size.is_none(),
        max_cliques: a.max_cliques,
    };
    let ineqs = enumerate_lo_inequalities(&g, &opts)?;
    let which = a.polytope.unwrap_or(if s.kind() == StructureKind::Orthoposet {
        PolytopeArg::Additivity
    } else {
        PolytopeArg::Ns
    });
    let poly = polytope_for(&s, which)?;
    eprintln!(
        "{} inequalities, polytope with {} variables and rank {}",
        ineqs.len(),
        poly.vars,
        poly.rank()
    );
    let report = check_lo_violations(&s, &poly, ineqs)?;
    eprintln!(
        "{} violated, largest LP value {}",
        report.violations,
        rational::to_string(&report.max_lp)
    );
    Ok(Output::ok(serde_json::to_value(&report.entries)?))
}

/// Parses an objective file against a scenario.
pub fn parse_objective(text: &str, sc: &Scenario) -> Result<Vec<Q>> {
    let mut c = vec![rational::zero(); sc.event_count()];
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let ev = parts.next().expect("line is not empty");
        let e = match ev.parse::<usize>() {
            Ok(i) if i < sc.event_count() => i,
            Ok(i) => return Err(Error::Parse(format!("event index {i} out of range"))),
            Err(_) => sc
                .parse_event(ev)
                .ok_or_else(|| Error::Parse(format!("unknown event {ev:?}")))?,
        };
        let coef = match parts.next() {
            Some(t) => rational::parse(t)?,
            None => rational::one(),
        };
        c[e] += coef;
    }
    Ok(c)
}

#[derive(Serialize)]
struct LpDoc {
    optimum: String,
    argmax: std::collections::BTreeMap<String, String>,
    variables: usize,
    rank: usize,
}

fn cmd_lp(a: &LpArgs) -> Result<Output> {
    let (s, _) = load_structure(&a.input)?;
    let f = s
        .factorization()
        .ok_or_else(|| Error::Structural("structure has no recorded box structure".into()))?;
    let events = parse_objective(&fs::read_to_string(&a.objective)?, &f.scenario)?;
    let poly = polytope_for(&s, a.polytope)?;
    // Objective in polytope variables and a name for every variable.
    let (objective, names): (Vec<Q>, Vec<String>) = match a.polytope {
        PolytopeArg::Ns => (events, (0..poly.vars).map(|e| f.scenario.event_name(e)).collect()),
        PolytopeArg::Additivity => {
            let mut c = vec![rational::zero(); poly.vars];
            for (e, q) in events.into_iter().enumerate() {
                if q != rational::zero() {
                    let pos = s
                        .atoms()
                        .iter()
                        .position(|&at| s.element(at) == &f.events[e])
                        .ok_or_else(|| Error::Structural("an event is not an atom".into()))?;
                    c[pos] += q;
                }
            }
            (c, s.atoms().iter().map(|&at| element_label(&s, at)).collect())
        }
    };
    let sol = poly.maximize_linear(&objective)?;
    let argmax = sol
        .argmax
        .atom_values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != rational::zero())
        .map(|(i, v)| (names[i].clone(), rational::to_string(v)))
        .collect();
    Ok(Output::ok(serde_json::to_value(LpDoc {
        optimum: rational::to_string(&sol.optimum),
        argmax,
        variables: poly.vars,
        rank: poly.rank(),
    })?))
}

fn cmd_localized(a: &LocalizedArgs) -> Result<Output> {
    let (s, _) = load_structure(&a.input)?;
    let mine = localized_elements(&s, &a.boxes)?;
    let mut doc = json!({
        "boxes": a.boxes,
        "count": mine.len(),
        "elements": mine.iter().map(|m| m.to_hex()).collect::<Vec<_>>(),
    });
    if let Some(other) = &a.compare {
        let path = resolve(other, &a.input.cache.cache_dir);
        let (t, _) = cache::load(&path).map_err(|e| with_path(e, &path))?;
        let theirs = localized_elements(&t, &a.boxes)?;
        doc["compare_count"] = json!(theirs.len());
        doc["identical"] = json!(theirs == mine);
    }
    Ok(Output::ok(doc))
}

fn cmd_copies(a: &CopiesArgs) -> Result<Output> {
    let spec = read_spec(&a.spec)?;
    let sc = Scenario::homogeneous(&spec, a.k);
    let doc: PrJson = serde_json::from_str(&fs::read_to_string(&a.state)?)?;
    let p = PRState::from_json(sc, &doc)?;
    let r = check_lo_copies(
        &p,
        a.n,
        &CopiesOptions {
            node_limit: a.node_limit,
        },
    )?;
    Ok(Output::ok(serde_json::to_value(&r)?))
}
