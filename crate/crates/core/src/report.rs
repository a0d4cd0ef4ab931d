//! Command-line front end. The binary is a thin wrapper around [`run`].

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::criterion::{evaluate_pair, rational_grid, side_invariant, sweep, PairOptions, Verdict};
use crate::invariants::{area_spectrum, boundary_sum, cancellation_threshold, least_area, InvariantError};
use crate::potential::{
    bulk_deform, residue_critical_points, unit_critical_analysis, NovikovPolynomial, PotentialError, Var,
};
use crate::probes::{search_probes, Polytope2, PolytopeDoc, ProbeError};
use crate::ring::{format_rational, parse_rational, Ring, RingElement, RingError};
use crate::scenario::{
    builtin_names, builtin_scenario, load_scenario, parse_builtin_spec, resolve_scenario_path, LocalSystem, Scenario,
    ScenarioError,
};
use crate::subspace::{AffineSubspace, SubspaceError, SubspaceSpec};

/// Environment variable holding a colon-separated scenario search path.
pub const SEARCH_PATH_VAR: &str = "FLOER_LEDGER_PATH";

#[derive(Debug, Parser)]
#[command(
    name = "lowarea",
    version,
    about = "Exact low-area disk invariants and non-displaceability checks"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a scenario.
    Validate(ScenarioArgs),
    /// Area spectrum, cancellation and the low-area invariant of each side.
    Invariant(InvariantArgs),
    /// Evaluate the non-displaceability criterion on two sides.
    Criterion(CriterionArgs),
    /// Evaluate the criterion over a parameter grid of a built-in scenario.
    Sweep(SweepArgs),
    /// Superpotential of a side and its critical-point analysis.
    Potential(PotentialArgs),
    /// Search for displacing probes in a polygon.
    Probes(ProbesArgs),
    /// List the built-in scenarios.
    BuiltinList,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario JSON file (searched in $FLOER_LEDGER_PATH when relative).
    #[arg(conflicts_with_all = ["scenario", "builtin"])]
    pub path: Option<PathBuf>,
    #[arg(long, conflicts_with = "builtin")]
    pub scenario: Option<PathBuf>,
    /// Built-in scenario, `name[:key=p/q,...]`.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Second scenario to pair with, as a built-in spec or a file path.
    #[arg(long)]
    pub vs: Option<String>,
}

#[derive(Debug, Args)]
pub struct CoefficientArgs {
    /// Coefficient ring Q: Z, Q, Z/<n> or F<p>. Defaults to the scenario's ring.
    #[arg(long)]
    pub ring: Option<Ring>,
    /// Use the sides' affine subspaces over the field `--field`.
    #[arg(long, requires_all = ["field", "ring"])]
    pub subspaces: bool,
    /// Field k for subspaces.
    #[arg(long)]
    pub field: Option<Ring>,
    /// Subspace for the first side, `base;span1;span2...` with comma-separated integers.
    #[arg(long, requires = "subspaces")]
    pub subspace: Option<String>,
    /// Subspace for the second side.
    #[arg(long, requires = "subspaces")]
    pub vs_subspace: Option<String>,
    /// Local system on the first side, `gen=unit,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub local_system: Option<String>,
    /// Local system on the second side.
    #[arg(long, allow_hyphen_values = true)]
    pub vs_local_system: Option<String>,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub coeffs: CoefficientArgs,
}

#[derive(Debug, Args)]
pub struct CriterionArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub coeffs: CoefficientArgs,
    /// Use the cancellation threshold as the next area of the non-monotone side.
    #[arg(long)]
    pub monotone_variant: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Built-in scenario whose parameter is swept, `name[:key=p/q,...]`.
    #[arg(long)]
    pub builtin: String,
    /// Second side, as a built-in spec or a file path.
    #[arg(long)]
    pub vs: String,
    #[command(flatten)]
    pub coeffs: CoefficientArgs,
    #[arg(long)]
    pub monotone_variant: bool,
    #[arg(long)]
    pub param: String,
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    #[arg(long)]
    pub step: String,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Side index.
    #[arg(long, default_value_t = 0)]
    pub side: usize,
    /// Bulk deformation: disk label hit by the divisor, `label=n` (repeatable).
    #[arg(long)]
    pub bulk: Vec<String>,
    /// Run the unit critical-point analysis.
    #[arg(long)]
    pub analyze_units: bool,
    /// Search residue critical points of the lowest level over this ring.
    #[arg(long)]
    pub residue_ring: Option<Ring>,
    /// Keep only the given t-level (defaults to the full polynomial).
    #[arg(long)]
    pub truncate: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DefaultPolytope {
    Quadric,
    Cp2,
}

#[derive(Debug, Args)]
pub struct ProbesArgs {
    /// Polygon JSON file.
    #[arg(conflicts_with = "default")]
    pub polytope: Option<PathBuf>,
    /// Use a built-in semitoric polygon instead of a file.
    #[arg(long, value_enum)]
    pub default: Option<DefaultPolytope>,
    /// Point `x,y` with exact rational coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Bound on direction components.
    #[arg(long, default_value_t = 3)]
    pub bound: i64,
}

/// Errors classified by exit code.
#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(ScenarioError),
    #[error("{0}")]
    Computation(String),
}

impl ReportError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Usage(_) => 2,
            ReportError::Validation(_) => 3,
            ReportError::Computation(_) => 4,
        }
    }

    fn to_json(&self) -> Value {
        let kind = match self {
            ReportError::Usage(_) => "usage",
            ReportError::Validation(_) => "validation",
            ReportError::Computation(_) => "computation",
        };
        let mut v = json!({"kind": kind, "code": self.exit_code(), "message": self.to_string()});
        if let ReportError::Validation(ScenarioError::Validation { invariant, .. }) = self {
            v["invariant"] = json!(invariant);
        }
        v
    }
}

impl From<ScenarioError> for ReportError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::UnknownScenario(_) | ScenarioError::BadParams(_) | ScenarioError::NotFound(_) => {
                ReportError::Usage(e.to_string())
            }
            other => ReportError::Validation(other),
        }
    }
}

macro_rules! computation_error {
    ($($t:ty),*) => {$(
        impl From<$t> for ReportError {
            fn from(e: $t) -> Self {
                ReportError::Computation(e.to_string())
            }
        }
    )*};
}

computation_error!(
    InvariantError,
    PotentialError,
    ProbeError,
    SubspaceError,
    crate::criterion::CriterionError
);

impl From<RingError> for ReportError {
    fn from(e: RingError) -> Self {
        ReportError::Usage(e.to_string())
    }
}

/// The deterministic output document.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Vec<String>,
    pub digests: BTreeMap<String, String>,
    pub results: Value,
    pub warnings: Vec<String>,
    pub version: String,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "digests": self.digests,
            "results": self.results,
            "warnings": self.warnings,
            "version": self.version,
        })
    }
}

/// Renders a JSON value as indented `key: value` lines.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Object(o) if o.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn render_into(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_into(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Parses `argv` (without the program name), writes the report, and returns
/// the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("lowarea".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let search = std::env::var(SEARCH_PATH_VAR).ok();
    let mut report = Report {
        command: args,
        digests: BTreeMap::new(),
        results: Value::Null,
        warnings: Vec::new(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let outcome = execute(&cli.command, search.as_deref(), &mut report);
    let code = match &outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            report.results = json!({"error": e.to_json()});
            e.exit_code()
        }
    };
    let doc = report.to_json();
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("report serializes") + "\n",
        Format::Text => render_text(&doc),
    };
    let _ = stdout.write_all(text.as_bytes());
    code
}

fn execute(cmd: &Command, search: Option<&str>, report: &mut Report) -> Result<(), ReportError> {
    match cmd {
        Command::Validate(a) => {
            let s = load_pair(a, search, report)?;
            report.results = json!({
                "valid": true,
                "sides": s.sides.iter().map(|x| x.name.clone()).collect::<Vec<_>>(),
                "ring": s.coefficient_ring.to_string(),
                "h2_x": s.h2_x.labels(),
                "scenario": serde_json::to_value(s.doc()).expect("scenario serializes"),
            });
        }
        Command::Invariant(a) => {
            let s = load_pair(&a.scenario, search, report)?;
            let opts = pair_options(&s, &a.coeffs, false)?;
            let sides = (0..s.sides.len())
                .map(|i| invariant_json(&s, i, &opts, &mut report.warnings))
                .collect::<Result<Vec<_>, _>>()?;
            report.results = json!({"ring": opts.ring.to_string(), "sides": sides});
        }
        Command::Criterion(a) => {
            let s = load_pair(&a.scenario, search, report)?;
            let opts = pair_options(&s, &a.coeffs, a.monotone_variant)?;
            let v = evaluate_pair(&s, &opts)?;
            report.results = json!({
                "ring": opts.ring.to_string(),
                "sides": s.sides.iter().map(|x| x.name.clone()).collect::<Vec<_>>(),
                "verdict": verdict_json(&v),
            });
        }
        Command::Sweep(a) => sweep_cmd(a, search, report)?,
        Command::Potential(a) => potential_cmd(a, search, report)?,
        Command::Probes(a) => probes_cmd(a, report)?,
        Command::BuiltinList => {
            report.results = json!({
                "builtins": builtin_names()
                    .into_iter()
                    .map(|(n, d)| json!({"name": n, "description": d}))
                    .collect::<Vec<_>>()
            });
        }
    }
    Ok(())
}

fn rational(s: &str) -> Result<BigRational, ReportError> {
    parse_rational(s).map_err(|e| ReportError::Usage(format!("{s:?}: {e}")))
}

fn load_spec(spec: &str, search: Option<&str>) -> Result<Scenario, ReportError> {
    let (name, params) = parse_builtin_spec(spec)?;
    if builtin_names().iter().any(|(n, _)| *n == name) {
        return Ok(builtin_scenario(&name, &params)?);
    }
    load_file(&PathBuf::from(spec), search)
}

fn load_file(path: &std::path::Path, search: Option<&str>) -> Result<Scenario, ReportError> {
    let p = resolve_scenario_path(path, search)?;
    let bytes = std::fs::read(&p).map_err(|e| ReportError::Usage(format!("{}: {e}", p.display())))?;
    Ok(load_scenario(&bytes)?)
}

fn load_pair(a: &ScenarioArgs, search: Option<&str>, report: &mut Report) -> Result<Scenario, ReportError> {
    let (label, first) = match (&a.path, &a.scenario, &a.builtin) {
        (Some(p), None, None) | (None, Some(p), None) => (p.display().to_string(), load_file(p, search)?),
        (None, None, Some(b)) => {
            let (name, params) = parse_builtin_spec(b)?;
            (b.clone(), builtin_scenario(&name, &params)?)
        }
        _ => {
            return Err(ReportError::Usage(
                "give exactly one of a scenario path, --scenario or --builtin".into(),
            ))
        }
    };
    report.digests.insert(label, first.digest());
    match &a.vs {
        None => Ok(first),
        Some(vs) => {
            let second = load_spec(vs, search)?;
            report.digests.insert(vs.clone(), second.digest());
            Ok(first.pair_with(&second)?)
        }
    }
}

fn parse_subspace(s: &str, field: Ring, scenario: &Scenario, i: usize) -> Result<AffineSubspace, ReportError> {
    let side = scenario
        .sides
        .get(i)
        .ok_or_else(|| ReportError::Usage(format!("no side {i} for a subspace")))?;
    let vec = |part: &str| -> Result<Vec<i64>, ReportError> {
        part.split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|e| ReportError::Usage(format!("subspace entry {x:?}: {e}")))
            })
            .collect()
    };
    let mut parts = s.split(';').filter(|p| !p.trim().is_empty());
    let base = vec(parts
        .next()
        .ok_or_else(|| ReportError::Usage("empty subspace".into()))?)?;
    let span = parts.map(vec).collect::<Result<Vec<_>, _>>()?;
    let spec = SubspaceSpec { field, base, span };
    let relations = &scenario.doc().sides[i].h1_l.relations;
    Ok(AffineSubspace::from_spec(&spec, side.h1_l.num_generators(), relations)?)
}

fn parse_local_system(s: &str) -> Result<LocalSystem, ReportError> {
    let mut values = BTreeMap::new();
    for kv in s.split(',').filter(|x| !x.trim().is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| ReportError::Usage(format!("local system entry {kv:?} is not gen=unit")))?;
        let v = v
            .trim()
            .parse::<i64>()
            .map_err(|e| ReportError::Usage(format!("local system value {v:?}: {e}")))?;
        values.insert(k.trim().to_string(), v);
    }
    Ok(LocalSystem::new(values))
}

fn pair_options(s: &Scenario, c: &CoefficientArgs, monotone_variant: bool) -> Result<PairOptions, ReportError> {
    let mut opts = PairOptions::new(c.ring.unwrap_or(s.coefficient_ring));
    if c.subspaces {
        let field = c
            .field
            .ok_or_else(|| ReportError::Usage("--subspaces needs --field".into()))?;
        opts = opts.subspaces(Some(field));
        for (i, spec) in [&c.subspace, &c.vs_subspace].into_iter().enumerate() {
            if let Some(spec) = spec {
                opts.subspace_overrides[i] = Some(parse_subspace(spec, field, s, i)?);
            }
        }
    }
    for (i, spec) in [&c.local_system, &c.vs_local_system].into_iter().enumerate() {
        if let Some(spec) = spec {
            opts.local_systems[i] = Some(parse_local_system(spec)?);
        }
    }
    if monotone_variant {
        opts = opts.monotone_variant();
    }
    Ok(opts)
}

fn elems(v: &[RingElement]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn invariant_json(
    s: &Scenario,
    i: usize,
    opts: &PairOptions,
    warnings: &mut Vec<String>,
) -> Result<Value, ReportError> {
    let side = s.side(i);
    let mut out = json!({"name": side.name});
    match area_spectrum(side) {
        Ok(sp) => {
            out["least_area"] = json!(format_rational(&sp.least));
            out["next_area"] = json!(sp.next.value.to_string());
            out["next_area_source"] = json!(sp.next.source);
        }
        Err(e) => out["area_error"] = json!(e.to_string()),
    }
    let weights = opts.local_systems[i].as_ref().or(side.local_system.as_ref());
    if let Ok(a) = least_area(side) {
        if !side.ledger.is_empty() {
            let sum = boundary_sum(side, &opts.ring, &a, None, weights)?;
            out["boundary_sum"] = json!(crate::abelian::format_combination(side.h1_l.labels(), &sum));
            let zz = Ring::integers();
            if weights.is_none() {
                let integral = boundary_sum(side, &zz, &a, None, None)?;
                out["boundary_sum_integral"] = json!(crate::abelian::format_combination(side.h1_l.labels(), &integral));
            }
        }
    }
    let sub = if opts.use_subspaces {
        crate::criterion::resolve_subspace(s, i, opts)?
    } else {
        None
    };
    if !side.ledger.is_empty() {
        let t = cancellation_threshold(side, &opts.ring, sub.as_ref(), weights)?;
        out["cancellation_threshold"] = json!(t);
    }
    match side_invariant(s, i, opts)? {
        Ok(inv) => {
            for w in &inv.warnings {
                warnings.push(format!("{}: {w}", side.name));
            }
            out["invariant"] = json!({
                "value": inv.display_value(),
                "coords": elems(&inv.value),
                "ambiguity": inv.display_ambiguity(),
                "asserted": inv.asserted,
                "level": inv.level.as_ref().map(format_rational),
                "selected": inv.selected,
                "lift_unique": inv.lift_unique,
            });
        }
        Err(e) => out["invariant_error"] = json!(e.to_string()),
    }
    if let Some(sub) = &sub {
        out["subspace"] = serde_json::to_value(sub.to_spec()).expect("subspace serializes");
    }
    Ok(out)
}

fn verdict_json(v: &Verdict) -> Value {
    serde_json::to_value(v).expect("verdict serializes")
}

fn sweep_cmd(a: &SweepArgs, search: Option<&str>, report: &mut Report) -> Result<(), ReportError> {
    let (name, base) = parse_builtin_spec(&a.builtin)?;
    if !builtin_names().iter().any(|(n, _)| *n == name) {
        return Err(ReportError::Usage(format!("unknown built-in scenario {name:?}")));
    }
    let vs = load_spec(&a.vs, search)?;
    report.digests.insert(a.vs.clone(), vs.digest());
    let (from, to, step) = (rational(&a.from)?, rational(&a.to)?, rational(&a.step)?);
    if step <= BigRational::from_integer(0.into()) || from > to {
        return Err(ReportError::Usage("sweep needs from <= to and a positive step".into()));
    }
    let grid = rational_grid(&from, &to, &step);
    let build = |x: &BigRational| {
        let mut params = base.clone();
        params.insert(a.param.clone(), x.clone());
        builtin_scenario(&name, &params)?.pair_with(&vs)
    };
    let probe = build(&from)?;
    let opts = pair_options(&probe, &a.coeffs, a.monotone_variant)?;
    let rep = sweep(&grid, build, &opts);
    let points: Vec<Value> = rep
        .points
        .iter()
        .map(|p| {
            let mut v = json!({"value": format_rational(&p.value)});
            match &p.outcome {
                Ok(verdict) => v["verdict"] = verdict_json(verdict),
                Err(e) => v["error"] = json!(e),
            }
            v
        })
        .collect();
    let thresholds: Vec<Value> = rep
        .thresholds
        .iter()
        .map(|t| {
            json!({
                "below": format_rational(&t.below),
                "above": format_rational(&t.above),
                "exact": t.exact.as_ref().map(format_rational),
                "verified": t.verified,
            })
        })
        .collect();
    report.results = json!({
        "param": a.param,
        "ring": opts.ring.to_string(),
        "points": points,
        "thresholds": thresholds,
    });
    Ok(())
}

fn potential_cmd(a: &PotentialArgs, search: Option<&str>, report: &mut Report) -> Result<(), ReportError> {
    let s = load_pair(&a.scenario, search, report)?;
    let side = s
        .sides
        .get(a.side)
        .ok_or_else(|| ReportError::Usage(format!("scenario has no side {}", a.side)))?;
    let mut hits = BTreeMap::new();
    for kv in &a.bulk {
        let (k, v) = kv.split_once('=').unwrap_or((kv.as_str(), "1"));
        let v = v
            .trim()
            .parse::<i64>()
            .map_err(|e| ReportError::Usage(format!("--bulk {kv:?}: {e}")))?;
        hits.insert(k.trim().to_string(), v);
    }
    let mut p = bulk_deform(side, &hits)?;
    if let Some(level) = &a.truncate {
        p = p.truncate_to_level(&rational(level)?);
    }
    let mut out = json!({
        "side": side.name,
        "polynomial": p.to_string(),
        "terms": p.to_terms(),
        "d_z": p.partial_derivative(Var::Z).to_terms(),
        "d_w": p.partial_derivative(Var::W).to_terms(),
        "levels": p.levels().iter().map(format_rational).collect::<Vec<_>>(),
    });
    if a.analyze_units {
        let r = unit_critical_analysis(&p)?;
        out["unit_analysis"] = json!({
            "has_unit_candidate": r.has_unit_candidate,
            "unresolved_degree": r.unresolved_degree,
            "branches": r.branches.iter().map(|b| json!({
                "w0": b.w0.to_string(),
                "d_z_exponents": b.dz_terms.iter().map(|(t, z)| json!({"t": format_rational(t), "z": z})).collect::<Vec<_>>(),
                "valuations": b.valuations.iter().map(format_rational).collect::<Vec<_>>(),
                "candidate": b.candidate,
                "note": b.note,
            })).collect::<Vec<_>>(),
        });
    }
    if let Some(ring) = &a.residue_ring {
        let low = match p.levels().first() {
            Some(l) => p.truncate_to_level(l),
            None => NovikovPolynomial::zero(p.ring()),
        };
        let pts = residue_critical_points(&low, ring)?;
        out["residue"] = json!({
            "ring": ring.to_string(),
            "level_polynomial": low.to_string(),
            "points": pts.iter().map(|(z, w)| vec![z.to_string(), w.to_string()]).collect::<Vec<_>>(),
        });
    }
    report.results = out;
    Ok(())
}

fn parse_point(s: &str) -> Result<(BigRational, BigRational), ReportError> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| ReportError::Usage(format!("--point {s:?} is not x,y")))?;
    Ok((rational(x.trim())?, rational(y.trim())?))
}

fn probes_cmd(a: &ProbesArgs, report: &mut Report) -> Result<(), ReportError> {
    let poly = match (&a.polytope, a.default) {
        (Some(path), None) => {
            let bytes = std::fs::read(path).map_err(|e| ReportError::Usage(format!("{}: {e}", path.display())))?;
            let doc: PolytopeDoc =
                serde_json::from_slice(&bytes).map_err(|e| ReportError::Usage(format!("polytope JSON: {e}")))?;
            let text = serde_json::to_string(&doc).expect("polytope serializes");
            report
                .digests
                .insert(path.display().to_string(), crate::scenario::sha256_hex(text.as_bytes()));
            Polytope2::from_doc(&doc)?
        }
        (None, Some(DefaultPolytope::Quadric)) | (None, None) => Polytope2::semitoric_quadric(),
        (None, Some(DefaultPolytope::Cp2)) => Polytope2::semitoric_cp2(),
        (Some(_), Some(_)) => return Err(ReportError::Usage("give a polytope file or --default, not both".into())),
    };
    if a.bound < 1 {
        return Err(ReportError::Usage("--bound must be positive".into()));
    }
    let point = parse_point(&a.point)?;
    let found = search_probes(&poly, &point, a.bound);
    let pt = |p: &(BigRational, BigRational)| vec![format_rational(&p.0), format_rational(&p.1)];
    report.results = json!({
        "polytope": serde_json::to_value(poly.to_doc()).expect("polytope serializes"),
        "point": pt(&point),
        "bound": a.bound,
        "interior": poly.contains_interior(&point),
        "displaced": !found.is_empty(),
        "probes": found.iter().map(|d| json!({
            "facet": d.probe.facet,
            "base": pt(&d.probe.base),
            "direction": [d.probe.direction.0, d.probe.direction.1],
            "exit": pt(&d.segment.exit),
            "length": format_rational(&d.segment.length),
            "exit_vertex": d.segment.exit_vertex,
            "parameter": format_rational(&d.parameter),
        })).collect::<Vec<_>>(),
    });
    for d in found.iter().filter(|d| d.segment.exit_vertex.is_some()) {
        report.warnings.push(format!(
            "probe from facet {} with direction ({}, {}) exits at a vertex",
            d.probe.facet, d.probe.direction.0, d.probe.direction.1
        ));
    }
    Ok(())
}
