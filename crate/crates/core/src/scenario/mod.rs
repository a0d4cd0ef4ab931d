//! Scenarios: a closed four-manifold's `H_2` with its intersection form, and
//! one or two Lagrangian tori each carrying homology data and a disk ledger.

mod builtin;
pub mod schema;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::abelian::{AbelianError, FgAbelianGroup, GroupElement, GroupHom, IntersectionForm};
use crate::matrix::{integer_kernel, solve_integer, IntMatrix, MatrixError};
use crate::ring::{format_rational, Ring, RingElement};
use crate::subspace::{AffineSubspace, SubspaceError};

pub use builtin::{builtin_names, builtin_scenario, parse_builtin_spec};
pub use schema::{DiskDoc, LatticeParams, LedgerDoc, ScenarioDoc, SideDoc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation failed ({invariant}): {detail}")]
    Validation { invariant: &'static str, detail: String },
    #[error("unknown built-in scenario {0:?}")]
    UnknownScenario(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("scenario file {0:?} not found")]
    NotFound(PathBuf),
    #[error("cannot pair scenarios: {0}")]
    Incompatible(String),
}

impl ScenarioError {
    fn invalid(invariant: &'static str, detail: impl Into<String>) -> Self {
        ScenarioError::Validation {
            invariant,
            detail: detail.into(),
        }
    }
}

/// One Maslov index 2 disk family through a generic point of the torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskClass {
    pub label: String,
    pub rel_class: GroupElement,
    pub boundary: GroupElement,
    pub maslov: i64,
    pub area: BigRational,
    pub count: BigInt,
}

/// Disk families asserted complete for areas strictly below `complete_below`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskLedger {
    pub disks: Vec<DiskClass>,
    pub complete_below: BigRational,
}

impl DiskLedger {
    /// Distinct areas in increasing order.
    pub fn area_levels(&self) -> Vec<BigRational> {
        let set: BTreeSet<&BigRational> = self.disks.iter().map(|d| &d.area).collect();
        set.into_iter().cloned().collect()
    }

    pub fn at_level<'a>(&'a self, level: &'a BigRational) -> impl Iterator<Item = &'a DiskClass> + 'a {
        self.disks.iter().filter(move |d| &d.area == level)
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }
}

/// A unit-valued local system, given by its values on the generators of `H_1(L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSystem {
    values: BTreeMap<String, i64>,
}

impl LocalSystem {
    pub fn new(values: BTreeMap<String, i64>) -> Self {
        LocalSystem { values }
    }

    pub fn values(&self) -> &BTreeMap<String, i64> {
        &self.values
    }

    /// `rho(class)` as a unit of `ring`; unlisted generators map to 1. `None`
    /// when some value is not a unit there.
    pub fn evaluate(&self, h1: &FgAbelianGroup, class: &GroupElement, ring: &Ring) -> Option<RingElement> {
        let mut acc = ring.one();
        for (label, c) in h1.labels().iter().zip(&class.coords) {
            let v = ring.from_int(self.values.get(label).copied().unwrap_or(1));
            let e = i64::try_from(c).ok()?;
            acc = &acc * &v.pow(e)?;
        }
        Some(acc)
    }

    pub fn is_unit_valued(&self, ring: &Ring) -> bool {
        self.values.values().all(|&v| ring.from_int(v).is_unit())
    }
}

/// One Lagrangian torus with its homology data and disk ledger.
#[derive(Debug, Clone)]
pub struct LagrangianSide {
    pub name: String,
    pub h1_l: FgAbelianGroup,
    pub h2_xl: FgAbelianGroup,
    pub j: GroupHom,
    pub bd: GroupHom,
    pub fundamental_class: GroupElement,
    pub monotone: bool,
    pub monotonicity_constant: Option<BigRational>,
    pub lattice_params: Option<LatticeParams>,
    pub local_system: Option<LocalSystem>,
    pub subspace: Option<AffineSubspace>,
    pub asserted_invariant: Option<GroupElement>,
    pub ledger: DiskLedger,
}

impl LagrangianSide {
    /// Builds the subspace stored in the document reinterpreted over `field`.
    pub fn subspace_over(&self, doc: &SideDoc, field: Ring) -> Result<Option<AffineSubspace>, SubspaceError> {
        doc.subspace
            .as_ref()
            .map(|spec| {
                let mut spec = spec.clone();
                spec.field = field;
                AffineSubspace::from_spec(&spec, self.h1_l.num_generators(), &doc.h1_l.relations)
            })
            .transpose()
    }
}

/// A validated scenario. Keeps its source document for serialization.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub h2_x: FgAbelianGroup,
    pub form: IntersectionForm,
    pub sides: Vec<LagrangianSide>,
    pub coefficient_ring: Ring,
    doc: ScenarioDoc,
}

impl Scenario {
    pub fn from_doc(doc: ScenarioDoc) -> Result<Self, ScenarioError> {
        validate(doc)
    }

    pub fn doc(&self) -> &ScenarioDoc {
        &self.doc
    }

    /// Canonical pretty-printed JSON of the source document.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("scenario documents serialize")
    }

    /// Hex sha256 of [`Scenario::to_json`].
    pub fn digest(&self) -> String {
        sha256_hex(self.to_json().as_bytes())
    }

    pub fn side(&self, i: usize) -> &LagrangianSide {
        &self.sides[i]
    }

    /// Combines the sides of two scenarios over the same closed manifold.
    pub fn pair_with(&self, other: &Scenario) -> Result<Scenario, ScenarioError> {
        if self.doc.h2_x != other.doc.h2_x || self.doc.form != other.doc.form {
            return Err(ScenarioError::Incompatible(
                "H2_X presentations or intersection forms differ".into(),
            ));
        }
        let mut doc = self.doc.clone();
        let mut extra = other.doc.sides.clone();
        for s in &mut extra {
            if doc.sides.iter().any(|t| t.name == s.name) {
                s.name.push('\'');
            }
        }
        doc.sides.extend(extra);
        Scenario::from_doc(doc)
    }

    /// Replaces the coefficient ring recorded in the document.
    pub fn with_ring(&self, ring: Ring) -> Result<Scenario, ScenarioError> {
        let mut doc = self.doc.clone();
        doc.ring = Some(ring);
        Scenario::from_doc(doc)
    }
}

/// Hex sha256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parses and validates a scenario JSON document.
pub fn load_scenario(bytes: &[u8]) -> Result<Scenario, ScenarioError> {
    let doc: ScenarioDoc = serde_json::from_slice(bytes).map_err(|e| ScenarioError::Schema(e.to_string()))?;
    Scenario::from_doc(doc)
}

/// Resolves a scenario path, trying each directory of `search_path`
/// (colon separated) when the path is relative and not found as given.
pub fn resolve_scenario_path(path: &Path, search_path: Option<&str>) -> Result<PathBuf, ScenarioError> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    if path.is_relative() {
        for dir in search_path.unwrap_or("").split(':').filter(|d| !d.is_empty()) {
            let candidate = Path::new(dir).join(path);
            if candidate.exists() {
                return Ok(candidate);
            }
        }
    }
    Err(ScenarioError::NotFound(path.to_path_buf()))
}

fn group(spec: &crate::abelian::GroupSpec, what: &'static str) -> Result<FgAbelianGroup, ScenarioError> {
    FgAbelianGroup::from_spec(spec).map_err(|e| match e {
        AbelianError::DuplicateLabel(l) => {
            ScenarioError::invalid("labels unique", format!("{what}: duplicate generator {l:?}"))
        }
        other => ScenarioError::invalid("group presentation", format!("{what}: {other}")),
    })
}

fn element(g: &FgAbelianGroup, coords: &[i64], what: &str) -> Result<GroupElement, ScenarioError> {
    g.element_i64(coords)
        .map_err(|e| ScenarioError::invalid("dimensions", format!("{what}: {e}")))
}

fn matrix(rows: &[Vec<i64>], cols: usize, what: &str) -> Result<IntMatrix, ScenarioError> {
    IntMatrix::from_rows(rows, cols).map_err(|e| ScenarioError::invalid("dimensions", format!("{what}: {e}")))
}

fn hom(src: &FgAbelianGroup, tgt: &FgAbelianGroup, rows: &[Vec<i64>], what: &str) -> Result<GroupHom, ScenarioError> {
    let m = matrix(rows, src.num_generators(), what)?;
    GroupHom::new(src, tgt, m).map_err(|e| match e {
        AbelianError::NotAHomomorphism(i) => ScenarioError::invalid(
            "hom relations",
            format!("{what}: relation {i} of the source is not respected"),
        ),
        other => ScenarioError::invalid("dimensions", format!("{what}: {other}")),
    })
}

fn validate(doc: ScenarioDoc) -> Result<Scenario, ScenarioError> {
    let h2_x = group(&doc.h2_x, "H2_X")?;
    if !h2_x.is_free() {
        let t: Vec<String> = h2_x.structure().1.iter().map(ToString::to_string).collect();
        return Err(ScenarioError::invalid(
            "torsion in H2_X",
            format!("torsion coefficients [{}]", t.join(", ")),
        ));
    }
    let form_m = matrix(&doc.form, h2_x.num_generators(), "form")?;
    let form = IntersectionForm::new(&h2_x, form_m).map_err(|e| match e {
        AbelianError::NotSymmetric => ScenarioError::invalid("form symmetric", "intersection form is not symmetric"),
        other => ScenarioError::invalid("dimensions", format!("form: {other}")),
    })?;
    if doc.sides.is_empty() || doc.sides.len() > 2 {
        return Err(ScenarioError::invalid(
            "sides",
            format!("expected 1 or 2 sides, found {}", doc.sides.len()),
        ));
    }
    let ring = doc.ring.unwrap_or_else(Ring::rationals);
    let sides = doc
        .sides
        .iter()
        .map(|s| validate_side(&h2_x, s, &ring))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Scenario {
        h2_x,
        form,
        sides,
        coefficient_ring: ring,
        doc,
    })
}

fn validate_side(h2_x: &FgAbelianGroup, doc: &SideDoc, ring: &Ring) -> Result<LagrangianSide, ScenarioError> {
    let name = &doc.name;
    let h1_l = group(&doc.h1_l, "H1_L")?;
    let h2_xl = group(&doc.h2_xl, "H2_XL")?;
    let j = hom(h2_x, &h2_xl, &doc.j, "j")?;
    let bd = hom(&h2_xl, &h1_l, &doc.bd, "bd")?;
    check_exactness(h2_x, &h2_xl, &h1_l, &j, &bd, name)?;

    let fundamental_class = element(h2_x, &doc.fundamental_class, "fundamental_class")?;
    let image = j.apply(&fundamental_class);
    if !h2_xl.equal(&image, &h2_xl.zero()).map_err(abelian_dims)? {
        return Err(ScenarioError::invalid(
            "fundamental class",
            format!("side {name}: j([L]) is nonzero"),
        ));
    }

    let b = doc.b.clone();
    if doc.monotone {
        match &b {
            Some(b) if b.is_positive() => {}
            _ => {
                return Err(ScenarioError::invalid(
                    "monotone",
                    format!("side {name}: monotone side needs b > 0"),
                ))
            }
        }
    }

    let ledger = validate_ledger(&h2_xl, &h1_l, &bd, &doc.ledger, name)?;
    if doc.monotone {
        let b = b.as_ref().expect("checked above");
        for d in &ledger.disks {
            let expected =
                b * BigRational::from_integer(BigInt::from(d.maslov)) / BigRational::from_integer(BigInt::from(2));
            if d.area != expected {
                return Err(ScenarioError::invalid(
                    "monotone",
                    format!(
                        "side {name}: disk {} has area {} but b/2 * maslov = {}",
                        d.label,
                        format_rational(&d.area),
                        format_rational(&expected)
                    ),
                ));
            }
        }
    }

    if let Some(lp) = doc.lattice_params {
        if lp.k == 0 || lp.n == 0 {
            return Err(ScenarioError::invalid(
                "lattice params",
                format!("side {name}: k and N must be positive"),
            ));
        }
    }

    let local_system = match &doc.local_system {
        None => None,
        Some(values) => {
            let keys: BTreeSet<&str> = values.keys().map(String::as_str).collect();
            let labels: BTreeSet<&str> = h1_l.labels().iter().map(String::as_str).collect();
            if keys != labels {
                return Err(ScenarioError::invalid(
                    "local system",
                    format!("side {name}: local system must assign a value to each H1_L generator"),
                ));
            }
            let ls = LocalSystem::new(values.clone());
            if !ls.is_unit_valued(ring) {
                return Err(ScenarioError::invalid(
                    "local system",
                    format!("side {name}: local system values are not units in {ring}"),
                ));
            }
            Some(ls)
        }
    };

    let subspace = doc
        .subspace
        .as_ref()
        .map(|spec| AffineSubspace::from_spec(spec, h1_l.num_generators(), &doc.h1_l.relations))
        .transpose()
        .map_err(|e| ScenarioError::invalid("subspace", format!("side {name}: {e}")))?;

    let asserted_invariant = doc
        .asserted_invariant
        .as_ref()
        .map(|c| element(h2_x, c, "asserted_invariant"))
        .transpose()?;

    Ok(LagrangianSide {
        name: name.clone(),
        h1_l,
        h2_xl,
        j,
        bd,
        fundamental_class,
        monotone: doc.monotone,
        monotonicity_constant: b,
        lattice_params: doc.lattice_params,
        local_system,
        subspace,
        asserted_invariant,
        ledger,
    })
}

fn abelian_dims(e: AbelianError) -> ScenarioError {
    ScenarioError::invalid("dimensions", e.to_string())
}

/// `bd o j = 0` and `ker bd = im j` inside `H2_XL`.
fn check_exactness(
    h2_x: &FgAbelianGroup,
    h2_xl: &FgAbelianGroup,
    h1_l: &FgAbelianGroup,
    j: &GroupHom,
    bd: &GroupHom,
    name: &str,
) -> Result<(), ScenarioError> {
    for i in 0..h2_x.num_generators() {
        let g = h2_x.generator(&h2_x.labels()[i]).map_err(abelian_dims)?;
        let image = bd.apply(&j.apply(&g));
        if !h1_l.equal(&image, &h1_l.zero()).map_err(abelian_dims)? {
            return Err(ScenarioError::invalid(
                "exactness",
                format!("side {name}: bd(j({})) is nonzero", h2_x.labels()[i]),
            ));
        }
    }
    // Preimage of the relation lattice of H1_L under bd, as a lattice in Z^m.
    let m = h2_xl.num_generators();
    let aug = bd
        .matrix()
        .hcat(&h1_l.relations().transpose())
        .map_err(|e: MatrixError| ScenarioError::invalid("dimensions", e.to_string()))?;
    let kernel = integer_kernel(&aug);
    let target = j
        .matrix()
        .hcat(&h2_xl.relations().transpose())
        .map_err(|e: MatrixError| ScenarioError::invalid("dimensions", e.to_string()))?;
    for c in 0..kernel.cols() {
        let v: Vec<BigInt> = kernel.col(c).into_iter().take(m).collect();
        if v.iter().all(Zero::is_zero) {
            continue;
        }
        if solve_integer(&target, &v).is_none() {
            let coords: Vec<String> = v.iter().map(ToString::to_string).collect();
            return Err(ScenarioError::invalid(
                "exactness",
                format!(
                    "side {name}: kernel element [{}] of bd is not in the image of j",
                    coords.join(", ")
                ),
            ));
        }
    }
    Ok(())
}

fn validate_ledger(
    h2_xl: &FgAbelianGroup,
    h1_l: &FgAbelianGroup,
    bd: &GroupHom,
    doc: &LedgerDoc,
    name: &str,
) -> Result<DiskLedger, ScenarioError> {
    let mut labels = BTreeSet::new();
    let mut disks = Vec::with_capacity(doc.disks.len());
    for d in &doc.disks {
        if !labels.insert(d.label.as_str()) {
            return Err(ScenarioError::invalid(
                "labels unique",
                format!("side {name}: duplicate disk label {:?}", d.label),
            ));
        }
        let rel_class = element(h2_xl, &d.rel_class, &format!("disk {}", d.label))?;
        let boundary = element(h1_l, &d.boundary, &format!("disk {}", d.label))?;
        let computed = bd.apply(&rel_class);
        if !h1_l.equal(&computed, &boundary).map_err(abelian_dims)? {
            return Err(ScenarioError::invalid(
                "boundary mismatch",
                format!("side {name}: disk {} boundary differs from bd(rel_class)", d.label),
            ));
        }
        if d.maslov != 2 {
            return Err(ScenarioError::invalid(
                "maslov",
                format!(
                    "side {name}: disk {} has Maslov index {}, ledgers hold index 2 only",
                    d.label, d.maslov
                ),
            ));
        }
        if !d.area.is_positive() || d.area >= doc.complete_below {
            return Err(ScenarioError::invalid(
                "area",
                format!(
                    "side {name}: disk {} area {} must lie in (0, {})",
                    d.label,
                    format_rational(&d.area),
                    format_rational(&doc.complete_below)
                ),
            ));
        }
        disks.push(DiskClass {
            label: d.label.clone(),
            rel_class,
            boundary,
            maslov: d.maslov,
            area: d.area.clone(),
            count: BigInt::from(d.count),
        });
    }
    Ok(DiskLedger {
        disks,
        complete_below: doc.complete_below.clone(),
    })
}
