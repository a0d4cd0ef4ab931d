//! Non-displaceability decision procedures for a pair of tori, with an audit
//! trail of every quantity that entered the verdict.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::invariants::{
    cancellation_threshold, least_area, next_area, oc_low, AreaValue, InvariantError, StringInvariant,
};
use crate::ring::{format_rational, Ring, RingElement};
use crate::scenario::{LagrangianSide, LocalSystem, Scenario, ScenarioError};
use crate::subspace::{AffineSubspace, SubspaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriterionError {
    #[error("the criterion needs a scenario with exactly two sides, found {0}")]
    TwoSidedRequired(usize),
    #[error("the monotone-partner variant needs exactly one monotone side")]
    MonotoneVariantMismatch,
    #[error("subspaces requested but no field is known for side {0}")]
    MissingField(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// Pairing of the plain invariants with the area gate.
    LowArea,
    /// Pairing of the subspace-refined invariants with the area gate.
    LowAreaSubspace,
    /// Monotone partner, threshold taken from the cancellation level.
    MonotonePartner,
    MonotonePartnerSubspace,
    /// `[L] . OC(K)` or `[K] . OC(L)` nonzero.
    LowerIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InconclusiveReason {
    AreaGate,
    GateBoundary,
    PairingVanishes,
    InvariantUndefined,
    AreaUndefined,
    AmbiguousPairing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    TopologicallyNonDisplaceable,
    NonDisplaceable(TheoremId),
    Inconclusive(InconclusiveReason),
}

impl Conclusion {
    pub fn label(&self) -> &'static str {
        match self {
            Conclusion::TopologicallyNonDisplaceable => "topologically_non_displaceable",
            Conclusion::NonDisplaceable(_) => "non_displaceable",
            Conclusion::Inconclusive(_) => "inconclusive",
        }
    }

    pub fn is_non_displaceable(&self) -> bool {
        !matches!(self, Conclusion::Inconclusive(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub check: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub conclusion: Conclusion,
    pub detail: Option<String>,
    pub pairing: Option<RingElement>,
    /// Pairing of canonical integer representatives before reduction.
    pub pairing_integral: Option<BigInt>,
    /// `min(A, B) - (a + b)` when the gate was evaluated.
    pub gate_margin: Option<AreaValue>,
    pub audit: Vec<AuditEntry>,
    pub notes: Vec<String>,
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("conclusion", self.conclusion.label())?;
        match self.conclusion {
            Conclusion::NonDisplaceable(t) => m.serialize_entry("theorem", &t)?,
            Conclusion::Inconclusive(r) => m.serialize_entry("reason", &r)?,
            Conclusion::TopologicallyNonDisplaceable => {}
        }
        if let Some(d) = &self.detail {
            m.serialize_entry("detail", d)?;
        }
        if let Some(p) = &self.pairing {
            m.serialize_entry("pairing", &p.to_string())?;
        }
        if let Some(p) = &self.pairing_integral {
            m.serialize_entry("pairing_integral", &p.to_string())?;
        }
        if let Some(g) = &self.gate_margin {
            m.serialize_entry("gate_margin", g)?;
        }
        m.serialize_entry("audit", &self.audit)?;
        m.serialize_entry("notes", &self.notes)?;
        m.end()
    }
}

/// Inputs of [`evaluate_pair`] beyond the scenario.
#[derive(Debug, Clone)]
pub struct PairOptions {
    pub ring: Ring,
    pub use_subspaces: bool,
    /// Field `k` for subspaces; defaults to the field stored on the sides.
    pub field: Option<Ring>,
    pub subspace_overrides: [Option<AffineSubspace>; 2],
    pub local_systems: [Option<LocalSystem>; 2],
    pub monotone_variant: bool,
}

impl PairOptions {
    pub fn new(ring: Ring) -> Self {
        PairOptions {
            ring,
            use_subspaces: false,
            field: None,
            subspace_overrides: [None, None],
            local_systems: [None, None],
            monotone_variant: false,
        }
    }

    pub fn subspaces(mut self, field: Option<Ring>) -> Self {
        self.use_subspaces = true;
        self.field = field;
        self
    }

    pub fn monotone_variant(mut self) -> Self {
        self.monotone_variant = true;
        self
    }
}

/// `a + b < min(A, B)`, with `+inf` absorbing.
pub fn area_gate(a: &BigRational, b: &BigRational, big_a: &AreaValue, big_b: &AreaValue) -> bool {
    AreaValue::Finite(a + b) < *big_a.min(big_b)
}

fn margin(a: &BigRational, b: &BigRational, big_a: &AreaValue, big_b: &AreaValue) -> AreaValue {
    match big_a.min(big_b) {
        AreaValue::Finite(m) => AreaValue::Finite(m - a - b),
        AreaValue::Infinite => AreaValue::Infinite,
    }
}

struct Audit {
    entries: Vec<AuditEntry>,
    notes: Vec<String>,
}

impl Audit {
    fn push(&mut self, check: &str, value: impl ToString) {
        self.entries.push(AuditEntry {
            check: check.to_string(),
            value: value.to_string(),
        });
    }

    fn finish(self, conclusion: Conclusion, detail: Option<String>) -> Verdict {
        Verdict {
            conclusion,
            detail,
            pairing: None,
            pairing_integral: None,
            gate_margin: None,
            audit: self.entries,
            notes: self.notes,
        }
    }
}

/// The subspace used for side `i`: an override, the side's own, or the full
/// space over the field.
pub fn resolve_subspace(
    scenario: &Scenario,
    i: usize,
    opts: &PairOptions,
) -> Result<Option<AffineSubspace>, CriterionError> {
    if !opts.use_subspaces {
        return Ok(None);
    }
    if let Some(s) = &opts.subspace_overrides[i] {
        return Ok(Some(s.clone()));
    }
    let side = scenario.side(i);
    let doc = &scenario.doc().sides[i];
    let field = opts
        .field
        .or_else(|| side.subspace.as_ref().map(AffineSubspace::field))
        .or_else(|| {
            scenario
                .sides
                .iter()
                .find_map(|s| s.subspace.as_ref().map(AffineSubspace::field))
        })
        .ok_or_else(|| CriterionError::MissingField(side.name.clone()))?;
    match side.subspace_over(doc, field)? {
        Some(s) => Ok(Some(s)),
        None => Ok(Some(AffineSubspace::full(field, side.h1_l.num_generators())?)),
    }
}

fn pair_values(scenario: &Scenario, x: &[RingElement], y: &[RingElement]) -> RingElement {
    scenario.form.pair_over(x, y)
}

fn integral_pairing(scenario: &Scenario, x: &StringInvariant, y: &StringInvariant) -> Option<BigInt> {
    let xi = x.integral_representative()?;
    let yi = y.integral_representative()?;
    let fy = scenario.form.matrix().mul_vec(&yi).ok()?;
    Some(xi.iter().zip(&fy).map(|(a, b)| a * b).sum())
}

/// Runs the decision tree on a two-sided scenario.
///
/// Order: topological pairing of fundamental classes, lower-index pairings,
/// area gate, invariants, ambiguity guard, pairing of invariants.
pub fn evaluate_pair(scenario: &Scenario, opts: &PairOptions) -> Result<Verdict, CriterionError> {
    if scenario.sides.len() != 2 {
        return Err(CriterionError::TwoSidedRequired(scenario.sides.len()));
    }
    let ring = opts.ring;
    let (l, k) = (scenario.side(0), scenario.side(1));
    let monotone_idx = match (l.monotone, k.monotone) {
        (true, false) => Some(0),
        (false, true) => Some(1),
        _ if opts.monotone_variant => return Err(CriterionError::MonotoneVariantMismatch),
        _ => None,
    };
    let subspaces = [
        resolve_subspace(scenario, 0, opts)?,
        resolve_subspace(scenario, 1, opts)?,
    ];
    let weights: [Option<&LocalSystem>; 2] = [0, 1].map(|i| {
        opts.local_systems[i]
            .as_ref()
            .or(scenario.side(i).local_system.as_ref())
    });

    let mut audit = Audit {
        entries: Vec::new(),
        notes: Vec::new(),
    };
    audit.push("ring", ring);
    if let Some(s) = subspaces.iter().flatten().next() {
        audit.push("field", s.field());
    }

    let fl = scenario.h2_x.tensor(&l.fundamental_class, &ring);
    let fk = scenario.h2_x.tensor(&k.fundamental_class, &ring);
    let lk = pair_values(scenario, &fl, &fk);
    audit.push("[L].[K]", &lk);
    if !lk.is_zero() {
        return Ok(audit.finish(Conclusion::TopologicallyNonDisplaceable, None));
    }

    let invariant = |i: usize| oc_low(scenario.side(i), &ring, subspaces[i].as_ref(), weights[i]);
    let any_class = !l.fundamental_class.is_trivially_zero() || !k.fundamental_class.is_trivially_zero();
    if any_class {
        let (ocl, ock) = (invariant(0), invariant(1));
        if let Ok(ock) = &ock {
            let v = pair_values(scenario, &fl, &ock.value);
            audit.push("[L].OC(K)", &v);
            if !v.is_zero() {
                return Ok(audit.finish(Conclusion::NonDisplaceable(TheoremId::LowerIndex), None));
            }
        }
        if let Ok(ocl) = &ocl {
            let v = pair_values(scenario, &fk, &ocl.value);
            audit.push("[K].OC(L)", &v);
            if !v.is_zero() {
                return Ok(audit.finish(Conclusion::NonDisplaceable(TheoremId::LowerIndex), None));
            }
        }
    }

    let areas = (|| -> Result<_, InvariantError> {
        let a = least_area(l)?;
        let b = least_area(k)?;
        let (big_a, big_b) = if opts.monotone_variant {
            let threshold = |i: usize| -> Result<AreaValue, InvariantError> {
                if Some(i) == monotone_idx {
                    Ok(AreaValue::Infinite)
                } else {
                    let t = cancellation_threshold(scenario.side(i), &ring, subspaces[i].as_ref(), weights[i])?;
                    Ok(AreaValue::Finite(t.lower_bound().clone()))
                }
            };
            (threshold(0)?, threshold(1)?)
        } else {
            (next_area(l)?.value, next_area(k)?.value)
        };
        Ok((a, b, big_a, big_b))
    })();
    let (a, b, big_a, big_b) = match areas {
        Ok(v) => v,
        Err(e) => {
            return Ok(audit.finish(
                Conclusion::Inconclusive(InconclusiveReason::AreaUndefined),
                Some(e.to_string()),
            ));
        }
    };
    audit.push("a", format_rational(&a));
    audit.push("b", format_rational(&b));
    audit.push("A", &big_a);
    audit.push("B", &big_b);
    let lhs = &a + &b;
    let rhs = big_a.clone().min(big_b.clone());
    audit.push("a+b", format_rational(&lhs));
    audit.push("min(A,B)", &rhs);
    let gate_margin = margin(&a, &b, &big_a, &big_b);
    let gate = area_gate(&a, &b, &big_a, &big_b);
    audit.push("area gate", gate);
    if !gate {
        let boundary = rhs == AreaValue::Finite(lhs.clone());
        let (reason, detail) = if boundary {
            audit
                .notes
                .push("a+b equals min(A,B); the strict inequality fails and no limiting argument is applied".into());
            (InconclusiveReason::GateBoundary, format!("a+b = min(A,B) = {rhs}"))
        } else {
            (
                InconclusiveReason::AreaGate,
                format!("a+b = {} >= min(A,B) = {rhs}", format_rational(&lhs)),
            )
        };
        let mut v = audit.finish(Conclusion::Inconclusive(reason), Some(detail));
        v.gate_margin = Some(gate_margin);
        return Ok(v);
    }

    let (ocl, ock) = match (invariant(0), invariant(1)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => {
            let mut v = audit.finish(
                Conclusion::Inconclusive(InconclusiveReason::InvariantUndefined),
                Some(e.to_string()),
            );
            v.gate_margin = Some(gate_margin);
            return Ok(v);
        }
    };
    audit.push("OC(L)", ocl.display_value());
    audit.push("OC(K)", ock.display_value());
    for (side, oc) in [(l, &ocl), (k, &ock)] {
        for w in &oc.warnings {
            audit.notes.push(format!("{}: {w}", side.name));
        }
    }

    if ocl.has_ambiguity() || ock.has_ambiguity() {
        let shift_l = pair_values(scenario, &fl, &ock.value);
        let shift_k = pair_values(scenario, &fk, &ocl.value);
        if !shift_l.is_zero() || !shift_k.is_zero() {
            let mut v = audit.finish(
                Conclusion::Inconclusive(InconclusiveReason::AmbiguousPairing),
                Some("pairing depends on the choice of lift modulo [L], [K]".into()),
            );
            v.gate_margin = Some(gate_margin);
            return Ok(v);
        }
    }

    let pairing = pair_values(scenario, &ocl.value, &ock.value);
    let integral = integral_pairing(scenario, &ocl, &ock);
    audit.push("OC(L).OC(K)", &pairing);
    let theorem = match (opts.monotone_variant, opts.use_subspaces) {
        (false, false) => TheoremId::LowArea,
        (false, true) => TheoremId::LowAreaSubspace,
        (true, false) => TheoremId::MonotonePartner,
        (true, true) => TheoremId::MonotonePartnerSubspace,
    };
    let (conclusion, detail) = if pairing.is_zero() {
        let detail = match (&integral, ring.modulus()) {
            (Some(n), Some(m)) => format!("pairing {n} = 0 mod {m}"),
            _ => format!("pairing {pairing} = 0 in {ring}"),
        };
        (
            Conclusion::Inconclusive(InconclusiveReason::PairingVanishes),
            Some(detail),
        )
    } else {
        (Conclusion::NonDisplaceable(theorem), None)
    };
    let mut v = audit.finish(conclusion, detail);
    v.pairing = Some(pairing);
    v.pairing_integral = integral;
    v.gate_margin = Some(gate_margin);
    Ok(v)
}

/// Convenience for a single side: the invariant under the options for index `i`.
pub fn side_invariant(
    scenario: &Scenario,
    i: usize,
    opts: &PairOptions,
) -> Result<Result<StringInvariant, InvariantError>, CriterionError> {
    let sub = resolve_subspace(scenario, i, opts)?;
    let side: &LagrangianSide = scenario.side(i);
    let w = opts.local_systems[i].as_ref().or(side.local_system.as_ref());
    Ok(oc_low(side, &opts.ring, sub.as_ref(), w))
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepPoint {
    pub value: BigRational,
    pub outcome: Result<Verdict, String>,
}

/// A verdict change located between two grid points, with the exact root of
/// the gate margin when it is linear there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepThreshold {
    pub below: BigRational,
    pub above: BigRational,
    pub exact: Option<BigRational>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub points: Vec<SweepPoint>,
    pub thresholds: Vec<SweepThreshold>,
}

/// `from, from+step, ..., <= to`.
pub fn rational_grid(from: &BigRational, to: &BigRational, step: &BigRational) -> Vec<BigRational> {
    let mut out = Vec::new();
    if step <= &BigRational::zero() {
        return out;
    }
    let mut x = from.clone();
    while &x <= to {
        out.push(x.clone());
        x += step;
    }
    out
}

/// Evaluates the criterion over a parameter grid in parallel; output is in
/// grid order. Verdict changes driven by the area gate get an exact
/// threshold from the linear margin, checked by re-evaluating there.
pub fn sweep<F>(grid: &[BigRational], build: F, opts: &PairOptions) -> SweepReport
where
    F: Fn(&BigRational) -> Result<Scenario, ScenarioError> + Sync,
{
    let eval = |x: &BigRational| -> Result<Verdict, String> {
        let s = build(x).map_err(|e| e.to_string())?;
        evaluate_pair(&s, opts).map_err(|e| e.to_string())
    };
    let points: Vec<SweepPoint> = grid
        .par_iter()
        .map(|x| SweepPoint {
            value: x.clone(),
            outcome: eval(x),
        })
        .collect();
    let mut thresholds = Vec::new();
    for w in points.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        let label = |pt: &SweepPoint| pt.outcome.as_ref().map(|v| v.conclusion.label()).ok();
        if label(p) == label(q) {
            continue;
        }
        let margins = (
            p.outcome
                .as_ref()
                .ok()
                .and_then(|v| v.gate_margin.as_ref()?.finite().cloned()),
            q.outcome
                .as_ref()
                .ok()
                .and_then(|v| v.gate_margin.as_ref()?.finite().cloned()),
        );
        let exact = match margins {
            (Some(m1), Some(m2)) if m1 != m2 => {
                let root = &p.value - &m1 * (&q.value - &p.value) / (&m2 - &m1);
                (root >= p.value && root <= q.value).then_some(root)
            }
            _ => None,
        };
        let verified = exact
            .as_ref()
            .is_some_and(|r| eval(r).is_ok_and(|v| v.gate_margin == Some(AreaValue::Finite(BigRational::zero()))));
        thresholds.push(SweepThreshold {
            below: p.value.clone(),
            above: q.value.clone(),
            exact,
            verified,
        });
    }
    SweepReport { points, thresholds }
}
