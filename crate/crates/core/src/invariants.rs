//! Area spectra, boundary cancellation, and the low-area string invariant.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::abelian::{format_combination, AbelianError, GroupElement};
use crate::matrix::{kernel_is_trivial, solve_linear, MatrixError};
use crate::ring::{format_rational, Ring, RingElement};
use crate::scenario::{DiskClass, LagrangianSide, LocalSystem};
use crate::subspace::{AffineSubspace, SubspaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("side {0} has an empty ledger and is not monotone")]
    EmptyLedger(String),
    #[error("side {0}: next area lies beyond the ledger cutoff and no lattice parameters or monotonicity are given")]
    InsufficientLedger(String),
    #[error("progression hypothesis a < 1/(k+N) fails: a = {a}, k = {k}, N = {n}")]
    HypothesisViolated { k: u32, n: u32, a: String },
    #[error("side {0}: weighted sum requested without a local system")]
    MissingLocalSystem(String),
    #[error("side {side}: local system is not unit valued in {ring}")]
    NotUnitValued { side: String, ring: Ring },
    #[error("side {side}: boundaries at area {level} do not cancel over {ring}: {sum}")]
    CancellationFails {
        side: String,
        level: String,
        ring: Ring,
        sum: String,
    },
    #[error("side {0}: the disk sum has no preimage under j")]
    NoLift(String),
    #[error("side {0}: empty ledger and no asserted invariant")]
    NoLedger(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// A rational number or `+inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AreaValue {
    Finite(BigRational),
    Infinite,
}

impl AreaValue {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            AreaValue::Finite(x) => Some(x),
            AreaValue::Infinite => None,
        }
    }
}

impl Ord for AreaValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AreaValue::Finite(a), AreaValue::Finite(b)) => a.cmp(b),
            (AreaValue::Finite(_), AreaValue::Infinite) => Ordering::Less,
            (AreaValue::Infinite, AreaValue::Finite(_)) => Ordering::Greater,
            (AreaValue::Infinite, AreaValue::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for AreaValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AreaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AreaValue::Finite(x) => f.write_str(&format_rational(x)),
            AreaValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for AreaValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NextAreaSource {
    Ledger,
    Monotone,
    Progression,
}

/// The next-to-least area `A`, or a lower bound for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NextArea {
    pub value: AreaValue,
    pub source: NextAreaSource,
}

/// The arithmetic progression `{base + step * Z}` containing all disk areas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Progression {
    pub base: BigRational,
    pub step: BigRational,
    pub bound: BigRational,
}

impl Progression {
    pub fn contains(&self, x: &BigRational) -> bool {
        ((x - &self.base) / &self.step).is_integer()
    }
}

/// Smallest level at which boundaries fail to cancel, or the ledger cutoff
/// when every level below it cancels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    Finite(BigRational),
    AtLeastCutoff(BigRational),
}

impl Threshold {
    /// A valid lower bound for the threshold.
    pub fn lower_bound(&self) -> &BigRational {
        match self {
            Threshold::Finite(x) | Threshold::AtLeastCutoff(x) => x,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(x) => f.write_str(&format_rational(x)),
            Threshold::AtLeastCutoff(x) => write!(f, ">={}", format_rational(x)),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Least area `a` of a side: the smallest ledger area, or `b` for a monotone
/// side with an empty ledger.
pub fn least_area(side: &LagrangianSide) -> Result<BigRational, InvariantError> {
    match side.ledger.area_levels().first() {
        Some(a) => Ok(a.clone()),
        None if side.monotone => Ok(side.monotonicity_constant.clone().expect("validated")),
        None => Err(InvariantError::EmptyLedger(side.name.clone())),
    }
}

/// Next-to-least area `A`.
pub fn next_area(side: &LagrangianSide) -> Result<NextArea, InvariantError> {
    let levels = side.ledger.area_levels();
    if let Some(second) = levels.get(1) {
        return Ok(NextArea {
            value: AreaValue::Finite(second.clone()),
            source: NextAreaSource::Ledger,
        });
    }
    if side.monotone {
        return Ok(NextArea {
            value: AreaValue::Infinite,
            source: NextAreaSource::Monotone,
        });
    }
    match side.lattice_params {
        Some(lp) => {
            let a = least_area(side)?;
            Ok(NextArea {
                value: AreaValue::Finite(area_progression(lp.k, lp.n, &a)?.bound),
                source: NextAreaSource::Progression,
            })
        }
        None => Err(InvariantError::InsufficientLedger(side.name.clone())),
    }
}

/// Areas of Maslov 2 disks on a torus near a Lagrangian in a monotone
/// manifold with `c_1 = k omega` and `N`-torsion boundary image lie in
/// `a + (1 - k a)/N * Z`; returns that progression and `A >= a + (1-ka)/N`.
pub fn area_progression(k: u32, n: u32, a: &BigRational) -> Result<Progression, InvariantError> {
    let kk = BigRational::from_integer(BigInt::from(k));
    let nn = BigRational::from_integer(BigInt::from(n));
    let violated = || InvariantError::HypothesisViolated {
        k,
        n,
        a: format_rational(a),
    };
    if k == 0 || n == 0 || !a.is_positive() || *a >= BigRational::one() / (&kk + &nn) {
        return Err(violated());
    }
    let step = (BigRational::one() - &kk * a) / &nn;
    Ok(Progression {
        base: a.clone(),
        bound: a + &step,
        step,
    })
}

/// `(least, next)` areas of a side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaSpectrum {
    pub least: BigRational,
    pub next: NextArea,
}

pub fn area_spectrum(side: &LagrangianSide) -> Result<AreaSpectrum, InvariantError> {
    Ok(AreaSpectrum {
        least: least_area(side)?,
        next: next_area(side)?,
    })
}

/// Restricts a sum to disks whose boundary lies in one coset of a subspace.
#[derive(Debug, Clone)]
pub struct CosetFilter<'a> {
    pub subspace: &'a AffineSubspace,
    pub key: Vec<RingElement>,
}

fn weight(
    side: &LagrangianSide,
    disk: &DiskClass,
    ring: &Ring,
    weights: Option<&LocalSystem>,
) -> Result<RingElement, InvariantError> {
    let count = ring.from_int(disk.count.clone());
    match weights {
        None => Ok(count),
        Some(ls) => {
            let w = ls
                .evaluate(&side.h1_l, &disk.boundary, ring)
                .ok_or(InvariantError::NotUnitValued {
                    side: side.name.clone(),
                    ring: *ring,
                })?;
            Ok(&count * &w)
        }
    }
}

fn boundary_nonzero_integrally(side: &LagrangianSide, d: &DiskClass) -> Result<bool, InvariantError> {
    Ok(!side.h1_l.equal(&d.boundary, &side.h1_l.zero())?)
}

/// Disks at `level` with nonzero integral boundary, restricted to a coset.
fn selected<'a>(
    side: &'a LagrangianSide,
    level: &BigRational,
    filter: Option<&CosetFilter>,
) -> Result<Vec<&'a DiskClass>, InvariantError> {
    let mut out = Vec::new();
    for d in side.ledger.disks.iter().filter(|d| &d.area == level) {
        if !boundary_nonzero_integrally(side, d)? {
            continue;
        }
        if let Some(f) = filter {
            if f.subspace
                .coset_key(&side.h1_l.tensor(&d.boundary, &Ring::integers()))?
                != f.key
            {
                continue;
            }
        }
        out.push(d);
    }
    Ok(out)
}

fn weighted_sum(
    side: &LagrangianSide,
    disks: &[&DiskClass],
    ring: &Ring,
    weights: Option<&LocalSystem>,
    class: impl Fn(&DiskClass) -> &GroupElement,
    len: usize,
) -> Result<Vec<RingElement>, InvariantError> {
    let mut acc = vec![ring.zero(); len];
    for d in disks {
        let w = weight(side, d, ring, weights)?;
        for (a, c) in acc.iter_mut().zip(&class(d).coords) {
            *a = &*a + &(&w * &ring.from_int(c.clone()));
        }
    }
    Ok(acc)
}

/// `sum count * w(D) * [bd D]` over disks at `level` whose boundary is
/// nonzero in `H_1(L; Z)`, as coordinates of `H_1(L; ring)`.
pub fn boundary_sum(
    side: &LagrangianSide,
    ring: &Ring,
    level: &BigRational,
    filter: Option<&CosetFilter>,
    weights: Option<&LocalSystem>,
) -> Result<Vec<RingElement>, InvariantError> {
    let disks = selected(side, level, filter)?;
    weighted_sum(side, &disks, ring, weights, |d| &d.boundary, side.h1_l.num_generators())
}

/// Boundary sum of one coset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSum {
    pub key: Vec<RingElement>,
    pub labels: Vec<String>,
    pub sum: Vec<RingElement>,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationReport {
    pub holds: bool,
    pub cosets: Vec<CosetSum>,
}

/// Coset-by-coset cancellation at `level`: for each coset of the linear part
/// of `subspace`, the boundaries landing there must sum to zero over `ring`.
pub fn grouped_cancellation(
    side: &LagrangianSide,
    subspace: &AffineSubspace,
    ring: &Ring,
    level: &BigRational,
    weights: Option<&LocalSystem>,
) -> Result<CancellationReport, InvariantError> {
    let zz = Ring::integers();
    let mut groups: BTreeMap<Vec<BigInt>, (Vec<RingElement>, Vec<&DiskClass>)> = BTreeMap::new();
    for d in selected(side, level, None)? {
        let key = subspace.coset_key(&side.h1_l.tensor(&d.boundary, &zz))?;
        let sort_key = key.iter().map(|x| x.to_integer().expect("residue")).collect();
        groups.entry(sort_key).or_insert_with(|| (key, Vec::new())).1.push(d);
    }
    let mut cosets = Vec::with_capacity(groups.len());
    for (_, (key, disks)) in groups {
        let sum = weighted_sum(side, &disks, ring, weights, |d| &d.boundary, side.h1_l.num_generators())?;
        let vanishes = side.h1_l.is_zero_over(&sum, ring)?;
        cosets.push(CosetSum {
            key,
            labels: disks.iter().map(|d| d.label.clone()).collect(),
            sum,
            vanishes,
        });
    }
    Ok(CancellationReport {
        holds: cosets.iter().all(|c| c.vanishes),
        cosets,
    })
}

/// Total cancellation at `level` over `ring`.
pub fn total_cancellation(
    side: &LagrangianSide,
    ring: &Ring,
    level: &BigRational,
    weights: Option<&LocalSystem>,
) -> Result<(bool, Vec<RingElement>), InvariantError> {
    let sum = boundary_sum(side, ring, level, None, weights)?;
    Ok((side.h1_l.is_zero_over(&sum, ring)?, sum))
}

/// The low-area string invariant: an element of `H_2(X; ring)` defined up to
/// multiples of `[L]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringInvariant {
    pub value: Vec<RingElement>,
    pub basis: Vec<String>,
    pub ring: Ring,
    pub ambiguity: Vec<BigInt>,
    pub asserted: bool,
    pub level: Option<BigRational>,
    pub selected: Vec<String>,
    pub lift_unique: bool,
    pub warnings: Vec<String>,
}

impl StringInvariant {
    pub fn display_value(&self) -> String {
        format_combination(&self.basis, &self.value)
    }

    pub fn display_ambiguity(&self) -> String {
        let zz = Ring::integers();
        let coords: Vec<RingElement> = self.ambiguity.iter().map(|c| zz.from_int(c.clone())).collect();
        format_combination(&self.basis, &coords)
    }

    pub fn has_ambiguity(&self) -> bool {
        !self.ambiguity.iter().all(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.value.iter().all(RingElement::is_zero)
    }

    /// Canonical integer representatives of the coordinates.
    pub fn integral_representative(&self) -> Option<Vec<BigInt>> {
        self.value.iter().map(RingElement::to_integer).collect()
    }
}

/// Computes the low-area string invariant of `side` over `ring`.
///
/// Selects least-area disks with nonzero integral boundary (lying in
/// `subspace` when one is given), checks cancellation (coset-wise with a
/// subspace), and lifts the weighted sum of relative classes through `j`.
pub fn oc_low(
    side: &LagrangianSide,
    ring: &Ring,
    subspace: Option<&AffineSubspace>,
    weights: Option<&LocalSystem>,
) -> Result<StringInvariant, InvariantError> {
    let basis = h2_labels(side);
    let ambiguity = side.fundamental_class.coords.clone();
    if side.ledger.is_empty() {
        let asserted = side
            .asserted_invariant
            .as_ref()
            .ok_or_else(|| InvariantError::NoLedger(side.name.clone()))?;
        return Ok(StringInvariant {
            value: asserted.coords.iter().map(|c| ring.from_int(c.clone())).collect(),
            basis,
            ring: *ring,
            ambiguity,
            asserted: true,
            level: None,
            selected: vec![],
            lift_unique: true,
            warnings: vec!["invariant asserted by the scenario, not computed from a ledger".into()],
        });
    }
    if let Some(ls) = weights {
        if !ls.is_unit_valued(ring) {
            return Err(InvariantError::NotUnitValued {
                side: side.name.clone(),
                ring: *ring,
            });
        }
    }
    let level = least_area(side)?;
    let mut warnings = Vec::new();
    let filter = match subspace {
        Some(s) => {
            let report = grouped_cancellation(side, s, ring, &level, weights)?;
            if let Some(bad) = report.cosets.iter().find(|c| !c.vanishes) {
                return Err(InvariantError::CancellationFails {
                    side: side.name.clone(),
                    level: format_rational(&level),
                    ring: *ring,
                    sum: side.h1_l.format_combination(&bad.sum),
                });
            }
            if weights.is_some() {
                warnings.push("local system weights applied inside each coset sum".into());
            }
            Some(CosetFilter {
                subspace: s,
                key: s.base_key(),
            })
        }
        None => {
            let (ok, sum) = total_cancellation(side, ring, &level, weights)?;
            if !ok {
                return Err(InvariantError::CancellationFails {
                    side: side.name.clone(),
                    level: format_rational(&level),
                    ring: *ring,
                    sum: side.h1_l.format_combination(&sum),
                });
            }
            None
        }
    };
    let disks = selected(side, &level, filter.as_ref())?;
    if disks.is_empty() {
        warnings.push(format!(
            "no disk at area {} has nonzero boundary in the selected coset; invariant is 0",
            format_rational(&level)
        ));
    }
    let rel_sum = weighted_sum(
        side,
        &disks,
        ring,
        weights,
        |d| &d.rel_class,
        side.h2_xl.num_generators(),
    )?;
    let n = side.j.matrix().cols();
    let system = side.j.matrix().hcat(&side.h2_xl.relations().transpose())?;
    let lift = solve_linear(&system, &rel_sum, ring)?.ok_or_else(|| InvariantError::NoLift(side.name.clone()))?;
    let value: Vec<RingElement> = lift.into_iter().take(n).collect();
    let lift_unique = side.h2_xl.relations().rows() == 0 && kernel_is_trivial(side.j.matrix(), ring);
    if !lift_unique {
        warnings.push("j is not injective over the coefficient ring; the lift is one of several".into());
    }
    Ok(StringInvariant {
        value,
        basis,
        ring: *ring,
        ambiguity,
        asserted: false,
        level: Some(level),
        selected: disks.iter().map(|d| d.label.clone()).collect(),
        lift_unique,
        warnings,
    })
}

fn h2_labels(side: &LagrangianSide) -> Vec<String> {
    side.h2_xl.labels()[..side.j.matrix().cols()].to_vec()
}

/// Smallest ledger level whose (coset-wise) boundary sum is nonzero over `ring`.
pub fn cancellation_threshold(
    side: &LagrangianSide,
    ring: &Ring,
    subspace: Option<&AffineSubspace>,
    weights: Option<&LocalSystem>,
) -> Result<Threshold, InvariantError> {
    for level in side.ledger.area_levels() {
        let cancels = match subspace {
            Some(s) => grouped_cancellation(side, s, ring, &level, weights)?.holds,
            None => total_cancellation(side, ring, &level, weights)?.0,
        };
        if !cancels {
            return Ok(Threshold::Finite(level));
        }
    }
    Ok(Threshold::AtLeastCutoff(side.ledger.complete_below.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q;
    use crate::scenario::builtin_scenario;

    fn scenario(name: &str, a: Option<BigRational>) -> crate::scenario::Scenario {
        let mut p = BTreeMap::new();
        if let Some(a) = a {
            p.insert("a".to_string(), a);
        }
        builtin_scenario(name, &p).unwrap()
    }

    fn z(n: u64) -> Ring {
        Ring::integers_mod(n).unwrap()
    }

    fn ints(v: &[RingElement]) -> Vec<i64> {
        v.iter()
            .map(|x| i64::try_from(x.to_integer().unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn cp2_area_spectrum() {
        let s = scenario("cp2_ta", Some(q(1, 10)));
        let sp = area_spectrum(s.side(0)).unwrap();
        assert_eq!(sp.least, q(1, 10));
        assert_eq!(sp.next.value, AreaValue::Finite(q(9, 20)));
        let c = scenario("cp2_clifford", None);
        let sp = area_spectrum(c.side(0)).unwrap();
        assert_eq!(sp.least, q(1, 3));
        assert_eq!(sp.next.value, AreaValue::Infinite);
    }

    #[test]
    fn progression_examples() {
        assert_eq!(area_progression(3, 2, &q(1, 10)).unwrap().bound, q(9, 20));
        assert_eq!(area_progression(1, 1, &q(1, 4)).unwrap().bound, q(1, 1));
        // 1/5 < 1/4, so the hypothesis holds here; the boundary value fails.
        assert_eq!(area_progression(3, 1, &q(1, 5)).unwrap().bound, q(3, 5));
        assert!(matches!(
            area_progression(3, 1, &q(1, 4)),
            Err(InvariantError::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn cp2_boundary_sums() {
        let s = scenario("cp2_ta", Some(q(1, 10)));
        let side = s.side(0);
        let zz = Ring::integers();
        assert_eq!(ints(&boundary_sum(side, &zz, &q(1, 10), None, None).unwrap()), [-8, 0]);
        assert_eq!(ints(&boundary_sum(side, &z(8), &q(1, 10), None, None).unwrap()), [0, 0]);
    }

    #[test]
    fn cp2_invariant_is_4h_mod_8() {
        let s = scenario("cp2_ta", Some(q(1, 10)));
        let oc = oc_low(s.side(0), &z(8), None, None).unwrap();
        assert_eq!(ints(&oc.value), [4]);
        assert_eq!(oc.display_value(), "4H");
        assert!(oc.lift_unique);
    }

    #[test]
    fn thresholds() {
        let s = scenario("cp2_ta", Some(q(1, 10)));
        let zz = Ring::integers();
        assert_eq!(
            cancellation_threshold(s.side(0), &zz, None, None).unwrap(),
            Threshold::Finite(q(1, 10))
        );
        assert_eq!(
            cancellation_threshold(s.side(0), &z(8), None, None).unwrap(),
            Threshold::Finite(q(9, 20))
        );
    }
}
