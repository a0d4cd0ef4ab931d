use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{newton_valuations, NovikovPolynomial, PotentialError, Var};
use crate::ring::{Ring, RingElement};

/// Outcome of one residue root `w0` of the `w`-equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub w0: RingElement,
    /// `(t, z)` exponents of `d/dz` after substituting `w0`.
    pub dz_terms: Vec<(BigRational, i64)>,
    pub valuations: Vec<BigRational>,
    pub candidate: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitCriticalReport {
    pub has_unit_candidate: bool,
    pub branches: Vec<Branch>,
    /// Degree of the part of the `w`-polynomial whose roots are not rational.
    pub unresolved_degree: usize,
}

/// Searches for critical points with unit coordinates.
///
/// Requires `dp/dw = (monomial) * f(w)`. For each root `w0` of `f` in the
/// residue field, `dp/dz` restricted to `w = w0` must balance at `z`-valuation
/// zero for a unit solution to exist.
pub fn unit_critical_analysis(p: &NovikovPolynomial) -> Result<UnitCriticalReport, PotentialError> {
    let dw = p.partial_derivative(Var::W);
    let mut shape = None;
    let mut f: BTreeMap<i64, RingElement> = BTreeMap::new();
    for (m, c) in dw.terms() {
        let key = (m.t.clone(), m.z, m.ec);
        if shape.get_or_insert_with(|| key.clone()) != &key {
            return Err(PotentialError::UnsupportedShape);
        }
        f.insert(m.w, c.clone());
    }
    if f.is_empty() {
        return Err(PotentialError::UnsupportedShape);
    }
    let ring = p.ring();
    let (roots, unresolved_degree) = if ring.is_finite() {
        let roots = ring
            .units()?
            .into_iter()
            .filter(|u| eval_laurent(&f, u).is_some_and(|v| v.is_zero()))
            .collect();
        (roots, 0)
    } else {
        rational_roots(&f, &ring)
    };
    let dz = p.partial_derivative(Var::Z);
    let branches: Vec<Branch> = roots.into_iter().map(|w0| branch(&dz, w0)).collect();
    Ok(UnitCriticalReport {
        has_unit_candidate: branches.iter().any(|b| b.candidate),
        branches,
        unresolved_degree,
    })
}

fn eval_laurent(f: &BTreeMap<i64, RingElement>, x: &RingElement) -> Option<RingElement> {
    let mut acc = x.ring().zero();
    for (e, c) in f {
        acc = &acc + &(c * &x.pow(*e)?);
    }
    Some(acc)
}

fn branch(dz: &NovikovPolynomial, w0: RingElement) -> Branch {
    let ring = dz.ring();
    let mut merged: BTreeMap<(BigRational, i64, i64), RingElement> = BTreeMap::new();
    for (m, c) in dz.terms() {
        let v = c * &w0.pow(m.w).expect("w0 is a unit");
        let e = merged.entry((m.t.clone(), m.z, m.ec)).or_insert_with(|| ring.zero());
        *e = &*e + &v;
    }
    merged.retain(|_, c| !c.is_zero());
    let mut dz_terms: Vec<(BigRational, i64)> = merged.keys().map(|(t, z, _)| (t.clone(), *z)).collect();
    dz_terms.dedup();
    if dz_terms.is_empty() {
        return Branch {
            w0,
            dz_terms,
            valuations: vec![],
            candidate: true,
            note: "d/dz vanishes identically; every unit z works".into(),
        };
    }
    match newton_valuations(&dz_terms) {
        Err(_) => Branch {
            w0,
            dz_terms,
            valuations: vec![],
            candidate: false,
            note: "single z exponent survives; no balancing".into(),
        },
        Ok(vals) => {
            let candidate = vals.contains(&BigRational::zero());
            let note = if candidate {
                "valuation 0 is balanced".into()
            } else {
                "no balancing at valuation 0".into()
            };
            Branch {
                w0,
                dz_terms,
                valuations: vals.into_iter().collect(),
                candidate,
                note,
            }
        }
    }
}

/// Nonzero rational roots of a Laurent polynomial with rational coefficients,
/// plus the degree left over after deflating by them.
fn rational_roots(f: &BTreeMap<i64, RingElement>, ring: &Ring) -> (Vec<RingElement>, usize) {
    let lo = *f.keys().next().expect("nonempty");
    let hi = *f.keys().next_back().expect("nonempty");
    let degree = usize::try_from(hi - lo).expect("ordered keys");
    let mut coeffs = vec![BigRational::zero(); degree + 1];
    for (e, c) in f {
        coeffs[usize::try_from(e - lo).expect("ordered keys")] = c.value().clone();
    }
    let denom_lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let (a0, an) = (ints[0].abs(), ints[degree].abs());
    let (Some(a0), Some(an)) = (a0.to_u64(), an.to_u64()) else {
        return (vec![], degree);
    };
    let mut candidates = Vec::new();
    for p in divisors(a0) {
        for q in divisors(an) {
            for sign in [1i64, -1] {
                let r = BigRational::new(BigInt::from(p) * sign, BigInt::from(q));
                if !candidates.contains(&r) {
                    candidates.push(r);
                }
            }
        }
    }
    candidates.sort();
    let mut poly = coeffs;
    let mut roots = Vec::new();
    for r in candidates {
        let mut found = false;
        while poly.len() > 1 && horner(&poly, &r).is_zero() {
            poly = deflate(&poly, &r);
            found = true;
        }
        if found {
            roots.push(ring.reduce(&r).expect("rationals reduce into Q"));
        }
    }
    (roots, poly.len() - 1)
}

/// Divisors of `n`; empty above a small bound, which leaves roots unresolved.
fn divisors(n: u64) -> Vec<u64> {
    if n > 1_000_000 {
        return vec![];
    }
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn horner(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Divides by `(w - r)`; coefficients are in increasing degree.
fn deflate(coeffs: &[BigRational], r: &BigRational) -> Vec<BigRational> {
    let n = coeffs.len() - 1;
    let mut q = vec![BigRational::zero(); n];
    let mut carry = BigRational::zero();
    for i in (1..=n).rev() {
        carry = &coeffs[i] + carry * r;
        q[i - 1] = carry.clone();
    }
    q
}

/// Unit pairs `(z, w)` of a finite ring at which both partials vanish, with
/// `t` and `e^c` set to 1.
pub fn residue_critical_points(
    p_level: &NovikovPolynomial,
    ring: &Ring,
) -> Result<Vec<(RingElement, RingElement)>, PotentialError> {
    if p_level.levels().len() > 1 {
        return Err(PotentialError::NotSingleLevel);
    }
    let units = ring.units()?;
    let p = p_level.to_ring(ring)?;
    let dz = p.partial_derivative(Var::Z);
    let dw = p.partial_derivative(Var::W);
    let mut out = Vec::new();
    for z in &units {
        for w in &units {
            let vz = dz.evaluate_residue(z, w).expect("units");
            let vw = dw.evaluate_residue(z, w).expect("units");
            if vz.is_zero() && vw.is_zero() {
                out.push((z.clone(), w.clone()));
            }
        }
    }
    Ok(out)
}
