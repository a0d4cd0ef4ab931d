//! Laurent polynomials in `z, w` with Novikov coefficients `t^lambda` and a
//! formal unit `e^c`, as produced from Maslov 2 disk ledgers.

mod critical;
mod newton;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{format_rational, parse_rational, rational_str, Ring, RingElement, RingError};
use crate::scenario::LagrangianSide;

pub use critical::{residue_critical_points, unit_critical_analysis, Branch, UnitCriticalReport};
pub use newton::newton_valuations;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PotentialError {
    #[error("potentials need H1(L) of rank 2, side has {0} generators")]
    BasisMismatch(usize),
    #[error("unknown disk label {0:?}")]
    UnknownLabel(String),
    #[error("fewer than two distinct z exponents; no balancing is possible")]
    Degenerate,
    #[error("d/dw does not factor as a monomial times a polynomial in w")]
    UnsupportedShape,
    #[error("polynomial has more than one t-level")]
    NotSingleLevel,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Z,
    W,
}

/// Sort key of a monomial: `(t, z, w, e^c)` exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub t: BigRational,
    pub z: i64,
    pub w: i64,
    pub ec: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NovikovTerm {
    pub coeff: String,
    #[serde(with = "rational_str")]
    pub t: BigRational,
    pub ec: i64,
    pub z: i64,
    pub w: i64,
}

/// A finite sum `sum c * t^lambda * e^(k c) * z^n * w^m` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovPolynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, RingElement>,
}

impl NovikovPolynomial {
    pub fn zero(ring: Ring) -> Self {
        NovikovPolynomial {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(coeff: RingElement, m: Monomial) -> Self {
        let mut p = Self::zero(coeff.ring());
        p.add_term(m, coeff);
        p
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn add_term(&mut self, m: Monomial, c: RingElement) {
        let entry = self.terms.entry(m).or_insert_with(|| self.ring.zero());
        *entry = &*entry + &c;
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RingElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct `t` exponents in increasing order.
    pub fn levels(&self) -> Vec<BigRational> {
        let set: std::collections::BTreeSet<&BigRational> = self.terms.keys().map(|m| &m.t).collect();
        set.into_iter().cloned().collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        NovikovPolynomial {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = Monomial {
                    t: &m1.t + &m2.t,
                    z: m1.z + m2.z,
                    w: m1.w + m2.w,
                    ec: m1.ec + m2.ec,
                };
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    /// Formal Laurent derivative; `t` and `e^c` are constants.
    pub fn partial_derivative(&self, var: Var) -> Self {
        let mut out = Self::zero(self.ring);
        for (m, c) in &self.terms {
            let e = match var {
                Var::Z => m.z,
                Var::W => m.w,
            };
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            match var {
                Var::Z => m2.z -= 1,
                Var::W => m2.w -= 1,
            }
            out.add_term(m2, c * &self.ring.from_int(e));
        }
        out
    }

    /// Keeps the terms with `t` exponent equal to `level`.
    pub fn truncate_to_level(&self, level: &BigRational) -> Self {
        NovikovPolynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| &m.t == level)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reduces every coefficient into `ring`.
    pub fn to_ring(&self, ring: &Ring) -> Result<Self, PotentialError> {
        let mut out = Self::zero(*ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), ring.reduce(c.value())?);
        }
        Ok(out)
    }

    /// Value at units `z, w` with `t = e^c = 1`.
    pub fn evaluate_residue(&self, z: &RingElement, w: &RingElement) -> Option<RingElement> {
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            acc = &acc + &(&(c * &z.pow(m.z)?) * &w.pow(m.w)?);
        }
        Some(acc)
    }

    pub fn to_terms(&self) -> Vec<NovikovTerm> {
        self.terms
            .iter()
            .map(|(m, c)| NovikovTerm {
                coeff: c.to_string(),
                t: m.t.clone(),
                ec: m.ec,
                z: m.z,
                w: m.w,
            })
            .collect()
    }

    pub fn from_terms(ring: Ring, terms: &[NovikovTerm]) -> Result<Self, PotentialError> {
        let mut p = Self::zero(ring);
        for t in terms {
            let c = ring.reduce(&parse_rational(&t.coeff)?)?;
            p.add_term(
                Monomial {
                    t: t.t.clone(),
                    z: t.z,
                    w: t.w,
                    ec: t.ec,
                },
                c,
            );
        }
        Ok(p)
    }
}

/// Canonical text form: terms `c*t^x*e^k*z^n*w^m` joined by `" + "`, or `0`.
impl fmt::Display for NovikovPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}*t^{}*e^{}*z^{}*w^{}", format_rational(&m.t), m.ec, m.z, m.w))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl NovikovPolynomial {
    /// Parses the canonical text form over `ring`.
    pub fn parse(s: &str, ring: Ring) -> Result<Self, PotentialError> {
        let mut p = Self::zero(ring);
        let s = s.trim();
        if s == "0" {
            return Ok(p);
        }
        let bad = |msg: &str| PotentialError::Parse(format!("{msg} in {s:?}"));
        for term in s.split(" + ") {
            let mut parts = term.trim().split('*');
            let c = parts.next().ok_or_else(|| bad("empty term"))?;
            let c = ring.reduce(&parse_rational(c)?)?;
            let mut m = Monomial {
                t: BigRational::from_integer(BigInt::from(0)),
                z: 0,
                w: 0,
                ec: 0,
            };
            for f in parts {
                let (var, exp) = f.split_once('^').ok_or_else(|| bad("factor without exponent"))?;
                let int = || i64::from_str(exp).map_err(|_| bad("bad exponent"));
                match var {
                    "t" => m.t = parse_rational(exp)?,
                    "e" => m.ec = int()?,
                    "z" => m.z = int()?,
                    "w" => m.w = int()?,
                    _ => return Err(bad("unknown variable")),
                }
            }
            p.add_term(m, c);
        }
        Ok(p)
    }
}

/// Superpotential of a side: `sum count * t^area * z^<dbeta> * w^<dalpha>`,
/// each monomial multiplied by `e^(c * hits)` for the listed disk labels.
pub fn bulk_deform(
    side: &LagrangianSide,
    divisor_hits: &BTreeMap<String, i64>,
) -> Result<NovikovPolynomial, PotentialError> {
    let n = side.h1_l.num_generators();
    if n != 2 || !side.h1_l.relations().is_zero() {
        return Err(PotentialError::BasisMismatch(n));
    }
    if let Some(l) = divisor_hits
        .keys()
        .find(|l| !side.ledger.disks.iter().any(|d| &&d.label == l))
    {
        return Err(PotentialError::UnknownLabel(l.clone()));
    }
    let q = Ring::rationals();
    let mut p = NovikovPolynomial::zero(q);
    for d in side.ledger.disks.iter().filter(|d| d.maslov == 2) {
        let exps = d.boundary.to_i64();
        p.add_term(
            Monomial {
                t: d.area.clone(),
                z: exps[0],
                w: exps[1],
                ec: divisor_hits.get(&d.label).copied().unwrap_or(0),
            },
            q.from_int(d.count.clone()),
        );
    }
    Ok(p)
}

/// Superpotential of a side without bulk deformation.
pub fn potential_from_ledger(side: &LagrangianSide) -> Result<NovikovPolynomial, PotentialError> {
    bulk_deform(side, &BTreeMap::new())
}
