//! Exact coefficient rings: the integers, `Z/n`, the rationals and prime fields.
//!
//! Every [`RingElement`] carries its ring and a canonical representative, so
//! equality of elements is plain structural equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("denominator {den} is not invertible in {ring}")]
    NonInvertibleDenominator { den: BigInt, ring: Ring },
    #[error("{0} is infinite")]
    InfiniteRing(Ring),
    #[error("cannot parse ring name {0:?}")]
    BadRingName(String),
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

/// The kinds of coefficient ring supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    Integers,
    IntegersMod(u64),
    Rationals,
    PrimeField(u64),
}

/// A validated coefficient ring.
///
/// Construct through [`Ring::integers`], [`Ring::integers_mod`],
/// [`Ring::rationals`], [`Ring::prime_field`] or by parsing one of the names
/// `"Z"`, `"Z/<n>"`, `"Q"`, `"F<p>"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring(RingKind);

impl Ring {
    pub const fn integers() -> Self {
        Ring(RingKind::Integers)
    }

    pub const fn rationals() -> Self {
        Ring(RingKind::Rationals)
    }

    pub fn integers_mod(n: u64) -> Result<Self, RingError> {
        if n < 2 {
            return Err(RingError::BadModulus(n));
        }
        Ok(Ring(RingKind::IntegersMod(n)))
    }

    pub fn prime_field(p: u64) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        Ok(Ring(RingKind::PrimeField(p)))
    }

    pub fn kind(&self) -> RingKind {
        self.0
    }

    /// The modulus of a finite ring, `None` for `Z` and `Q`.
    pub fn modulus(&self) -> Option<u64> {
        match self.0 {
            RingKind::IntegersMod(n) | RingKind::PrimeField(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.modulus().is_some()
    }

    /// True for `Q`, `F_p`, and `Z/p` with `p` prime.
    pub fn is_field(&self) -> bool {
        match self.0 {
            RingKind::Rationals | RingKind::PrimeField(_) => true,
            RingKind::IntegersMod(n) => is_prime(n),
            RingKind::Integers => false,
        }
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            ring: *self,
            value: BigRational::zero(),
        }
    }

    pub fn one(&self) -> RingElement {
        RingElement {
            ring: *self,
            value: BigRational::one(),
        }
    }

    pub fn from_int(&self, x: impl Into<BigInt>) -> RingElement {
        let x: BigInt = x.into();
        RingElement {
            ring: *self,
            value: BigRational::from_integer(self.canonical_int(&x)),
        }
    }

    /// Reduces an integer or fraction into this ring.
    pub fn reduce(&self, x: &BigRational) -> Result<RingElement, RingError> {
        let value = match self.0 {
            RingKind::Rationals => x.clone(),
            RingKind::Integers => {
                if !x.is_integer() {
                    return Err(RingError::NonInvertibleDenominator {
                        den: x.denom().clone(),
                        ring: *self,
                    });
                }
                x.clone()
            }
            RingKind::IntegersMod(n) | RingKind::PrimeField(n) => {
                let n = BigInt::from(n);
                let inv = mod_inverse(x.denom(), &n).ok_or_else(|| RingError::NonInvertibleDenominator {
                    den: x.denom().clone(),
                    ring: *self,
                })?;
                BigRational::from_integer((x.numer() * inv).mod_floor(&n))
            }
        };
        Ok(RingElement { ring: *self, value })
    }

    fn canonical_int(&self, x: &BigInt) -> BigInt {
        match self.modulus() {
            Some(n) => x.mod_floor(&BigInt::from(n)),
            None => x.clone(),
        }
    }

    /// All invertible elements of a finite ring, sorted by representative.
    pub fn units(&self) -> Result<Vec<RingElement>, RingError> {
        let n = self.modulus().ok_or(RingError::InfiniteRing(*self))?;
        Ok((1..n).filter(|&x| x.gcd(&n) == 1).map(|x| self.from_int(x)).collect())
    }

    /// Every element of a finite ring, in representative order.
    pub fn elements(&self) -> Result<Vec<RingElement>, RingError> {
        let n = self.modulus().ok_or(RingError::InfiniteRing(*self))?;
        Ok((0..n).map(|x| self.from_int(x)).collect())
    }
}

/// The invertible elements of a finite ring, sorted by canonical representative.
pub fn units_of(ring: &Ring) -> Result<Vec<RingElement>, RingError> {
    ring.units()
}

/// Reduces `x` into `ring`, failing when the denominator is a zero divisor.
pub fn reduce(x: &BigRational, ring: &Ring) -> Result<RingElement, RingError> {
    ring.reduce(x)
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            RingKind::Integers => write!(f, "Z"),
            RingKind::Rationals => write!(f, "Q"),
            RingKind::IntegersMod(n) => write!(f, "Z/{n}"),
            RingKind::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RingError::BadRingName(s.to_string());
        let t = s.trim();
        match t {
            "Z" => Ok(Ring::integers()),
            "Q" => Ok(Ring::rationals()),
            _ => {
                if let Some(n) = t.strip_prefix("Z/") {
                    Ring::integers_mod(n.parse().map_err(|_| bad())?)
                } else if let Some(p) = t.strip_prefix('F') {
                    Ring::prime_field(p.parse().map_err(|_| bad())?)
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl serde::Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Ring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of a [`Ring`] in canonical form.
///
/// Residues live in `[0, n)`; rationals are in lowest terms with positive
/// denominator; integers have denominator one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Ring,
    value: BigRational,
}

impl RingElement {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// The canonical representative as a rational number.
    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// The canonical representative when it is an integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.value.is_integer().then(|| self.value.to_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn inverse(&self) -> Option<RingElement> {
        if self.is_zero() {
            return None;
        }
        match self.ring.0 {
            RingKind::Rationals => Some(RingElement {
                ring: self.ring,
                value: self.value.recip(),
            }),
            RingKind::Integers => self.value.abs().is_one().then(|| self.clone()),
            RingKind::IntegersMod(n) | RingKind::PrimeField(n) => {
                let n = BigInt::from(n);
                mod_inverse(&self.value.to_integer(), &n).map(|inv| RingElement {
                    ring: self.ring,
                    value: BigRational::from_integer(inv),
                })
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    /// Integer power; negative exponents need a unit.
    pub fn pow(&self, e: i64) -> Option<RingElement> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = self.ring.one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    fn check_same(&self, other: &RingElement) {
        assert_eq!(self.ring, other.ring, "ring mismatch: {} vs {}", self.ring, other.ring);
    }

    fn normalize(ring: Ring, value: BigRational) -> RingElement {
        match ring.modulus() {
            Some(n) => RingElement {
                ring,
                value: BigRational::from_integer(value.to_integer().mod_floor(&BigInt::from(n))),
            },
            None => RingElement { ring, value },
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.value))
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.check_same(rhs);
        RingElement::normalize(self.ring, &self.value + &rhs.value)
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.check_same(rhs);
        RingElement::normalize(self.ring, &self.value - &rhs.value)
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.check_same(rhs);
        RingElement::normalize(self.ring, &self.value * &rhs.value)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::normalize(self.ring, -&self.value)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Modular inverse of `a` modulo `n`, if it exists.
pub fn mod_inverse(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(n).extended_gcd(n);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(n))
    } else {
        None
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Formats a rational as `"p"` or `"p/q"` with `q > 0`.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p"` or `"p/q"`. Accepts the Unicode minus sign. The result is
/// reduced to lowest terms.
pub fn parse_rational(s: &str) -> Result<BigRational, RingError> {
    let bad = || RingError::BadRational(s.to_string());
    let t = s.trim().replace('\u{2212}', "-");
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t.as_str(), "1"),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = den.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// Shorthand for building exact rationals in code and tests.
pub fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion used only for human-facing text output.
pub fn approx(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter for rationals as `"p/q"` strings.
pub mod rational_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(x) => s.serialize_some(&format_rational(x)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
            let s = Option::<String>::deserialize(d)?;
            s.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}
