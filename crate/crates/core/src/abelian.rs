//! Finitely generated abelian groups given by generators and relations,
//! homomorphisms between them, and the intersection pairing on a free group.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{smith_normal_form, solve_linear, IntMatrix, MatrixError};
use crate::ring::{Ring, RingElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown generator label {0:?}")]
    UnknownLabel(String),
    #[error("element has {found} coordinates, group has {expected} generators")]
    WrongLength { expected: usize, found: usize },
    #[error("relation {0} of the source does not map into the target's relations")]
    NotAHomomorphism(usize),
    #[error("intersection form is not symmetric")]
    NotSymmetric,
    #[error("group has torsion {0:?}; the intersection pairing needs a free group")]
    TorsionGroup(Vec<BigInt>),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// An abelian group `Z^n / <relations>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgAbelianGroup {
    labels: Vec<String>,
    relations: IntMatrix,
    rank: usize,
    torsion: Vec<BigInt>,
}

/// Serialized form: `{"generators": [...], "relations": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

impl FgAbelianGroup {
    /// `relations` has one row per relation and one column per generator.
    pub fn new(labels: Vec<String>, relations: IntMatrix) -> Result<Self, AbelianError> {
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(AbelianError::DuplicateLabel(l.clone()));
            }
        }
        let relations = relations.with_cols(labels.len())?;
        let snf = smith_normal_form(&relations);
        let factors = snf.invariant_factors();
        let rank = labels.len() - factors.len();
        let torsion = factors.into_iter().filter(|d| !d.is_one()).collect();
        Ok(FgAbelianGroup {
            labels,
            relations,
            rank,
            torsion,
        })
    }

    pub fn free<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        Self::new(labels, IntMatrix::zeros(0, n)).expect("free group on distinct labels")
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self, AbelianError> {
        let rel = IntMatrix::from_rows(&spec.relations, spec.generators.len())?;
        Self::new(spec.generators.clone(), rel)
    }

    pub fn to_spec(&self) -> GroupSpec {
        GroupSpec {
            generators: self.labels.clone(),
            relations: self
                .relations
                .to_rows()
                .into_iter()
                .map(|r| r.iter().map(|x| i64::try_from(x).expect("small relation")).collect())
                .collect(),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn index_of(&self, label: &str) -> Result<usize, AbelianError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| AbelianError::UnknownLabel(label.to_string()))
    }

    /// Free rank and torsion coefficients `d_1 | d_2 | ...` (all > 1).
    pub fn structure(&self) -> (usize, &[BigInt]) {
        (self.rank, &self.torsion)
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<GroupElement, AbelianError> {
        if coords.len() != self.num_generators() {
            return Err(AbelianError::WrongLength {
                expected: self.num_generators(),
                found: coords.len(),
            });
        }
        Ok(GroupElement { coords })
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<GroupElement, AbelianError> {
        self.element(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![BigInt::zero(); self.num_generators()],
        }
    }

    /// The generator with the given label.
    pub fn generator(&self, label: &str) -> Result<GroupElement, AbelianError> {
        let i = self.index_of(label)?;
        let mut e = self.zero();
        e.coords[i] = BigInt::one();
        Ok(e)
    }

    /// Decides whether `coords` (over `ring`) is zero in `G ⊗ ring`, i.e.
    /// lies in the span of the relation rows over that ring.
    pub fn is_zero_over(&self, coords: &[RingElement], ring: &Ring) -> Result<bool, AbelianError> {
        if coords.len() != self.num_generators() {
            return Err(AbelianError::WrongLength {
                expected: self.num_generators(),
                found: coords.len(),
            });
        }
        if coords.iter().all(RingElement::is_zero) {
            return Ok(true);
        }
        Ok(solve_linear(&self.relations.transpose(), coords, ring)?.is_some())
    }

    /// Equality of two elements as elements of the group over `Z`.
    pub fn equal(&self, x: &GroupElement, y: &GroupElement) -> Result<bool, AbelianError> {
        let zz = Ring::integers();
        let diff: Vec<RingElement> = x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(a, b)| zz.from_int(a - b))
            .collect();
        self.is_zero_over(&diff, &zz)
    }

    /// Coordinates of an integral element reduced into `ring`.
    pub fn tensor(&self, x: &GroupElement, ring: &Ring) -> Vec<RingElement> {
        x.coords.iter().map(|c| ring.from_int(c.clone())).collect()
    }

    /// Renders coordinates as a linear combination of generator labels.
    pub fn format_combination(&self, coords: &[RingElement]) -> String {
        format_combination(&self.labels, coords)
    }
}

pub(crate) fn format_combination(labels: &[String], coords: &[RingElement]) -> String {
    let mut out = String::new();
    for (l, c) in labels.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        let s = c.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, s),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != "1" {
            out.push_str(&mag);
        }
        out.push_str(l);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

/// `(free rank, torsion coefficients)` of a group.
pub fn group_structure(g: &FgAbelianGroup) -> (usize, Vec<BigInt>) {
    let (r, t) = g.structure();
    (r, t.to_vec())
}

/// An element of some [`FgAbelianGroup`], as integer coordinates on its
/// generators. Equality as group elements is [`FgAbelianGroup::equal`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn is_trivially_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scaled_add(&self, k: &BigInt, other: &GroupElement) -> GroupElement {
        GroupElement {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + k * b).collect(),
        }
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.coords
            .iter()
            .map(|x| i64::try_from(x).expect("small coordinate"))
            .collect()
    }
}

/// A homomorphism given by an integer matrix whose columns are the images of
/// the source generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: &FgAbelianGroup, target: &FgAbelianGroup, matrix: IntMatrix) -> Result<Self, AbelianError> {
        let matrix = if matrix.rows() == 0 && matrix.cols() == 0 {
            IntMatrix::zeros(target.num_generators(), source.num_generators())
        } else {
            matrix
        };
        if matrix.rows() != target.num_generators() || matrix.cols() != source.num_generators() {
            return Err(MatrixError::DimensionMismatch(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.num_generators(),
                source.num_generators()
            ))
            .into());
        }
        for i in 0..source.relations().rows() {
            let image = matrix.mul_vec(source.relations().row(i))?;
            let image = target.element(image)?;
            if !target.equal(&image, &target.zero())? {
                return Err(AbelianError::NotAHomomorphism(i));
            }
        }
        Ok(GroupHom { matrix })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        GroupElement {
            coords: self.matrix.mul_vec(&x.coords).expect("checked at construction"),
        }
    }

    pub fn apply_over(&self, x: &[RingElement], ring: &Ring) -> Vec<RingElement> {
        self.matrix.mul_ring_vec(x, ring).expect("checked at construction")
    }
}

/// A symmetric integer bilinear form on a free group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    matrix: IntMatrix,
}

impl IntersectionForm {
    pub fn new(group: &FgAbelianGroup, matrix: IntMatrix) -> Result<Self, AbelianError> {
        if !group.is_free() {
            return Err(AbelianError::TorsionGroup(group.structure().1.to_vec()));
        }
        let n = group.num_generators();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(MatrixError::DimensionMismatch(format!(
                "form is {}x{}, group has {n} generators",
                matrix.rows(),
                matrix.cols()
            ))
            .into());
        }
        if !matrix.is_symmetric() {
            return Err(AbelianError::NotSymmetric);
        }
        Ok(IntersectionForm { matrix })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `x^T F y` computed in the ring the coordinates live in.
    pub fn pair_over(&self, x: &[RingElement], y: &[RingElement]) -> RingElement {
        let ring = x.first().or(y.first()).map(|e| e.ring()).unwrap_or(Ring::integers());
        let fy = self.matrix.mul_ring_vec(y, &ring).expect("length checked by caller");
        x.iter().zip(&fy).fold(ring.zero(), |acc, (a, b)| &acc + &(a * b))
    }

    /// Integral pairing of two integral classes.
    pub fn pair_integral(&self, x: &GroupElement, y: &GroupElement) -> BigInt {
        let fy = self.matrix.mul_vec(&y.coords).expect("length");
        x.coords.iter().zip(&fy).map(|(a, b)| a * b).sum()
    }
}

/// The intersection pairing of two integral classes, reduced into `ring`.
pub fn pair(form: &IntersectionForm, x: &GroupElement, y: &GroupElement, ring: &Ring) -> RingElement {
    ring.from_int(form.pair_integral(x, y))
}
