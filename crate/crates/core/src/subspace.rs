//! Affine subspaces of `H_1(L; F_p)` and the coset decomposition used by the
//! grouped cancellation condition.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{Ring, RingElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubspaceError {
    #[error("subspace field {0} is not a prime field")]
    NotAField(Ring),
    #[error("vector has {found} entries, ambient dimension is {expected}")]
    WrongDimension { expected: usize, found: usize },
}

/// `base + span` inside `F_p^n`, optionally taken modulo extra relation
/// vectors (the reductions of the relations of `H_1(L)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubspace {
    field: Ring,
    ambient_dim: usize,
    base: Vec<RingElement>,
    span: Vec<Vec<RingElement>>,
    /// Row-reduced basis of `span + relations`, pivots in increasing column order.
    echelon: Vec<(usize, Vec<RingElement>)>,
}

/// JSON shape: `{"field":"F2","base":[0,0],"span":[[1,0]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceSpec {
    pub field: Ring,
    pub base: Vec<i64>,
    #[serde(default)]
    pub span: Vec<Vec<i64>>,
}

impl AffineSubspace {
    pub fn new(
        field: Ring,
        ambient_dim: usize,
        base: Vec<RingElement>,
        span: Vec<Vec<RingElement>>,
        relations: &[Vec<RingElement>],
    ) -> Result<Self, SubspaceError> {
        if !field.is_field() || !field.is_finite() {
            return Err(SubspaceError::NotAField(field));
        }
        check_dim(ambient_dim, &base)?;
        for v in span.iter().chain(relations) {
            check_dim(ambient_dim, v)?;
        }
        let generators: Vec<Vec<RingElement>> = span.iter().chain(relations).cloned().collect();
        let echelon = row_reduce(ambient_dim, generators);
        Ok(AffineSubspace {
            field,
            ambient_dim,
            base,
            span,
            echelon,
        })
    }

    pub fn from_spec(spec: &SubspaceSpec, ambient_dim: usize, relations: &[Vec<i64>]) -> Result<Self, SubspaceError> {
        let field = spec.field;
        let lift = |v: &[i64]| v.iter().map(|&x| field.from_int(x)).collect::<Vec<_>>();
        let rels: Vec<_> = relations.iter().map(|r| lift(r)).collect();
        Self::new(
            field,
            ambient_dim,
            lift(&spec.base),
            spec.span.iter().map(|v| lift(v)).collect(),
            &rels,
        )
    }

    /// The whole space `F_p^n`.
    pub fn full(field: Ring, ambient_dim: usize) -> Result<Self, SubspaceError> {
        let span = (0..ambient_dim)
            .map(|i| (0..ambient_dim).map(|j| field.from_int(u8::from(i == j))).collect())
            .collect();
        Self::new(field, ambient_dim, vec![field.zero(); ambient_dim], span, &[])
    }

    pub fn to_spec(&self) -> SubspaceSpec {
        let to_i = |v: &[RingElement]| {
            v.iter()
                .map(|x| i64::try_from(x.to_integer().expect("field residue")).expect("small residue"))
                .collect()
        };
        SubspaceSpec {
            field: self.field,
            base: to_i(&self.base),
            span: self.span.iter().map(|v| to_i(v)).collect(),
        }
    }

    pub fn field(&self) -> Ring {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dimension(&self) -> usize {
        self.echelon.len()
    }

    pub fn is_full(&self) -> bool {
        self.echelon.len() == self.ambient_dim
    }

    /// Canonical representative of `x + W`, where `W` is the linear part.
    /// Two vectors lie in the same coset iff their keys agree.
    pub fn coset_key(&self, x: &[RingElement]) -> Result<Vec<RingElement>, SubspaceError> {
        check_dim(self.ambient_dim, x)?;
        let mut v: Vec<RingElement> = x
            .iter()
            .map(|c| self.field.from_int(c.to_integer().expect("integral")))
            .collect();
        for (pivot, row) in &self.echelon {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            for (vi, ri) in v.iter_mut().zip(row) {
                *vi = &*vi - &(&factor * ri);
            }
        }
        Ok(v)
    }

    /// Key of the coset `S` itself.
    pub fn base_key(&self) -> Vec<RingElement> {
        self.coset_key(&self.base).expect("base has ambient dimension")
    }

    pub fn contains(&self, x: &[RingElement]) -> Result<bool, SubspaceError> {
        Ok(self.coset_key(x)? == self.base_key())
    }

    /// Reduces an integral vector into the field and tests membership.
    pub fn contains_integral(&self, x: &[num_bigint::BigInt]) -> Result<bool, SubspaceError> {
        let v: Vec<RingElement> = x.iter().map(|c| self.field.from_int(c.clone())).collect();
        self.contains(&v)
    }
}

fn check_dim(expected: usize, v: &[RingElement]) -> Result<(), SubspaceError> {
    if v.len() != expected {
        return Err(SubspaceError::WrongDimension {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}

/// Reduced row echelon form over a prime field; returns `(pivot column, row)`
/// pairs with each row normalized to 1 at its pivot and 0 at other pivots.
fn row_reduce(n: usize, mut rows: Vec<Vec<RingElement>>) -> Vec<(usize, Vec<RingElement>)> {
    let mut out: Vec<(usize, Vec<RingElement>)> = Vec::new();
    for col in 0..n {
        let Some(idx) = rows.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let mut pivot_row = rows.swap_remove(idx);
        let inv = pivot_row[col].inverse().expect("nonzero element of a field");
        for x in pivot_row.iter_mut() {
            *x = &*x * &inv;
        }
        let eliminate = |r: &mut Vec<RingElement>| {
            if !r[col].is_zero() {
                let f = r[col].clone();
                for (x, p) in r.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * p);
                }
            }
        };
        rows.iter_mut().for_each(eliminate);
        out.iter_mut().for_each(|(_, r)| eliminate(r));
        out.push((col, pivot_row));
    }
    out
}
