//! Dense integer matrices, Smith normal form, and exact linear solving over
//! any supported [`Ring`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ring::{Ring, RingElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ragged matrix rows")]
    Ragged,
    #[error("element of {found} used where {expected} was required")]
    RingMismatch { expected: Ring, found: Ring },
}

/// A dense row-major integer matrix. Zero rows or columns are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width when `rows` is empty.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>], cols: usize) -> Result<Self, MatrixError> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Ragged);
            }
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        Ok(m)
    }

    /// Convenience constructor for literals; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&owned, cols).expect("ragged literal matrix")
    }

    /// A single column.
    pub fn column(v: &[BigInt]) -> Self {
        let mut m = Self::zeros(v.len(), 1);
        for (i, x) in v.iter().enumerate() {
            m[(i, 0)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `self * v` with `v` and the result over `ring`.
    pub fn mul_ring_vec(&self, v: &[RingElement], ring: &Ring) -> Result<Vec<RingElement>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ring.zero(), |acc, (a, b)| &acc + &(&ring.from_int(a.clone()) * b))
            })
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.rows != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "hcat of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<i64>> = self
            .to_rows()
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| i64::try_from(x).map_err(serde::ser::Error::custom))
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<_, _>>()?;
        rows.serialize(s)
    }
}

/// Deserializes a JSON array of integer rows. An empty array yields a
/// `0 x 0` matrix; callers that need a specific width use
/// [`IntMatrix::with_cols`].
impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(&rows, cols).map_err(serde::de::Error::custom)
    }
}

impl IntMatrix {
    /// Reinterprets an empty matrix as `0 x cols`; checks width otherwise.
    pub fn with_cols(self, cols: usize) -> Result<Self, MatrixError> {
        if self.rows == 0 {
            Ok(Self::zeros(0, cols))
        } else if self.cols == cols {
            Ok(self)
        } else {
            Err(MatrixError::DimensionMismatch(format!(
                "expected {cols} columns, found {}",
                self.cols
            )))
        }
    }
}

/// The result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// The nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with unimodular `u`, `v` such that `u * m * v` is
/// diagonal with nonnegative entries forming a divisibility chain.
///
/// Pivots are chosen as the entry of least absolute value (first in
/// row-major order on ties), so the transforms are deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = min_pivot(&d, t) else {
                return Snf { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if !d[(i, t)].is_zero() {
                    let k = -(d[(i, t)].div_floor(&d[(t, t)]));
                    d.add_row(i, t, &k);
                    u.add_row(i, t, &k);
                    clean &= d[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !d[(t, j)].is_zero() {
                    let k = -(d[(t, j)].div_floor(&d[(t, t)]));
                    d.add_col(j, t, &k);
                    v.add_col(j, t, &k);
                    clean &= d[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // The pivot must divide the whole remaining block.
            let p = d[(t, t)].clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    d.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { u, d, v }
}

fn min_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Solves `m * x = b` over `ring`. Returns `Ok(None)` when no solution
/// exists over that ring.
///
/// Over `Z/n` the system is lifted to `[m | n I] x' = b` over the integers,
/// so a single Smith-form kernel serves every ring.
pub fn solve_linear(m: &IntMatrix, b: &[RingElement], ring: &Ring) -> Result<Option<Vec<RingElement>>, MatrixError> {
    if b.len() != m.rows() {
        return Err(MatrixError::DimensionMismatch(format!(
            "matrix has {} rows but right-hand side has length {}",
            m.rows(),
            b.len()
        )));
    }
    if let Some(bad) = b.iter().find(|x| x.ring() != *ring) {
        return Err(MatrixError::RingMismatch {
            expected: *ring,
            found: bad.ring(),
        });
    }
    match ring.modulus() {
        None if ring.is_field() => {
            let rhs: Vec<BigRational> = b.iter().map(|x| x.value().clone()).collect();
            Ok(solve_rational(m, &rhs).map(|x| {
                x.into_iter()
                    .map(|v| ring.reduce(&v).expect("rational reduces into Q"))
                    .collect()
            }))
        }
        None => {
            let rhs: Vec<BigInt> = b.iter().map(|x| x.to_integer().expect("integer element")).collect();
            Ok(solve_integer(m, &rhs).map(|x| x.into_iter().map(|v| ring.from_int(v)).collect()))
        }
        Some(n) => {
            let aug = m.hcat(&scaled_identity(m.rows(), &BigInt::from(n)))?;
            let rhs: Vec<BigInt> = b.iter().map(|x| x.to_integer().expect("residue")).collect();
            Ok(solve_integer(&aug, &rhs).map(|x| x.into_iter().take(m.cols()).map(|v| ring.from_int(v)).collect()))
        }
    }
}

fn scaled_identity(n: usize, k: &BigInt) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = k.clone();
    }
    m
}

/// Integer solution of `m * x = b`, if any.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let c = snf.u.mul_vec(b).expect("dimensions checked");
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ci) in c.iter().enumerate() {
        let di = if i < m.cols() { &snf.d[(i, i)] } else { &BigInt::ZERO };
        if di.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            let (quot, rem) = ci.div_rem(di);
            if !rem.is_zero() {
                return None;
            }
            y[i] = quot;
        }
    }
    Some(snf.v.mul_vec(&y).expect("dimensions checked"))
}

/// Rational solution of `m * x = b`, if any.
pub fn solve_rational(m: &IntMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let snf = smith_normal_form(m);
    let c: Vec<BigRational> = (0..m.rows())
        .map(|i| {
            snf.u
                .row(i)
                .iter()
                .zip(b)
                .map(|(a, x)| BigRational::from_integer(a.clone()) * x)
                .sum()
        })
        .collect();
    let mut y = vec![BigRational::zero(); m.cols()];
    for (i, ci) in c.iter().enumerate() {
        let di = if i < m.cols() { &snf.d[(i, i)] } else { &BigInt::ZERO };
        if di.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            y[i] = ci / BigRational::from_integer(di.clone());
        }
    }
    Some(
        (0..m.cols())
            .map(|i| {
                snf.v
                    .row(i)
                    .iter()
                    .zip(&y)
                    .map(|(a, x)| BigRational::from_integer(a.clone()) * x)
                    .sum()
            })
            .collect(),
    )
}

/// A basis (as columns) of the integer kernel `{x : m x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let cols: Vec<Vec<BigInt>> = (rank..m.cols()).map(|j| snf.v.col(j)).collect();
    let mut k = IntMatrix::zeros(m.cols(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            k[(i, j)] = x.clone();
        }
    }
    k
}

/// True when `m x = 0` has only the trivial solution over `ring`.
pub fn kernel_is_trivial(m: &IntMatrix, ring: &Ring) -> bool {
    let snf = smith_normal_form(m);
    let diag: Vec<BigInt> = (0..m.cols())
        .map(|i| {
            if i < m.rows() {
                snf.d[(i, i)].clone()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    match ring.modulus() {
        None => diag.iter().all(|d| !d.is_zero()),
        Some(n) => {
            let n = BigInt::from(n);
            diag.iter().all(|d| d.gcd(&n).is_one())
        }
    }
}
