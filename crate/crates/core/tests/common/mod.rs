//! Independent oracles shared by the property and acceptance suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use lowarea::matrix::{smith_normal_form, solve_linear, IntMatrix};
use lowarea::potential::newton_valuations;
use lowarea::probes::{probe_displaces, search_probes, Point, Polytope2, Probe};
use lowarea::ring::{q, Ring, RingElement};
use lowarea::scenario::{builtin_scenario, Scenario};

/// Fixed case count without on-disk failure persistence.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::with_cases(cases)
    }
}

pub fn builtin(name: &str, params: &[(&str, BigRational)]) -> Scenario {
    let p: BTreeMap<String, BigRational> = params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    builtin_scenario(name, &p).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn ints(v: &[RingElement]) -> Vec<i64> {
    v.iter()
        .map(|x| i64::try_from(x.to_integer().expect("integral")).expect("small"))
        .collect()
}

fn big(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Determinant by rational Gaussian elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            let pivot = a[c].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot).skip(c) {
                *x -= &f * p;
            }
        }
    }
    d.to_integer()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// gcd of all k x k minors.
pub fn determinantal_divisor(m: &IntMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in combinations(m.rows(), k) {
        for cols in combinations(m.cols(), k) {
            let sub: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| m.row(r)[c].clone()).collect())
                .collect();
            let minor = det(&IntMatrix::from_rows(&sub, k).expect("square"));
            g = g.gcd(&minor);
        }
    }
    g
}

/// `U M V = D`, unimodular `U, V`, diagonal `D` with divisibility, and
/// `d_1 ... d_k` equal to the k-th determinantal divisor.
pub fn check_snf(m: &IntMatrix) -> Result<(), String> {
    let s = smith_normal_form(m);
    let prod = s.u.mul(m).and_then(|x| x.mul(&s.v)).map_err(|e| e.to_string())?;
    if prod != s.d {
        return Err("U*M*V != D".into());
    }
    if det(&s.u).abs() != BigInt::one() || det(&s.v).abs() != BigInt::one() {
        return Err("U or V not unimodular".into());
    }
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j && !s.d.row(i)[j].is_zero() {
                return Err("D not diagonal".into());
            }
        }
    }
    let f = s.invariant_factors();
    for w in f.windows(2) {
        if !(w[1].clone() % &w[0]).is_zero() {
            return Err(format!("divisibility fails: {f:?}"));
        }
    }
    if f.iter().any(|x| !x.is_positive()) {
        return Err(format!("nonpositive invariant factor: {f:?}"));
    }
    let mut acc = BigInt::one();
    for k in 1..=m.rows().min(m.cols()) {
        let dk = determinantal_divisor(m, k);
        let expected = if k <= f.len() {
            acc *= &f[k - 1];
            acc.clone()
        } else {
            BigInt::zero()
        };
        if dk != expected {
            return Err(format!("determinantal divisor {k}: {dk} vs {expected}"));
        }
    }
    Ok(())
}

pub fn matrix_strategy(max_dim: usize, max_entry: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-max_entry..=max_entry, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(&rows, c).expect("rectangular"))
    })
}

/// Compares `solve_linear` over `Z/n` with a search over all of `(Z/n)^cols`.
pub fn check_solve_exhaustive(m: &IntMatrix, b: &[i64], n: u64) -> Result<(), String> {
    let ring = Ring::integers_mod(n).map_err(|e| e.to_string())?;
    let rhs: Vec<RingElement> = b.iter().map(|&x| ring.from_int(x)).collect();
    let got = solve_linear(m, &rhs, &ring).map_err(|e| e.to_string())?;
    let cols = m.cols();
    let total = (n as usize).pow(cols as u32);
    let mut any = false;
    for idx in 0..total {
        let mut x = Vec::with_capacity(cols);
        let mut r = idx;
        for _ in 0..cols {
            x.push(ring.from_int((r % n as usize) as i64));
            r /= n as usize;
        }
        if m.mul_ring_vec(&x, &ring).map_err(|e| e.to_string())? == rhs {
            any = true;
            break;
        }
    }
    match got {
        Some(x) => {
            if m.mul_ring_vec(&x, &ring).map_err(|e| e.to_string())? != rhs {
                return Err("returned solution does not solve".into());
            }
            Ok(())
        }
        None if any => Err("solver missed an existing solution".into()),
        None => Ok(()),
    }
}

/// Every returned valuation attains the minimum twice, and every pairwise
/// slope that does is returned.
pub fn check_newton(terms: &[(BigRational, i64)]) -> Result<(), String> {
    let distinct: std::collections::BTreeSet<i64> = terms.iter().map(|t| t.1).collect();
    let vals = match newton_valuations(terms) {
        Ok(v) => v,
        Err(_) if distinct.len() < 2 => return Ok(()),
        Err(e) => return Err(e.to_string()),
    };
    let attains_twice = |v: &BigRational| {
        let values: Vec<(BigRational, i64)> = terms.iter().map(|(t, n)| (t + v * big(*n), *n)).collect();
        let min = values.iter().map(|x| x.0.clone()).min().expect("nonempty");
        let at: std::collections::BTreeSet<i64> = values.iter().filter(|x| x.0 == min).map(|x| x.1).collect();
        at.len() >= 2
    };
    for v in &vals {
        if !attains_twice(v) {
            return Err(format!("valuation {v} attains its minimum once"));
        }
    }
    for (ti, ni) in terms {
        for (tj, nj) in terms {
            if ni < nj {
                let v = (ti - tj) / big(nj - ni);
                if attains_twice(&v) && !vals.contains(&v) {
                    return Err(format!("missed valuation {v}"));
                }
            }
        }
    }
    Ok(())
}

fn ccw(v: &[Point]) -> bool {
    let n = v.len();
    let mut area = BigRational::zero();
    for i in 0..n {
        let (a, b) = (&v[i], &v[(i + 1) % n]);
        area += &a.0 * &b.1 - &b.0 * &a.1;
    }
    area.is_positive()
}

/// Counter-clockwise triangle from integer corners, or `None` if degenerate.
pub fn triangle(c: [(i64, i64); 3]) -> Option<Polytope2> {
    let mut v: Vec<Point> = c.iter().map(|&(x, y)| (big(x), big(y))).collect();
    if !ccw(&v) {
        v.reverse();
    }
    Polytope2::new(v, vec![]).ok()
}

/// A direction `d` with `<n, d> = 1`, shifted by `k` times the facet tangent.
pub fn transverse_direction(n: (i64, i64), k: i64) -> (i64, i64) {
    let e = BigInt::from(n.0).extended_gcd(&BigInt::from(n.1));
    let g: i64 = e.gcd.try_into().expect("small");
    let (x, y): (i64, i64) = (e.x.try_into().expect("small"), e.y.try_into().expect("small"));
    let (x, y) = (x * g, y * g);
    (x - k * n.1, y + k * n.0)
}

/// One random probe case: the probe displaces the point exactly when
/// `base + 2 s dir` is strictly inside.
pub fn check_probe_oracle(
    poly: &Polytope2,
    facet: usize,
    k: i64,
    t: BigRational,
    s: BigRational,
) -> Result<(), String> {
    let f = &poly.facets()[facet];
    let n: (i64, i64) = (
        f.normal.0.clone().try_into().unwrap(),
        f.normal.1.clone().try_into().unwrap(),
    );
    let d = transverse_direction(n, k);
    if n.0 * d.0 + n.1 * d.1 != 1 {
        return Err(format!("bad transverse direction {d:?} for {n:?}"));
    }
    let vs = poly.vertices();
    let (a, b) = (&vs[f.start], &vs[(f.start + 1) % vs.len()]);
    let base = (&a.0 + &t * (&b.0 - &a.0), &a.1 + &t * (&b.1 - &a.1));
    let at = |u: &BigRational| (&base.0 + u * big(d.0), &base.1 + u * big(d.1));
    let point = at(&s);
    let probe = Probe {
        facet,
        base: base.clone(),
        direction: d,
    };
    let expected = poly.contains_interior(&at(&(&s * big(2))));
    let got = probe_displaces(poly, &probe, &point);
    if got != expected {
        return Err(format!("probe {probe:?} at s={s}: got {got}, oracle {expected}"));
    }
    Ok(())
}

/// Integer 2x2 matrix of determinant +-1.
pub type Unimodular = [[i64; 2]; 2];

pub fn unimodular_strategy() -> impl Strategy<Value = Unimodular> {
    let gens: [Unimodular; 4] = [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[0, 1], [1, 0]], [[-1, 0], [0, 1]]];
    prop::collection::vec(0usize..4, 1..5).prop_map(move |idx| {
        idx.iter().fold([[1, 0], [0, 1]], |acc, &i| {
            let g = gens[i];
            [
                [
                    acc[0][0] * g[0][0] + acc[0][1] * g[1][0],
                    acc[0][0] * g[0][1] + acc[0][1] * g[1][1],
                ],
                [
                    acc[1][0] * g[0][0] + acc[1][1] * g[1][0],
                    acc[1][0] * g[0][1] + acc[1][1] * g[1][1],
                ],
            ]
        })
    })
}

fn apply(a: &Unimodular, t: &Point, p: &Point) -> Point {
    (
        big(a[0][0]) * &p.0 + big(a[0][1]) * &p.1 + &t.0,
        big(a[1][0]) * &p.0 + big(a[1][1]) * &p.1 + &t.1,
    )
}

fn apply_dir(a: &Unimodular, d: (i64, i64)) -> (i64, i64) {
    (a[0][0] * d.0 + a[0][1] * d.1, a[1][0] * d.0 + a[1][1] * d.1)
}

fn transform(poly: &Polytope2, a: &Unimodular, t: &Point) -> Polytope2 {
    let n = poly.vertices().len();
    let mut v: Vec<Point> = poly.vertices().iter().map(|p| apply(a, t, p)).collect();
    let mut ex: Vec<usize> = poly.excluded_vertices().to_vec();
    if a[0][0] * a[1][1] - a[0][1] * a[1][0] < 0 {
        v.reverse();
        ex = ex.iter().map(|i| n - 1 - i).collect();
    }
    Polytope2::new(v, ex).expect("unimodular image of a polygon")
}

fn inverse(a: &Unimodular) -> Unimodular {
    let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[d * a[1][1], -d * a[0][1]], [-d * a[1][0], d * a[0][0]]]
}

fn map_probes(src: &Polytope2, dst: &Polytope2, a: &Unimodular, t: &Point, point: &Point) -> Result<(), String> {
    let image = apply(a, t, point);
    for d in search_probes(src, point, 3) {
        let base = apply(a, t, &d.probe.base);
        let facet = (0..dst.facets().len())
            .find(|&i| dst.in_facet_interior(i, &base))
            .ok_or("image base not on a facet")?;
        let probe = Probe {
            facet,
            base,
            direction: apply_dir(a, d.probe.direction),
        };
        if !probe_displaces(dst, &probe, &image) {
            return Err(format!("image of {:?} does not displace", d.probe));
        }
    }
    Ok(())
}

/// Displacing probes map to displacing probes under `x -> A x + t`, and back.
pub fn check_equivariance(poly: &Polytope2, point: &Point, a: &Unimodular, t: &Point) -> Result<(), String> {
    let img = transform(poly, a, t);
    map_probes(poly, &img, a, t, point)?;
    let inv = inverse(a);
    let back_t = {
        let p = apply(&inv, &(q(0, 1), q(0, 1)), t);
        (-p.0, -p.1)
    };
    map_probes(&img, poly, &inv, &back_t, &apply(a, t, point))
}

pub fn rational_strategy(max_num: i64, max_den: i64) -> impl Strategy<Value = BigRational> {
    (-max_num..=max_num, 1..=max_den).prop_map(|(n, d)| q(n, d))
}

pub fn positive_rational(max_num: i64, max_den: i64) -> impl Strategy<Value = BigRational> {
    (1..=max_num, 1..=max_den).prop_map(|(n, d)| q(n, d))
}
