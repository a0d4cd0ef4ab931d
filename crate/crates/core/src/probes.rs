//! Probes in rational moment polygons: a segment entering through a facet
//! along an integrally transverse direction displaces the fibres over points
//! strictly before its midpoint.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{format_rational, parse_rational, q, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("a polygon needs at least 3 vertices")]
    TooFewVertices,
    #[error("vertices must be listed counterclockwise and form a strictly convex polygon")]
    NotConvex,
    #[error("excluded vertex index {0} out of range")]
    BadExcludedVertex(usize),
    #[error("invalid probe: {0}")]
    InvalidProbe(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

pub type Point = (BigRational, BigRational);

fn dot(n: &(BigInt, BigInt), p: &Point) -> BigRational {
    BigRational::from_integer(n.0.clone()) * &p.0 + BigRational::from_integer(n.1.clone()) * &p.1
}

fn dot_int(a: &(BigInt, BigInt), b: &(i64, i64)) -> BigInt {
    &a.0 * b.0 + &a.1 * b.1
}

fn along(p: &Point, s: &BigRational, d: (i64, i64)) -> Point {
    (
        &p.0 + s * BigRational::from_integer(d.0.into()),
        &p.1 + s * BigRational::from_integer(d.1.into()),
    )
}

/// Edge from vertex `start` to the next one, as `<normal, x> >= offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub start: usize,
    pub normal: (BigInt, BigInt),
    pub offset: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope2 {
    vertices: Vec<Point>,
    facets: Vec<Facet>,
    excluded: Vec<usize>,
}

/// JSON form: `{"vertices":[["-1","0"],...],"excluded_vertices":[0]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDoc {
    pub vertices: Vec<[String; 2]>,
    #[serde(default)]
    pub excluded_vertices: Vec<usize>,
}

/// Primitive integer vector along a nonzero rational direction.
fn primitive(d: &Point) -> (BigInt, BigInt) {
    let l = d.0.denom().lcm(d.1.denom());
    let x = (&d.0 * BigRational::from_integer(l.clone())).to_integer();
    let y = (&d.1 * BigRational::from_integer(l)).to_integer();
    let g = x.gcd(&y);
    (x / &g, y / &g)
}

impl Polytope2 {
    pub fn new(vertices: Vec<Point>, excluded: Vec<usize>) -> Result<Self, ProbeError> {
        let n = vertices.len();
        if n < 3 {
            return Err(ProbeError::TooFewVertices);
        }
        if let Some(&bad) = excluded.iter().find(|&&i| i >= n) {
            return Err(ProbeError::BadExcludedVertex(bad));
        }
        let mut facets = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b, c) = (&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            let e1 = (&b.0 - &a.0, &b.1 - &a.1);
            let e2 = (&c.0 - &b.0, &c.1 - &b.1);
            if (&e1.0 * &e2.1 - &e1.1 * &e2.0) <= BigRational::zero() {
                return Err(ProbeError::NotConvex);
            }
            let (dx, dy) = primitive(&e1);
            let normal = (-dy, dx);
            let offset = dot(&normal, a);
            facets.push(Facet {
                start: i,
                normal,
                offset,
            });
        }
        Ok(Polytope2 {
            vertices,
            facets,
            excluded,
        })
    }

    pub fn from_doc(doc: &PolytopeDoc) -> Result<Self, ProbeError> {
        let vertices = doc
            .vertices
            .iter()
            .map(|[x, y]| Ok((parse_rational(x)?, parse_rational(y)?)))
            .collect::<Result<Vec<_>, RingError>>()?;
        Self::new(vertices, doc.excluded_vertices.clone())
    }

    pub fn to_doc(&self) -> PolytopeDoc {
        PolytopeDoc {
            vertices: self
                .vertices
                .iter()
                .map(|(x, y)| [format_rational(x), format_rational(y)])
                .collect(),
            excluded_vertices: self.excluded.clone(),
        }
    }

    /// The quadric picture: `|x| <= y <= 1`, with the non-toric bottom vertex excluded.
    pub fn semitoric_quadric() -> Self {
        Self::new(
            vec![(q(0, 1), q(0, 1)), (q(1, 1), q(1, 1)), (q(-1, 1), q(1, 1))],
            vec![0],
        )
        .expect("valid triangle")
    }

    /// The projective plane picture: `|x| <= 2y <= 1`, bottom vertex excluded.
    pub fn semitoric_cp2() -> Self {
        Self::new(
            vec![(q(0, 1), q(0, 1)), (q(1, 1), q(1, 2)), (q(-1, 1), q(1, 2))],
            vec![0],
        )
        .expect("valid triangle")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn excluded_vertices(&self) -> &[usize] {
        &self.excluded
    }

    pub fn contains_interior(&self, p: &Point) -> bool {
        self.facets.iter().all(|f| dot(&f.normal, p) > f.offset)
    }

    /// True when `p` lies on facet `i` strictly between its endpoints.
    pub fn in_facet_interior(&self, i: usize, p: &Point) -> bool {
        self.facets.iter().enumerate().all(|(j, f)| {
            if j == i {
                dot(&f.normal, p) == f.offset
            } else {
                dot(&f.normal, p) > f.offset
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub facet: usize,
    pub base: Point,
    pub direction: (i64, i64),
}

/// The maximal segment of a probe inside the polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeSegment {
    pub exit: Point,
    /// Exit parameter: the segment is `base + s * direction`, `0 <= s <= length`.
    pub length: BigRational,
    pub exit_vertex: Option<usize>,
    /// An excluded vertex on `[base, exit)`; such probes are unusable.
    pub blocked_by: Option<usize>,
}

fn check_probe(poly: &Polytope2, probe: &Probe) -> Result<(), ProbeError> {
    let f = poly
        .facets
        .get(probe.facet)
        .ok_or_else(|| ProbeError::InvalidProbe(format!("no facet {}", probe.facet)))?;
    if dot_int(&f.normal, &probe.direction) != BigInt::one() {
        return Err(ProbeError::InvalidProbe(
            "direction must pair to 1 with the inward facet normal".into(),
        ));
    }
    if !poly.in_facet_interior(probe.facet, &probe.base) {
        return Err(ProbeError::InvalidProbe(
            "base must lie in the relative interior of the facet".into(),
        ));
    }
    Ok(())
}

/// Clips a probe to the polygon.
pub fn probe_segment(poly: &Polytope2, probe: &Probe) -> Result<ProbeSegment, ProbeError> {
    check_probe(poly, probe)?;
    let mut length: Option<BigRational> = None;
    for f in &poly.facets {
        let rate = dot_int(&f.normal, &probe.direction);
        if rate.is_negative() {
            let s = (dot(&f.normal, &probe.base) - &f.offset) / BigRational::from_integer(-rate);
            if length.as_ref().is_none_or(|l| &s < l) {
                length = Some(s);
            }
        }
    }
    let length = length.ok_or_else(|| ProbeError::InvalidProbe("probe never exits".into()))?;
    let exit = along(&probe.base, &length, probe.direction);
    let exit_vertex = poly.vertices.iter().position(|v| v == &exit);
    let blocked_by = poly.excluded.iter().copied().find(|&i| {
        parameter_of(&probe.base, probe.direction, &poly.vertices[i]).is_some_and(|s| !s.is_negative() && s < length)
    });
    Ok(ProbeSegment {
        exit,
        length,
        exit_vertex,
        blocked_by,
    })
}

/// `s` with `p = base + s * d`, if `p` is on that line.
fn parameter_of(base: &Point, d: (i64, i64), p: &Point) -> Option<BigRational> {
    let s = if d.0 != 0 {
        (&p.0 - &base.0) / BigRational::from_integer(d.0.into())
    } else {
        (&p.1 - &base.1) / BigRational::from_integer(d.1.into())
    };
    (along(base, &s, d) == *p).then_some(s)
}

/// True when `point` sits on the probe strictly before its midpoint and the
/// probe avoids excluded vertices.
pub fn probe_displaces(poly: &Polytope2, probe: &Probe, point: &Point) -> bool {
    let Ok(seg) = probe_segment(poly, probe) else {
        return false;
    };
    if seg.blocked_by.is_some() {
        return false;
    }
    match parameter_of(&probe.base, probe.direction, point) {
        Some(s) => s.is_positive() && s * BigRational::from_integer(2.into()) < seg.length,
        None => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplacingProbe {
    pub probe: Probe,
    pub segment: ProbeSegment,
    pub parameter: BigRational,
}

/// Primitive directions with both components in `[-bound, bound]`, in a
/// fixed order.
pub fn primitive_directions(bound: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for dx in -bound..=bound {
        for dy in -bound..=bound {
            if dx.gcd(&dy) == 1 {
                out.push((dx, dy));
            }
        }
    }
    out
}

/// All displacing probes through `point` with directions bounded by `bound`.
pub fn search_probes(poly: &Polytope2, point: &Point, bound: i64) -> Vec<DisplacingProbe> {
    if !poly.contains_interior(point) {
        return vec![];
    }
    primitive_directions(bound)
        .par_iter()
        .flat_map_iter(|&d| {
            poly.facets.iter().enumerate().filter_map(move |(i, f)| {
                if dot_int(&f.normal, &d) != BigInt::one() {
                    return None;
                }
                let s = dot(&f.normal, point) - &f.offset;
                let probe = Probe {
                    facet: i,
                    base: along(point, &-s.clone(), d),
                    direction: d,
                };
                if !probe_displaces(poly, &probe, point) {
                    return None;
                }
                let segment = probe_segment(poly, &probe).ok()?;
                Some(DisplacingProbe {
                    probe,
                    segment,
                    parameter: s,
                })
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: BigRational, y: BigRational) -> Point {
        (x, y)
    }

    fn standard_triangle() -> Polytope2 {
        Polytope2::new(
            vec![pt(q(0, 1), q(0, 1)), pt(q(1, 1), q(0, 1)), pt(q(0, 1), q(1, 1))],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn segments() {
        let t = standard_triangle();
        let probe = Probe {
            facet: 0,
            base: pt(q(1, 2), q(0, 1)),
            direction: (0, 1),
        };
        let seg = probe_segment(&t, &probe).unwrap();
        assert_eq!(seg.exit, pt(q(1, 2), q(1, 2)));
        assert_eq!(seg.length, q(1, 2));

        let sq = Polytope2::new(
            vec![
                pt(q(0, 1), q(0, 1)),
                pt(q(1, 1), q(0, 1)),
                pt(q(1, 1), q(1, 1)),
                pt(q(0, 1), q(1, 1)),
            ],
            vec![],
        )
        .unwrap();
        let probe = Probe {
            facet: 0,
            base: pt(q(1, 2), q(0, 1)),
            direction: (0, 1),
        };
        assert_eq!(probe_segment(&sq, &probe).unwrap().exit, pt(q(1, 2), q(1, 1)));
        let diag = Probe {
            facet: 0,
            base: pt(q(1, 4), q(0, 1)),
            direction: (1, 1),
        };
        let seg = probe_segment(&sq, &diag).unwrap();
        assert_eq!(seg.exit, pt(q(1, 1), q(3, 4)));
        assert_eq!(seg.length, q(3, 4));
    }

    #[test]
    fn displacement_examples() {
        let t = standard_triangle();
        let probe = Probe {
            facet: 0,
            base: pt(q(1, 2), q(0, 1)),
            direction: (0, 1),
        };
        assert!(probe_displaces(&t, &probe, &pt(q(1, 2), q(1, 5))));
        assert!(!probe_displaces(&t, &probe, &pt(q(1, 2), q(1, 4))));
        assert!(!probe_displaces(&t, &probe, &pt(q(1, 3), q(1, 3))));
    }

    #[test]
    fn invalid_probes() {
        let t = standard_triangle();
        let slanted = Probe {
            facet: 0,
            base: pt(q(1, 2), q(0, 1)),
            direction: (1, 2),
        };
        assert!(matches!(probe_segment(&t, &slanted), Err(ProbeError::InvalidProbe(_))));
        let at_vertex = Probe {
            facet: 0,
            base: pt(q(0, 1), q(0, 1)),
            direction: (0, 1),
        };
        assert!(matches!(
            probe_segment(&t, &at_vertex),
            Err(ProbeError::InvalidProbe(_))
        ));
    }

    #[test]
    fn quadric_picture() {
        let p = Polytope2::semitoric_quadric();
        assert!(!search_probes(&p, &pt(q(0, 1), q(3, 4)), 3).is_empty());
        assert!(!search_probes(&p, &pt(q(1, 4), q(1, 2)), 3).is_empty());
        assert!(search_probes(&p, &pt(q(0, 1), q(1, 4)), 3).is_empty());
        assert!(search_probes(&p, &pt(q(0, 1), q(1, 2)), 3).is_empty());
    }

    #[test]
    fn not_convex_rejected() {
        let cw = vec![pt(q(0, 1), q(0, 1)), pt(q(0, 1), q(1, 1)), pt(q(1, 1), q(0, 1))];
        assert_eq!(Polytope2::new(cw, vec![]), Err(ProbeError::NotConvex));
    }
}
