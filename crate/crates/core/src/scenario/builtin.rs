//! Built-in scenarios: toric and Chekanov-type tori in the projective plane,
//! the quadric, its three-point blowup, and the cotangent-bundle models.
//!
//! Relative groups are free on the absolute generators plus the torus classes
//! `beta`, `alpha` (or `beta1`, `beta2`); `j` includes the absolute generators
//! and `bd` kills them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::schema::{DiskDoc, LatticeParams, LedgerDoc, ScenarioDoc, SideDoc};
use super::{Scenario, ScenarioError};
use crate::abelian::GroupSpec;
use crate::ring::{format_rational, parse_rational, q, Ring};
use crate::subspace::SubspaceSpec;

const NAMES: &[(&str, &str)] = &[
    ("cp2_ta", "Chekanov-type torus T_a in CP^2 (param a in (0,1))"),
    ("cp2_clifford", "monotone Clifford torus in CP^2"),
    ("p1xp1_ta", "torus T_a in CP^1 x CP^1 (param a in (0,1))"),
    ("p1xp1_clifford", "monotone Clifford torus in CP^1 x CP^1"),
    (
        "bl3_ta",
        "torus T_a in the three-point blowup of CP^2 (param a in (0,1/2))",
    ),
    (
        "bl3_clifford",
        "monotone toric fibre of the three-point blowup (asserted invariant)",
    ),
    ("ts2_la", "monotone Chekanov-type torus in T*S^2 (param a > 0)"),
    ("trp2_la", "monotone torus in T*RP^2 (param a > 0)"),
    (
        "sphere_pair",
        "tori near two once-intersecting Lagrangian spheres (params k, a, b)",
    ),
];

/// `(name, description)` of every built-in scenario.
pub fn builtin_names() -> Vec<(&'static str, &'static str)> {
    NAMES.to_vec()
}

/// Splits `name:k=v,k=v` into a name and exact rational parameters.
pub fn parse_builtin_spec(spec: &str) -> Result<(String, BTreeMap<String, BigRational>), ScenarioError> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = BTreeMap::new();
    for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| ScenarioError::BadParams(format!("expected key=value, got {kv:?}")))?;
        let v = parse_rational(v).map_err(|e| ScenarioError::BadParams(format!("{k}: {e}")))?;
        params.insert(k.trim().to_string(), v);
    }
    Ok((name.trim().to_string(), params))
}

/// Builds and validates a built-in scenario.
pub fn builtin_scenario(name: &str, params: &BTreeMap<String, BigRational>) -> Result<Scenario, ScenarioError> {
    let p = Params::new(name, params);
    let doc = match name {
        "cp2_ta" => {
            p.allow(&["a"])?;
            cp2_ta(&p.open_interval("a", &q(0, 1), &q(1, 1))?)
        }
        "cp2_clifford" => {
            p.allow(&[])?;
            cp2_clifford()
        }
        "p1xp1_ta" => {
            p.allow(&["a"])?;
            p1xp1_ta(&p.open_interval("a", &q(0, 1), &q(1, 1))?)
        }
        "p1xp1_clifford" => {
            p.allow(&[])?;
            p1xp1_clifford()
        }
        "bl3_ta" => {
            p.allow(&["a"])?;
            bl3_ta(&p.open_interval("a", &q(0, 1), &q(1, 2))?)
        }
        "bl3_clifford" => {
            p.allow(&[])?;
            bl3_clifford()
        }
        "ts2_la" => {
            p.allow(&["a"])?;
            ts2_la(&p.positive("a")?)
        }
        "trp2_la" => {
            p.allow(&["a"])?;
            trp2_la(&p.positive("a")?)
        }
        "sphere_pair" => {
            p.allow(&["k", "a", "b"])?;
            let k = p.positive_integer("k")?;
            let bound = q(1, i64::from(k));
            let a = p.open_interval("a", &q(0, 1), &bound)?;
            let b = p.open_interval("b", &q(0, 1), &bound)?;
            sphere_pair(k, &a, &b)
        }
        other => return Err(ScenarioError::UnknownScenario(other.to_string())),
    };
    Scenario::from_doc(doc)
}

struct Params<'a> {
    name: &'a str,
    values: &'a BTreeMap<String, BigRational>,
}

impl<'a> Params<'a> {
    fn new(name: &'a str, values: &'a BTreeMap<String, BigRational>) -> Self {
        Params { name, values }
    }

    fn allow(&self, keys: &[&str]) -> Result<(), ScenarioError> {
        match self.values.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(ScenarioError::BadParams(format!(
                "{} takes no parameter {k:?}",
                self.name
            ))),
            None => Ok(()),
        }
    }

    fn get(&self, key: &str) -> Result<&BigRational, ScenarioError> {
        self.values
            .get(key)
            .ok_or_else(|| ScenarioError::BadParams(format!("{} requires parameter {key}", self.name)))
    }

    fn open_interval(&self, key: &str, lo: &BigRational, hi: &BigRational) -> Result<BigRational, ScenarioError> {
        let v = self.get(key)?;
        if v <= lo || v >= hi {
            return Err(ScenarioError::BadParams(format!(
                "{}: {key} = {} outside ({}, {})",
                self.name,
                format_rational(v),
                format_rational(lo),
                format_rational(hi)
            )));
        }
        Ok(v.clone())
    }

    fn positive(&self, key: &str) -> Result<BigRational, ScenarioError> {
        let v = self.get(key)?;
        if !v.is_positive() {
            return Err(ScenarioError::BadParams(format!(
                "{}: {key} must be positive",
                self.name
            )));
        }
        Ok(v.clone())
    }

    fn positive_integer(&self, key: &str) -> Result<u32, ScenarioError> {
        let v = self.get(key)?;
        v.is_integer()
            .then(|| v.to_integer())
            .filter(|n: &BigInt| n.is_positive())
            .and_then(|n| n.to_u32())
            .ok_or_else(|| ScenarioError::BadParams(format!("{}: {key} must be a positive integer", self.name)))
    }
}

/// Side data over the relative basis `absolute ++ torus`.
struct SideShape<'a> {
    absolute: &'a [&'a str],
    torus: &'a [&'a str],
    h1: &'a [&'a str],
}

impl SideShape<'_> {
    fn rank(&self) -> usize {
        self.absolute.len() + self.torus.len()
    }

    fn j(&self) -> Vec<Vec<i64>> {
        (0..self.rank())
            .map(|r| (0..self.absolute.len()).map(|c| i64::from(r == c)).collect())
            .collect()
    }

    fn bd(&self) -> Vec<Vec<i64>> {
        let n = self.absolute.len();
        (0..self.h1.len())
            .map(|r| (0..self.rank()).map(|c| i64::from(c >= n && c - n == r)).collect())
            .collect()
    }

    fn disk(&self, label: &str, rel: &[i64], area: &BigRational, count: i64) -> DiskDoc {
        assert_eq!(rel.len(), self.rank(), "built-in disk {label}");
        let bd = self.bd();
        let boundary = bd
            .iter()
            .map(|row| row.iter().zip(rel).map(|(a, b)| a * b).sum())
            .collect();
        DiskDoc {
            label: label.to_string(),
            rel_class: rel.to_vec(),
            boundary,
            maslov: 2,
            area: area.clone(),
            count,
        }
    }

    fn side(&self, name: &str, disks: Vec<DiskDoc>, complete_below: BigRational) -> SideDoc {
        SideDoc {
            name: name.to_string(),
            h1_l: free(self.h1),
            h2_xl: free(&[self.absolute, self.torus].concat()),
            j: self.j(),
            bd: self.bd(),
            fundamental_class: vec![0; self.absolute.len()],
            monotone: false,
            b: None,
            lattice_params: None,
            local_system: None,
            subspace: None,
            asserted_invariant: None,
            ledger: LedgerDoc { complete_below, disks },
        }
    }
}

fn free(labels: &[&str]) -> GroupSpec {
    GroupSpec {
        generators: labels.iter().map(|s| s.to_string()).collect(),
        relations: vec![],
    }
}

fn monotone(mut side: SideDoc, b: &BigRational) -> SideDoc {
    side.monotone = true;
    side.b = Some(b.clone());
    side
}

fn subspace_f2(span: Vec<Vec<i64>>) -> Option<SubspaceSpec> {
    Some(SubspaceSpec {
        field: Ring::prime_field(2).expect("2 is prime"),
        base: vec![0; span.first().map_or(0, Vec::len)],
        span,
    })
}

fn doc(absolute: &[&str], form: Vec<Vec<i64>>, sides: Vec<SideDoc>, ring: Ring) -> ScenarioDoc {
    ScenarioDoc {
        h2_x: free(absolute),
        form,
        sides,
        ring: Some(ring),
    }
}

fn zmod(n: u64) -> Ring {
    Ring::integers_mod(n).expect("modulus >= 2")
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

const CP2: &[&str] = &["H"];
const P1P1: &[&str] = &["H1", "H2"];
const BL3: &[&str] = &["H1", "H2", "E1", "E2"];
const TORUS: &[&str] = &["beta", "alpha"];
const TORUS_H1: &[&str] = &["dbeta", "dalpha"];
const CLIFFORD: &[&str] = &["beta1", "beta2"];
const CLIFFORD_H1: &[&str] = &["dbeta1", "dbeta2"];

fn cp2_ta(a: &BigRational) -> ScenarioDoc {
    let shape = SideShape {
        absolute: CP2,
        torus: TORUS,
        h1: TORUS_H1,
    };
    let upper = (BigRational::one() - a) / two();
    let disks = vec![
        shape.disk("H-2beta-alpha", &[1, -2, -1], a, 1),
        shape.disk("H-2beta", &[1, -2, 0], a, 2),
        shape.disk("H-2beta+alpha", &[1, -2, 1], a, 1),
        shape.disk("beta", &[0, 1, 0], &upper, 1),
    ];
    let mut side = shape.side("T_a", disks, q(1, 1));
    side.lattice_params = Some(LatticeParams { k: 3, n: 2 });
    doc(CP2, vec![vec![1]], vec![side], zmod(8))
}

fn cp2_clifford() -> ScenarioDoc {
    let shape = SideShape {
        absolute: CP2,
        torus: CLIFFORD,
        h1: CLIFFORD_H1,
    };
    let b = q(1, 3);
    let disks = vec![
        shape.disk("beta1", &[0, 1, 0], &b, 1),
        shape.disk("beta2", &[0, 0, 1], &b, 1),
        shape.disk("H-beta1-beta2", &[1, -1, -1], &b, 1),
    ];
    let side = monotone(shape.side("T_Cl", disks, &b * two()), &b);
    doc(CP2, vec![vec![1]], vec![side], zmod(8))
}

fn quadric_ta_disks(shape: &SideShape, a: &BigRational, pad: &[i64]) -> Vec<DiskDoc> {
    let rel = |h: [i64; 2], t: [i64; 2]| [&h[..], pad, &t[..]].concat();
    vec![
        shape.disk("H1-beta-alpha", &rel([1, 0], [-1, -1]), a, 1),
        shape.disk("H1-beta", &rel([1, 0], [-1, 0]), a, 1),
        shape.disk("H2-beta", &rel([0, 1], [-1, 0]), a, 1),
        shape.disk("H2-beta+alpha", &rel([0, 1], [-1, 1]), a, 1),
    ]
}

fn p1xp1_form() -> Vec<Vec<i64>> {
    vec![vec![0, 1], vec![1, 0]]
}

fn bl3_form() -> Vec<Vec<i64>> {
    vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, -1, 0], vec![0, 0, 0, -1]]
}

fn p1xp1_ta(a: &BigRational) -> ScenarioDoc {
    let shape = SideShape {
        absolute: P1P1,
        torus: TORUS,
        h1: TORUS_H1,
    };
    let mut disks = quadric_ta_disks(&shape, a, &[]);
    disks.push(shape.disk("beta", &[0, 0, 1, 0], &(BigRational::one() - a), 1));
    let mut side = shape.side("T_a", disks, q(1, 1));
    side.lattice_params = Some(LatticeParams { k: 2, n: 1 });
    side.subspace = subspace_f2(vec![vec![1, 0]]);
    doc(P1P1, p1xp1_form(), vec![side], zmod(4))
}

fn p1xp1_clifford() -> ScenarioDoc {
    let shape = SideShape {
        absolute: P1P1,
        torus: CLIFFORD,
        h1: CLIFFORD_H1,
    };
    let b = q(1, 2);
    let disks = vec![
        shape.disk("beta1", &[0, 0, 1, 0], &b, 1),
        shape.disk("beta2", &[0, 0, 0, 1], &b, 1),
        shape.disk("H1-beta1", &[1, 0, -1, 0], &b, 1),
        shape.disk("H2-beta2", &[0, 1, 0, -1], &b, 1),
    ];
    let mut side = monotone(shape.side("T_Cl", disks, &b * two()), &b);
    side.subspace = subspace_f2(vec![vec![0, 1]]);
    doc(P1P1, p1xp1_form(), vec![side], zmod(4))
}

fn bl3_ta(a: &BigRational) -> ScenarioDoc {
    let shape = SideShape {
        absolute: BL3,
        torus: TORUS,
        h1: TORUS_H1,
    };
    let half = q(1, 2);
    let mut disks = quadric_ta_disks(&shape, a, &[0, 0]);
    disks.push(shape.disk("H1-E1+alpha", &[1, 0, -1, 0, 0, 1], &half, 1));
    disks.push(shape.disk("H2-E2-alpha", &[0, 1, 0, -1, 0, -1], &half, 1));
    // The beta disk of area 1 - a sits exactly at the cutoff and is left out.
    let mut side = shape.side("T_a", disks, BigRational::one() - a);
    side.subspace = subspace_f2(vec![vec![1, 0]]);
    doc(BL3, bl3_form(), vec![side], zmod(2))
}

fn bl3_clifford() -> ScenarioDoc {
    let shape = SideShape {
        absolute: BL3,
        torus: CLIFFORD,
        h1: CLIFFORD_H1,
    };
    let b = q(1, 2);
    let mut side = monotone(shape.side("T_Cl", vec![], b.clone()), &b);
    side.subspace = subspace_f2(vec![vec![0, 1]]);
    side.asserted_invariant = Some(vec![0, 1, 0, 0]);
    doc(BL3, bl3_form(), vec![side], zmod(2))
}

fn ts2_disks(shape: &SideShape, a: &BigRational, sphere: [i64; 2], with_second: bool) -> Vec<DiskDoc> {
    let rel = |s: i64, t: [i64; 2]| {
        let mut v: Vec<i64> = if with_second {
            sphere.iter().map(|x| x * s).collect()
        } else {
            vec![s]
        };
        v.extend(t);
        v
    };
    vec![
        shape.disk("-beta-alpha", &rel(0, [-1, -1]), a, 1),
        shape.disk("-beta", &rel(0, [-1, 0]), a, 1),
        shape.disk("-beta-S", &rel(-1, [-1, 0]), a, 1),
        shape.disk("-beta-S+alpha", &rel(-1, [-1, 1]), a, 1),
    ]
}

fn ts2_la(a: &BigRational) -> ScenarioDoc {
    let shape = SideShape {
        absolute: &["S"],
        torus: TORUS,
        h1: TORUS_H1,
    };
    let disks = ts2_disks(&shape, a, [1, 0], false);
    let mut side = monotone(shape.side("L_a", disks, a * two()), a);
    side.subspace = subspace_f2(vec![vec![1, 0]]);
    doc(&["S"], vec![vec![-2]], vec![side], zmod(4))
}

fn trp2_la(a: &BigRational) -> ScenarioDoc {
    let shape = SideShape {
        absolute: &["RP2"],
        torus: TORUS,
        h1: TORUS_H1,
    };
    let disks = vec![
        shape.disk("RP2-2beta-alpha", &[1, -2, -1], a, 1),
        shape.disk("RP2-2beta", &[1, -2, 0], a, 2),
        shape.disk("RP2-2beta+alpha", &[1, -2, 1], a, 1),
    ];
    let side = monotone(shape.side("L_a", disks, a * two()), a);
    doc(&["RP2"], vec![vec![-1]], vec![side], zmod(8))
}

fn sphere_pair(k: u32, a: &BigRational, b: &BigRational) -> ScenarioDoc {
    let absolute: &[&str] = &["S", "S'"];
    let shape = SideShape {
        absolute,
        torus: TORUS,
        h1: TORUS_H1,
    };
    let make = |name: &str, area: &BigRational, sphere: [i64; 2]| {
        let disks = ts2_disks(&shape, area, sphere, true);
        let km1 = BigRational::from_integer(BigInt::from(k) - 1);
        let cutoff = BigRational::one() - km1 * area;
        let mut side = shape.side(name, disks, cutoff);
        side.lattice_params = Some(LatticeParams { k, n: 1 });
        side.subspace = subspace_f2(vec![vec![1, 0]]);
        side
    };
    let sides = vec![make("T_a", a, [1, 0]), make("T'_b", b, [0, 1])];
    doc(absolute, vec![vec![-2, 1], vec![1, -2]], sides, zmod(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_a(a: BigRational) -> BTreeMap<String, BigRational> {
        BTreeMap::from([("a".to_string(), a)])
    }

    #[test]
    fn every_builtin_validates_and_round_trips() {
        let cases: Vec<(&str, BTreeMap<String, BigRational>)> = vec![
            ("cp2_ta", with_a(q(1, 10))),
            ("cp2_clifford", BTreeMap::new()),
            ("p1xp1_ta", with_a(q(1, 5))),
            ("p1xp1_clifford", BTreeMap::new()),
            ("bl3_ta", with_a(q(1, 5))),
            ("bl3_clifford", BTreeMap::new()),
            ("ts2_la", with_a(q(3, 2))),
            ("trp2_la", with_a(q(1, 7))),
            (
                "sphere_pair",
                BTreeMap::from([("k".into(), q(2, 1)), ("a".into(), q(1, 5)), ("b".into(), q(1, 4))]),
            ),
        ];
        assert_eq!(cases.len(), builtin_names().len());
        for (name, params) in cases {
            let s = builtin_scenario(name, &params).unwrap_or_else(|e| panic!("{name}: {e}"));
            let json = s.to_json();
            let back = super::super::load_scenario(json.as_bytes()).unwrap();
            assert_eq!(back.to_json(), json, "{name}");
        }
    }

    #[test]
    fn bad_params() {
        assert!(matches!(
            builtin_scenario("cp2_ta", &with_a(q(1, 1))),
            Err(ScenarioError::BadParams(_))
        ));
        assert!(matches!(
            builtin_scenario("cp2_clifford", &with_a(q(1, 2))),
            Err(ScenarioError::BadParams(_))
        ));
        assert!(matches!(
            builtin_scenario("nope", &BTreeMap::new()),
            Err(ScenarioError::UnknownScenario(_))
        ));
    }

    #[test]
    fn spec_parsing() {
        let (n, p) = parse_builtin_spec("cp2_ta:a=1/10").unwrap();
        assert_eq!(n, "cp2_ta");
        assert_eq!(p["a"], q(1, 10));
        let (n, p) = parse_builtin_spec("cp2_clifford").unwrap();
        assert_eq!(n, "cp2_clifford");
        assert!(p.is_empty());
        assert!(parse_builtin_spec("x:a").is_err());
    }

    #[test]
    fn bl3_extra_disks_sum_to_the_expected_class() {
        let s = builtin_scenario("bl3_ta", &with_a(q(1, 5))).unwrap();
        let extra: Vec<_> = s.side(0).ledger.disks.iter().filter(|d| d.area == q(1, 2)).collect();
        assert_eq!(extra.len(), 2);
        let sum: Vec<i64> = extra[0]
            .rel_class
            .to_i64()
            .iter()
            .zip(extra[1].rel_class.to_i64())
            .map(|(x, y)| x + y)
            .collect();
        assert_eq!(sum, vec![1, 1, -1, -1, 0, 0]);
    }
}
