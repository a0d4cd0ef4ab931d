//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::io::Write;

use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{RngAlgorithm, TestRng, TestRunner};

use common::*;
use lowarea::criterion::{evaluate_pair, rational_grid, Conclusion, InconclusiveReason, PairOptions, TheoremId};
use lowarea::invariants::{
    area_progression, area_spectrum, boundary_sum, cancellation_threshold, grouped_cancellation, oc_low,
    NextAreaSource, Threshold,
};
use lowarea::matrix::IntMatrix;
use lowarea::potential::{bulk_deform, potential_from_ledger, residue_critical_points, unit_critical_analysis};
use lowarea::probes::{search_probes, Polytope2};
use lowarea::ring::{q, Ring};
use lowarea::scenario::LocalSystem;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn z(n: u64) -> Ring {
    Ring::integers_mod(n).unwrap()
}

fn f2() -> Ring {
    Ring::prime_field(2).unwrap()
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(config(cases), TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_property<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Outcome) -> Outcome {
    runner(cases)
        .run(&strategy, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())
}

fn label(v: &lowarea::criterion::Verdict) -> &'static str {
    v.conclusion.label()
}

fn cp2_pipeline() -> Outcome {
    let a = q(1, 10);
    let ta = builtin("cp2_ta", &[("a", a.clone())]);
    let cl = builtin("cp2_clifford", &[]);
    let side = ta.side(0);
    let over_z = boundary_sum(side, &Ring::integers(), &a, None, None).map_err(|e| e.to_string())?;
    ensure!(ints(&over_z) == vec![-8, 0], "boundary sum over Z: {:?}", ints(&over_z));
    let over_z8 = boundary_sum(side, &z(8), &a, None, None).map_err(|e| e.to_string())?;
    ensure!(ints(&over_z8) == vec![0, 0], "boundary sum over Z/8 nonzero");
    let oc = oc_low(side, &z(8), None, None).map_err(|e| e.to_string())?;
    ensure!(ints(&oc.value) == vec![4], "OC(T_a) = {}", oc.display_value());
    let occ = oc_low(cl.side(0), &z(8), None, None).map_err(|e| e.to_string())?;
    ensure!(ints(&occ.value) == vec![1], "OC(T_Cl) = {}", occ.display_value());
    let v = evaluate_pair(&ta.pair_with(&cl).unwrap(), &PairOptions::new(z(8))).map_err(|e| e.to_string())?;
    ensure!(
        v.pairing.as_ref().map(ToString::to_string).as_deref() == Some("4"),
        "pairing {:?}",
        v.pairing
    );
    ensure!(
        v.conclusion == Conclusion::NonDisplaceable(TheoremId::LowArea),
        "verdict {:?}",
        v.conclusion
    );
    for n in 1..=30 {
        let a = q(n, 100);
        let sp = area_spectrum(builtin("cp2_ta", &[("a", a.clone())]).side(0)).map_err(|e| e.to_string())?;
        let expected = (q(1, 1) - &a) / q(2, 1);
        ensure!(
            sp.next.value.finite() == Some(&expected),
            "A at a={a} is {}",
            sp.next.value
        );
    }
    let mut grid = rational_grid(&q(1, 100), &q(1, 5), &q(1, 100));
    grid.extend([q(1, 9), q(1, 9) - q(1, 10_000), q(1, 9) + q(1, 10_000)]);
    for a in grid {
        let pair = builtin("cp2_ta", &[("a", a.clone())]).pair_with(&cl).unwrap();
        let v = evaluate_pair(&pair, &PairOptions::new(z(8))).map_err(|e| e.to_string())?;
        ensure!(
            v.conclusion.is_non_displaceable() == (a < q(1, 9)),
            "a={a}: {}",
            label(&v)
        );
    }
    Ok(())
}

fn quadric() -> Outcome {
    let cl = builtin("p1xp1_clifford", &[]);
    let ta = builtin("p1xp1_ta", &[("a", q(1, 5))]);
    let oc = oc_low(ta.side(0), &z(4), None, None).map_err(|e| e.to_string())?;
    ensure!(ints(&oc.value) == vec![2, 2], "OC over Z/4 = {}", oc.display_value());
    let pair = ta.pair_with(&cl).unwrap();
    let plain = evaluate_pair(&pair, &PairOptions::new(z(4))).map_err(|e| e.to_string())?;
    ensure!(
        plain.conclusion == Conclusion::Inconclusive(InconclusiveReason::PairingVanishes)
            && plain.detail.as_deref() == Some("pairing 4 = 0 mod 4"),
        "plain verdict {:?} {:?}",
        plain.conclusion,
        plain.detail
    );
    let opts = PairOptions::new(z(2)).subspaces(Some(f2()));
    let ocl = lowarea::criterion::side_invariant(&pair, 0, &opts)
        .unwrap()
        .map_err(|e| e.to_string())?;
    let ock = lowarea::criterion::side_invariant(&pair, 1, &opts)
        .unwrap()
        .map_err(|e| e.to_string())?;
    ensure!(
        ints(&ocl.value) == vec![1, 1] && ints(&ock.value) == vec![0, 1],
        "subspace invariants {} and {}",
        ocl.display_value(),
        ock.display_value()
    );
    let v = evaluate_pair(&pair, &opts).map_err(|e| e.to_string())?;
    ensure!(
        v.pairing.as_ref().is_some_and(|p| p.is_one()),
        "subspace pairing {:?}",
        v.pairing
    );
    for n in 1..=19 {
        let a = q(n, 40);
        let pair = builtin("p1xp1_ta", &[("a", a.clone())]).pair_with(&cl).unwrap();
        let v = evaluate_pair(&pair, &opts).map_err(|e| e.to_string())?;
        ensure!(
            v.conclusion.is_non_displaceable() == (a < q(1, 4)),
            "a={a}: {}",
            label(&v)
        );
    }
    Ok(())
}

fn blowup() -> Outcome {
    let cl = builtin("bl3_clifford", &[]);
    let ta = builtin("bl3_ta", &[("a", q(1, 5))]);
    let side = ta.side(0);
    let s = side.subspace.clone().ok_or("bl3_ta has no subspace")?;
    let level = grouped_cancellation(side, &s, &z(2), &q(1, 2), None).map_err(|e| e.to_string())?;
    ensure!(level.holds, "area-1/2 level does not cancel coset-wise");
    let t = cancellation_threshold(side, &z(2), Some(&s), None).map_err(|e| e.to_string())?;
    ensure!(t.lower_bound() > &q(1, 2), "threshold {t}");
    ensure!(
        matches!(t, Threshold::AtLeastCutoff(_)),
        "threshold {t} is not the cutoff bound"
    );
    let opts = PairOptions::new(z(2)).subspaces(Some(f2())).monotone_variant();
    let v = evaluate_pair(&ta.pair_with(&cl).unwrap(), &opts).map_err(|e| e.to_string())?;
    ensure!(
        v.pairing.as_ref().is_some_and(|p| p.is_one()),
        "pairing {:?}",
        v.pairing
    );
    for n in 1..=19 {
        let a = q(n, 40);
        let pair = builtin("bl3_ta", &[("a", a.clone())]).pair_with(&cl).unwrap();
        let v = evaluate_pair(&pair, &opts).map_err(|e| e.to_string())?;
        let gate = &a + q(1, 2) < q(1, 1) - &a;
        ensure!(gate == (a < q(1, 4)), "gate arithmetic at a={a}");
        ensure!(v.conclusion.is_non_displaceable() == gate, "a={a}: {}", label(&v));
    }
    Ok(())
}

fn cotangent() -> Outcome {
    let ts2 = builtin("ts2_la", &[("a", q(1, 3))]);
    let oc = oc_low(ts2.side(0), &z(4), None, None).map_err(|e| e.to_string())?;
    ensure!(ints(&oc.value) == vec![2], "T*S^2 over Z/4: {}", oc.display_value());
    let s = ts2.side(0).subspace.clone().ok_or("ts2_la has no subspace")?;
    let oc = oc_low(ts2.side(0), &z(2), Some(&s), None).map_err(|e| e.to_string())?;
    ensure!(
        ints(&oc.value) == vec![1],
        "T*S^2 over Z/2 with S: {}",
        oc.display_value()
    );
    let trp2 = builtin("trp2_la", &[("a", q(1, 3))]);
    let oc = oc_low(trp2.side(0), &z(8), None, None).map_err(|e| e.to_string())?;
    ensure!(ints(&oc.value) == vec![4], "T*RP^2 over Z/8: {}", oc.display_value());
    Ok(())
}

fn progression() -> Outcome {
    for n in 1..=19 {
        let a = q(n, 100);
        let p = area_progression(3, 2, &a).map_err(|e| e.to_string())?;
        let expected = (q(1, 1) - &a) / q(2, 1);
        ensure!(p.bound == expected, "A bound at a={a}: {}", p.bound);
        let side = builtin("cp2_ta", &[("a", a.clone())]);
        for d in &side.side(0).ledger.disks {
            ensure!(
                p.contains(&d.area),
                "area {} of {} not in the progression",
                d.area,
                d.label
            );
        }
    }
    for k in 1..=3i64 {
        for n in 1..40 {
            let a = q(n, 40 * k);
            let Ok(pair) = lowarea::scenario::builtin_scenario(
                "sphere_pair",
                &[("k", q(k, 1)), ("a", a.clone()), ("b", a.clone())]
                    .into_iter()
                    .map(|(x, y)| (x.to_string(), y))
                    .collect(),
            ) else {
                continue;
            };
            let v = evaluate_pair(&pair, &PairOptions::new(z(2)).subspaces(Some(f2()))).map_err(|e| e.to_string())?;
            let gate = &a + &a < q(2, k + 1);
            ensure!(
                v.conclusion.is_non_displaceable() == gate,
                "k={k} a=b={a}: {} ({:?})",
                label(&v),
                v.detail
            );
            if gate {
                let sp = area_spectrum(pair.side(0)).map_err(|e| e.to_string())?;
                ensure!(
                    sp.next.source == NextAreaSource::Progression,
                    "k={k}: next area not from the progression"
                );
            }
        }
    }
    Ok(())
}

fn local_system() -> Outcome {
    let qq = Ring::rationals();
    let a = q(1, 10);
    let ta = builtin("cp2_ta", &[("a", a.clone())]);
    let rho = LocalSystem::new([("dalpha".to_string(), -1)].into_iter().collect());
    let sum = boundary_sum(ta.side(0), &qq, &a, None, Some(&rho)).map_err(|e| e.to_string())?;
    ensure!(
        sum.iter().all(|x| x.is_zero()),
        "weighted boundary sum is nonzero over Q"
    );
    let oc = oc_low(ta.side(0), &qq, None, Some(&rho)).map_err(|e| e.to_string())?;
    ensure!(oc.is_zero(), "weighted OC = {}", oc.display_value());
    let mut opts = PairOptions::new(qq);
    opts.local_systems[0] = Some(rho);
    let v = evaluate_pair(&ta.pair_with(&builtin("cp2_clifford", &[])).unwrap(), &opts).map_err(|e| e.to_string())?;
    ensure!(
        matches!(v.conclusion, Conclusion::Inconclusive(_)),
        "verdict {:?}",
        v.conclusion
    );
    // Without the local system the plain sum over Q does not cancel.
    ensure!(
        oc_low(ta.side(0), &qq, None, None).is_err(),
        "plain invariant over Q should be undefined"
    );
    Ok(())
}

fn critical_points() -> Outcome {
    let bulk = |a: &BigRational| {
        let s = builtin("cp2_ta", &[("a", a.clone())]);
        bulk_deform(s.side(0), &[("beta".to_string(), 1)].into_iter().collect()).unwrap()
    };
    for a in [q(1, 10), q(1, 5), q(3, 10)] {
        let r = unit_critical_analysis(&bulk(&a)).map_err(|e| e.to_string())?;
        ensure!(!r.has_unit_candidate, "a={a}: unexpected unit candidate");
        let one = r.branches.iter().find(|b| b.w0.is_one()).ok_or("no w0 = 1 branch")?;
        let expected = (q(3, 1) * &a - q(1, 1)) / q(6, 1);
        ensure!(
            one.valuations == vec![expected.clone()],
            "a={a}: w0=1 valuations {:?}, expected {expected}",
            one.valuations
        );
    }
    let r = unit_critical_analysis(&bulk(&q(1, 3))).map_err(|e| e.to_string())?;
    ensure!(r.has_unit_candidate, "a=1/3 should give a unit candidate");
    let s = builtin("cp2_ta", &[("a", q(1, 5))]);
    let low = potential_from_ledger(s.side(0)).unwrap().truncate_to_level(&q(1, 5));
    let pts = residue_critical_points(&low, &z(8)).map_err(|e| e.to_string())?;
    ensure!(
        pts.iter().any(|(x, y)| x.is_one() && y.is_one()),
        "(1,1) missing over Z/8"
    );
    let r = unit_critical_analysis(&low).map_err(|e| e.to_string())?;
    let minus = Ring::rationals().from_int(-1);
    ensure!(
        r.branches.iter().any(|b| b.w0 == minus && b.candidate),
        "w0 = -1 branch not found over Q"
    );
    Ok(())
}

fn probes() -> Outcome {
    for (name, poly) in [
        ("quadric", Polytope2::semitoric_quadric()),
        ("cp2", Polytope2::semitoric_cp2()),
    ] {
        for x in -16i64..=16 {
            for y in 1i64..16 {
                let p = (q(x, 16), q(y, 16));
                if x == 0 || !poly.contains_interior(&p) {
                    continue;
                }
                ensure!(
                    !search_probes(&poly, &p, 3).is_empty(),
                    "{name}: ({x}/16, {y}/16) not displaced"
                );
            }
        }
    }
    let quadric = Polytope2::semitoric_quadric();
    for y in 1i64..16 {
        let found = !search_probes(&quadric, &(q(0, 1), q(y, 16)), 3).is_empty();
        ensure!(
            found == (q(y, 16) > q(1, 2)),
            "quadric (0, {y}/16): displaced = {found}"
        );
    }
    let cases = (
        prop::array::uniform3((-4i64..=4, -4i64..=4)),
        0usize..3,
        -3i64..=3,
        1i64..=9,
        positive_rational(20, 10),
    );
    run_property(200, cases, |(c, facet, k, t, s)| match triangle(c) {
        Some(poly) => check_probe_oracle(&poly, facet, k, q(t, 10), s),
        None => Ok(()),
    })
}

fn property_suites() -> Outcome {
    run_property(500, matrix_strategy(4, 9), |m| check_snf(&m))?;
    let systems = (
        2u64..=6,
        (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| {
            (
                prop::collection::vec(prop::collection::vec(-6i64..=6, c), r),
                prop::collection::vec(-6i64..=6, r),
            )
        }),
    );
    run_property(200, systems, |(n, (m, b))| {
        let cols = m[0].len();
        check_solve_exhaustive(&IntMatrix::from_rows(&m, cols).unwrap(), &b, n)
    })?;
    run_property(
        300,
        prop::collection::vec((positive_rational(12, 6), -4i64..=4), 1..7),
        |t| check_newton(&t),
    )?;
    let eq = (
        0usize..2,
        -7i64..=7,
        1i64..=7,
        unimodular_strategy(),
        (rational_strategy(5, 3), rational_strategy(5, 3)),
    );
    run_property(20, eq, |(which, px, py, a, t)| {
        let poly = if which == 0 {
            Polytope2::semitoric_quadric()
        } else {
            Polytope2::semitoric_cp2()
        };
        let point = (q(px, 8), q(py, 8));
        if !poly.contains_interior(&point) {
            return Ok(());
        }
        check_equivariance(&poly, &point, &a, &t)
    })
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 cp2 pipeline and a < 1/9 sweep", cp2_pipeline),
        ("2 quadric invariants and a < 1/4", quadric),
        ("3 three-point blowup monotone partner", blowup),
        ("4 cotangent bundle invariants", cotangent),
        ("5 area progression and sphere-pair gate", progression),
        ("6 local system counterexample over Q", local_system),
        ("7 superpotential critical points", critical_points),
        ("8 semitoric probes", probes),
        ("9 property suites", property_suites),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (name, check) in criteria {
        match check() {
            Ok(()) => writeln!(out, "PASS criterion {name}").unwrap(),
            Err(e) => {
                writeln!(out, "FAIL criterion {name}: {e}").unwrap();
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
