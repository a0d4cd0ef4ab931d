//! Bulk-deformed superpotential of the CP^2 torus and its unit critical points.

use std::collections::BTreeMap;

use lowarea::potential::{bulk_deform, residue_critical_points, unit_critical_analysis};
use lowarea::ring::{format_rational, q, Ring};
use lowarea::scenario::builtin_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for a in [q(1, 10), q(1, 5), q(3, 10), q(1, 3)] {
        let s = builtin_scenario("cp2_ta", &BTreeMap::from([("a".to_string(), a.clone())]))?;
        let p = bulk_deform(s.side(0), &BTreeMap::from([("beta".to_string(), 1)]))?;
        let r = unit_critical_analysis(&p)?;
        println!("a = {a}: P = {p}");
        for b in &r.branches {
            let vals: Vec<String> = b.valuations.iter().map(format_rational).collect();
            println!("  w0 = {}: valuations {vals:?}, {}", b.w0, b.note);
        }
        println!("  unit candidate: {}", r.has_unit_candidate);
    }

    let s = builtin_scenario("cp2_ta", &BTreeMap::from([("a".to_string(), q(1, 5))]))?;
    let p = bulk_deform(s.side(0), &BTreeMap::new())?;
    let low = p.truncate_to_level(&q(1, 5));
    let pts = residue_critical_points(&low, &Ring::integers_mod(8)?)?;
    println!("residue critical points over Z/8: {}", pts.len());
    for (z, w) in pts {
        println!("  z = {z}, w = {w}");
    }
    Ok(())
}
