//! The Chekanov-type torus against the Clifford torus in CP^2 over Z/8.

use std::collections::BTreeMap;

use lowarea::criterion::{evaluate_pair, PairOptions};
use lowarea::invariants::{area_spectrum, boundary_sum, oc_low};
use lowarea::ring::{q, Ring};
use lowarea::scenario::builtin_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z8 = Ring::integers_mod(8)?;
    let a = q(1, 10);
    let ta = builtin_scenario("cp2_ta", &BTreeMap::from([("a".to_string(), a.clone())]))?;
    let cl = builtin_scenario("cp2_clifford", &BTreeMap::new())?;

    let side = ta.side(0);
    let spectrum = area_spectrum(side)?;
    println!("a = {}, A = {}", spectrum.least, spectrum.next.value);
    let over_z = boundary_sum(side, &Ring::integers(), &a, None, None)?;
    let over_z8 = boundary_sum(side, &z8, &a, None, None)?;
    let show = |v: &[lowarea::ring::RingElement]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    println!(
        "boundary sum over Z: ({}), over Z/8: ({})",
        show(&over_z),
        show(&over_z8)
    );
    println!("OC(T_a) = {}", oc_low(side, &z8, None, None)?.display_value());
    println!("OC(T_Cl) = {}", oc_low(cl.side(0), &z8, None, None)?.display_value());

    let verdict = evaluate_pair(&ta.pair_with(&cl)?, &PairOptions::new(z8))?;
    println!("{}", serde_json::to_string_pretty(&verdict)?);
    Ok(())
}
