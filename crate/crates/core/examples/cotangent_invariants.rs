//! Invariants of the monotone tori in T*S^2 and T*RP^2.

use std::collections::BTreeMap;

use lowarea::invariants::oc_low;
use lowarea::ring::{q, Ring};
use lowarea::scenario::builtin_scenario;
use lowarea::subspace::AffineSubspace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = BTreeMap::from([("a".to_string(), q(1, 2))]);
    let ts2 = builtin_scenario("ts2_la", &params)?;
    let side = ts2.side(0);
    println!(
        "T*S^2 over Z/4: {}",
        oc_low(side, &Ring::integers_mod(4)?, None, None)?.display_value()
    );
    let f2 = Ring::prime_field(2)?;
    let s = side
        .subspace
        .clone()
        .map(Ok)
        .unwrap_or_else(|| AffineSubspace::full(f2, 2))?;
    let refined = oc_low(side, &Ring::integers_mod(2)?, Some(&s), None)?;
    println!("T*S^2 over Z/2 with subspace: {}", refined.display_value());

    let trp2 = builtin_scenario("trp2_la", &params)?;
    println!(
        "T*RP^2 over Z/8: {}",
        oc_low(trp2.side(0), &Ring::integers_mod(8)?, None, None)?.display_value()
    );
    Ok(())
}
