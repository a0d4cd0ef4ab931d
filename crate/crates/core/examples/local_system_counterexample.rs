//! A local system with rho(dalpha) = -1 makes the boundaries cancel over Q,
//! but the weighted invariant vanishes, so no field coefficients help.

use std::collections::BTreeMap;

use lowarea::criterion::{evaluate_pair, PairOptions};
use lowarea::invariants::{boundary_sum, oc_low};
use lowarea::ring::{q, Ring};
use lowarea::scenario::{builtin_scenario, LocalSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let qq = Ring::rationals();
    let a = q(1, 10);
    let ta = builtin_scenario("cp2_ta", &BTreeMap::from([("a".to_string(), a.clone())]))?;
    let rho = LocalSystem::new(BTreeMap::from([("dalpha".to_string(), -1)]));
    let side = ta.side(0);
    let sum: Vec<String> = boundary_sum(side, &qq, &a, None, Some(&rho))?
        .iter()
        .map(ToString::to_string)
        .collect();
    println!("weighted boundary sum over Q: {sum:?}");
    println!(
        "weighted OC over Q: {}",
        oc_low(side, &qq, None, Some(&rho))?.display_value()
    );

    let cl = builtin_scenario("cp2_clifford", &BTreeMap::new())?;
    let mut opts = PairOptions::new(qq);
    opts.local_systems[0] = Some(rho);
    let v = evaluate_pair(&ta.pair_with(&cl)?, &opts)?;
    println!("{} ({})", v.conclusion.label(), v.detail.unwrap_or_default());
    Ok(())
}
