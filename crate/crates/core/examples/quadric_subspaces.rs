//! CP^1 x CP^1: the plain invariants pair to zero mod 4, while the
//! subspace-refined ones over Z/2 pair to 1.

use std::collections::BTreeMap;

use lowarea::criterion::{evaluate_pair, PairOptions};
use lowarea::ring::{q, Ring};
use lowarea::scenario::builtin_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cl = builtin_scenario("p1xp1_clifford", &BTreeMap::new())?;
    for a in [q(1, 5), q(1, 4), q(3, 10)] {
        let ta = builtin_scenario("p1xp1_ta", &BTreeMap::from([("a".to_string(), a.clone())]))?;
        let pair = ta.pair_with(&cl)?;
        let plain = evaluate_pair(&pair, &PairOptions::new(Ring::integers_mod(4)?))?;
        let f2 = Ring::prime_field(2)?;
        let refined = evaluate_pair(&pair, &PairOptions::new(f2).subspaces(Some(f2)))?;
        println!(
            "a = {a}: plain {} ({}), with subspaces {} (pairing {})",
            plain.conclusion.label(),
            plain.detail.unwrap_or_default(),
            refined.conclusion.label(),
            refined.pairing.map(|p| p.to_string()).unwrap_or_else(|| "-".into()),
        );
    }
    Ok(())
}
