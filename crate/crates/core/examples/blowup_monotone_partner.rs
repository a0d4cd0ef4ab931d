//! Three-point blowup: the monotone-partner variant, where the cancellation
//! threshold of the non-monotone torus plays the role of the next area.

use std::collections::BTreeMap;

use lowarea::criterion::{evaluate_pair, PairOptions};
use lowarea::invariants::cancellation_threshold;
use lowarea::ring::{q, Ring};
use lowarea::scenario::builtin_scenario;
use lowarea::subspace::AffineSubspace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z2 = Ring::integers_mod(2)?;
    let f2 = Ring::prime_field(2)?;
    let cl = builtin_scenario("bl3_clifford", &BTreeMap::new())?;
    for a in [q(1, 5), q(1, 4), q(3, 10)] {
        let ta = builtin_scenario("bl3_ta", &BTreeMap::from([("a".to_string(), a.clone())]))?;
        let side = ta.side(0);
        let s = side
            .subspace
            .clone()
            .map(Ok)
            .unwrap_or_else(|| AffineSubspace::full(f2, 2))?;
        let t = cancellation_threshold(side, &z2, Some(&s), None)?;
        let opts = PairOptions::new(z2).subspaces(Some(f2)).monotone_variant();
        let v = evaluate_pair(&ta.pair_with(&cl)?, &opts)?;
        println!("a = {a}: threshold {t}, verdict {}", v.conclusion.label());
    }
    Ok(())
}
