//! Exact sweep of the CP^2 criterion in the parameter a.

use std::collections::BTreeMap;

use lowarea::criterion::{rational_grid, sweep, PairOptions};
use lowarea::ring::{format_rational, q, Ring};
use lowarea::scenario::builtin_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cl = builtin_scenario("cp2_clifford", &BTreeMap::new())?;
    let grid = rational_grid(&q(1, 100), &q(1, 5), &q(1, 100));
    let build = |a: &num_rational::BigRational| {
        builtin_scenario("cp2_ta", &BTreeMap::from([("a".to_string(), a.clone())]))?.pair_with(&cl)
    };
    let report = sweep(&grid, build, &PairOptions::new(Ring::integers_mod(8)?));
    for p in &report.points {
        let label = p.outcome.as_ref().map(|v| v.conclusion.label()).unwrap_or("error");
        println!("{:>7}  {label}", format_rational(&p.value));
    }
    for t in &report.thresholds {
        let exact = t.exact.as_ref().map(format_rational).unwrap_or_else(|| "?".into());
        println!(
            "verdict changes between {} and {}: exactly at {exact} (verified: {})",
            t.below, t.above, t.verified
        );
    }
    Ok(())
}
