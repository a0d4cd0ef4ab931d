//! Writes a built-in scenario to JSON, reads it back and validates it.
//!
//! Run with a path argument to validate your own file instead.

use std::collections::BTreeMap;

use lowarea::ring::q;
use lowarea::scenario::{builtin_scenario, load_scenario, ScenarioError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let json = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => builtin_scenario("cp2_ta", &BTreeMap::from([("a".to_string(), q(1, 10))]))?.to_json(),
    };
    let s = load_scenario(json.as_bytes())?;
    println!("{} side(s), digest {}", s.sides.len(), s.digest());

    let broken = json.replacen("\"maslov\": 2", "\"maslov\": 4", 1);
    match load_scenario(broken.as_bytes()) {
        Ok(_) => println!("edited scenario still validates"),
        Err(ScenarioError::Validation { invariant, detail }) => println!("rejected ({invariant}): {detail}"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
