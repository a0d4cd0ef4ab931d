use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::PotentialError;

/// Valuations `v` of `z` at which the minimum of `t + n v` over the terms
/// `(t, n)` is attained at least twice (by distinct exponents `n`): the
/// negated slopes of the lower Newton polygon of the points `(n, t)`.
pub fn newton_valuations(terms: &[(BigRational, i64)]) -> Result<BTreeSet<BigRational>, PotentialError> {
    // Only the smallest t for each exponent can attain a minimum.
    let mut lowest: BTreeMap<i64, BigRational> = BTreeMap::new();
    for (t, n) in terms {
        lowest
            .entry(*n)
            .and_modify(|cur| {
                if t < cur {
                    *cur = t.clone();
                }
            })
            .or_insert_with(|| t.clone());
    }
    if lowest.len() < 2 {
        return Err(PotentialError::Degenerate);
    }
    let pts: Vec<(i64, BigRational)> = lowest.into_iter().collect();
    let mut out = BTreeSet::new();
    for (i, (ni, ti)) in pts.iter().enumerate() {
        for (nj, tj) in &pts[i + 1..] {
            let v = (ti - tj) / BigRational::from_integer(BigInt::from(nj - ni));
            let at = |n: i64, t: &BigRational| t + &v * BigRational::from_integer(BigInt::from(n));
            let value = at(*ni, ti);
            if pts.iter().all(|(n, t)| at(*n, t) >= value) {
                out.insert(v);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q;

    #[test]
    fn balancing_examples() {
        let a = q(1, 5);
        let half = (q(1, 1) - &a) / q(2, 1);
        // d/dz of the bulk-deformed potential on the w = 1 branch.
        let dz = [(half.clone(), 0), (a.clone(), -3)];
        assert_eq!(newton_valuations(&dz).unwrap(), BTreeSet::from([q(-1, 15)]));
        // The same two levels with exponents (1, -3) balance elsewhere.
        let shifted = [(half, 1), (a, -3)];
        assert_eq!(newton_valuations(&shifted).unwrap(), BTreeSet::from([q(-1, 20)]));
        assert_eq!(
            newton_valuations(&[(q(0, 1), 0), (q(0, 1), 1)]).unwrap(),
            BTreeSet::from([q(0, 1)])
        );
        assert_eq!(
            newton_valuations(&[(q(1, 1), 2), (q(0, 1), 2)]),
            Err(PotentialError::Degenerate)
        );
    }

    #[test]
    fn interior_points_are_not_edges() {
        let pts = [(q(0, 1), 0), (q(5, 1), 1), (q(0, 1), 2)];
        assert_eq!(newton_valuations(&pts).unwrap(), BTreeSet::from([q(0, 1)]));
    }
}
