//! Smith normal form and a few group computations.

use lowarea::abelian::{group_structure, FgAbelianGroup};
use lowarea::matrix::{smith_normal_form, solve_linear, IntMatrix};
use lowarea::ring::Ring;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    let snf = smith_normal_form(&m);
    println!("invariant factors: {:?}", snf.invariant_factors());
    println!("U*M*V == D: {}", snf.u.mul(&m)?.mul(&snf.v)? == snf.d);

    let g = FgAbelianGroup::new(vec!["x".into(), "y".into()], IntMatrix::from_i64(&[&[2, 0], &[0, 4]]))?;
    let (rank, torsion) = group_structure(&g);
    println!("Z^2 / <2x, 4y>: rank {rank}, torsion {torsion:?}");

    let z8 = Ring::integers_mod(8)?;
    let a = IntMatrix::from_i64(&[&[2, 1], &[0, 4]]);
    let b = vec![z8.from_int(3), z8.from_int(4)];
    match solve_linear(&a, &b, &z8)? {
        Some(x) => println!("solve over Z/8: x = ({}, {})", x[0], x[1]),
        None => println!("no solution over Z/8"),
    }
    Ok(())
}
