//! Probe search in the semitoric pictures: only the vertical segment below
//! height 1/2 survives in the quadric.

use lowarea::probes::{search_probes, Polytope2};
use lowarea::ring::{format_rational, q};

fn main() {
    let quadric = Polytope2::semitoric_quadric();
    for p in [
        (q(0, 1), q(1, 4)),
        (q(0, 1), q(1, 2)),
        (q(0, 1), q(3, 4)),
        (q(1, 4), q(1, 2)),
    ] {
        let found = search_probes(&quadric, &p, 3);
        print!(
            "({}, {}): {} displacing probes",
            format_rational(&p.0),
            format_rational(&p.1),
            found.len()
        );
        if let Some(d) = found.first() {
            print!(
                ", e.g. direction {:?} from ({}, {})",
                d.probe.direction,
                format_rational(&d.probe.base.0),
                format_rational(&d.probe.base.1)
            );
        }
        println!();
    }
    let cp2 = Polytope2::semitoric_cp2();
    let p = (q(1, 4), q(3, 8));
    println!("CP^2 picture, (1/4, 3/8): {} probes", search_probes(&cp2, &p, 3).len());
}
