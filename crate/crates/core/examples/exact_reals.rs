//! Outward-rounded interval arithmetic and refinement of a constructive real.

use num_rational::BigRational;
use smoothish::creal::{eval_to_eps, Limits};
use smoothish::exactnum::{transcendental, Interval, Precision};
use smoothish::tower::{prims, EvalConfig, Tower};

fn main() {
    // Each enclosure of sqrt 2 is a sound bracket; more bits make it narrower.
    let two = Interval::from_i64(2);
    for bits in [8, 32, 128] {
        let p = Precision::new(bits);
        let r = two.sqrt(p);
        println!("{bits:>4} bits  sqrt 2 in {}  (sqrt 2)^2 in {}", r.render(12), r.sqr(p).render(12));
    }
    println!(" 200 bits  pi in {}", transcendental::pi(Precision::new(200)).render(50));

    // As a real: refine until the enclosure is at most 1e-30 wide.
    let x = prims::sqrt().compose(&Tower::constant(smoothish::exactnum::Dyadic::from_i64(2), 0));
    let eps = BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(30));
    let c = eval_to_eps(&x.to_creal(EvalConfig::default()), &eps, &Limits::default()).expect("converges");
    println!("sqrt 2 to 1e-30 at refinement {}: {}", c.index, c.enclosure.get(0).render(31));
}
