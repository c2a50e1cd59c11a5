//! Derivative towers: higher derivatives of a smooth map and the Clarke
//! derivative of a nonsmooth one.

use smoothish::exactnum::{Dyadic, IntervalBox};
use smoothish::tower::{prims, EvalCtx, Tower};

fn main() {
    let cx = EvalCtx::at(8);
    let x = Tower::identity(1);
    let f = &x * &prims::sin().compose(&x);
    let at = IntervalBox::points(&[Dyadic::one()]);
    let dir = IntervalBox::points(&[Dyadic::one()]);
    println!("f(x) = x sin x at x = 1");
    for k in 0..=4 {
        let dirs = vec![dir.clone(); k];
        println!("  f^({k})(1) in {}", f.derivative_at(&cx, &at, &dirs).get(0).render(10));
    }

    // relu has no derivative at 0; its tower returns the generalized gradient hull.
    let relu = prims::relu();
    let zero = IntervalBox::points(&[Dyadic::zero()]);
    println!("relu'(0) in {}", relu.derivative_at(&cx, &zero, &[dir.clone()]).get(0).render(3));
    let half = IntervalBox::points(&[Dyadic::pow2(-1)]);
    println!("relu'(1/2) in {}", relu.derivative_at(&cx, &half, &[dir]).get(0).render(3));
}
