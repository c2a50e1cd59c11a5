//! Verified maximisation over [0, 1], the maximiser, and their sensitivities.

use num_rational::BigRational;
use smoothish::creal::{eval_to_eps, Limits};
use smoothish::hoprims::{argmax01, max01};
use smoothish::stdlib::{bind_scalar, constant, deriv_at, lift};
use smoothish::tower::{prims, EvalConfig, Tower};

fn show(label: &str, t: &Tower) {
    let eps = BigRational::new(1.into(), 10_000.into());
    match eval_to_eps(&t.to_creal(EvalConfig::default()), &eps, &Limits::default()) {
        Ok(c) => println!("{label} = {}", c.enclosure.get(0).render(5)),
        Err(nc) => println!("{label}: {nc}"),
    }
}

fn main() {
    // x (1 - x) peaks at 1/2 with value 1/4.
    let bump = bind_scalar(0, |x| x * &(&constant(1.0, 1) - x));
    show("max x(1-x)", &max01(&bump));
    show("argmax x(1-x)", &argmax01(&bump));

    // -(x - a)^2 peaks at a: the argmax moves with slope 1 and the max is flat.
    let peak = |f: fn(&Tower) -> Tower| {
        bind_scalar(0, move |a| f(&bind_scalar(1, |x| -&prims::sqr().compose(&(x - &lift(a, 2))))))
    };
    let at = constant(0.3, 0);
    show("d/da argmax -(x-a)^2 at a = 0.3", &deriv_at(&peak(argmax01), &at));
    show("d/da max -(x-a)^2 at a = 0.3", &deriv_at(&peak(max01), &at));
}
