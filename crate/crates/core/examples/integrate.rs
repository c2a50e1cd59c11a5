//! Integration over [0, 1] and its derivative with respect to a parameter.

use num_rational::BigRational;
use smoothish::creal::{eval_to_eps, Limits};
use smoothish::hoprims::integral01;
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
    show("int_0^1 x^2 dx", &integral01(&bind_scalar(0, |x| prims::sqr().compose(x))));
    show("int_0^1 exp x dx", &integral01(&bind_scalar(0, |x| prims::exp().compose(x))));

    // F(c) = int_0^1 relu(x - c) dx, so F'(c) = -(1 - c) for c in [0, 1].
    let big_f = bind_scalar(0, |c| {
        integral01(&bind_scalar(1, |x| prims::relu().compose(&(x - &lift(c, 2)))))
    });
    show("F'(0.6)", &deriv_at(&big_f, &constant(0.6, 0)));
}
