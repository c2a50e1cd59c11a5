//! Root finding and derivatives through it by the implicit function theorem.

use num_rational::BigRational;
use smoothish::creal::{eval_to_eps, Limits};
use smoothish::hoprims::{cut_root, first_root};
use smoothish::stdlib::{bind_scalar, constant, deriv_at, lift};
use smoothish::tower::{prims, EvalConfig, Tower};

fn show(label: &str, t: &Tower) {
    let eps = BigRational::new(1.into(), 1_000_000.into());
    match eval_to_eps(&t.to_creal(EvalConfig::default()), &eps, &Limits::default()) {
        Ok(c) => println!("{label} = {}", c.enclosure.get(0).render(7)),
        Err(nc) => println!("{label}: {nc}"),
    }
}

fn main() {
    // The root of 2 - x^2 on the positive axis.
    show("cutRoot (2 - x^2)", &cut_root(&bind_scalar(0, |x| &constant(2.0, 1) - &prims::sqr().compose(x))));

    // r(g) solves g - x^3 = 0, so r'(g) = 1 / (3 r(g)^2).
    let r = bind_scalar(0, |g| cut_root(&bind_scalar(1, |x| &lift(g, 2) - &(&(x * x) * x))));
    show("d/dg cbrt g at g = 8", &deriv_at(&r, &constant(8.0, 0)));

    // The first t in [0, 1] where t^2 reaches g.
    let t = bind_scalar(0, |g| first_root(&bind_scalar(1, |t| &lift(g, 2) - &(t * t))));
    show("firstRoot (1/4 - t^2)", &t.compose(&constant(0.25, 0)));
    show("d/dg firstRoot at g = 1/4", &deriv_at(&t, &constant(0.25, 0)));
}
