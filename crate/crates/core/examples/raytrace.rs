//! Implicit surfaces, differentiable ray casting and a line-lit scene.

use num_rational::BigRational;
use smoothish::creal::{eval_to_eps, Limits};
use smoothish::stdlib::surfaces::{brightness, circle, gradient, raytrace};
use smoothish::stdlib::{bind_scalar, constant, deriv_at};
use smoothish::tower::{EvalConfig, Tower};

fn show(label: &str, t: &Tower) {
    let eps = BigRational::new(1.into(), 1000.into());
    match eval_to_eps(&t.to_creal(EvalConfig::default()), &eps, &Limits::default()) {
        Ok(c) => println!("{label} = {}", c.enclosure.get(0).render(4)),
        Err(nc) => println!("{label}: {nc}"),
    }
}

fn main() {
    let c = |v: f64| constant(v, 0);
    let disc = circle((c(1.0), c(-0.75)), c(1.0));
    show("disc field at (1, 0)", &disc.at(&(c(1.0), c(0.0))));
    let g = gradient(&disc, &(c(1.0), c(0.0)));
    show("disc gradient x at (1, 0)", &g.0);
    show("disc gradient y at (1, 0)", &g.1);

    let scene = raytrace(&disc, &(c(1.0), c(1.0)), &(c(1.0), c(0.0)));
    show("raytrace brightness", &scene);
    let moved = bind_scalar(0, |y| {
        let d = constant(0.0, 1);
        raytrace(&circle((d.clone(), y.clone()), constant(1.0, 1)), &(constant(1.0, 1), constant(1.0, 1)), &(constant(1.0, 1), d))
    });
    show("d/dy raytrace with circle (0, y) at y = -3/4", &deriv_at(&moved, &c(-0.75)));

    show("line light brightness at y = 1/2", &brightness(&c(0.5)));
    show("d/dy line light brightness at y = 1/2", &deriv_at(&bind_scalar(0, |y| brightness(y)), &c(0.5)));
}
