//! Measures as integration functionals: moments and their directional
//! derivatives along a change of measure.

use num_rational::BigRational;
use smoothish::creal::{eval_to_eps, Limits};
use smoothish::stdlib::measures::{bernoulli, change, der, mean, total_mass, uniform, variance};
use smoothish::stdlib::constant;
use smoothish::tower::{EvalConfig, Tower};

fn show(label: &str, t: &Tower) {
    let eps = BigRational::new(1.into(), 10_000.into());
    match eval_to_eps(&t.to_creal(EvalConfig::default()), &eps, &Limits::default()) {
        Ok(c) => println!("{label} = {}", c.enclosure.get(0).render(5)),
        Err(nc) => println!("{label}: {nc}"),
    }
}

fn main() {
    let u = uniform();
    show("mass uniform", &total_mass(&u, 0));
    show("mean uniform", &mean(&u, 0));
    show("variance uniform", &variance(&u, 0));
    show("mean bernoulli 0.25", &mean(&bernoulli(constant(0.25, 0)), 0));

    // Perturbing uniform by the signed measure `change`.
    show("der mean uniform change", &der(|m, d| mean(m, d), &u, &change(), 0));
    show("der variance uniform change", &der(|m, d| variance(m, d), &u, &change(), 0));
}
