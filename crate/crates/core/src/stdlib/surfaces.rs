//! Implicit surfaces in the plane: positive inside, zero on the boundary.

use std::sync::Arc;

use crate::hoprims::first_root;
use crate::tower::{prims, Tower};

use super::{bind_scalar, constant, deriv_at, lift};

/// A point of `R²` as two towers over the same context.
pub type P2 = (Tower, Tower);

#[derive(Clone)]
pub struct Surface2(Arc<dyn Fn(&P2) -> Tower + Send + Sync>);

impl Surface2 {
    pub fn new(f: impl Fn(&P2) -> Tower + Send + Sync + 'static) -> Surface2 {
        Surface2(Arc::new(f))
    }

    pub fn at(&self, p: &P2) -> Tower {
        let dim = p.0.dom().max(p.1.dom());
        lift(&(self.0)(&(lift(&p.0, dim), lift(&p.1, dim))), dim)
    }

    /// The field as a tower on `Γ × R²`, the point last.
    pub fn field(&self, dim: usize) -> Tower {
        self.at(&(Tower::coord(dim, dim + 2), Tower::coord(dim + 1, dim + 2)))
    }
}

pub fn lift2(p: &P2, dim: usize) -> P2 {
    (lift(&p.0, dim), lift(&p.1, dim))
}

fn sq(t: &Tower) -> Tower {
    prims::sqr().compose(t)
}

pub fn dot(a: &P2, b: &P2) -> Tower {
    &(&a.0 * &b.0) + &(&a.1 * &b.1)
}

pub fn scale(c: &Tower, x: &P2) -> P2 {
    (c * &x.0, c * &x.1)
}

pub fn norm2(x: &P2) -> Tower {
    &sq(&x.0) + &sq(&x.1)
}

pub fn normalize(x: &P2) -> P2 {
    let dim = x.0.dom();
    let inv = &constant(1.0, dim) / &prims::sqrt().compose(&norm2(x));
    scale(&inv, x)
}

pub fn circle(c: P2, r: Tower) -> Surface2 {
    Surface2::new(move |x| {
        let dim = x.0.dom();
        let c = lift2(&c, dim);
        &(&sq(&lift(&r, dim)) - &sq(&(&x.0 - &c.0))) - &sq(&(&x.1 - &c.1))
    })
}

pub fn halfplane(normal: P2) -> Surface2 {
    Surface2::new(move |x| dot(&lift2(&normal, x.0.dom()), x))
}

pub fn union(a: Surface2, b: Surface2) -> Surface2 {
    Surface2::new(move |x| a.at(x).max(&b.at(x)))
}

pub fn intersection(a: Surface2, b: Surface2) -> Surface2 {
    Surface2::new(move |x| a.at(x).min(&b.at(x)))
}

pub fn complement(a: Surface2) -> Surface2 {
    Surface2::new(move |x| -&a.at(x))
}

/// `(deriv (λz. f (z, x1)) x0, deriv (λz. f (x0, z)) x1)`.
pub fn gradient(s: &Surface2, x: &P2) -> P2 {
    let dim = x.0.dom();
    let along0 = bind_scalar(dim, |z| s.at(&(z.clone(), lift(&x.1, dim + 1))));
    let along1 = bind_scalar(dim, |z| s.at(&(lift(&x.0, dim + 1), z.clone())));
    (deriv_at(&along0, &x.0), deriv_at(&along1, &x.1))
}

/// Brightness seen by a camera at the origin looking along `ray`, lit from `light`.
pub fn raytrace(s: &Surface2, light: &P2, ray: &P2) -> Tower {
    let dim = light.0.dom().max(ray.0.dom());
    let (light, ray) = (lift2(light, dim), lift2(ray, dim));
    let t_star = first_root(&bind_scalar(dim, |t| s.at(&scale(t, &lift2(&ray, dim + 1)))));
    let y = scale(&t_star, &ray);
    let g = gradient(s, &y);
    let normal = (-&g.0, -&g.1);
    let light_to_surf = (&y.0 - &light.0, &y.1 - &light.1);
    let cos = dot(&normalize(&normal), &normalize(&light_to_surf));
    let lit = cos.max(&constant(0.0, dim));
    &lit / &(&norm2(&y) * &norm2(&light_to_surf))
}

/// The line-light scene: `∫ max 0 ((y0 - y) / sqrt (1 + (y0 - y)²)) dy0`.
pub fn brightness(y: &Tower) -> Tower {
    let dim = y.dom();
    crate::hoprims::integral01(&bind_scalar(dim, |y0| {
        let d = y0 - &lift(y, dim + 1);
        let r = &d / &prims::sqrt().compose(&(&constant(1.0, dim + 1) + &sq(&d)));
        constant(0.0, dim + 1).max(&r)
    }))
}
