//! Shapes represented by the functional maximising objectives over them.

use std::sync::Arc;

use crate::hoprims::max01;
use crate::tower::{prims, Tower};

use super::surfaces::{lift2, P2};
use super::{bind_scalar, lift};

pub type Objective1 = Arc<dyn Fn(&Tower) -> Tower + Send + Sync>;
pub type Objective2 = Arc<dyn Fn(&P2) -> Tower + Send + Sync>;

/// A maximizer over `R`, applied in a context of `dim` coordinates.
#[derive(Clone)]
pub struct Maximizer1(Arc<dyn Fn(usize, &Objective1) -> Tower + Send + Sync>);

/// A maximizer over `R²`.
#[derive(Clone)]
pub struct Maximizer2(Arc<dyn Fn(usize, &Objective2) -> Tower + Send + Sync>);

impl Maximizer1 {
    pub fn sup(&self, dim: usize, f: impl Fn(&Tower) -> Tower + Send + Sync + 'static) -> Tower {
        lift(&(self.0)(dim, &(Arc::new(f) as Objective1)), dim)
    }
}

impl Maximizer2 {
    pub fn new(f: impl Fn(usize, &Objective2) -> Tower + Send + Sync + 'static) -> Maximizer2 {
        Maximizer2(Arc::new(f))
    }

    pub fn sup(&self, dim: usize, f: impl Fn(&P2) -> Tower + Send + Sync + 'static) -> Tower {
        self.sup_obj(dim, &(Arc::new(f) as Objective2))
    }

    fn sup_obj(&self, dim: usize, f: &Objective2) -> Tower {
        lift(&(self.0)(dim, f), dim)
    }

    /// `- k (λx. - f x)`.
    pub fn inf(&self, dim: usize, f: impl Fn(&P2) -> Tower + Send + Sync + 'static) -> Tower {
        -&self.sup(dim, move |x| -&f(x))
    }
}

pub fn unit_interval() -> Maximizer1 {
    Maximizer1(Arc::new(|dim, f| max01(&bind_scalar(dim, |x| f(x)))))
}

pub fn point(x: P2) -> Maximizer2 {
    Maximizer2::new(move |dim, f| f(&lift2(&x, dim)))
}

pub fn indexed_union(ka: Maximizer1, kb: impl Fn(&Tower) -> Maximizer2 + Send + Sync + 'static) -> Maximizer2 {
    let kb = Arc::new(kb);
    Maximizer2::new(move |dim, f| {
        let (kb, f) = (kb.clone(), f.clone());
        ka.sup(dim, move |a| kb(a).sup_obj(a.dom(), &f))
    })
}

pub fn union_k(k1: Maximizer2, k2: Maximizer2) -> Maximizer2 {
    Maximizer2::new(move |dim, f| k1.sup_obj(dim, f).max(&k2.sup_obj(dim, f)))
}

pub fn map_k(g: impl Fn(&Tower) -> P2 + Send + Sync + 'static, k: Maximizer1) -> Maximizer2 {
    let g = Arc::new(g);
    Maximizer2::new(move |dim, f| {
        let (g, f) = (g.clone(), f.clone());
        k.sup(dim, move |a| f(&g(a)))
    })
}

pub fn hausdorff_dist(
    d: impl Fn(&P2, &P2) -> Tower + Send + Sync + 'static,
    k1: &Maximizer2,
    k2: &Maximizer2,
    dim: usize,
) -> Tower {
    let d = Arc::new(d);
    let one_sided = |ka: &Maximizer2, kb: &Maximizer2| {
        let (kb, d) = (kb.clone(), d.clone());
        ka.sup(dim, move |x1| {
            let (x1, d) = (x1.clone(), d.clone());
            kb.inf(x1.0.dom(), move |x2| d(&lift2(&x1, x2.0.dom()), x2))
        })
    };
    one_sided(k1, k2).max(&one_sided(k2, k1))
}

/// Quarter of the unit circle, shifted up by `y`.
pub fn quarter_circle(y: Tower) -> Maximizer2 {
    map_k(
        move |theta| {
            let dim = theta.dom();
            let half_pi = &Tower::pi(dim) / &super::constant(2.0, dim);
            let a = &half_pi * theta;
            (prims::cos().compose(&a), &prims::sin().compose(&a) + &lift(&y, dim))
        },
        unit_interval(),
    )
}

/// The top and right edges of the unit square.
pub fn l_shape() -> Maximizer2 {
    union_k(
        map_k(|x| (x.clone(), super::constant(1.0, x.dom())), unit_interval()),
        map_k(|y| (super::constant(1.0, y.dom()), y.clone()), unit_interval()),
    )
}

pub fn r2_dist(a: &P2, b: &P2) -> Tower {
    let sq = |t: Tower| prims::sqr().compose(&t);
    prims::sqrt().compose(&(&sq(&a.0 - &b.0) + &sq(&a.1 - &b.1)))
}
