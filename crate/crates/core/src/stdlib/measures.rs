//! Integrals `(A → R) → R` over scalar `A`, with the usual monad structure.
//! Booleans and unit are encoded as the reals 1/0 and 0.

use std::sync::Arc;

use crate::hoprims::integral01;
use crate::tower::{prims, Tower};

use super::{bind_scalar, constant, deriv_at, lift};

/// A staged real function: argument tower over some context, result over the same.
pub type Integrand = Arc<dyn Fn(&Tower) -> Tower + Send + Sync>;

/// An integral applied in a context of `dim` coordinates.
#[derive(Clone)]
pub struct Measure(Arc<dyn Fn(usize, &Integrand) -> Tower + Send + Sync>);

impl Measure {
    pub fn new(f: impl Fn(usize, &Integrand) -> Tower + Send + Sync + 'static) -> Measure {
        Measure(Arc::new(f))
    }

    pub fn apply(&self, dim: usize, f: &Integrand) -> Tower {
        lift(&(self.0)(dim, f), dim)
    }

    pub fn apply_fn(&self, dim: usize, f: impl Fn(&Tower) -> Tower + Send + Sync + 'static) -> Tower {
        self.apply(dim, &(Arc::new(f) as Integrand))
    }
}

pub fn integrand(f: impl Fn(&Tower) -> Tower + Send + Sync + 'static) -> Integrand {
    Arc::new(f)
}

pub fn dirac(x: Tower) -> Measure {
    Measure::new(move |dim, f| f(&lift(&x, dim)))
}

pub fn bind(m: Measure, k: impl Fn(&Tower) -> Measure + Send + Sync + 'static) -> Measure {
    let k = Arc::new(k);
    Measure::new(move |dim, f| {
        let (k, f) = (k.clone(), f.clone());
        m.apply_fn(dim, move |a| k(a).apply(a.dom(), &f))
    })
}

pub fn zero() -> Measure {
    Measure::new(|dim, _| constant(0.0, dim))
}

pub fn add(a: Measure, b: Measure) -> Measure {
    Measure::new(move |dim, f| &a.apply(dim, f) + &b.apply(dim, f))
}

pub fn map_m(h: Integrand, e: Measure) -> Measure {
    Measure::new(move |dim, k| {
        let (h, k) = (h.clone(), k.clone());
        e.apply_fn(dim, move |x| k(&h(x)))
    })
}

/// Weight `x` on the single point of unit.
pub fn factor(x: Tower) -> Measure {
    Measure::new(move |dim, f| &f(&constant(0.0, dim)) * &lift(&x, dim))
}

/// Normalise by total mass; bottom where the mass may vanish.
pub fn meas_to_prob(e: Measure) -> Measure {
    Measure::new(move |dim, f| &e.apply(dim, f) / &total_mass(&e, dim))
}

pub fn bernoulli(p: Tower) -> Measure {
    Measure::new(move |dim, f| {
        let p = lift(&p, dim);
        let q = &constant(1.0, dim) - &p;
        &(&p * &f(&constant(1.0, dim))) + &(&q * &f(&constant(0.0, dim)))
    })
}

pub fn uniform() -> Measure {
    Measure::new(|dim, f| integral01(&bind_scalar(dim, |x| f(x))))
}

/// The zero-mass perturbation `f ↦ ∫ (x - 1/2) f(x) dx`.
pub fn change() -> Measure {
    Measure::new(|dim, f| {
        integral01(&bind_scalar(dim, |x| &(x - &constant(0.5, x.dom())) * &f(x)))
    })
}

pub fn total_mass(mu: &Measure, dim: usize) -> Tower {
    mu.apply_fn(dim, |x| constant(1.0, x.dom()))
}

pub fn mean(mu: &Measure, dim: usize) -> Tower {
    mu.apply_fn(dim, |x| x.clone())
}

pub fn variance(mu: &Measure, dim: usize) -> Tower {
    let m = mu.clone();
    mu.apply_fn(dim, move |x| {
        let d = x - &mean(&m, x.dom());
        prims::sqr().compose(&d)
    })
}

/// Tangent of `big_f` at `mu` along `dmu`: the derivative of
/// `t ↦ big_f(mu + t dmu)` at 0.
pub fn der(big_f: impl Fn(&Measure, usize) -> Tower, mu: &Measure, dmu: &Measure, dim: usize) -> Tower {
    let body = bind_scalar(dim, |t| {
        let (mu, dmu, t) = (mu.clone(), dmu.clone(), t.clone());
        let curve = Measure::new(move |d, f| &mu.apply(d, f) + &(&lift(&t, d) * &dmu.apply(d, f)));
        big_f(&curve, dim + 1)
    });
    deriv_at(&body, &constant(0.0, dim))
}
