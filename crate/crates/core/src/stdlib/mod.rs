//! Derivative operators and the measure, implicit-surface and maximizer
//! libraries, written directly against towers.
//!
//! Values live over a context of `g` real coordinates. Library closures
//! receive towers over the context they are applied in and [`lift`] anything
//! they captured from an outer context.

pub mod maximizers;
pub mod measures;
pub mod surfaces;

use crate::exactnum::Dyadic;
use crate::tower::Tower;

/// View `t` over a context of `dim >= t.dom()` coordinates.
pub fn lift(t: &Tower, dim: usize) -> Tower {
    assert!(t.dom() <= dim, "cannot lower a tower from {} to {dim} coordinates", t.dom());
    t.weaken(dim - t.dom())
}

pub fn constant(v: f64, dim: usize) -> Tower {
    Tower::constant(Dyadic::from_f64(v).expect("finite literal"), dim)
}

/// `f'((γ, x); (0, .., 0, 1))`: the derivative in the last input.
pub fn deriv(f: &Tower) -> Tower {
    partial(f, f.dom() - 1)
}

/// `∂f/∂x_i` as a tower on the same inputs.
pub fn partial(f: &Tower, i: usize) -> Tower {
    let n = f.dom();
    assert!(i < n && f.cod() == 1);
    let mut parts: Vec<Tower> = (0..n).map(|j| Tower::coord(j, n)).collect();
    parts.extend((0..n).map(|j| Tower::constant(if i == j { Dyadic::one() } else { Dyadic::zero() }, n)));
    f.derivative().compose(&Tower::pair(&parts))
}

/// `deriv f` at `x`: `f : Γ × R ~> R`, `x : Γ ~> R`.
pub fn deriv_at(f: &Tower, x: &Tower) -> Tower {
    let g = x.dom();
    assert_eq!(f.dom(), g + 1);
    let mut parts: Vec<Tower> = (0..g).map(|j| Tower::coord(j, g)).collect();
    parts.push(x.clone());
    deriv(f).compose(&Tower::pair(&parts))
}

/// Both partials of `f : Γ × R² ~> R` in the last two inputs, each built as a
/// derivative of `f` with the other coordinate frozen.
pub fn gradient2(f: &Tower) -> (Tower, Tower) {
    let n = f.dom();
    assert!(n >= 2 && f.cod() == 1);
    (partial(f, n - 2), partial(f, n - 1))
}

/// Apply a scalar body to a fresh bound coordinate: returns `body` over `dim + 1`.
pub fn bind_scalar(dim: usize, body: impl FnOnce(&Tower) -> Tower) -> Tower {
    let x = Tower::coord(dim, dim + 1);
    lift(&body(&x), dim + 1)
}
