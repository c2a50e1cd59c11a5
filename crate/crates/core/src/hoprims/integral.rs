use crate::exactnum::{Dyadic, Interval};
use crate::tower::jet::Jet;
use crate::tower::{EvalCtx, Tower};

/// Interval Riemann sum over `2^level` cells. The bound variable carries no
/// perturbation, so each slot's coefficient integrates `f`'s derivative along
/// `(dγ, 0)`.
pub(super) fn eval(cx: &EvalCtx, f: &Tower, slots: u32, x: &[Jet]) -> Jet {
    let p = cx.precision();
    let level = cx.level();
    let cells: u64 = 1 << level;
    let mut acc = Jet::zero(slots);
    let mut full: Vec<Jet> = x.to_vec();
    full.push(Jet::zero(slots));
    for i in 0..cells {
        if i % 1024 == 1023 && cx.expired() {
            return Jet::bottom(slots);
        }
        let lo = Dyadic::new((i as i64).into(), -(level as i64));
        let hi = Dyadic::new((i as i64 + 1).into(), -(level as i64));
        full[x.len()] = Jet::constant(Interval::from_bounds(lo, hi), slots);
        let v = &f.eval(cx, slots, &full)[0];
        acc = acc.add(v, p);
    }
    acc.shl(-(level as i64))
}
