use crate::exactnum::{Dyadic, Interval, IntervalBox};
use crate::tower::jet::Jet;
use crate::tower::{EvalCtx, Tower};

use super::{HoNode, Primitive, Slice};

pub(super) fn eval(node: &HoNode, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Jet {
    if slots == 0 {
        let s = Slice::from_jets(cx, &node.f, x);
        let v = match node.kind {
            Primitive::CutRoot => cut_root_value(&s),
            _ => first_root_value(&s),
        };
        return Jet::constant(v, 0);
    }
    // Implicit function theorem on the top slot: y' = -f_γ(γ, y; dγ) / f_y(γ, y).
    let (a, b): (Vec<Jet>, Vec<Jet>) = x.iter().map(Jet::split_top).unzip();
    let y = node.eval_one(cx, slots - 1, &a);
    let p = cx.precision();

    let mut along_gamma: Vec<Jet> = a.iter().zip(&b).map(|(l, u)| Jet::join_top(l, u)).collect();
    along_gamma.push(y.extend(1));
    let num = node.f.eval(cx, slots, &along_gamma)[0].split_top().1;

    let mut along_y: Vec<Jet> = a.iter().map(|l| l.extend(1)).collect();
    along_y.push(Jet::join_top(&y, &Jet::constant(Interval::one(), slots - 1)));
    let den = node.f.eval(cx, slots, &along_y)[0].split_top().1;

    Jet::join_top(&y, &num.div(&den, p).neg())
}

fn tiny(cx: &EvalCtx) -> Dyadic {
    Dyadic::pow2(-(cx.precision().bits as i64))
}

fn iterations(cx: &EvalCtx) -> u32 {
    8 + 4 * cx.level()
}

/// One interval-Newton contraction of `window` towards the roots of
/// `f(γ, ·)`; returns `window` unchanged when `∂f/∂y` may vanish on it.
pub fn newton_accelerate(cx: &EvalCtx, f: &Tower, window: &Interval, gamma: &IntervalBox) -> Interval {
    newton_step(&Slice::new(cx, f, gamma.coords().to_vec()), window)
}

fn newton_step(s: &Slice, window: &Interval) -> Interval {
    let Some(m) = window.midpoint() else {
        return window.clone();
    };
    let (_, d) = s.slope(window.clone());
    if d.strict_sign().is_none() {
        return window.clone();
    }
    let p = s.cx.precision();
    let n = Interval::point(m.clone()).sub(&s.at_point(&m).div(&d, p), p);
    window.try_meet(&n).unwrap_or_else(|| window.clone())
}

/// `[sup {f > 0}, inf {f < 0}]`, searching `[-2^j, 2^j]` for growing `j`.
fn cut_root_value(s: &Slice) -> Interval {
    let cx = s.cx;
    let mut lo: Option<Dyadic> = None;
    let mut hi: Option<Dyadic> = None;
    for j in 0..=cx.config().window_cap as i64 {
        let r = Dyadic::pow2(j);
        if lo.is_none() && s.sign(&r.neg()) == Some(1) {
            lo = Some(r.neg());
        }
        if hi.is_none() && s.sign(&r) == Some(-1) {
            hi = Some(r);
        }
        if lo.is_some() && hi.is_some() {
            break;
        }
    }
    let (Some(mut l), Some(mut h)) = (lo.clone(), hi.clone()) else {
        return Interval::new(lo, hi);
    };
    let newton = cx.config().newton;
    let eps = tiny(cx);
    // `l` stays provably positive and `h` provably negative. After an
    // undecided probe the two ends are refined separately below it.
    let mut split: Option<(Dyadic, Dyadic)> = None;
    for _ in 0..iterations(cx) {
        if h.sub(&l) <= eps {
            break;
        }
        match &mut split {
            None => {
                if newton {
                    let w = newton_step(s, &Interval::from_bounds(l.clone(), h.clone()));
                    l = w.lo().unwrap().clone();
                    h = w.hi().unwrap().clone();
                    if h.sub(&l) <= eps {
                        break;
                    }
                }
                let m = l.add(&h).shl(-1);
                match s.sign(&m) {
                    Some(1) => l = m,
                    Some(_) => h = m,
                    None => split = Some((m.clone(), m)),
                }
            }
            Some((l_ceiling, h_floor)) => {
                let m = l.add(l_ceiling).shl(-1);
                if s.sign(&m) == Some(1) {
                    l = m;
                } else {
                    *l_ceiling = m;
                }
                let m = h_floor.add(&h).shl(-1);
                if s.sign(&m) == Some(-1) {
                    h = m;
                } else {
                    *h_floor = m;
                }
            }
        }
    }
    Interval::from_bounds(l, h)
}

/// Cap on cell checks during the left-to-right scan.
const SCAN_BUDGET: usize = 1 << 14;

/// Least point of `[0, 1]` where `f` leaves its sign at 0.
fn first_root_value(s: &Slice) -> Interval {
    let cx = s.cx;
    let Some(sign0) = s.sign(&Dyadic::zero()) else {
        return Interval::unit();
    };
    let depth = cx.level() + 4;
    let mut budget = SCAN_BUDGET;
    let Some((mut l, unsafe_hi)) = scan(s, sign0, Dyadic::zero(), Dyadic::one(), 0, depth, &mut budget) else {
        return Interval::new(Some(Dyadic::one()), None);
    };
    // First point of provably opposite sign at or after the unsafe cell.
    let w = unsafe_hi.sub(&l);
    let mut h: Option<Dyadic> = None;
    let mut step = Dyadic::zero();
    loop {
        let probe = unsafe_hi.add(&step).min(Dyadic::one());
        if s.sign(&probe) == Some(-sign0) {
            h = Some(probe.clone());
            break;
        }
        if probe == Dyadic::one() {
            break;
        }
        step = if step.is_zero() { w.clone() } else { step.shl(1) };
    }
    let Some(mut h) = h else {
        return Interval::new(Some(l), None);
    };
    let newton = cx.config().newton;
    let eps = tiny(cx);
    let mut ceiling = h.clone();
    for _ in 0..iterations(cx) {
        if h.sub(&l) <= eps {
            break;
        }
        if newton {
            let before = Interval::from_bounds(l.clone(), h.clone());
            let w = newton_step(s, &before);
            if w != before {
                l = w.lo().unwrap().clone();
                h = w.hi().unwrap().clone();
                ceiling = h.clone();
                if h.sub(&l) <= eps {
                    break;
                }
            }
        }
        let m = l.add(&ceiling).shl(-1);
        if s.sign(&m) == Some(-sign0) {
            h = m.clone();
            ceiling = m;
        } else if s.cell_has_sign(&l, &m, sign0) {
            l = m;
            ceiling = h.clone();
        } else {
            ceiling = m;
        }
    }
    Interval::from_bounds(l, h)
}

/// First cell at `max_depth` on which `f` is not provably of sign `s`.
fn scan(
    sl: &Slice,
    s: i32,
    lo: Dyadic,
    hi: Dyadic,
    depth: u32,
    max_depth: u32,
    budget: &mut usize,
) -> Option<(Dyadic, Dyadic)> {
    if *budget == 0 || sl.cx.expired() {
        return Some((lo, hi));
    }
    *budget -= 1;
    if sl.cell_has_sign(&lo, &hi, s) {
        return None;
    }
    if depth == max_depth {
        return Some((lo, hi));
    }
    let m = lo.add(&hi).shl(-1);
    scan(sl, s, lo, m.clone(), depth + 1, max_depth, budget).or_else(|| scan(sl, s, m, hi, depth + 1, max_depth, budget))
}
