use crate::exactnum::{Dyadic, Interval};
use crate::tower::jet::Jet;
use crate::tower::EvalCtx;

use super::{HoNode, Primitive, Slice, BNB_TAG};

/// Branch-and-bound outcome for one context enclosure.
#[derive(Clone, Debug)]
pub(super) struct Bnb {
    pub max: Interval,
    pub argmax: Interval,
}

pub(super) fn eval(node: &HoNode, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Jet {
    if slots == 0 {
        let r = bnb(node, cx, x);
        let v = if node.kind == Primitive::Max01 { r.max } else { r.argmax };
        return Jet::constant(v, 0);
    }
    let (a, b): (Vec<Jet>, Vec<Jet>) = x.iter().map(Jet::split_top).unzip();
    let lower = node.eval_one(cx, slots - 1, &a);
    let upper = match node.kind {
        Primitive::Max01 => {
            // (f ∘ <id, argmax01 f>)'
            let argmax = node.with_kind(Primitive::Argmax01).eval_one(cx, slots, x);
            let mut full = x.to_vec();
            full.push(argmax);
            node.f.eval(cx, slots, &full)[0].split_top().1
        }
        _ => argmax_tangent(node, cx, slots, &a, &b, &lower),
    };
    Jet::join_top(&lower, &upper)
}

/// Derivative of the argmax along `b`, given its jet `y` at `a`.
fn argmax_tangent(node: &HoNode, cx: &EvalCtx, slots: u32, a: &[Jet], b: &[Jet], y: &Jet) -> Jet {
    let k = slots - 1;
    let yb = y.base();
    let interior = yb.lo().is_some_and(Dyadic::is_positive) && yb.hi().is_some_and(|h| *h < Dyadic::one());
    if interior {
        // Second-order IFT on ∂f/∂y = 0: y' = -f_yγ(dγ) / f_yy. Slot k is the
        // γ-direction, slot k+1 the unit y-direction.
        let p = cx.precision();
        let unit_y = {
            let mut j = Jet::zero(k + 2);
            j.set(1 << (k + 1), Interval::one());
            j
        };
        let mut mixed: Vec<Jet> = a.iter().zip(b).map(|(l, u)| Jet::join_top(l, u).extend(1)).collect();
        mixed.push(y.extend(2).add(&unit_y, p));
        let num = node.f.eval(cx, k + 2, &mixed)[0].split_top().1.split_top().1;

        let mut unit_yy = unit_y.clone();
        unit_yy.set(1 << k, Interval::one());
        let mut pure: Vec<Jet> = a.iter().map(|l| l.extend(2)).collect();
        pure.push(y.extend(2).add(&unit_yy, p));
        let den = node.f.eval(cx, k + 2, &pure)[0].split_top().1.split_top().1;
        return num.div(&den, p).neg();
    }
    // Boundary: stuck at an end whose one-sided slope provably points outward.
    let s = Slice::from_jets(cx, &node.f, a);
    let (_, slope) = s.slope(yb.clone());
    let at_one = yb.hi().is_some_and(|h| *h == Dyadic::one()) && slope.strict_sign() == Some(1);
    let at_zero = yb.lo().is_some_and(Dyadic::is_zero) && slope.strict_sign() == Some(-1);
    if at_one || at_zero {
        Jet::zero(k)
    } else {
        Jet::bottom(k)
    }
}

fn bnb(node: &HoNode, cx: &EvalCtx, x: &[Jet]) -> Bnb {
    let key = node.key(BNB_TAG, 0, x);
    if let Some(hit) = cx.memo_get::<Bnb>(&key) {
        return hit;
    }
    let r = branch_and_bound(&Slice::from_jets(cx, &node.f, x));
    cx.memo_put(key, r.clone());
    r
}

struct Node {
    lo: Dyadic,
    hi: Dyadic,
}

/// Uniform bisection of `[0, 1]` to depth `level + 2`, discarding cells whose
/// upper bound is strictly below the best certified value, or on which `f` is
/// strictly monotone away from the boundary.
fn branch_and_bound(s: &Slice) -> Bnb {
    let cx = s.cx;
    let max_depth = cx.level() + 2;
    let max_nodes = cx.config().max_nodes;
    let mut nodes = vec![Node { lo: Dyadic::zero(), hi: Dyadic::one() }];
    let mut best: Option<Dyadic> = None;
    let mut depth = 0;
    loop {
        let infos: Vec<_> = nodes.iter().map(|n| s.cell(&n.lo, &n.hi)).collect();
        for info in &infos {
            if let Some(l) = info.mid.lo() {
                if best.as_ref().is_none_or(|b| l > b) {
                    best = Some(l.clone());
                }
            }
        }
        let mut survivors = Vec::with_capacity(nodes.len());
        let mut upper: Option<Option<Dyadic>> = None;
        for (n, info) in nodes.into_iter().zip(infos) {
            let dominated = matches!((info.enc.hi(), &best), (Some(h), Some(b)) if h < b);
            let rising = info.slope.strict_sign() == Some(1) && n.hi < Dyadic::one();
            let falling = info.slope.strict_sign() == Some(-1) && n.lo.is_positive();
            if dominated || rising || falling {
                continue;
            }
            let h = info.enc.hi().cloned();
            upper = Some(match (upper, h) {
                (None, h) => h,
                (Some(Some(u)), Some(h)) => Some(u.max(h)),
                _ => None,
            });
            survivors.push(n);
        }
        if survivors.is_empty() || cx.expired() {
            return Bnb { max: Interval::new(best, None), argmax: Interval::unit() };
        }
        if depth == max_depth || survivors.len() > max_nodes {
            let argmax = Interval::from_bounds(survivors[0].lo.clone(), survivors.last().unwrap().hi.clone());
            let hi = upper.flatten();
            let max = match (&best, &hi) {
                (Some(b), Some(h)) if b > h => Interval::bottom(),
                _ => Interval::new(best, hi),
            };
            return Bnb { max, argmax };
        }
        nodes = survivors
            .into_iter()
            .flat_map(|n| {
                let m = n.lo.add(&n.hi).shl(-1);
                [Node { lo: n.lo, hi: m.clone() }, Node { lo: m, hi: n.hi }]
            })
            .collect();
        depth += 1;
    }
}
