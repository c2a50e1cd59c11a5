//! Higher-order primitives over `[0, 1]`: integration, root finding and
//! optimisation, each mapping `f : Γ × R ~> R` to a tower `Γ ~> R`.
//!
//! The bound variable is always the last input of `f`. Derivatives of every
//! order come from the implicit function theorem (roots, argmax) or from
//! linearity (integral), by peeling one perturbation slot at a time.

mod integral;
mod optimize;
mod roots;

use crate::exactnum::{Dyadic, Interval, IntervalBox};
use crate::tower::jet::Jet;
use crate::tower::{EvalCtx, MemoKey, Smooth, Tower};

pub use roots::newton_accelerate;

/// Maps `f : Γ × R ~> R` to `Γ ~> R` for every context dimension.
pub trait TowerXform: Send + Sync {
    fn apply(&self, f: &Tower) -> Tower;
}

impl<F> TowerXform for F
where
    F: Fn(&Tower) -> Tower + Send + Sync,
{
    fn apply(&self, f: &Tower) -> Tower {
        self(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Primitive {
    Integral01,
    CutRoot,
    FirstRoot,
    Max01,
    Argmax01,
}

impl Primitive {
    pub const ALL: [Primitive; 5] =
        [Primitive::Integral01, Primitive::CutRoot, Primitive::FirstRoot, Primitive::Max01, Primitive::Argmax01];

    pub fn name(self) -> &'static str {
        match self {
            Primitive::Integral01 => "integral01",
            Primitive::CutRoot => "cutRoot",
            Primitive::FirstRoot => "firstRoot",
            Primitive::Max01 => "max01",
            Primitive::Argmax01 => "argmax01",
        }
    }

    pub fn from_name(name: &str) -> Option<Primitive> {
        Primitive::ALL.into_iter().find(|p| p.name() == name)
    }

    fn tag(self) -> u32 {
        self as u32
    }
}

impl TowerXform for Primitive {
    fn apply(&self, f: &Tower) -> Tower {
        assert!(f.dom() >= 1 && f.cod() == 1, "{} expects a scalar function of the bound variable", self.name());
        Tower::from_node(HoNode::new(*self, f.clone()))
    }
}

pub fn integral01(f: &Tower) -> Tower {
    Primitive::Integral01.apply(f)
}

pub fn cut_root(f: &Tower) -> Tower {
    Primitive::CutRoot.apply(f)
}

pub fn first_root(f: &Tower) -> Tower {
    Primitive::FirstRoot.apply(f)
}

pub fn max01(f: &Tower) -> Tower {
    Primitive::Max01.apply(f)
}

pub fn argmax01(f: &Tower) -> Tower {
    Primitive::Argmax01.apply(f)
}

/// Memo tag for the shared branch-and-bound of `max01`/`argmax01`.
const BNB_TAG: u32 = 100;

pub(crate) struct HoNode {
    kind: Primitive,
    f: Tower,
    /// Context inputs `f` may read.
    support: Vec<bool>,
}

impl HoNode {
    fn new(kind: Primitive, f: Tower) -> HoNode {
        let mut support = f.support();
        support.pop();
        HoNode { kind, f, support }
    }

    fn with_kind(&self, kind: Primitive) -> HoNode {
        HoNode { kind, f: self.f.clone(), support: self.support.clone() }
    }

    fn key(&self, tag: u32, slots: u32, x: &[Jet]) -> MemoKey {
        let inputs = x.iter().zip(&self.support).filter(|(_, s)| **s).map(|(j, _)| j.clone()).collect();
        MemoKey { node: self.f.id(), tag, slots, inputs }
    }

    fn eval_one(&self, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Jet {
        if cx.expired() {
            return Jet::bottom(slots);
        }
        let key = self.key(self.kind.tag(), slots, x);
        if let Some(hit) = cx.memo_get::<Jet>(&key) {
            return hit;
        }
        let out = match self.kind {
            Primitive::Integral01 => integral::eval(cx, &self.f, slots, x),
            Primitive::CutRoot | Primitive::FirstRoot => roots::eval(self, cx, slots, x),
            Primitive::Max01 | Primitive::Argmax01 => optimize::eval(self, cx, slots, x),
        };
        if cx.expired() {
            return Jet::bottom(slots);
        }
        cx.memo_put(key, out.clone());
        out
    }
}

impl Smooth for HoNode {
    fn dom(&self) -> usize {
        self.f.dom() - 1
    }
    fn cod(&self) -> usize {
        1
    }
    fn eval(&self, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Vec<Jet> {
        vec![self.eval_one(cx, slots, x)]
    }
    fn dependencies(&self) -> Vec<Vec<bool>> {
        vec![self.support.clone()]
    }
    fn label(&self) -> String {
        self.kind.name().to_string()
    }
}

/// `f(γ, ·)` at fixed context enclosures.
pub(crate) struct Slice<'a> {
    cx: &'a EvalCtx,
    f: &'a Tower,
    gamma: Vec<Interval>,
}

/// What one evaluation over a cell tells us.
pub(crate) struct CellInfo {
    /// Natural extension intersected with the mean-value form at the midpoint.
    pub enc: Interval,
    /// Enclosure of `∂f/∂y` over the cell.
    pub slope: Interval,
    /// Enclosure of `f` at the midpoint.
    pub mid: Interval,
}

impl<'a> Slice<'a> {
    pub fn new(cx: &'a EvalCtx, f: &'a Tower, gamma: Vec<Interval>) -> Slice<'a> {
        Slice { cx, f, gamma }
    }

    pub fn from_jets(cx: &'a EvalCtx, f: &'a Tower, x: &[Jet]) -> Slice<'a> {
        Slice::new(cx, f, x.iter().map(|j| j.base().clone()).collect())
    }

    /// `f(γ, y)`.
    pub fn at(&self, y: Interval) -> Interval {
        let mut jets: Vec<Jet> = self.gamma.iter().map(|g| Jet::constant(g.clone(), 0)).collect();
        jets.push(Jet::constant(y, 0));
        self.f.eval(self.cx, 0, &jets)[0].base().clone()
    }

    pub fn at_point(&self, y: &Dyadic) -> Interval {
        self.at(Interval::point(y.clone()))
    }

    /// Provable sign of `f(γ, y)`.
    pub fn sign(&self, y: &Dyadic) -> Option<i32> {
        self.at_point(y).strict_sign()
    }

    /// `(f, ∂f/∂y)` over `y`.
    pub fn slope(&self, y: Interval) -> (Interval, Interval) {
        let mut jets: Vec<Jet> = self.gamma.iter().map(|g| Jet::constant(g.clone(), 1)).collect();
        jets.push(Jet::variable(y, 0, 1));
        let out = &self.f.eval(self.cx, 1, &jets)[0];
        (out.base().clone(), out.get(1).clone())
    }

    pub fn cell(&self, lo: &Dyadic, hi: &Dyadic) -> CellInfo {
        let p = self.cx.precision();
        let (natural, slope) = self.slope(Interval::from_bounds(lo.clone(), hi.clone()));
        let m = lo.add(hi).shl(-1);
        let mid = self.at_point(&m);
        let half = hi.sub(lo).shl(-1);
        let offset = Interval::from_bounds(half.neg(), half);
        let mvf = mid.add(&slope.mul(&offset, p), p);
        let enc = natural.try_meet(&mvf).unwrap_or(natural);
        CellInfo { enc, slope, mid }
    }

    /// Whether `f` is provably of sign `s` on the whole cell, using the
    /// natural extension and mean-value forms anchored at both endpoints.
    pub fn cell_has_sign(&self, lo: &Dyadic, hi: &Dyadic, s: i32) -> bool {
        let p = self.cx.precision();
        let (natural, slope) = self.slope(Interval::from_bounds(lo.clone(), hi.clone()));
        if natural.strict_sign() == Some(s) {
            return true;
        }
        let w = hi.sub(lo);
        let right = Interval::from_bounds(Dyadic::zero(), w.clone());
        let from_lo = self.at_point(lo).add(&slope.mul(&right, p), p);
        let from_hi = self.at_point(hi).add(&slope.mul(&right.neg(), p), p);
        let enc = natural.try_meet(&from_lo).and_then(|e| e.try_meet(&from_hi));
        enc.is_some_and(|e| e.strict_sign() == Some(s))
    }
}

/// Root and argmax enclosures at a fixed context, for diagnostics and tests.
pub fn value_at(kind: Primitive, cx: &EvalCtx, f: &Tower, gamma: &IntervalBox) -> Interval {
    let node = kind.apply(f);
    node.value(cx, gamma).get(0).clone()
}

#[cfg(test)]
mod tests;
