//! Primitive towers: arithmetic, elementary functions and max/min.

use std::sync::Arc;

use crate::exactnum::{Dyadic, Interval, Precision, Trichotomy};

use super::jet::Jet;
use super::{EvalCtx, Smooth, Tower};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Unary {
    Neg,
    Recip,
    Sqr,
    Sqrt,
    Exp,
    Sin,
    Cos,
}

impl Unary {
    /// Enclosures of `phi^(j)` over `x` for `j = 0..=order`.
    fn derivs(self, x: &Interval, order: usize, p: Precision) -> Vec<Interval> {
        let mut out = Vec::with_capacity(order + 1);
        match self {
            Unary::Neg => {
                out.push(x.neg());
                out.push(Interval::from_i64(-1));
            }
            Unary::Sqr => {
                out.push(x.sqr(p));
                out.push(x.shl(1));
                out.push(Interval::from_i64(2));
            }
            Unary::Recip => {
                let r = x.recip(p);
                let mut cur = r.clone();
                for j in 0..=order {
                    out.push(cur.clone());
                    if j < order {
                        cur = cur.mul(&r, p).scale(&Dyadic::from_i64(-(j as i64 + 1)), p);
                    }
                }
            }
            Unary::Sqrt => {
                let s = x.sqrt(p);
                out.push(s.clone());
                if order > 0 {
                    // phi^(j) = c_j * sqrt(x) / x^j, c_j = prod_{i<j} (1/2 - i)
                    let r = x.recip(p);
                    let mut cur = s;
                    for j in 0..order {
                        let c = Dyadic::new((1 - 2 * j as i64).into(), -1);
                        cur = cur.mul(&r, p).scale(&c, p);
                        out.push(cur.clone());
                    }
                }
            }
            Unary::Exp => {
                let e = x.exp(p);
                out.resize(order + 1, e);
            }
            Unary::Sin | Unary::Cos => {
                let (s, c) = (x.sin(p), x.cos(p));
                let cycle = [s.clone(), c.clone(), s.neg(), c.neg()];
                let shift = if self == Unary::Cos { 1 } else { 0 };
                for j in 0..=order {
                    out.push(cycle[(j + shift) % 4].clone());
                }
            }
        }
        out.resize(order + 1, Interval::zero());
        out
    }
}

struct UnaryNode(Unary);

impl Smooth for UnaryNode {
    fn dom(&self) -> usize {
        1
    }
    fn cod(&self) -> usize {
        1
    }
    fn eval(&self, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Vec<Jet> {
        let p = cx.precision();
        let j = &x[0];
        let out = match self.0 {
            Unary::Neg => j.neg(),
            _ => j.compose_univariate(&self.0.derivs(j.base(), slots as usize, p), p),
        };
        vec![out]
    }
    fn label(&self) -> String {
        format!("{:?}", self.0).to_lowercase()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Binary {
    Add,
    Sub,
    Mul,
    Div,
    Max,
    Min,
}

struct BinaryNode(Binary);

/// `max` on jets: the branch that provably wins, or the Clarke hull at first
/// order and bottom above when the comparison is undecided.
fn jet_max(x: &Jet, y: &Jet) -> Jet {
    match x.base().compare(y.base()) {
        Trichotomy::Greater => x.clone(),
        Trichotomy::Less => y.clone(),
        Trichotomy::Unknown => {
            let n = x.len();
            let coeffs = (0..n)
                .map(|s| match s.count_ones() {
                    0 => x.base().max(y.base()),
                    1 => x.get(s).hull(y.get(s)),
                    _ => Interval::bottom(),
                })
                .collect();
            Jet::from_coeffs(x.slots(), coeffs)
        }
    }
}

impl Smooth for BinaryNode {
    fn dom(&self) -> usize {
        2
    }
    fn cod(&self) -> usize {
        1
    }
    fn eval(&self, cx: &EvalCtx, _slots: u32, x: &[Jet]) -> Vec<Jet> {
        let p = cx.precision();
        let (a, b) = (&x[0], &x[1]);
        let out = match self.0 {
            Binary::Add => a.add(b, p),
            Binary::Sub => a.sub(b, p),
            Binary::Mul => a.mul(b, p),
            Binary::Div => a.div(b, p),
            Binary::Max => jet_max(a, b),
            Binary::Min => jet_max(&a.neg(), &b.neg()).neg(),
        };
        vec![out]
    }
    fn label(&self) -> String {
        format!("{:?}", self.0).to_lowercase()
    }
}

fn unary(op: Unary) -> Tower {
    Tower::from_node(UnaryNode(op))
}

fn binary(op: Binary) -> Tower {
    Tower::from_node(BinaryNode(op))
}

pub fn add() -> Tower {
    binary(Binary::Add)
}

pub fn sub() -> Tower {
    binary(Binary::Sub)
}

pub fn mul() -> Tower {
    binary(Binary::Mul)
}

/// Bottom wherever the denominator may vanish.
pub fn div() -> Tower {
    binary(Binary::Div)
}

pub fn max() -> Tower {
    binary(Binary::Max)
}

pub fn min() -> Tower {
    binary(Binary::Min)
}

pub fn neg() -> Tower {
    unary(Unary::Neg)
}

pub fn recip() -> Tower {
    unary(Unary::Recip)
}

pub fn sqr() -> Tower {
    unary(Unary::Sqr)
}

pub fn sqrt() -> Tower {
    unary(Unary::Sqrt)
}

pub fn exp() -> Tower {
    unary(Unary::Exp)
}

pub fn sin() -> Tower {
    unary(Unary::Sin)
}

pub fn cos() -> Tower {
    unary(Unary::Cos)
}

/// `max(0, x)`.
pub fn relu() -> Tower {
    max().compose(&Tower::pair(&[Tower::zero(1, 1), Tower::identity(1)]))
}

/// Towers built only from `fold_der`, `linear`, composition and pairing.
/// They agree with the direct primitives and serve as a cross-check.
pub mod folded {
    use super::*;

    fn pointwise(f: impl Fn(&[Interval], Precision) -> Interval + Send + Sync + 'static) -> super::super::ValueFn {
        Arc::new(move |cx: &EvalCtx, x: &[Interval]| vec![f(x, cx.precision())])
    }

    /// Product rule: `(x, y; dx, dy) |- x dy + y dx`.
    pub fn mul() -> Tower {
        Tower::fold_der(2, 1, pointwise(|x, p| x[0].mul(&x[1], p)), || {
            let c = |i| Tower::coord(i, 4);
            let m = mul();
            let x_dy = m.compose(&Tower::pair(&[c(0), c(3)]));
            let y_dx = m.compose(&Tower::pair(&[c(1), c(2)]));
            Tower::linear(vec![vec![Dyadic::one(), Dyadic::one()]], 2).compose(&Tower::pair(&[x_dy, y_dx]))
        })
    }

    /// `phi' (x) * dx` with `phi'` given as a tower.
    fn chain(dphi: Tower) -> Tower {
        mul().compose(&Tower::pair(&[dphi.compose(&Tower::coord(0, 2)), Tower::coord(1, 2)]))
    }

    pub fn sin() -> Tower {
        Tower::fold_der(1, 1, pointwise(|x, p| x[0].sin(p)), || chain(cos()))
    }

    pub fn cos() -> Tower {
        Tower::fold_der(1, 1, pointwise(|x, p| x[0].cos(p)), || chain(neg_sin()))
    }

    fn neg_sin() -> Tower {
        Tower::linear(vec![vec![Dyadic::from_i64(-1)]], 1).compose(&sin())
    }

    pub fn exp() -> Tower {
        Tower::fold_der(1, 1, pointwise(|x, p| x[0].exp(p)), || chain(exp()))
    }
}
