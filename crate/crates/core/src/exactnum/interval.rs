use std::cmp::Ordering;
use std::fmt;

use super::dyadic::{Dyadic, Round};
use super::transcendental;

/// Working mantissa length for rounded operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    pub bits: u32,
}

impl Precision {
    pub fn new(bits: u32) -> Precision {
        assert!(bits > 0, "precision must be positive");
        Precision { bits }
    }

    pub fn plus(self, extra: u32) -> Precision {
        Precision { bits: self.bits + extra }
    }
}

/// Outcome of comparing two intervals when equality is undecidable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trichotomy {
    Less,
    Greater,
    Unknown,
}

/// Closed interval with dyadic or infinite endpoints.
///
/// `lo == None` is negative infinity and `hi == None` is positive infinity.
/// `lo <= hi` always holds; the whole line is bottom.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Option<Dyadic>,
    hi: Option<Dyadic>,
}

/// Extended endpoint used inside multiplication.
#[derive(Clone, PartialEq, Eq)]
enum Ext {
    NegInf,
    Fin(Dyadic),
    PosInf,
}

impl Ext {
    fn sign(&self) -> i32 {
        match self {
            Ext::NegInf => -1,
            Ext::Fin(d) => d.signum(),
            Ext::PosInf => 1,
        }
    }

    fn rank(&self, other: &Ext) -> Ordering {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => a.cmp(b),
            (a, b) => a.order().cmp(&b.order()),
        }
    }

    fn order(&self) -> i32 {
        match self {
            Ext::NegInf => -1,
            Ext::Fin(_) => 0,
            Ext::PosInf => 1,
        }
    }
}

impl Interval {
    /// `[lo, hi]`; panics if `lo > hi`.
    pub fn new(lo: Option<Dyadic>, hi: Option<Dyadic>) -> Interval {
        if let (Some(a), Some(b)) = (&lo, &hi) {
            assert!(a <= b, "malformed interval [{a:?}, {b:?}]");
        }
        Interval { lo, hi }
    }

    pub fn from_bounds(lo: Dyadic, hi: Dyadic) -> Interval {
        Interval::new(Some(lo), Some(hi))
    }

    pub fn bottom() -> Interval {
        Interval { lo: None, hi: None }
    }

    pub fn point(d: Dyadic) -> Interval {
        Interval { lo: Some(d.clone()), hi: Some(d) }
    }

    pub fn from_i64(v: i64) -> Interval {
        Interval::point(Dyadic::from_i64(v))
    }

    pub fn zero() -> Interval {
        Interval::point(Dyadic::zero())
    }

    pub fn one() -> Interval {
        Interval::point(Dyadic::one())
    }

    /// `[0, 1]`.
    pub fn unit() -> Interval {
        Interval::from_bounds(Dyadic::zero(), Dyadic::one())
    }

    pub fn lo(&self) -> Option<&Dyadic> {
        self.lo.as_ref()
    }

    pub fn hi(&self) -> Option<&Dyadic> {
        self.hi.as_ref()
    }

    pub fn is_bottom(&self) -> bool {
        self.lo.is_none() && self.hi.is_none()
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn is_point(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(a), Some(b)) if a == b)
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(a), Some(b)) if a.is_zero() && b.is_zero())
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lo.as_ref().is_none_or(|a| a <= x) && self.hi.as_ref().is_none_or(|b| x <= b)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    /// Set inclusion `self ⊆ other`.
    pub fn subset_of(&self, other: &Interval) -> bool {
        let lo_ok = match (&other.lo, &self.lo) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(o), Some(s)) => o <= s,
        };
        let hi_ok = match (&other.hi, &self.hi) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(o), Some(s)) => s <= o,
        };
        lo_ok && hi_ok
    }

    /// Specialisation order: `self ⊑ other` iff `other ⊆ self`.
    pub fn approximates(&self, other: &Interval) -> bool {
        other.subset_of(self)
    }

    /// `hi - lo`, or `None` when unbounded.
    pub fn width(&self) -> Option<Dyadic> {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => Some(b.sub(a)),
            _ => None,
        }
    }

    /// Exact midpoint of a bounded interval.
    pub fn midpoint(&self) -> Option<Dyadic> {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => Some(a.add(b).shl(-1)),
            _ => None,
        }
    }

    /// Largest magnitude of any member, `None` when unbounded.
    pub fn magnitude(&self) -> Option<Dyadic> {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => Some(a.abs().max(b.abs())),
            _ => None,
        }
    }

    /// Rough `f64` centre, for diagnostics and tests only.
    pub fn center_f64(&self) -> f64 {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => (a.to_f64() + b.to_f64()) / 2.0,
            (Some(_), None) => f64::INFINITY,
            (None, Some(_)) => f64::NEG_INFINITY,
            (None, None) => f64::NAN,
        }
    }

    pub fn width_f64(&self) -> f64 {
        self.width().map_or(f64::INFINITY, |w| w.to_f64())
    }

    /// Sign provable over the whole interval: `Some(1)`, `Some(-1)` or `None`.
    pub fn strict_sign(&self) -> Option<i32> {
        if self.lo.as_ref().is_some_and(|a| a.is_positive()) {
            Some(1)
        } else if self.hi.as_ref().is_some_and(|b| b.is_negative()) {
            Some(-1)
        } else {
            None
        }
    }

    /// Round both endpoints outward to `p` bits.
    pub fn round(&self, p: Precision) -> Interval {
        Interval {
            lo: self.lo.as_ref().map(|a| a.round(p.bits, Round::Down)),
            hi: self.hi.as_ref().map(|b| b.round(p.bits, Round::Up)),
        }
    }

    /// Widen each finite endpoint by one unit in the last of `p` bits.
    pub fn widen_ulp(&self, p: Precision) -> Interval {
        let ulp = |d: &Dyadic| {
            if d.is_zero() {
                Dyadic::pow2(-(p.bits as i64) * 2)
            } else {
                Dyadic::pow2(d.top() - p.bits as i64)
            }
        };
        Interval {
            lo: self.lo.as_ref().map(|a| a.sub(&ulp(a)).round(p.bits, Round::Down)),
            hi: self.hi.as_ref().map(|b| b.add(&ulp(b)).round(p.bits, Round::Up)),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.as_ref().map(Dyadic::neg), hi: self.lo.as_ref().map(Dyadic::neg) }
    }

    pub fn add(&self, other: &Interval, p: Precision) -> Interval {
        let lo = match (&self.lo, &other.lo) {
            (Some(a), Some(b)) => Some(a.add_round(b, p.bits, Round::Down)),
            _ => None,
        };
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a.add_round(b, p.bits, Round::Up)),
            _ => None,
        };
        Interval { lo, hi }
    }

    pub fn sub(&self, other: &Interval, p: Precision) -> Interval {
        self.add(&other.neg(), p)
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Interval {
        Interval { lo: self.lo.as_ref().map(|a| a.shl(k)), hi: self.hi.as_ref().map(|b| b.shl(k)) }
    }

    /// Multiplication by a dyadic constant.
    pub fn scale(&self, c: &Dyadic, p: Precision) -> Interval {
        self.mul(&Interval::point(c.clone()), p)
    }

    pub fn mul(&self, other: &Interval, p: Precision) -> Interval {
        if let (Some(a0), Some(a1), Some(b0), Some(b1)) = (&self.lo, &self.hi, &other.lo, &other.hi) {
            // Finite fast paths by sign.
            if !a0.is_negative() && !b0.is_negative() {
                return Interval::from_bounds(
                    a0.mul_round(b0, p.bits, Round::Down),
                    a1.mul_round(b1, p.bits, Round::Up),
                );
            }
            if !a0.is_negative() && !b1.is_positive() {
                return Interval::from_bounds(
                    a1.mul_round(b0, p.bits, Round::Down),
                    a0.mul_round(b1, p.bits, Round::Up),
                );
            }
            if !a1.is_positive() && !b0.is_negative() {
                return Interval::from_bounds(
                    a0.mul_round(b1, p.bits, Round::Down),
                    a1.mul_round(b0, p.bits, Round::Up),
                );
            }
            if !a1.is_positive() && !b1.is_positive() {
                return Interval::from_bounds(
                    a1.mul_round(b1, p.bits, Round::Down),
                    a0.mul_round(b0, p.bits, Round::Up),
                );
            }
            let c = [a0.mul(b0), a0.mul(b1), a1.mul(b0), a1.mul(b1)];
            let lo = c.iter().min().unwrap().round(p.bits, Round::Down);
            let hi = c.iter().max().unwrap().round(p.bits, Round::Up);
            return Interval::from_bounds(lo, hi);
        }
        let ends = |iv: &Interval| {
            [
                iv.lo.clone().map_or(Ext::NegInf, Ext::Fin),
                iv.hi.clone().map_or(Ext::PosInf, Ext::Fin),
            ]
        };
        let (ea, eb) = (ends(self), ends(other));
        let mut prods = Vec::with_capacity(4);
        for x in &ea {
            for y in &eb {
                let prod = match (x, y) {
                    (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a.mul(b)),
                    _ => {
                        let s = x.sign() * y.sign();
                        if s == 0 {
                            // 0 times an unbounded endpoint carries no information.
                            return Interval::bottom();
                        }
                        if s > 0 {
                            Ext::PosInf
                        } else {
                            Ext::NegInf
                        }
                    }
                };
                prods.push(prod);
            }
        }
        let lo = prods.iter().min_by(|a, b| a.rank(b)).unwrap();
        let hi = prods.iter().max_by(|a, b| a.rank(b)).unwrap();
        Interval {
            lo: match lo {
                Ext::Fin(d) => Some(d.round(p.bits, Round::Down)),
                _ => None,
            },
            hi: match hi {
                Ext::Fin(d) => Some(d.round(p.bits, Round::Up)),
                _ => None,
            },
        }
    }

    /// Exact-ish square: non-negative even for intervals straddling zero.
    pub fn sqr(&self, p: Precision) -> Interval {
        if self.contains_zero() {
            let m = match (&self.lo, &self.hi) {
                (Some(a), Some(b)) => Some(a.abs().max(b.abs())),
                _ => None,
            };
            return Interval { lo: Some(Dyadic::zero()), hi: m.map(|m| m.mul_round(&m, p.bits, Round::Up)) };
        }
        self.mul(self, p)
    }

    /// `1/x`; bottom when the interval contains zero.
    pub fn recip(&self, p: Precision) -> Interval {
        if self.contains_zero() {
            return Interval::bottom();
        }
        let one = Dyadic::one();
        let inv = |d: &Option<Dyadic>, dir: Round| match d {
            Some(d) => Some(one.div_round(d, p.bits, dir)),
            None => Some(Dyadic::zero()),
        };
        Interval { lo: inv(&self.hi, Round::Down), hi: inv(&self.lo, Round::Up) }
    }

    pub fn div(&self, other: &Interval, p: Precision) -> Interval {
        self.mul(&other.recip(p), p)
    }

    pub fn sqrt(&self, p: Precision) -> Interval {
        transcendental::sqrt(self, p)
    }

    pub fn exp(&self, p: Precision) -> Interval {
        transcendental::exp(self, p)
    }

    pub fn sin(&self, p: Precision) -> Interval {
        transcendental::sin(self, p)
    }

    pub fn cos(&self, p: Precision) -> Interval {
        transcendental::cos(self, p)
    }

    /// Endpointwise maximum. Exact.
    pub fn max(&self, other: &Interval) -> Interval {
        let lo = match (&self.lo, &other.lo) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            _ => None,
        };
        Interval { lo, hi }
    }

    /// Endpointwise minimum. Exact.
    pub fn min(&self, other: &Interval) -> Interval {
        self.neg().max(&other.neg()).neg()
    }

    /// Smallest interval containing both. Exact.
    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = match (&self.lo, &other.lo) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            _ => None,
        };
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            _ => None,
        };
        Interval { lo, hi }
    }

    /// Intersection, or `None` if disjoint.
    pub fn try_meet(&self, other: &Interval) -> Option<Interval> {
        let lo = match (&self.lo, &other.lo) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a > b {
                return None;
            }
        }
        Some(Interval { lo, hi })
    }

    /// Intersection of two enclosures of the same quantity.
    ///
    /// Disjointness means one of them was unsound; that is a bug, so this aborts.
    pub fn meet(&self, other: &Interval) -> Interval {
        match self.try_meet(other) {
            Some(m) => m,
            None => panic!("soundness violation: disjoint enclosures {self} and {other}"),
        }
    }

    pub fn compare(&self, other: &Interval) -> Trichotomy {
        if let (Some(a), Some(b)) = (&self.hi, &other.lo) {
            if a < b {
                return Trichotomy::Less;
            }
        }
        if let (Some(a), Some(b)) = (&self.lo, &other.hi) {
            if a > b {
                return Trichotomy::Greater;
            }
        }
        Trichotomy::Unknown
    }

    /// Render with `digits` fractional decimals, rounding outward.
    pub fn render(&self, digits: usize) -> String {
        let lo = self.lo.as_ref().map_or("-inf".to_string(), |a| a.to_decimal(digits, Round::Down));
        let hi = self.hi.as_ref().map_or("inf".to_string(), |b| b.to_decimal(digits, Round::Up));
        format!("[{lo}, {hi}]")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(12))
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(17))
    }
}

/// Fixed-length vector of intervals; all operations are componentwise.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntervalBox {
    coords: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(coords: Vec<Interval>) -> IntervalBox {
        IntervalBox { coords }
    }

    pub fn bottom(dims: usize) -> IntervalBox {
        IntervalBox { coords: vec![Interval::bottom(); dims] }
    }

    pub fn points(values: &[Dyadic]) -> IntervalBox {
        IntervalBox { coords: values.iter().cloned().map(Interval::point).collect() }
    }

    pub fn dims(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Interval] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Interval> {
        self.coords
    }

    pub fn get(&self, i: usize) -> &Interval {
        &self.coords[i]
    }

    pub fn approximates(&self, other: &IntervalBox) -> bool {
        self.dims() == other.dims() && self.coords.iter().zip(&other.coords).all(|(a, b)| a.approximates(b))
    }

    pub fn hull(&self, other: &IntervalBox) -> IntervalBox {
        assert_eq!(self.dims(), other.dims());
        IntervalBox { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.hull(b)).collect() }
    }

    pub fn meet(&self, other: &IntervalBox) -> IntervalBox {
        assert_eq!(self.dims(), other.dims());
        IntervalBox { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.meet(b)).collect() }
    }
}

impl fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
