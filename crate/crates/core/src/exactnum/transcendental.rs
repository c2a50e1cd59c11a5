//! Enclosures of sqrt, exp, sin, cos and pi on dyadic intervals.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;

use super::dyadic::{Dyadic, Round};
use super::interval::{Interval, Precision};

fn below(iv: &Interval, bound: &Dyadic) -> bool {
    iv.magnitude().is_some_and(|m| &m < bound)
}

fn div_int(iv: &Interval, k: u64, p: Precision) -> Interval {
    let k = Dyadic::from_int(BigInt::from(k));
    Interval::new(
        iv.lo().map(|a| a.div_round(&k, p.bits, Round::Down)),
        iv.hi().map(|b| b.div_round(&k, p.bits, Round::Up)),
    )
}

fn symmetric(mag: &Dyadic) -> Interval {
    Interval::from_bounds(mag.neg(), mag.clone())
}

fn unit_disc() -> Interval {
    Interval::from_bounds(Dyadic::from_i64(-1), Dyadic::one())
}

/// Sum of `(-1)^j / ((2j+1) m^(2j+1))`, an enclosure of `atan(1/m)`.
fn atan_inv(m: u64, w: Precision) -> Interval {
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let mut pow = m;
    let mut sum = Interval::zero();
    let tiny = Dyadic::pow2(-(w.bits as i64) - 8);
    let mut j: u64 = 0;
    loop {
        let denom = Dyadic::from_int(&pow * BigInt::from(2 * j + 1));
        let one = Dyadic::one();
        let term = Interval::from_bounds(one.div_round(&denom, w.bits, Round::Down), one.div_round(&denom, w.bits, Round::Up));
        if below(&term, &tiny) {
            // Alternating and decreasing: the tail is bounded by its first term.
            return sum.add(&symmetric(term.hi().unwrap()), w);
        }
        sum = if j % 2 == 0 { sum.add(&term, w) } else { sum.sub(&term, w) };
        pow *= &m2;
        j += 1;
    }
}

fn pi_cache() -> &'static Mutex<HashMap<u32, Interval>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosure of pi, rounded outward to `p` bits.
pub fn pi(p: Precision) -> Interval {
    let key = (p.bits + 16).div_ceil(64) * 64;
    let cached = pi_cache().lock().unwrap().get(&key).cloned();
    let full = match cached {
        Some(v) => v,
        None => {
            let w = Precision::new(key + 16);
            let a = atan_inv(5, w).shl(4);
            let b = atan_inv(239, w).shl(2);
            let v = a.sub(&b, w);
            pi_cache().lock().unwrap().insert(key, v.clone());
            v
        }
    };
    full.round(p)
}

pub fn sqrt(a: &Interval, p: Precision) -> Interval {
    if a.hi().is_some_and(|h| h.is_negative()) {
        return Interval::bottom();
    }
    // Transient dips below zero are clamped rather than rejected.
    let lo = match a.lo() {
        Some(l) if l.is_positive() => l.sqrt_round(p.bits, Round::Down),
        _ => Dyadic::zero(),
    };
    let hi = a.hi().map(|h| h.sqrt_round(p.bits, Round::Up));
    Interval::new(Some(lo), hi)
}

fn exp_point(x: &Dyadic, p: Precision) -> Interval {
    if x.is_zero() {
        return Interval::one();
    }
    if x.top() > 24 {
        return if x.is_positive() {
            Interval::new(Some(Dyadic::one()), None)
        } else {
            Interval::unit()
        };
    }
    // exp(x) = exp(x / 2^s)^(2^s) with |x / 2^s| < 2^-10.
    let s = (x.top() + 10).max(0);
    let w = Precision::new(p.bits + 24 + s as u32);
    let r = Interval::point(x.shl(-s));
    let tiny = Dyadic::pow2(-(w.bits as i64) - 4);
    let mut sum = Interval::one();
    let mut term = Interval::one();
    let mut k = 1u64;
    loop {
        term = div_int(&term.mul(&r, w), k, w);
        sum = sum.add(&term, w);
        if below(&term, &tiny) {
            // |r| <= 1/2 makes the tail no larger than the last term.
            sum = sum.add(&symmetric(&term.magnitude().unwrap()), w);
            break;
        }
        k += 1;
    }
    for _ in 0..s {
        sum = sum.sqr(w);
    }
    sum.round(p).widen_ulp(p)
}

pub fn exp(a: &Interval, p: Precision) -> Interval {
    let lo = match a.lo() {
        Some(l) => exp_point(l, p).lo().cloned().unwrap_or_else(Dyadic::zero),
        None => Dyadic::zero(),
    };
    let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
    let hi = a.hi().and_then(|h| exp_point(h, p).hi().cloned());
    Interval::new(Some(lo), hi)
}

/// Taylor enclosures of `(sin r, cos r)` for `|r| <= 1`.
fn taylor_sin_cos(r: &Interval, w: Precision) -> (Interval, Interval) {
    let r2 = r.sqr(w);
    let tiny = Dyadic::pow2(-(w.bits as i64) - 4);
    let series = |first: Interval, offset: u64| {
        let mut sum = first.clone();
        let mut term = first;
        let mut j = 1u64;
        loop {
            let a = 2 * j - 1 + offset;
            term = div_int(&term.mul(&r2, w), a * (a + 1), w);
            sum = if j % 2 == 1 { sum.sub(&term, w) } else { sum.add(&term, w) };
            if below(&term, &tiny) {
                return sum.add(&symmetric(&term.magnitude().unwrap()), w);
            }
            j += 1;
        }
    };
    (series(r.clone(), 1), series(Interval::one(), 0))
}

/// `(sin x, cos x)` at a dyadic point.
fn sin_cos_point(x: &Dyadic, p: Precision) -> (Interval, Interval) {
    if x.is_zero() {
        return (Interval::zero(), Interval::one());
    }
    let w = Precision::new(p.bits + 32 + x.top().max(0) as u32);
    let half_pi = pi(w).shl(-1);
    let q = Interval::point(x.clone()).div(&half_pi, w);
    let k = q.midpoint().unwrap().add(&Dyadic::pow2(-1)).floor();
    let kpi = half_pi.scale(&Dyadic::from_int(k.clone()), w);
    let r = Interval::point(x.clone()).sub(&kpi, w);
    let (s, c) = taylor_sin_cos(&r, w);
    let quadrant = k.mod_floor(&BigInt::from(4));
    let quadrant: u32 = quadrant.try_into().unwrap();
    let (s, c) = match quadrant {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    };
    let fin = |v: Interval| v.round(p).widen_ulp(p).try_meet(&unit_disc()).unwrap_or_else(unit_disc);
    (fin(s), fin(c))
}

/// Whether `[lo, hi]` may contain `offset + period * k` for some integer `k`.
fn may_contain_critical(lo: &Dyadic, hi: &Dyadic, offset: &Interval, period: &Interval, w: Precision) -> bool {
    let u = Interval::point(lo.clone()).sub(offset, w).div(period, w);
    let v = Interval::point(hi.clone()).sub(offset, w).div(period, w);
    match (u.lo(), v.hi()) {
        (Some(a), Some(b)) => a.ceil() <= b.floor(),
        _ => true,
    }
}

fn periodic(a: &Interval, p: Precision, want_sin: bool) -> Interval {
    let (lo, hi) = match (a.lo(), a.hi()) {
        (Some(l), Some(h)) => (l, h),
        _ => return unit_disc(),
    };
    if hi.sub(lo) > Dyadic::from_i64(7) {
        return unit_disc();
    }
    let pick = |x: &Dyadic| {
        let (s, c) = sin_cos_point(x, p);
        if want_sin {
            s
        } else {
            c
        }
    };
    if lo == hi {
        return pick(lo);
    }
    let mut res = pick(lo).hull(&pick(hi));
    let w = Precision::new(p.bits + 32 + lo.top().max(hi.top()).max(0) as u32);
    let pi = pi(w);
    let period = pi.shl(1);
    let (max_at, min_at) = if want_sin {
        (pi.shl(-1), pi.shl(-1).neg())
    } else {
        (Interval::zero(), pi)
    };
    if may_contain_critical(lo, hi, &max_at, &period, w) {
        res = Interval::new(res.lo().cloned(), Some(Dyadic::one()));
    }
    if may_contain_critical(lo, hi, &min_at, &period, w) {
        res = Interval::new(Some(Dyadic::from_i64(-1)), res.hi().cloned());
    }
    res.try_meet(&unit_disc()).unwrap_or_else(unit_disc)
}

pub fn sin(a: &Interval, p: Precision) -> Interval {
    periodic(a, p, true)
}

pub fn cos(a: &Interval, p: Precision) -> Interval {
    periodic(a, p, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: u32) -> Precision {
        Precision::new(bits)
    }

    fn encloses(iv: &Interval, v: f64, tol: f64) -> bool {
        let (lo, hi) = (iv.lo().unwrap().to_f64(), iv.hi().unwrap().to_f64());
        lo <= v + tol && v - tol <= hi
    }

    #[test]
    fn pi_digits() {
        let v = pi(p(200));
        assert!(v.width().unwrap() <= Dyadic::pow2(-190));
        assert_eq!(v.render(30), "[3.141592653589793238462643383279, 3.141592653589793238462643383280]");
    }

    #[test]
    fn sqrt_two_transcript() {
        let r = sqrt(&Interval::from_i64(2), p(32));
        assert!(encloses(&r, std::f64::consts::SQRT_2, 0.0));
        assert!(r.width_f64() < 1e-9);
        assert!(sqrt(&Interval::from_i64(-1), p(32)).is_bottom());
        let straddle = Interval::from_bounds(Dyadic::from_i64(-1), Dyadic::from_i64(4));
        assert_eq!(sqrt(&straddle, p(32)), Interval::from_bounds(Dyadic::zero(), Dyadic::from_i64(2)));
    }

    #[test]
    fn exp_of_one_is_tight() {
        for bits in [30u32, 64, 128, 256] {
            let e = exp(&Interval::one(), p(bits));
            assert!(encloses(&e, std::f64::consts::E, 1e-15));
            assert!(e.width().unwrap() <= Dyadic::pow2(-(bits as i64) + 4));
        }
    }

    #[test]
    fn sin_cos_values() {
        assert_eq!(sin(&Interval::zero(), p(64)), Interval::zero());
        let x = Interval::point(Dyadic::from_f64(0.3).unwrap());
        assert!(encloses(&sin(&x, p(64)), 0.3f64.sin(), 1e-16));
        assert!(encloses(&cos(&x, p(64)), 0.3f64.cos(), 1e-16));
        let big = Interval::from_i64(1000);
        assert!(encloses(&sin(&big, p(80)), 1000f64.sin(), 1e-12));
        assert!(encloses(&cos(&big, p(80)), 1000f64.cos(), 1e-12));
    }

    #[test]
    fn sin_critical_points_bound_image() {
        let a = Interval::from_bounds(Dyadic::one(), Dyadic::from_i64(2));
        let s = sin(&a, p(64));
        assert_eq!(s.hi(), Some(&Dyadic::one()));
        assert!(s.lo().unwrap().to_f64() > 0.84);
        let c = cos(&Interval::from_bounds(Dyadic::from_i64(3), Dyadic::from_i64(4)), p(64));
        assert_eq!(c.lo(), Some(&Dyadic::from_i64(-1)));
    }
}
