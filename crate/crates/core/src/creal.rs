//! Computable reals as monotone refinement sequences of intervals.

use std::fmt;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use num_rational::BigRational;

use crate::exactnum::{Interval, IntervalBox, Precision};

/// Index of a refinement step; drives precision and every subdivision count.
pub type RefinementIndex = u32;

/// Default cap on `log2` of the subdivision count.
pub const DEFAULT_SUBDIVISION_CAP: u32 = 20;

/// Default number of refinement steps tried by [`eval_to_eps`].
pub const DEFAULT_BUDGET: RefinementIndex = 60;

/// Precision and subdivision count used at refinement `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub precision: Precision,
    pub subdivisions: u64,
}

/// `(30 + 20n bits, 2^min(n, cap))`.
pub fn refine_schedule(n: RefinementIndex, cap: u32) -> Schedule {
    Schedule { precision: Precision::new(30 + 20 * n), subdivisions: 1u64 << n.min(cap).min(62) }
}

type RawBox = dyn Fn(RefinementIndex, Option<Instant>) -> IntervalBox + Send + Sync;

/// A vector of computable reals refined together.
///
/// `approx(n)` is the meet of every raw approximation up to `n`, so the sequence
/// only ever shrinks even when the underlying procedure is not monotone.
#[derive(Clone)]
pub struct CRealBox {
    dims: usize,
    raw: Arc<RawBox>,
    seen: Arc<Mutex<Vec<IntervalBox>>>,
}

impl CRealBox {
    /// `raw(n, deadline)` must contain the denoted point for every `n`.
    pub fn monotonize<F>(dims: usize, raw: F) -> CRealBox
    where
        F: Fn(RefinementIndex, Option<Instant>) -> IntervalBox + Send + Sync + 'static,
    {
        CRealBox { dims, raw: Arc::new(raw), seen: Arc::new(Mutex::new(Vec::new())) }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn approx(&self, n: RefinementIndex) -> IntervalBox {
        self.approx_until(n, None)
    }

    fn approx_until(&self, n: RefinementIndex, deadline: Option<Instant>) -> IntervalBox {
        let mut seen = self.seen.lock().unwrap();
        while seen.len() <= n as usize {
            let k = seen.len() as RefinementIndex;
            let fresh = (self.raw)(k, deadline);
            assert_eq!(fresh.dims(), self.dims, "refinement {k} changed dimension");
            let next = match seen.last() {
                Some(prev) => prev.meet(&fresh),
                None => fresh,
            };
            seen.push(next);
        }
        seen[n as usize].clone()
    }

    pub fn coord(&self, i: usize) -> CReal {
        assert!(i < self.dims);
        CReal { inner: self.clone(), index: i }
    }
}

/// A single computable real; see [`CRealBox`].
#[derive(Clone)]
pub struct CReal {
    inner: CRealBox,
    index: usize,
}

impl CReal {
    pub fn monotonize<F>(raw: F) -> CReal
    where
        F: Fn(RefinementIndex, Option<Instant>) -> Interval + Send + Sync + 'static,
    {
        CRealBox::monotonize(1, move |n, d| IntervalBox::new(vec![raw(n, d)])).coord(0)
    }

    pub fn approx(&self, n: RefinementIndex) -> Interval {
        self.inner.approx(n).get(self.index).clone()
    }
}

/// Why refinement stopped before reaching the target width.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    Budget,
    Timeout,
}

/// The tightest enclosure reached when refinement gave up.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct NonConvergence {
    pub tightest: IntervalBox,
    pub reached: RefinementIndex,
    pub reason: StopReason,
}

impl fmt::Display for NonConvergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let why = match self.reason {
            StopReason::Budget => "refinement budget exhausted",
            StopReason::Timeout => "wall-clock limit reached",
        };
        write!(f, "no convergence ({why} at refinement {}); tightest enclosure {}", self.reached, self.tightest)
    }
}

/// A converged enclosure and the refinement index that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Converged {
    pub enclosure: IntervalBox,
    pub index: RefinementIndex,
}

/// Limits for [`eval_to_eps`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    pub budget: RefinementIndex,
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { budget: DEFAULT_BUDGET, deadline: None }
    }
}

/// Whether every coordinate of `b` is bounded with width at most `eps`.
pub fn within(b: &IntervalBox, eps: &BigRational) -> bool {
    b.coords().iter().all(|c| c.width().is_some_and(|w| &w.to_rational() <= eps))
}

/// Refine until every coordinate has width `<= eps`.
pub fn eval_to_eps(x: &CRealBox, eps: &BigRational, limits: &Limits) -> Result<Converged, NonConvergence> {
    let mut last = IntervalBox::bottom(x.dims());
    for n in 0..=limits.budget {
        if limits.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(NonConvergence { tightest: last, reached: n.saturating_sub(1), reason: StopReason::Timeout });
        }
        last = x.approx_until(n, limits.deadline);
        if within(&last, eps) {
            return Ok(Converged { enclosure: last, index: n });
        }
    }
    let reason = if limits.deadline.is_some_and(|d| Instant::now() >= d) { StopReason::Timeout } else { StopReason::Budget };
    Err(NonConvergence { tightest: last, reached: limits.budget, reason })
}

/// Scalar convenience wrapper over [`eval_to_eps`].
pub fn eval_real_to_eps(x: &CReal, eps: &BigRational, limits: &Limits) -> Result<(Interval, RefinementIndex), NonConvergence> {
    let single = {
        let x = x.clone();
        CRealBox::monotonize(1, move |n, _| IntervalBox::new(vec![x.approx(n)]))
    };
    eval_to_eps(&single, eps, limits).map(|c| (c.enclosure.get(0).clone(), c.index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Dyadic;
    use num_bigint::BigInt;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::from_bounds(Dyadic::from_i64(a), Dyadic::from_i64(b))
    }

    #[test]
    fn schedule_examples() {
        assert_eq!(refine_schedule(0, 20), Schedule { precision: Precision::new(30), subdivisions: 1 });
        assert_eq!(refine_schedule(3, 20), Schedule { precision: Precision::new(90), subdivisions: 8 });
        assert_eq!(refine_schedule(25, 20).subdivisions, 1 << 20);
    }

    #[test]
    fn constant_raw_is_stable() {
        let x = CReal::monotonize(|_, _| iv(0, 1));
        for n in 0..5 {
            assert_eq!(x.approx(n), iv(0, 1));
        }
    }

    #[test]
    fn meet_of_history() {
        let x = CReal::monotonize(|n, _| if n == 0 { iv(0, 2) } else { iv(1, 3) });
        assert_eq!(x.approx(1), iv(1, 2));
    }

    #[test]
    fn shrinking_raw_converges() {
        let x = CReal::monotonize(|n, _| {
            let e = Dyadic::pow2(-(n as i64));
            Interval::from_bounds(e.neg(), e)
        });
        assert_eq!(x.approx(4).width().unwrap(), Dyadic::pow2(-3));
        let eps = BigRational::new(BigInt::from(1), BigInt::from(1000));
        let (_, n) = eval_real_to_eps(&x, &eps, &Limits::default()).unwrap();
        assert_eq!(n, 11);
    }

    #[test]
    fn wide_value_reports_nonconvergence() {
        let x = CReal::monotonize(|_, _| iv(0, 1));
        let eps = BigRational::new(BigInt::from(1), BigInt::from(10));
        let err = eval_real_to_eps(&x, &eps, &Limits { budget: 4, deadline: None }).unwrap_err();
        assert_eq!(err.tightest.get(0), &iv(0, 1));
        assert_eq!(err.reason, StopReason::Budget);
    }
}
