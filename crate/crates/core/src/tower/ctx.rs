use std::any::Any;
use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;
use std::time::Instant;

use crate::creal::{refine_schedule, RefinementIndex, DEFAULT_SUBDIVISION_CAP};
use crate::exactnum::Precision;

use super::jet::Jet;

/// Knobs shared by every higher-order primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    /// Cap on `log2` of the subdivision count.
    pub subdivision_cap: u32,
    /// Interval-Newton contraction inside root refinement.
    pub newton: bool,
    /// Branch-and-bound stops deepening once this many nodes survive a level.
    pub max_nodes: usize,
    /// cutRoot never searches beyond `[-2^window_cap, 2^window_cap]`.
    pub window_cap: u32,
    /// Reuse higher-order primitive results for identical inputs within one refinement.
    pub memoize: bool,
}

impl Default for EvalConfig {
    fn default() -> EvalConfig {
        EvalConfig { subdivision_cap: DEFAULT_SUBDIVISION_CAP, newton: true, max_nodes: 4096, window_cap: 40, memoize: true }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct MemoKey {
    pub node: usize,
    pub tag: u32,
    pub slots: u32,
    pub inputs: Vec<Jet>,
}

/// Everything one refinement step needs: precision, subdivision level, limits
/// and a per-step cache. Not shared across threads.
pub struct EvalCtx {
    n: RefinementIndex,
    precision: Precision,
    config: EvalConfig,
    deadline: Option<Instant>,
    timed_out: Cell<bool>,
    memo: RefCell<HashMap<MemoKey, Rc<dyn Any>>>,
}

impl EvalCtx {
    pub fn new(n: RefinementIndex, config: EvalConfig, deadline: Option<Instant>) -> EvalCtx {
        let precision = refine_schedule(n, config.subdivision_cap).precision;
        EvalCtx { n, precision, config, deadline, timed_out: Cell::new(false), memo: RefCell::new(HashMap::new()) }
    }

    /// Default configuration, no deadline.
    pub fn at(n: RefinementIndex) -> EvalCtx {
        EvalCtx::new(n, EvalConfig::default(), None)
    }

    pub fn refinement(&self) -> RefinementIndex {
        self.n
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn config(&self) -> &EvalConfig {
        &self.config
    }

    /// `log2` of this step's subdivision count.
    pub fn level(&self) -> u32 {
        self.n.min(self.config.subdivision_cap)
    }

    /// True once the deadline has passed; primitives then return bottom.
    pub fn expired(&self) -> bool {
        if self.timed_out.get() {
            return true;
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out.set(true);
            return true;
        }
        false
    }

    pub(crate) fn memo_get<T: Clone + 'static>(&self, key: &MemoKey) -> Option<T> {
        if !self.config.memoize {
            return None;
        }
        self.memo.borrow().get(key).and_then(|v| v.downcast_ref::<T>()).cloned()
    }

    pub(crate) fn memo_put<T: 'static>(&self, key: MemoKey, v: T) {
        if self.config.memoize && !self.timed_out.get() {
            self.memo.borrow_mut().insert(key, Rc::new(v));
        }
    }
}
