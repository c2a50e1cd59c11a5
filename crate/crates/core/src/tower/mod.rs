//! Derivative towers: smoothish maps `R^n ~> R^m` with every directional
//! derivative, built from linear maps, `fold_der`, composition, pairing and the
//! derivative operator.

mod ctx;
pub mod jet;
pub mod prims;

use std::fmt;
use std::ops;
use std::sync::{Arc, OnceLock};

pub use ctx::EvalConfig;
pub use ctx::EvalCtx;
pub(crate) use ctx::MemoKey;
use jet::Jet;

use crate::creal::CRealBox;
use crate::exactnum::{transcendental, Dyadic, Interval, IntervalBox};

/// A node in a tower expression graph.
///
/// `eval` receives one jet per input coordinate, all over `slots` perturbation
/// slots, and returns one jet per output coordinate over the same slots.
pub trait Smooth: Send + Sync {
    fn dom(&self) -> usize;
    fn cod(&self) -> usize;
    fn eval(&self, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Vec<Jet>;
    /// For each output, which inputs it may depend on.
    fn dependencies(&self) -> Vec<Vec<bool>> {
        vec![vec![true; self.dom()]; self.cod()]
    }
    fn label(&self) -> String;
    fn is_identity(&self) -> bool {
        false
    }
}

/// Shared handle to a tower node plus its dependency pattern.
#[derive(Clone)]
pub struct Tower {
    node: Arc<dyn Smooth>,
    deps: Arc<Vec<Vec<bool>>>,
    id: usize,
}

// Never reused, unlike node addresses, so memo entries cannot go stale.
static NEXT_ID: std::sync::atomic::AtomicUsize = std::sync::atomic::AtomicUsize::new(1);

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower({} -> {}: {})", self.dom(), self.cod(), self.node.label())
    }
}

/// Value map used by [`Tower::fold_der`].
pub type ValueFn = Arc<dyn Fn(&EvalCtx, &[Interval]) -> Vec<Interval> + Send + Sync>;

/// A constant coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constant {
    Exact(Dyadic),
    Pi,
}

impl Constant {
    fn enclosure(&self, cx: &EvalCtx) -> Interval {
        match self {
            Constant::Exact(d) => Interval::point(d.clone()),
            Constant::Pi => transcendental::pi(cx.precision()),
        }
    }
}

impl Tower {
    pub fn from_node<N: Smooth + 'static>(node: N) -> Tower {
        let deps = node.dependencies();
        debug_assert_eq!(deps.len(), node.cod());
        let id = NEXT_ID.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        Tower { node: Arc::new(node), deps: Arc::new(deps), id }
    }

    pub fn dom(&self) -> usize {
        self.node.dom()
    }

    pub fn cod(&self) -> usize {
        self.node.cod()
    }

    /// Stable identity of the underlying node, for caching.
    pub fn id(&self) -> usize {
        self.id
    }

    /// Per-output input dependencies.
    pub fn dependencies(&self) -> &[Vec<bool>] {
        &self.deps
    }

    /// Inputs any output may depend on.
    pub fn support(&self) -> Vec<bool> {
        let mut s = vec![false; self.dom()];
        for row in self.deps.iter() {
            for (a, b) in s.iter_mut().zip(row) {
                *a |= *b;
            }
        }
        s
    }

    pub fn eval(&self, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Vec<Jet> {
        debug_assert_eq!(x.len(), self.dom(), "arity of {self:?}");
        debug_assert!(x.iter().all(|j| j.slots() == slots));
        self.node.eval(cx, slots, x)
    }

    /// Value enclosure on a box.
    pub fn value(&self, cx: &EvalCtx, x: &IntervalBox) -> IntervalBox {
        let jets: Vec<Jet> = x.coords().iter().map(|c| Jet::constant(c.clone(), 0)).collect();
        IntervalBox::new(self.eval(cx, 0, &jets).into_iter().map(|j| j.base().clone()).collect())
    }

    /// `f^(k)(x; v_1, .., v_k)` with `k = dirs.len()`.
    pub fn derivative_at(&self, cx: &EvalCtx, x: &IntervalBox, dirs: &[IntervalBox]) -> IntervalBox {
        let k = dirs.len() as u32;
        let jets: Vec<Jet> = (0..self.dom())
            .map(|i| {
                let mut j = Jet::constant(x.get(i).clone(), k);
                for (s, d) in dirs.iter().enumerate() {
                    j.set(1 << s, d.get(i).clone());
                }
                j
            })
            .collect();
        IntervalBox::new(self.eval(cx, k, &jets).into_iter().map(|j| j.top().clone()).collect())
    }

    /// The closed computable reals denoted by a tower with empty domain.
    pub fn to_creal(&self, config: EvalConfig) -> CRealBox {
        assert_eq!(self.dom(), 0, "only closed towers denote reals");
        let t = self.clone();
        CRealBox::monotonize(self.cod(), move |n, deadline| {
            let cx = EvalCtx::new(n, config.clone(), deadline);
            let v = t.value(&cx, &IntervalBox::new(vec![]));
            if cx.expired() {
                IntervalBox::bottom(t.cod())
            } else {
                v
            }
        })
    }

    // ----- construction -------------------------------------------------

    pub fn constants(values: Vec<Constant>, dom: usize) -> Tower {
        assert!(!values.is_empty(), "constant tower needs a codomain");
        Tower::from_node(ConstNode { values, dom })
    }

    pub fn constant(c: Dyadic, dom: usize) -> Tower {
        Tower::constants(vec![Constant::Exact(c)], dom)
    }

    pub fn pi(dom: usize) -> Tower {
        Tower::constants(vec![Constant::Pi], dom)
    }

    pub fn zero(dom: usize, cod: usize) -> Tower {
        Tower::constants(vec![Constant::Exact(Dyadic::zero()); cod], dom)
    }

    /// Output `j` is input `indices[j]`.
    pub fn select(indices: Vec<usize>, dom: usize) -> Tower {
        assert!(indices.iter().all(|&i| i < dom), "selection out of range");
        assert!(!indices.is_empty(), "selection needs a codomain");
        Tower::from_node(SelectNode { indices, dom })
    }

    pub fn coord(i: usize, dom: usize) -> Tower {
        Tower::select(vec![i], dom)
    }

    pub fn identity(n: usize) -> Tower {
        Tower::select((0..n).collect(), n)
    }

    /// The linear map with the given rows.
    pub fn linear(rows: Vec<Vec<Dyadic>>, dom: usize) -> Tower {
        assert!(rows.iter().all(|r| r.len() == dom), "matrix width must equal the domain");
        assert!(!rows.is_empty());
        Tower::from_node(LinearNode { rows, dom })
    }

    /// Value map `f0` with derivative tower `fprime` on the doubled domain.
    /// `fprime` is built on first use, so mutually recursive towers are fine.
    pub fn fold_der<F>(dom: usize, cod: usize, f0: ValueFn, fprime: F) -> Tower
    where
        F: Fn() -> Tower + Send + Sync + 'static,
    {
        Tower::from_node(FoldDerNode { dom, cod, value: f0, tail: OnceLock::new(), make: Box::new(fprime) })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Tower) -> Tower {
        assert_eq!(self.dom(), inner.cod(), "compose: {self:?} after {inner:?}");
        if inner.node.is_identity() {
            return self.clone();
        }
        if self.node.is_identity() {
            return inner.clone();
        }
        Tower::from_node(ComposeNode { outer: self.clone(), inner: inner.clone() })
    }

    /// `<f_1, .., f_k>`: concatenated outputs.
    pub fn pair(parts: &[Tower]) -> Tower {
        assert!(!parts.is_empty());
        let dom = parts[0].dom();
        assert!(parts.iter().all(|p| p.dom() == dom), "pair: domains differ");
        if parts.len() == 1 {
            return parts[0].clone();
        }
        Tower::from_node(PairNode { parts: parts.to_vec() })
    }

    /// Output coordinate `i`.
    pub fn component(&self, i: usize) -> Tower {
        if self.cod() == 1 && i == 0 {
            return self.clone();
        }
        Tower::select(vec![i], self.cod()).compose(self)
    }

    /// `f'`: the tower on `(x, v)` pairs.
    pub fn derivative(&self) -> Tower {
        Tower::from_node(DerivNode { f: self.clone() })
    }

    /// Precompose with the projection dropping the last `k` inputs.
    pub fn weaken(&self, k: usize) -> Tower {
        if k == 0 {
            return self.clone();
        }
        let d = self.dom();
        if d == 0 {
            return Tower::from_node(WidenConst { inner: self.clone(), dom: k });
        }
        self.compose(&Tower::select((0..d).collect(), d + k))
    }
}

struct ConstNode {
    values: Vec<Constant>,
    dom: usize,
}

impl Smooth for ConstNode {
    fn dom(&self) -> usize {
        self.dom
    }
    fn cod(&self) -> usize {
        self.values.len()
    }
    fn eval(&self, cx: &EvalCtx, slots: u32, _x: &[Jet]) -> Vec<Jet> {
        self.values.iter().map(|c| Jet::constant(c.enclosure(cx), slots)).collect()
    }
    fn dependencies(&self) -> Vec<Vec<bool>> {
        vec![vec![false; self.dom]; self.values.len()]
    }
    fn label(&self) -> String {
        format!("const{:?}", self.values)
    }
}

/// A closed tower viewed over a larger context.
struct WidenConst {
    inner: Tower,
    dom: usize,
}

impl Smooth for WidenConst {
    fn dom(&self) -> usize {
        self.dom
    }
    fn cod(&self) -> usize {
        self.inner.cod()
    }
    fn eval(&self, cx: &EvalCtx, slots: u32, _x: &[Jet]) -> Vec<Jet> {
        self.inner.eval(cx, slots, &[])
    }
    fn dependencies(&self) -> Vec<Vec<bool>> {
        vec![vec![false; self.dom]; self.cod()]
    }
    fn label(&self) -> String {
        format!("widen({})", self.inner.node.label())
    }
}

struct SelectNode {
    indices: Vec<usize>,
    dom: usize,
}

impl Smooth for SelectNode {
    fn dom(&self) -> usize {
        self.dom
    }
    fn cod(&self) -> usize {
        self.indices.len()
    }
    fn eval(&self, _cx: &EvalCtx, _slots: u32, x: &[Jet]) -> Vec<Jet> {
        self.indices.iter().map(|&i| x[i].clone()).collect()
    }
    fn dependencies(&self) -> Vec<Vec<bool>> {
        self.indices
            .iter()
            .map(|&i| {
                let mut row = vec![false; self.dom];
                row[i] = true;
                row
            })
            .collect()
    }
    fn label(&self) -> String {
        format!("select{:?}/{}", self.indices, self.dom)
    }
    fn is_identity(&self) -> bool {
        self.indices.len() == self.dom && self.indices.iter().enumerate().all(|(a, &b)| a == b)
    }
}

struct LinearNode {
    rows: Vec<Vec<Dyadic>>,
    dom: usize,
}

impl Smooth for LinearNode {
    fn dom(&self) -> usize {
        self.dom
    }
    fn cod(&self) -> usize {
        self.rows.len()
    }
    fn eval(&self, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Vec<Jet> {
        let p = cx.precision();
        self.rows
            .iter()
            .map(|row| {
                let mut acc = Jet::zero(slots);
                for (c, xi) in row.iter().zip(x) {
                    if !c.is_zero() {
                        acc = acc.add(&xi.scale_dyadic(c, p), p);
                    }
                }
                acc
            })
            .collect()
    }
    fn dependencies(&self) -> Vec<Vec<bool>> {
        self.rows.iter().map(|r| r.iter().map(|c| !c.is_zero()).collect()).collect()
    }
    fn label(&self) -> String {
        format!("linear{}x{}", self.rows.len(), self.dom)
    }
}

struct ComposeNode {
    outer: Tower,
    inner: Tower,
}

impl Smooth for ComposeNode {
    fn dom(&self) -> usize {
        self.inner.dom()
    }
    fn cod(&self) -> usize {
        self.outer.cod()
    }
    fn eval(&self, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Vec<Jet> {
        let mid = self.inner.eval(cx, slots, x);
        self.outer.eval(cx, slots, &mid)
    }
    fn dependencies(&self) -> Vec<Vec<bool>> {
        let inner = self.inner.dependencies();
        self.outer
            .dependencies()
            .iter()
            .map(|row| {
                let mut acc = vec![false; self.dom()];
                for (j, used) in row.iter().enumerate() {
                    if *used {
                        for (a, b) in acc.iter_mut().zip(&inner[j]) {
                            *a |= *b;
                        }
                    }
                }
                acc
            })
            .collect()
    }
    fn label(&self) -> String {
        format!("({} . {})", self.outer.node.label(), self.inner.node.label())
    }
}

struct PairNode {
    parts: Vec<Tower>,
}

impl Smooth for PairNode {
    fn dom(&self) -> usize {
        self.parts[0].dom()
    }
    fn cod(&self) -> usize {
        self.parts.iter().map(Tower::cod).sum()
    }
    fn eval(&self, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Vec<Jet> {
        self.parts.iter().flat_map(|p| p.eval(cx, slots, x)).collect()
    }
    fn dependencies(&self) -> Vec<Vec<bool>> {
        self.parts.iter().flat_map(|p| p.dependencies().to_vec()).collect()
    }
    fn label(&self) -> String {
        let inner: Vec<String> = self.parts.iter().map(|p| p.node.label()).collect();
        format!("<{}>", inner.join(", "))
    }
}

struct FoldDerNode {
    dom: usize,
    cod: usize,
    value: ValueFn,
    tail: OnceLock<Tower>,
    make: Box<dyn Fn() -> Tower + Send + Sync>,
}

impl FoldDerNode {
    fn tail(&self) -> &Tower {
        self.tail.get_or_init(|| {
            let t = (self.make)();
            assert_eq!((t.dom(), t.cod()), (2 * self.dom, self.cod), "fold_der: derivative shape");
            t
        })
    }
}

impl Smooth for FoldDerNode {
    fn dom(&self) -> usize {
        self.dom
    }
    fn cod(&self) -> usize {
        self.cod
    }
    fn eval(&self, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Vec<Jet> {
        if slots == 0 {
            let base: Vec<Interval> = x.iter().map(|j| j.base().clone()).collect();
            let v = (self.value)(cx, &base);
            assert_eq!(v.len(), self.cod);
            return v.into_iter().map(|c| Jet::constant(c, 0)).collect();
        }
        // Peel the top slot: f(a + e b) = f(a) + e f'(a; b).
        let (a, b): (Vec<Jet>, Vec<Jet>) = x.iter().map(Jet::split_top).unzip();
        let head = self.eval(cx, slots - 1, &a);
        let mut ab = a;
        ab.extend(b);
        let tail = self.tail().eval(cx, slots - 1, &ab);
        head.iter().zip(&tail).map(|(h, t)| Jet::join_top(h, t)).collect()
    }
    fn label(&self) -> String {
        "foldDer".to_string()
    }
}

struct DerivNode {
    f: Tower,
}

impl Smooth for DerivNode {
    fn dom(&self) -> usize {
        2 * self.f.dom()
    }
    fn cod(&self) -> usize {
        self.f.cod()
    }
    fn eval(&self, cx: &EvalCtx, slots: u32, x: &[Jet]) -> Vec<Jet> {
        let n = self.f.dom();
        let lifted: Vec<Jet> = (0..n).map(|i| Jet::join_top(&x[i], &x[n + i])).collect();
        self.f.eval(cx, slots + 1, &lifted).into_iter().map(|j| j.split_top().1).collect()
    }
    fn dependencies(&self) -> Vec<Vec<bool>> {
        self.f
            .dependencies()
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.extend_from_slice(row);
                r
            })
            .collect()
    }
    fn label(&self) -> String {
        format!("({})'", self.f.node.label())
    }
}

// ----- operator sugar for building scalar expressions ---------------------

fn binary(op: Tower, a: &Tower, b: &Tower) -> Tower {
    op.compose(&Tower::pair(&[a.clone(), b.clone()]))
}

impl ops::Add for &Tower {
    type Output = Tower;
    fn add(self, o: &Tower) -> Tower {
        binary(prims::add(), self, o)
    }
}

impl ops::Sub for &Tower {
    type Output = Tower;
    fn sub(self, o: &Tower) -> Tower {
        binary(prims::sub(), self, o)
    }
}

impl ops::Mul for &Tower {
    type Output = Tower;
    fn mul(self, o: &Tower) -> Tower {
        binary(prims::mul(), self, o)
    }
}

impl ops::Div for &Tower {
    type Output = Tower;
    fn div(self, o: &Tower) -> Tower {
        binary(prims::div(), self, o)
    }
}

impl ops::Neg for &Tower {
    type Output = Tower;
    fn neg(self) -> Tower {
        prims::neg().compose(self)
    }
}

impl Tower {
    /// `op ∘ self` for a unary primitive.
    pub fn then(&self, op: Tower) -> Tower {
        op.compose(self)
    }

    pub fn max(&self, o: &Tower) -> Tower {
        binary(prims::max(), self, o)
    }

    pub fn min(&self, o: &Tower) -> Tower {
        binary(prims::min(), self, o)
    }
}
