//! Staging elaborator: expressions evaluate to meta-level values whose ground
//! parts are towers over the context of enclosing bound variables.
//!
//! Functions are closures, so programs of any order elaborate as long as the
//! value finally printed is ground. A higher-order primitive allocates the next
//! context coordinate, applies its argument to it, and wraps the resulting
//! tower; every real reachable at that moment lives over a shorter context and
//! is lifted on use.

use std::cell::Cell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;

use super::ast::*;
use super::lexer::{is_dyadic, parse_decimal};
use super::ElabError;
use crate::exactnum::Dyadic;
use crate::hoprims::{Primitive, TowerXform};
use crate::stdlib;
use crate::tower::{prims, Tower};

type Res<T> = Result<T, ElabError>;

#[derive(Clone)]
pub enum Value {
    Real(Tower),
    Tuple(Vec<Value>),
    Unit,
    Bool(bool),
    Fun(Rc<dyn Fn(Value) -> Res<Value>>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Real(_) => "a real",
            Value::Tuple(_) => "a tuple",
            Value::Unit => "()",
            Value::Bool(_) => "a boolean",
            Value::Fun(_) => "a function",
        }
    }

    pub fn apply(&self, arg: Value) -> Res<Value> {
        match self {
            Value::Fun(f) => f(arg),
            v => Err(ElabError(format!("cannot apply {} to an argument", v.kind()))),
        }
    }

    fn real(self, what: &str) -> Res<Tower> {
        match self {
            Value::Real(t) => Ok(t),
            v => Err(ElabError(format!("{what} expects a real, found {}", v.kind()))),
        }
    }

    /// The tower of a ground value: a real, or a tuple of reals flattened.
    pub fn ground(&self) -> Res<Tower> {
        let mut parts = Vec::new();
        self.flatten(&mut parts)?;
        let dim = parts.iter().map(Tower::dom).max().unwrap_or(0);
        let parts: Vec<Tower> = parts.iter().map(|t| stdlib::lift(t, dim)).collect();
        Ok(if parts.len() == 1 { parts[0].clone() } else { Tower::pair(&parts) })
    }

    fn flatten(&self, out: &mut Vec<Tower>) -> Res<()> {
        match self {
            Value::Real(t) => out.push(t.clone()),
            Value::Tuple(vs) => {
                for v in vs {
                    v.flatten(out)?;
                }
            }
            v => return Err(ElabError(format!("only reals and tuples of reals can be evaluated, found {}", v.kind()))),
        }
        Ok(())
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(t) => write!(f, "{t:?}"),
            Value::Tuple(vs) => f.debug_tuple("").field(vs).finish(),
            Value::Unit => write!(f, "()"),
            Value::Bool(b) => write!(f, "{}", if *b { "tt" } else { "ff" }),
            Value::Fun(_) => write!(f, "<function>"),
        }
    }
}

/// Global definitions; replaced wholesale when a definition is added so
/// earlier closures keep seeing the bindings they were defined under.
#[derive(Clone, Default)]
pub struct Globals {
    pub values: HashMap<String, Value>,
    pub aliases: HashMap<String, (Vec<String>, Type)>,
}

enum Scope {
    Global(Rc<Globals>),
    Local(String, Value, Rc<Scope>),
}

#[derive(Clone)]
struct Env(Rc<Scope>);

impl Env {
    fn bind(&self, name: &str, v: Value) -> Env {
        Env(Rc::new(Scope::Local(name.to_string(), v, self.0.clone())))
    }

    fn lookup(&self, name: &str) -> Option<Value> {
        let mut s = &self.0;
        loop {
            match &**s {
                Scope::Local(n, v, rest) => {
                    if n == name {
                        return Some(v.clone());
                    }
                    s = rest;
                }
                Scope::Global(g) => return g.values.get(name).cloned(),
            }
        }
    }

    fn globals(&self) -> &Globals {
        let mut s = &self.0;
        loop {
            match &**s {
                Scope::Local(_, _, rest) => s = rest,
                Scope::Global(g) => return g,
            }
        }
    }
}

/// Elaboration state: the number of context coordinates currently bound.
#[derive(Default)]
pub struct Stage {
    depth: Cell<usize>,
}

impl Stage {
    pub fn depth(&self) -> usize {
        self.depth.get()
    }

    /// Bind a fresh coordinate, run `body` on it, and return its tower over
    /// the extended context.
    fn under_binder(&self, f: &Value, what: &str) -> Res<Tower> {
        let g = self.depth.get();
        self.depth.set(g + 1);
        let r = f.apply(Value::Real(Tower::coord(g, g + 1)));
        self.depth.set(g);
        let t = r?.real(&format!("the function given to {what}"))?;
        Ok(stdlib::lift(&t, g + 1))
    }
}

pub struct Elaborator {
    stage: Rc<Stage>,
}

fn fun(f: impl Fn(Value) -> Res<Value> + 'static) -> Value {
    Value::Fun(Rc::new(f))
}

fn lift_pair(a: &Tower, b: &Tower) -> (Tower, Tower) {
    let d = a.dom().max(b.dom());
    (stdlib::lift(a, d), stdlib::lift(b, d))
}

fn arith(op: BinOp, a: Value, b: Value) -> Res<Value> {
    match (a, b) {
        (Value::Real(a), Value::Real(b)) => {
            let (a, b) = lift_pair(&a, &b);
            Ok(Value::Real(match op {
                BinOp::Add => &a + &b,
                BinOp::Sub => &a - &b,
                BinOp::Mul => &a * &b,
                BinOp::Div => &a / &b,
            }))
        }
        (Value::Tuple(a), Value::Tuple(b)) if a.len() == b.len() => {
            Ok(Value::Tuple(a.into_iter().zip(b).map(|(x, y)| arith(op, x, y)).collect::<Res<_>>()?))
        }
        (a, b) => Err(ElabError(format!("arithmetic on {} and {}", a.kind(), b.kind()))),
    }
}

fn negate(v: Value) -> Res<Value> {
    match v {
        Value::Real(t) => Ok(Value::Real(-&t)),
        Value::Tuple(vs) => Ok(Value::Tuple(vs.into_iter().map(negate).collect::<Res<_>>()?)),
        v => Err(ElabError(format!("cannot negate {}", v.kind()))),
    }
}

fn power(v: Value, n: u32) -> Res<Value> {
    let t = v.real("a power")?;
    Ok(Value::Real(match n {
        0 => Tower::constant(Dyadic::one(), t.dom()),
        2 => prims::sqr().compose(&t),
        _ => (1..n).fold(t.clone(), |acc, _| &acc * &t),
    }))
}

fn rational_constant(q: &num_rational::BigRational) -> Tower {
    let dy = |n: &BigInt| Tower::constant(Dyadic::from_int(n.clone()), 0);
    if is_dyadic(q) {
        let k = q.denom().bits() as i64 - 1;
        Tower::constant(Dyadic::new(q.numer().clone(), -k), 0)
    } else {
        &dy(q.numer()) / &dy(q.denom())
    }
}

/// The exact value of a literal expression built from numbers, `-` and `/`.
fn literal(e: &Expr) -> Option<num_rational::BigRational> {
    match e {
        Expr::Num(s) => parse_decimal(s),
        Expr::Neg(a) => literal(a).map(|q| -q),
        Expr::Bin(BinOp::Div, a, b) => {
            let (a, b) = (literal(a)?, literal(b)?);
            (b != num_rational::BigRational::from_integer(0.into())).then(|| a / b)
        }
        _ => None,
    }
}

/// Structural check of `v` against an annotation.
pub fn check(v: &Value, ty: &Type, g: &Globals, what: &str) -> Res<()> {
    let bad = || Err(ElabError(format!("{what}: expected {ty}, found {}", v.kind())));
    match (ty, v) {
        (Type::Real, Value::Real(_)) | (Type::Unit, Value::Unit) | (Type::Bool, Value::Bool(_)) => Ok(()),
        (Type::Fun(..), Value::Fun(_)) => Ok(()),
        (Type::Prod(a, b), Value::Tuple(vs)) if vs.len() >= 2 => {
            check(&vs[0], a, g, what)?;
            if vs.len() == 2 {
                check(&vs[1], b, g, what)
            } else {
                check(&Value::Tuple(vs[1..].to_vec()), b, g, what)
            }
        }
        (Type::Named(n, args), _) => match g.aliases.get(n) {
            Some((params, body)) => {
                if params.len() != args.len() {
                    return Err(ElabError(format!("type {n} takes {} arguments, given {}", params.len(), args.len())));
                }
                check(v, &subst(body, params, args), g, what)
            }
            None if args.is_empty() => Ok(()),
            None => Err(ElabError(format!("unknown type {n}"))),
        },
        _ => bad(),
    }
}

fn subst(t: &Type, params: &[String], args: &[Type]) -> Type {
    match t {
        Type::Named(n, xs) if xs.is_empty() => match params.iter().position(|p| p == n) {
            Some(i) => args[i].clone(),
            None => t.clone(),
        },
        Type::Named(n, xs) => Type::Named(n.clone(), xs.iter().map(|x| subst(x, params, args)).collect()),
        Type::Prod(a, b) => Type::Prod(Box::new(subst(a, params, args)), Box::new(subst(b, params, args))),
        Type::Fun(a, b) => Type::Fun(Box::new(subst(a, params, args)), Box::new(subst(b, params, args))),
        _ => t.clone(),
    }
}

impl Elaborator {
    pub fn new() -> Elaborator {
        Elaborator { stage: Rc::new(Stage::default()) }
    }

    pub fn builtins(&self) -> Globals {
        let mut g = Globals::default();
        let mut put = |n: &str, v: Value| {
            g.values.insert(n.to_string(), v);
        };
        for (name, p) in [("sqrt", prims::sqrt()), ("sin", prims::sin()), ("cos", prims::cos()), ("exp", prims::exp()), ("relu", prims::relu())] {
            put(name, fun(move |x| Ok(Value::Real(p.compose(&x.real(name)?)))));
        }
        for (name, is_max) in [("max", true), ("min", false)] {
            put(
                name,
                fun(move |a| {
                    let a = a.real(name)?;
                    Ok(fun(move |b| {
                        let (a, b) = lift_pair(&a, &b.real(name)?);
                        Ok(Value::Real(if is_max { a.max(&b) } else { a.min(&b) }))
                    }))
                }),
            );
        }
        put("pi", Value::Real(Tower::pi(0)));
        put("tt", Value::Bool(true));
        put("ff", Value::Bool(false));
        for p in Primitive::ALL {
            let st = self.stage.clone();
            put(p.name(), fun(move |f| Ok(Value::Real(p.apply(&st.under_binder(&f, p.name())?)))));
        }
        let st = self.stage.clone();
        put(
            "deriv",
            fun(move |f| {
                let st = st.clone();
                Ok(fun(move |x| {
                    let x = x.real("deriv's point")?;
                    let body = st.under_binder(&f, "deriv")?;
                    let g = st.depth();
                    Ok(Value::Real(stdlib::deriv_at(&body, &stdlib::lift(&x, g))))
                }))
            }),
        );
        g
    }

    /// Evaluate a closed expression in `globals`.
    pub fn eval_closed(&self, e: &Expr, globals: &Rc<Globals>) -> Res<Value> {
        assert_eq!(self.stage.depth(), 0);
        self.eval(e, &Env(Rc::new(Scope::Global(globals.clone()))))
    }

    /// The value a top-level `let` binds.
    pub fn eval_def(&self, def: &LetDef, globals: &Rc<Globals>) -> Res<Value> {
        self.def_value(def, &Env(Rc::new(Scope::Global(globals.clone()))))
    }

    fn def_value(&self, def: &LetDef, env: &Env) -> Res<Value> {
        let def = Rc::new(def.clone());
        self.curry(def, 0, env.clone())
    }

    /// The function taking parameters `i..` of `def`, or its body when none remain.
    fn curry(&self, def: Rc<LetDef>, i: usize, env: Env) -> Res<Value> {
        if i == def.params.len() {
            let v = self.eval(&def.body, &env)?;
            if let Some(t) = &def.ret {
                check(&v, t, env.globals(), &format!("result of {}", def.name))?;
            }
            return Ok(v);
        }
        let me = self.clone_handle();
        Ok(fun(move |arg| {
            let p = &def.params[i];
            if let Some(t) = &p.ty {
                check(&arg, t, env.globals(), &format!("argument {} of {}", p.name, def.name))?;
            }
            me.curry(def.clone(), i + 1, env.bind(&p.name, arg))
        }))
    }

    /// Forget any binders left open by an aborted elaboration.
    pub fn reset(&self) {
        self.stage.depth.set(0);
    }

    fn clone_handle(&self) -> Elaborator {
        Elaborator { stage: self.stage.clone() }
    }

    fn eval(&self, e: &Expr, env: &Env) -> Res<Value> {
        match e {
            Expr::Var(x) => env.lookup(x).ok_or_else(|| ElabError(format!("unbound name `{x}`"))),
            Expr::Num(s) => {
                let q = parse_decimal(s).ok_or_else(|| ElabError(format!("bad literal {s}")))?;
                Ok(Value::Real(rational_constant(&q)))
            }
            Expr::Unit => Ok(Value::Unit),
            Expr::Tuple(es) => Ok(Value::Tuple(es.iter().map(|e| self.eval(e, env)).collect::<Res<_>>()?)),
            Expr::Lam(b, body) => {
                let (me, b, body, env) = (self.clone_handle(), b.clone(), body.clone(), env.clone());
                Ok(fun(move |arg| {
                    if let Some(t) = &b.ty {
                        check(&arg, t, env.globals(), &format!("argument {}", b.name))?;
                    }
                    me.eval(&body, &env.bind(&b.name, arg))
                }))
            }
            Expr::App(f, x) => {
                let f = self.eval(f, env)?;
                f.apply(self.eval(x, env)?)
            }
            Expr::Let(def, body) => {
                let v = self.def_value(def, env)?;
                self.eval(body, &env.bind(&def.name, v))
            }
            Expr::Bin(BinOp::Div, ..) if literal(e).is_some_and(|q| is_dyadic(&q)) => {
                Ok(Value::Real(rational_constant(&literal(e).unwrap())))
            }
            Expr::Bin(op, a, b) => arith(*op, self.eval(a, env)?, self.eval(b, env)?),
            Expr::Neg(a) => negate(self.eval(a, env)?),
            Expr::Pow(a, n) => power(self.eval(a, env)?, *n),
            Expr::Proj(a, i) => match self.eval(a, env)? {
                Value::Tuple(mut vs) if *i < vs.len() => Ok(vs.swap_remove(*i)),
                v => Err(ElabError(format!("cannot take component {i} of {}", v.kind()))),
            },
        }
    }
}

impl Default for Elaborator {
    fn default() -> Self {
        Elaborator::new()
    }
}
