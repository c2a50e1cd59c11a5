//! Sessions: named definitions plus evaluation settings, the REPL and the
//! one-shot batch driver.

use std::io::{self, BufRead, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::rc::Rc;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::ast::{Decl, Expr, Item};
use super::elab::{check, Elaborator, Globals, Value};
use super::lexer::parse_decimal;
use super::parser::{parse_item, parse_program};
use super::{ElabError, SessionError};
use crate::creal::{eval_to_eps, Converged, Limits, NonConvergence, RefinementIndex, StopReason};
use crate::exactnum::IntervalBox;
use crate::tower::EvalConfig;

pub const PRELUDE: &str = include_str!("prelude.smooth");

/// A target width, kept with its spelling for the prompt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eps {
    pub text: String,
    pub value: BigRational,
}

impl Eps {
    pub fn parse(text: &str) -> Option<Eps> {
        let value = parse_decimal(text)?;
        value.is_positive().then(|| Eps { text: text.trim().to_string(), value })
    }

    /// Fractional digits printed for this target: one more than the decimal
    /// position of `eps`, at least one.
    pub fn digits(&self) -> usize {
        let ten = BigRational::from_integer(10.into());
        let (mut k, mut p) = (0usize, BigRational::one());
        while p > self.value {
            k += 1;
            p = p / &ten;
        }
        (k + 1).max(1)
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub eps: Eps,
    pub budget: RefinementIndex,
    pub timeout: Duration,
    pub newton: bool,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            eps: Eps::parse("1e-3").unwrap(),
            budget: crate::creal::DEFAULT_BUDGET,
            timeout: Duration::from_secs(120),
            newton: true,
        }
    }
}

/// Result of refining a query.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub outcome: Result<Converged, NonConvergence>,
    pub digits: usize,
}

fn render_box(b: &IntervalBox, digits: usize) -> String {
    let parts: Vec<String> = b.coords().iter().map(|c| c.render(digits)).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(", "))
    }
}

impl Evaluation {
    pub fn converged(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn enclosure(&self) -> &IntervalBox {
        match &self.outcome {
            Ok(c) => &c.enclosure,
            Err(nc) => &nc.tightest,
        }
    }

    /// `[lo, hi]` with outward decimal rounding, or the nonconvergence
    /// diagnostic.
    pub fn render(&self) -> String {
        match &self.outcome {
            Ok(c) => render_box(&c.enclosure, self.digits),
            Err(nc) => {
                let why = match nc.reason {
                    StopReason::Budget => "refinement budget exhausted",
                    StopReason::Timeout => "wall-clock limit reached",
                };
                format!(
                    "nonconvergence: {why} at refinement {}; tightest {}",
                    nc.reached,
                    render_box(&nc.tightest, self.digits)
                )
            }
        }
    }
}

/// What one input produced.
#[derive(Debug)]
pub enum Reply {
    Defined(String),
    Signature(String),
    Evaluated(Evaluation),
    /// A ground value with no real coordinates, such as `tt` or `()`.
    Constant(String),
}

impl Reply {
    pub fn render(&self) -> String {
        match self {
            Reply::Defined(n) => format!("defined {n}"),
            Reply::Signature(n) => format!("{n} declared"),
            Reply::Evaluated(e) => e.render(),
            Reply::Constant(s) => s.clone(),
        }
    }
}

pub struct Session {
    globals: Rc<Globals>,
    elab: Elaborator,
    pub config: Config,
}

impl Session {
    /// A session with the prelude loaded.
    pub fn new(config: Config) -> Session {
        let mut s = Session::bare(config);
        s.load_source(PRELUDE).expect("prelude elaborates");
        s
    }

    /// Primitives only.
    pub fn bare(config: Config) -> Session {
        let elab = Elaborator::new();
        let globals = Rc::new(elab.builtins());
        Session { globals, elab, config }
    }

    pub fn is_defined(&self, name: &str) -> bool {
        self.globals.values.contains_key(name)
    }

    /// Load declarations; queries in the source are evaluated in order.
    pub fn load_source(&mut self, src: &str) -> Result<Vec<Reply>, SessionError> {
        let items = parse_program(src)?;
        items.into_iter().map(|it| self.run_item(it, None)).collect()
    }

    pub fn load_file(&mut self, path: &Path) -> Result<Vec<Reply>, SessionError> {
        let src = std::fs::read_to_string(path).map_err(|e| SessionError::Io(format!("{}: {e}", path.display())))?;
        self.load_source(&src)
    }

    /// Parse and run one input, with an optional per-query target.
    pub fn run(&mut self, src: &str, eps: Option<&Eps>) -> Result<Reply, SessionError> {
        let item = parse_item(src)?;
        self.run_item(item, eps)
    }

    fn run_item(&mut self, item: Item, eps: Option<&Eps>) -> Result<Reply, SessionError> {
        match item {
            Item::Expr(e) => self.evaluate(&e, eps),
            Item::Decl(d) => self.declare(d),
        }
    }

    fn declare(&mut self, d: Decl) -> Result<Reply, SessionError> {
        let mut g = (*self.globals).clone();
        let reply = match d {
            Decl::Let(def) => {
                let v = self.guard(|s| s.elab.eval_def(&def, &s.globals))?;
                g.values.insert(def.name.clone(), v);
                Reply::Defined(def.name)
            }
            Decl::TypeAlias { name, params, ty } => {
                g.aliases.insert(name.clone(), (params, ty));
                Reply::Defined(name)
            }
            Decl::Signature { name, ty } => {
                let v = g.values.get(&name).ok_or_else(|| ElabError(format!("signature for undefined name `{name}`")))?;
                check(v, &ty, &g, &name)?;
                return Ok(Reply::Signature(name));
            }
        };
        self.globals = Rc::new(g);
        Ok(reply)
    }

    /// Run elaboration, turning an internal panic into an error so a session
    /// never dies on one bad input.
    fn guard<T>(&self, f: impl FnOnce(&Session) -> Result<T, ElabError>) -> Result<T, ElabError> {
        match catch_unwind(AssertUnwindSafe(|| f(self))) {
            Ok(r) => r,
            Err(p) => {
                self.elab.reset();
                let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
                Err(ElabError(format!("internal error: {}", msg.unwrap_or_default())))
            }
        }
    }

    /// Elaborate `e` to the tower of its ground value.
    pub fn elaborate(&self, e: &Expr) -> Result<Value, ElabError> {
        self.guard(|s| s.elab.eval_closed(e, &s.globals))
    }

    pub fn evaluate(&self, e: &Expr, eps: Option<&Eps>) -> Result<Reply, SessionError> {
        let v = self.elaborate(e)?;
        match v {
            Value::Bool(b) => return Ok(Reply::Constant(if b { "tt" } else { "ff" }.into())),
            Value::Unit => return Ok(Reply::Constant("()".into())),
            _ => {}
        }
        let tower = v.ground()?;
        let eps = eps.unwrap_or(&self.config.eps);
        let cfg = EvalConfig { newton: self.config.newton, ..EvalConfig::default() };
        let limits = Limits { budget: self.config.budget, deadline: Some(Instant::now() + self.config.timeout) };
        let x = tower.to_creal(cfg);
        let outcome = catch_unwind(AssertUnwindSafe(|| eval_to_eps(&x, &eps.value, &limits)))
            .map_err(|_| ElabError("internal error during refinement".into()))?;
        Ok(Reply::Evaluated(Evaluation { outcome, digits: eps.digits() }))
    }

    /// One-shot evaluation for scripts: prints the reply and returns the exit
    /// status (0 converged, 2 nonconvergence, 1 parse or elaboration error).
    pub fn batch(&mut self, query: &str, out: &mut impl Write) -> io::Result<i32> {
        let (eps, src) = split_eps_prefix(query);
        let eps = match eps {
            Some(Err(bad)) => {
                writeln!(out, "error: bad eps `{bad}`")?;
                return Ok(1);
            }
            Some(Ok(e)) => Some(e),
            None => None,
        };
        match self.run(src, eps.as_ref()) {
            Ok(r) => {
                writeln!(out, "{}", r.render())?;
                Ok(match r {
                    Reply::Evaluated(e) if !e.converged() => 2,
                    _ => 0,
                })
            }
            Err(e) => {
                writeln!(out, "{e}")?;
                Ok(1)
            }
        }
    }

    /// Interactive loop; errors are reported and the loop continues.
    pub fn repl(&mut self, input: impl BufRead, out: &mut impl Write) -> io::Result<()> {
        let mut lines = input.lines();
        loop {
            write!(out, "eps={}> ", self.config.eps.text)?;
            out.flush()?;
            let Some(line) = lines.next() else {
                writeln!(out)?;
                return Ok(());
            };
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(cmd) = line.strip_prefix(':') {
                if !self.command(cmd, out)? {
                    return Ok(());
                }
                continue;
            }
            let (eps, src) = split_eps_prefix(line);
            let eps = match eps {
                Some(Err(bad)) => {
                    writeln!(out, "error: bad eps `{bad}`")?;
                    continue;
                }
                Some(Ok(e)) => Some(e),
                None => None,
            };
            match self.run(src, eps.as_ref()) {
                Ok(r) => writeln!(out, "{}", r.render())?,
                Err(e) => writeln!(out, "{e}")?,
            }
        }
    }

    /// Handle a `:command`; returns false on `:quit`.
    fn command(&mut self, cmd: &str, out: &mut impl Write) -> io::Result<bool> {
        let mut words = cmd.split_whitespace();
        let head = words.next().unwrap_or("");
        let args: Vec<&str> = words.collect();
        match (head, args.as_slice()) {
            ("quit" | "q", _) => return Ok(false),
            ("load", [path]) => match self.load_file(Path::new(path)) {
                Ok(rs) => {
                    for r in rs {
                        writeln!(out, "{}", r.render())?;
                    }
                }
                Err(e) => writeln!(out, "{e}")?,
            },
            ("set", ["newton", v @ ("on" | "off")]) => self.config.newton = *v == "on",
            ("set", ["budget", n]) => match n.parse() {
                Ok(n) => self.config.budget = n,
                Err(_) => writeln!(out, "error: budget must be a nonnegative integer")?,
            },
            ("set", ["timeout", s]) => match s.parse::<f64>() {
                Ok(s) if s.is_finite() && s > 0.0 => self.config.timeout = Duration::from_secs_f64(s),
                _ => writeln!(out, "error: timeout must be a positive number of seconds")?,
            },
            ("set", ["eps", e]) => match Eps::parse(e) {
                Some(e) => self.config.eps = e,
                None => writeln!(out, "error: bad eps `{e}`")?,
            },
            _ => writeln!(
                out,
                "commands: :load FILE, :set newton on|off, :set budget N, :set timeout S, :set eps E, :quit"
            )?,
        }
        Ok(true)
    }
}

/// Split a leading `eps=<v>>` off a query.
pub fn split_eps_prefix(line: &str) -> (Option<Result<Eps, String>>, &str) {
    let t = line.trim_start();
    if let Some(rest) = t.strip_prefix("eps=") {
        if let Some(k) = rest.find('>') {
            let v = &rest[..k];
            return (Some(Eps::parse(v).ok_or_else(|| v.to_string())), &rest[k + 1..]);
        }
    }
    (None, line)
}
