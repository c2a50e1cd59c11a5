//! Surface syntax tree and its ASCII pretty-printer.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Type {
    Real,
    Bool,
    Unit,
    /// An alias application, or a type variable when there are no arguments.
    Named(String, Vec<Type>),
    Prod(Box<Type>, Box<Type>),
    Fun(Box<Type>, Box<Type>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binder {
    pub name: String,
    pub ty: Option<Type>,
}

/// `let name TypeParams params (: ret)? = body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetDef {
    pub name: String,
    pub type_params: Vec<String>,
    pub params: Vec<Binder>,
    pub ret: Option<Type>,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    /// Literal text exactly as written, without sign.
    Num(String),
    Unit,
    Tuple(Vec<Expr>),
    Lam(Binder, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Let(Box<LetDef>, Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Proj(Box<Expr>, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Let(LetDef),
    TypeAlias { name: String, params: Vec<String>, ty: Type },
    Signature { name: String, ty: Type },
}

/// One REPL input: a declaration or a query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Decl(Decl),
    Expr(Expr),
}

const P_LAM: u8 = 0;
const P_SUM: u8 = 1;
const P_PROD: u8 = 2;
const P_NEG: u8 = 3;
const P_APP: u8 = 4;
const P_POST: u8 = 5;
const P_ATOM: u8 = 6;

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Lam(..) | Expr::Let(..) => P_LAM,
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => P_SUM,
            Expr::Bin(..) => P_PROD,
            Expr::Neg(_) => P_NEG,
            Expr::App(..) => P_APP,
            Expr::Pow(..) | Expr::Proj(..) => P_POST,
            _ => P_ATOM,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        if self.prec() < ctx {
            write!(f, "(")?;
            self.write(f, P_LAM)?;
            return write!(f, ")");
        }
        match self {
            Expr::Var(x) => write!(f, "{x}"),
            Expr::Num(s) => write!(f, "{s}"),
            Expr::Unit => write!(f, "()"),
            Expr::Tuple(es) => {
                write!(f, "(")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    e.write(f, P_LAM)?;
                }
                write!(f, ")")
            }
            Expr::Lam(b, body) => {
                write!(f, "\\{b} => ")?;
                body.write(f, P_LAM)
            }
            Expr::App(g, x) => {
                g.write(f, P_APP)?;
                write!(f, " ")?;
                x.write(f, P_POST)
            }
            Expr::Let(def, body) => {
                write!(f, "{def} in ")?;
                body.write(f, P_LAM)
            }
            Expr::Bin(op, a, b) => {
                let (sym, p) = match op {
                    BinOp::Add => ("+", P_SUM),
                    BinOp::Sub => ("-", P_SUM),
                    BinOp::Mul => ("*", P_PROD),
                    BinOp::Div => ("/", P_PROD),
                };
                a.write(f, p)?;
                write!(f, " {sym} ")?;
                b.write(f, p + 1)
            }
            Expr::Neg(e) => {
                write!(f, "- ")?;
                e.write(f, P_NEG)
            }
            Expr::Pow(e, n) => {
                e.write(f, P_POST)?;
                write!(f, "^{n}")
            }
            Expr::Proj(e, i) => {
                e.write(f, P_POST)?;
                write!(f, "[{i}]")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, P_LAM)
    }
}

impl Type {
    fn write(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let prec = match self {
            Type::Fun(..) => 0,
            Type::Prod(..) => 1,
            Type::Named(_, args) if !args.is_empty() => 2,
            _ => 3,
        };
        if prec < ctx {
            write!(f, "(")?;
            self.write(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Type::Real => write!(f, "R"),
            Type::Bool => write!(f, "Bool"),
            Type::Unit => write!(f, "unit"),
            Type::Named(n, args) => {
                write!(f, "{n}")?;
                for a in args {
                    write!(f, " ")?;
                    a.write(f, 3)?;
                }
                Ok(())
            }
            Type::Prod(a, b) => {
                a.write(f, 2)?;
                write!(f, " * ")?;
                b.write(f, 1)
            }
            Type::Fun(a, b) => {
                a.write(f, 1)?;
                write!(f, " -> ")?;
                b.write(f, 0)
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

impl fmt::Display for Binder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ty {
            Some(t) => write!(f, "{} : {t}", self.name),
            None => write!(f, "{}", self.name),
        }
    }
}

impl fmt::Display for LetDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "let {}", self.name)?;
        for t in &self.type_params {
            write!(f, " {t}")?;
        }
        for p in &self.params {
            match &p.ty {
                Some(_) => write!(f, " ({p})")?,
                None => write!(f, " {}", p.name)?,
            }
        }
        if let Some(r) = &self.ret {
            write!(f, " : {r}")?;
        }
        write!(f, " = {}", self.body)
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Let(d) => write!(f, "{d}"),
            Decl::TypeAlias { name, params, ty } => {
                write!(f, "type {name}")?;
                for p in params {
                    write!(f, " {p}")?;
                }
                write!(f, " = {ty}")
            }
            Decl::Signature { name, ty } => write!(f, "{name} : {ty}"),
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Decl(d) => write!(f, "{d}"),
            Item::Expr(e) => write!(f, "{e}"),
        }
    }
}
