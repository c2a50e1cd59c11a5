//! Recursive-descent parser.
//!
//! In files, a token in column 1 starts a new declaration, so continuation
//! lines must be indented (as every listing is).

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::ParseError;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Index of the token that started the current item.
    item_start: usize,
    /// Whether column-1 tokens end the current item.
    layout: bool,
}

const EXPR_START: &[&str] = &["identifier", "number", "`(`", "`λ`", "`let`", "`-`"];

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, item_start: 0, layout: true })
    }

    /// The next token, reading a column-1 token that does not start the
    /// current item as end of input.
    fn peek(&self) -> &Tok {
        let t = &self.toks[self.pos];
        if self.layout && t.col == 1 && self.pos != self.item_start {
            &Tok::Eof
        } else {
            &t.tok
        }
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        let t = &self.toks[i];
        if self.layout && t.col == 1 && i != self.item_start {
            &Tok::Eof
        } else {
            &t.tok
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek().clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn expect(&mut self, want: Tok, name: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    // ----- items -----------------------------------------------------------

    fn item(&mut self) -> Result<Item, ParseError> {
        self.item_start = self.pos;
        match self.peek().clone() {
            Tok::Type => self.type_alias().map(Item::Decl),
            Tok::Let => {
                self.bump();
                let def = self.let_def()?;
                if *self.peek() == Tok::In {
                    self.bump();
                    let body = self.expr()?;
                    Ok(Item::Expr(Expr::Let(Box::new(def), Box::new(body))))
                } else {
                    Ok(Item::Decl(Decl::Let(def)))
                }
            }
            Tok::Ident(name) if *self.peek_at(1) == Tok::Colon => {
                self.bump();
                self.bump();
                Ok(Item::Decl(Decl::Signature { name, ty: self.ty()? }))
            }
            _ => self.expr().map(Item::Expr),
        }
    }

    fn type_alias(&mut self) -> Result<Decl, ParseError> {
        self.expect(Tok::Type, "`type`")?;
        let name = self.ident()?;
        let mut params = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            params.push(self.ident()?);
        }
        self.expect(Tok::Eq, "`=`")?;
        Ok(Decl::TypeAlias { name, params, ty: self.ty()? })
    }

    /// After `let`: `name TypeParams params (: ret)? = body`.
    fn let_def(&mut self) -> Result<LetDef, ParseError> {
        let name = self.ident()?;
        let (mut type_params, mut params) = (Vec::new(), Vec::new());
        loop {
            match self.peek().clone() {
                Tok::Ident(x) => {
                    self.bump();
                    if x.starts_with(char::is_uppercase) {
                        type_params.push(x);
                    } else {
                        params.push(Binder { name: x, ty: None });
                    }
                }
                Tok::LParen => {
                    self.bump();
                    let mut names = vec![self.ident()?];
                    while let Tok::Ident(_) = self.peek() {
                        names.push(self.ident()?);
                    }
                    self.expect(Tok::Colon, "`:`")?;
                    let ty = self.ty()?;
                    self.expect(Tok::RParen, "`)`")?;
                    params.extend(names.into_iter().map(|name| Binder { name, ty: Some(ty.clone()) }));
                }
                _ => break,
            }
        }
        let ret = if *self.peek() == Tok::Colon {
            self.bump();
            Some(self.ty()?)
        } else {
            None
        };
        if *self.peek() != Tok::Eq {
            return Err(self.error(&["`=`", "`:`", "parameter"]));
        }
        self.bump();
        Ok(LetDef { name, type_params, params, ret, body: self.expr()? })
    }

    // ----- types -----------------------------------------------------------

    fn ty(&mut self) -> Result<Type, ParseError> {
        let a = self.ty_prod()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(Type::Fun(Box::new(a), Box::new(self.ty()?)))
        } else {
            Ok(a)
        }
    }

    fn ty_prod(&mut self) -> Result<Type, ParseError> {
        let a = self.ty_app()?;
        if *self.peek() == Tok::Star {
            self.bump();
            Ok(Type::Prod(Box::new(a), Box::new(self.ty_prod()?)))
        } else {
            Ok(a)
        }
    }

    fn ty_app(&mut self) -> Result<Type, ParseError> {
        if let Tok::Ident(name) = self.peek().clone() {
            if base_type(&name).is_none() {
                self.bump();
                let mut args = Vec::new();
                while self.ty_atom_start() {
                    args.push(self.ty_post()?);
                }
                return self.ty_squares(Type::Named(name, args));
            }
        }
        self.ty_post()
    }

    fn ty_atom_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen)
    }

    fn ty_post(&mut self) -> Result<Type, ParseError> {
        let t = match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                base_type(&name).unwrap_or(Type::Named(name, vec![]))
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                t
            }
            _ => return Err(self.error(&["type"])),
        };
        self.ty_squares(t)
    }

    fn ty_squares(&mut self, mut t: Type) -> Result<Type, ParseError> {
        loop {
            match self.peek() {
                Tok::Squared => {
                    self.bump();
                }
                Tok::Caret if *self.peek_at(1) == Tok::Num("2".into()) => {
                    self.bump();
                    self.bump();
                }
                _ => return Ok(t),
            }
            t = Type::Prod(Box::new(t.clone()), Box::new(t));
        }
    }

    // ----- expressions -----------------------------------------------------

    fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Lambda => {
                self.bump();
                let binders = self.lambda_binders()?;
                self.expect(Tok::FatArrow, "`⇒`")?;
                let body = self.expr()?;
                Ok(binders.into_iter().rev().fold(body, |e, b| Expr::Lam(b, Box::new(e))))
            }
            Tok::Let => {
                self.bump();
                let def = self.let_def()?;
                self.expect(Tok::In, "`in`")?;
                let body = self.expr()?;
                Ok(Expr::Let(Box::new(def), Box::new(body)))
            }
            _ => self.sum(),
        }
    }

    /// `x`, `x : T`, `x y`, `(x : T) (y : T)`.
    fn lambda_binders(&mut self) -> Result<Vec<Binder>, ParseError> {
        let mut out = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(name) => {
                    self.bump();
                    if *self.peek() == Tok::Colon {
                        self.bump();
                        let ty = self.ty()?;
                        out.push(Binder { name, ty: Some(ty) });
                        return Ok(out);
                    }
                    out.push(Binder { name, ty: None });
                }
                Tok::LParen => {
                    self.bump();
                    let name = self.ident()?;
                    self.expect(Tok::Colon, "`:`")?;
                    let ty = self.ty()?;
                    self.expect(Tok::RParen, "`)`")?;
                    out.push(Binder { name, ty: Some(ty) });
                }
                _ if !out.is_empty() => return Ok(out),
                _ => return Err(self.error(&["identifier", "`(`"])),
            }
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(e),
            };
            self.bump();
            e = Expr::Bin(op, Box::new(e), Box::new(self.product()?));
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(e),
            };
            self.bump();
            e = Expr::Bin(op, Box::new(e), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.application()
    }

    fn application(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.postfix()?;
        while matches!(self.peek(), Tok::Ident(_) | Tok::Num(_) | Tok::LParen) {
            e = Expr::App(Box::new(e), Box::new(self.postfix()?));
        }
        Ok(e)
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        loop {
            match self.peek() {
                Tok::Squared => {
                    self.bump();
                    e = Expr::Pow(Box::new(e), 2);
                }
                Tok::Caret => {
                    self.bump();
                    e = Expr::Pow(Box::new(e), self.small_int()? as u32);
                }
                Tok::LBracket => {
                    self.bump();
                    let i = self.small_int()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    e = Expr::Proj(Box::new(e), i);
                }
                _ => return Ok(e),
            }
        }
    }

    fn small_int(&mut self) -> Result<usize, ParseError> {
        if let Tok::Num(s) = self.peek().clone() {
            if let Ok(v) = s.parse::<usize>() {
                if v <= 64 {
                    self.bump();
                    return Ok(v);
                }
            }
        }
        Err(self.error(&["small integer"]))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(Expr::Var(x))
            }
            Tok::Num(s) => {
                self.bump();
                Ok(Expr::Num(s))
            }
            Tok::LParen => {
                self.bump();
                if *self.peek() == Tok::RParen {
                    self.bump();
                    return Ok(Expr::Unit);
                }
                let mut es = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    es.push(self.expr()?);
                }
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`", "`,`"]));
                }
                self.bump();
                Ok(if es.len() == 1 { es.pop().unwrap() } else { Expr::Tuple(es) })
            }
            _ => Err(self.error(EXPR_START)),
        }
    }

    fn at_end(&self) -> bool {
        self.toks[self.pos].tok == Tok::Eof
    }

    fn finish_item(&self) -> Result<(), ParseError> {
        let t = &self.toks[self.pos];
        if t.tok == Tok::Eof || t.col == 1 {
            Ok(())
        } else {
            let mut e = self.error(&["operator", "argument", "end of declaration"]);
            e.found = t.tok.to_string();
            Err(e)
        }
    }
}

fn base_type(name: &str) -> Option<Type> {
    match name {
        "ℝ" | "R" | "Real" => Some(Type::Real),
        "𝔅" | "Bool" => Some(Type::Bool),
        "unit" => Some(Type::Unit),
        _ => None,
    }
}

/// Parse a whole file of declarations (and queries).
pub fn parse_program(src: &str) -> Result<Vec<Item>, ParseError> {
    let mut p = Parser::new(src)?;
    let mut items = Vec::new();
    while !p.at_end() {
        items.push(p.item()?);
        p.finish_item()?;
    }
    Ok(items)
}

/// Parse a single REPL input, which may span several lines.
pub fn parse_item(src: &str) -> Result<Item, ParseError> {
    let mut p = Parser::new(src)?;
    // A query is one item no matter where its lines start.
    p.layout = false;
    let item = p.item()?;
    if !p.at_end() {
        return Err(p.error(&["operator", "argument", "end of input"]));
    }
    Ok(item)
}

/// Parse one expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    match parse_item(src)? {
        Item::Expr(e) => Ok(e),
        Item::Decl(d) => Err(ParseError { line: 1, col: 1, expected: vec!["expression".into()], found: format!("declaration `{d}`") }),
    }
}
