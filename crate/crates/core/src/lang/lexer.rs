//! Tokens of the surface syntax. Unicode and ASCII spellings lex to the same
//! token.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(String),
    Let,
    In,
    Type,
    Lambda,
    FatArrow,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Squared,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Num(s) => return write!(f, "number `{s}`"),
            Tok::Let => "`let`",
            Tok::In => "`in`",
            Tok::Type => "`type`",
            Tok::Lambda => "`λ`",
            Tok::FatArrow => "`⇒`",
            Tok::Arrow => "`→`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::Eq => "`=`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::Slash => "`/`",
            Tok::Caret => "`^`",
            Tok::Squared => "`²`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == 'ℝ' || c == '𝔅'
}

// Not `is_alphanumeric`, which would swallow a trailing `²`.
fn ident_char(c: char) -> bool {
    c.is_alphabetic() || c.is_ascii_digit() || c == '_' || c == '\''
}

/// Lex `src`; the result always ends with [`Tok::Eof`].
pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let mut push = |tok: Tok| out.push(Token { tok, line: start.0, col: start.1 });
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, len) = match (c, two.as_str()) {
            (_, "=>") => (Tok::FatArrow, 2),
            (_, "->") => (Tok::Arrow, 2),
            ('λ' | '\\', _) => (Tok::Lambda, 1),
            ('⇒', _) => (Tok::FatArrow, 1),
            ('→', _) => (Tok::Arrow, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            (',', _) => (Tok::Comma, 1),
            (':', _) => (Tok::Colon, 1),
            ('=', _) => (Tok::Eq, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-' | '−', _) => (Tok::Minus, 1),
            ('*' | '×', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            ('^', _) => (Tok::Caret, 1),
            ('²', _) => (Tok::Squared, 1),
            _ if c.is_ascii_digit() => {
                let n = number_len(&chars[i..]);
                (Tok::Num(chars[i..i + n].iter().collect()), n)
            }
            _ if ident_start(c) => {
                // ℝ and 𝔅 are complete type names on their own, so `ℝ²` lexes as two tokens.
                let n = if c == 'ℝ' || c == '𝔅' {
                    1
                } else {
                    1 + chars[i + 1..].iter().take_while(|&&c| ident_char(c)).count()
                };
                let word: String = chars[i..i + n].iter().collect();
                let tok = match word.as_str() {
                    "let" => Tok::Let,
                    "in" => Tok::In,
                    "type" => Tok::Type,
                    _ => Tok::Ident(word),
                };
                (tok, n)
            }
            _ => {
                return Err(ParseError {
                    line,
                    col,
                    expected: vec!["a token".into()],
                    found: format!("character `{c}`"),
                })
            }
        };
        push(tok);
        i += len;
        col += len;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// `digits ('.' digits)? ([eE] [+-]? digits)?`
fn number_len(s: &[char]) -> usize {
    let digits = |from: usize| s[from..].iter().take_while(|c| c.is_ascii_digit()).count();
    let mut n = digits(0);
    if s.get(n) == Some(&'.') && s.get(n + 1).is_some_and(|c| c.is_ascii_digit()) {
        n += 1 + digits(n + 1);
    }
    if matches!(s.get(n), Some('e' | 'E')) {
        let sign = usize::from(matches!(s.get(n + 1), Some('+' | '-')));
        let d = digits(n + 1 + sign);
        if d > 0 {
            n += 1 + sign + d;
        }
    }
    n
}

/// Exact value of a decimal literal such as `3`, `0.6`, `1e-2` or `2.5E3`.
/// A leading `-` and a `a/b` ratio are also accepted.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('-') {
        return parse_decimal(rest).map(|q| -q);
    }
    if let Some((a, b)) = s.split_once('/') {
        let (a, b) = (parse_decimal(a)?, parse_decimal(b)?);
        return (!b.is_zero()).then(|| a / b);
    }
    let chars: Vec<char> = s.chars().collect();
    if chars.is_empty() || !chars[0].is_ascii_digit() || number_len(&chars) != chars.len() {
        return None;
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let exp = exp - frac.len() as i64;
    let ten = BigInt::from(10u32);
    let scale = ten.pow(exp.unsigned_abs() as u32);
    Some(if exp >= 0 {
        BigRational::from_integer(digits * scale)
    } else {
        BigRational::new(digits, scale)
    })
}

/// Whether `q` has a power-of-two denominator, so it is an exact dyadic.
pub fn is_dyadic(q: &BigRational) -> bool {
    let d = q.denom();
    (d & (d - BigInt::one())).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn unicode_and_ascii_spellings_agree() {
        assert_eq!(toks("λ x : ℝ ⇒ x²"), toks("\\ x : ℝ => x²"));
        assert_eq!(toks("a → b"), toks("a -> b"));
        assert_eq!(toks("x − c"), toks("x - c"));
        assert_eq!(toks("ℝ²")[..2], [Tok::Ident("ℝ".into()), Tok::Squared]);
    }

    #[test]
    fn comments_and_positions() {
        let t = lex("let x = 1 -- note\n  in x").unwrap();
        assert_eq!(t[4].tok, Tok::In);
        assert_eq!((t[4].line, t[4].col), (2, 3));
    }

    #[test]
    fn numbers() {
        assert_eq!(toks("1e-2 0.6 3"), vec![Tok::Num("1e-2".into()), Tok::Num("0.6".into()), Tok::Num("3".into()), Tok::Eof]);
        assert_eq!(toks("x[0]")[2], Tok::Num("0".into()));
        let q = |s| parse_decimal(s).unwrap();
        assert_eq!(q("1e-2"), BigRational::new(1.into(), 100.into()));
        assert_eq!(q("0.6"), BigRational::new(3.into(), 5.into()));
        assert_eq!(q("-3/4"), BigRational::new((-3).into(), 4.into()));
        assert_eq!(q("2.5E3"), BigRational::from_integer(2500.into()));
        assert!(parse_decimal("e3").is_none() && parse_decimal("1/0").is_none());
        assert!(is_dyadic(&q("0.75")) && !is_dyadic(&q("0.6")));
    }

    #[test]
    fn primes_in_identifiers() {
        assert_eq!(toks("s' total_mass"), vec![Tok::Ident("s'".into()), Tok::Ident("total_mass".into()), Tok::Eof]);
        assert_eq!(toks("r²"), vec![Tok::Ident("r".into()), Tok::Squared, Tok::Eof]);
    }
}
