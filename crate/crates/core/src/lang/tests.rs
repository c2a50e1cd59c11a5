use proptest::prelude::*;

use super::ast::*;
use super::session::split_eps_prefix;
use super::*;
use crate::exactnum::{Dyadic, Interval};

fn roundtrip(item: &Item) {
    let printed = item.to_string();
    let again = parse_program(&printed).unwrap_or_else(|e| panic!("{printed}\n{e}"));
    assert_eq!(again, vec![item.clone()], "{printed}");
}

#[test]
fn prelude_parses_and_round_trips() {
    let items = parse_program(PRELUDE).unwrap();
    assert!(items.len() > 40);
    for it in &items {
        roundtrip(it);
    }
}

#[test]
fn listing_lines_parse() {
    parse_expr("deriv (λ c : ℝ ⇒ integral01 (λ x : ℝ ⇒ relu (x - c))) 0.6").unwrap();
    let items = parse_program("let dot (x y : ℝ²) : ℝ = x[0]*y[0] + x[1]*y[1]").unwrap();
    let Item::Decl(Decl::Let(d)) = &items[0] else { panic!() };
    assert_eq!(d.params.len(), 2);
    assert_eq!(d.params[0].ty, Some(Type::Prod(Box::new(Type::Real), Box::new(Type::Real))));
}

#[test]
fn incomplete_lambda_reports_position() {
    let e = parse_expr("λ x ⇒").unwrap_err();
    assert_eq!((e.line, e.col), (1, 6));
    assert!(e.expected.iter().any(|s| s == "identifier"));
    let e = parse_program("let f (x : ℝ) =\n  x +\n").unwrap_err();
    assert_eq!(e.line, 3);
    let e = parse_expr("(1, 2").unwrap_err();
    assert_eq!(e.expected, vec!["`)`".to_string(), "`,`".to_string()]);
}

#[test]
fn ascii_and_unicode_parse_alike() {
    let a = parse_expr("λ x : ℝ² ⇒ x[0]² − x[1]").unwrap();
    let b = parse_expr("\\x : R^2 => x[0]^2 - x[1]").unwrap();
    assert_eq!(a, b);
}

#[test]
fn precedence() {
    let e = parse_expr("- f x * 2 + 3").unwrap();
    assert_eq!(e.to_string(), "- f x * 2 + 3");
    let Expr::Bin(BinOp::Add, l, _) = &e else { panic!("{e:?}") };
    let Expr::Bin(BinOp::Mul, n, _) = &**l else { panic!("{l:?}") };
    assert!(matches!(&**n, Expr::Neg(inner) if matches!(&**inner, Expr::App(..))));
    assert_eq!(parse_expr("a - b - c").unwrap().to_string(), "a - b - c");
    assert_eq!(parse_expr("a - (b - c)").unwrap().to_string(), "a - (b - c)");
    assert_eq!(parse_expr("f x[0] y²").unwrap().to_string(), "f x[0] y^2");
}

#[test]
fn layout_separates_declarations() {
    let src = "let a = 1\nlet b =\n  a\n  + 2\nf : ℝ → ℝ\nlet c = 3";
    let items = parse_program(src).unwrap();
    assert_eq!(items.len(), 4);
}

fn arb_type() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![Just(Type::Real), Just(Type::Bool), Just(Type::Unit), Just(Type::Named("A".into(), vec![]))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::Prod(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::Fun(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Type::Named("Integral".into(), vec![a])),
        ]
    })
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        "[a-z][a-z0-9']{0,3}".prop_filter("keyword", |s| !["let", "in", "type"].contains(&s.as_str())).prop_map(Expr::Var),
        "(0|[1-9][0-9]{0,2})(\\.[0-9]{1,2})?(e-[1-9])?".prop_map(Expr::Num),
        Just(Expr::Unit),
    ];
    leaf.prop_recursive(4, 32, 3, |inner| {
        let bin = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)];
        prop_oneof![
            (bin, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::Bin(o, Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::App(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            inner.clone().prop_map(|a| Expr::Pow(Box::new(a), 2)),
            (inner.clone(), 0usize..2).prop_map(|(a, i)| Expr::Proj(Box::new(a), i)),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Tuple),
            (proptest::option::of(arb_type()), inner.clone())
                .prop_map(|(ty, b)| Expr::Lam(Binder { name: "v".into(), ty }, Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(e, b)| {
                let def = LetDef { name: "w".into(), type_params: vec![], params: vec![], ret: None, body: e };
                Expr::Let(Box::new(def), Box::new(b))
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]
    #[test]
    fn pretty_then_parse_is_identity(e in arb_expr()) {
        let printed = e.to_string();
        let again = parse_expr(&printed).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
        prop_assert_eq!(again, e);
    }

    #[test]
    fn types_round_trip(t in arb_type()) {
        let item = Item::Decl(Decl::Signature { name: "f".into(), ty: t });
        let again = parse_program(&item.to_string()).unwrap();
        prop_assert_eq!(again, vec![item]);
    }
}

fn session() -> Session {
    Session::new(Config::default())
}

fn value(s: &Session, src: &str) -> Interval {
    value_at(s, src, None)
}

fn value_at(s: &Session, src: &str, eps: Option<&str>) -> Interval {
    let eps = eps.map(|e| Eps::parse(e).unwrap());
    let Reply::Evaluated(ev) = s.evaluate(&parse_expr(src).unwrap(), eps.as_ref()).unwrap() else { panic!() };
    assert!(ev.converged(), "{src}: {}", ev.render());
    ev.enclosure().get(0).clone()
}

#[test]
fn closed_arithmetic() {
    let s = session();
    assert_eq!(value(&s, "2 + 2"), Interval::from_i64(4));
    assert_eq!(value(&s, "-3/4"), Interval::point(Dyadic::from_f64(-0.75).unwrap()));
    let third = value(&s, "1/3");
    let one = num_rational::BigRational::from_integer(1.into());
    let three = num_rational::BigRational::from_integer(3.into());
    assert!(third.lo().unwrap().to_rational() * &three < one && third.hi().unwrap().to_rational() * &three > one);
    let tenth = value(&s, "0.1");
    assert!(!tenth.is_point());
    assert_eq!(value(&s, "(1, 2)[1]"), Interval::from_i64(2));
}

#[test]
fn deriv_relu_is_a_hull() {
    let mut s = session();
    let Reply::Evaluated(ev) = s.run("deriv relu 0", Eps::parse("2").as_ref()).unwrap() else { panic!() };
    assert_eq!(ev.enclosure().get(0), &Interval::unit());
    assert_eq!(ev.render(), "[0.0, 1.0]");
}

#[test]
fn elaboration_errors() {
    let s = session();
    let err = |src: &str| s.elaborate(&parse_expr(src).unwrap()).and_then(|v| v.ground().map(|_| ())).unwrap_err();
    assert!(err("(λ f ⇒ λ x ⇒ f (f x))").0.contains("function"));
    assert!(err("nope + 1").0.contains("unbound"));
    assert!(err("2 3").0.contains("cannot apply"));
    assert!(err("dot 1 (1, 2)").0.contains("expected"));
    assert!(err("integral01 (λ x ⇒ (x, x))").0.contains("expects a real"));
    assert!(err("(1, 2) + 3").0.contains("arithmetic"));
}

#[test]
fn definitions_shadow() {
    let mut s = session();
    s.run("let k = 2", None).unwrap();
    s.run("let twice (x : ℝ) : ℝ = k * x", None).unwrap();
    s.run("let k = 5", None).unwrap();
    assert_eq!(value(&s, "twice 1"), Interval::from_i64(2));
    assert_eq!(value(&s, "k"), Interval::from_i64(5));
    assert!(matches!(s.run("let bad (x : ℝ) : ℝ² = x", None), Ok(Reply::Defined(_))));
    assert!(s.run("bad 1", None).is_err());
}

#[test]
fn pair_arithmetic_is_componentwise() {
    let s = session();
    let Reply::Evaluated(ev) = s.evaluate(&parse_expr("(1, 2) - (3, 5)").unwrap(), None).unwrap() else { panic!() };
    assert_eq!(ev.enclosure().coords(), &[Interval::from_i64(-2), Interval::from_i64(-3)]);
    assert_eq!(ev.render(), "([-2.0000, -2.0000], [-3.0000, -3.0000])");
}

#[test]
fn eps_prefix_and_digits() {
    let (eps, rest) = split_eps_prefix("eps=1e-2> deriv relu 0");
    let eps = eps.unwrap().unwrap();
    assert_eq!((eps.text.as_str(), rest), ("1e-2", " deriv relu 0"));
    assert_eq!(eps.digits(), 3);
    assert_eq!(Eps::parse("2").unwrap().digits(), 1);
    assert_eq!(Eps::parse("1e-5").unwrap().digits(), 6);
    assert!(Eps::parse("0").is_none() && Eps::parse("-1").is_none());
    assert!(matches!(split_eps_prefix("eps=x> 1").0, Some(Err(_))));
}

#[test]
fn repl_transcript() {
    let mut s = session();
    let input = "eps=2> deriv relu 0\n:set budget 3\neps=1e-1> deriv relu 0\nlet q = 1/2\nq * 4\n:bogus\nλ x ⇒\n:quit\n2\n";
    let mut out = Vec::new();
    s.repl(input.as_bytes(), &mut out).unwrap();
    let out = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "eps=1e-3> [0.0, 1.0]");
    // `:set` prints nothing, so two prompts share a line.
    assert!(lines[1].starts_with("eps=1e-3> eps=1e-3> nonconvergence: refinement budget exhausted at refinement 3; tightest [0.00, 1.00]"));
    assert_eq!(lines[2], "eps=1e-3> defined q");
    assert_eq!(lines[3], "eps=1e-3> [2.0000, 2.0000]");
    assert!(lines[4].contains("commands:"));
    assert!(lines[5].contains("parse error at line 1, column 6"));
    assert_eq!(lines.len(), 7);
}

#[test]
fn batch_exit_codes() {
    let mut s = session();
    let mut out = Vec::new();
    assert_eq!(s.batch("eps=1e-6> sqrt 2", &mut out).unwrap(), 0);
    assert_eq!(s.batch("(1 +", &mut out).unwrap(), 1);
    assert_eq!(s.batch("undefinedName", &mut out).unwrap(), 1);
    s.config.budget = 4;
    assert_eq!(s.batch("eps=1e-1> deriv relu 0", &mut out).unwrap(), 2);
    let out = String::from_utf8(out).unwrap();
    assert!(out.starts_with("[1.4142135, 1.4142136]\n"), "{out}");
}

#[test]
fn measures_in_the_language() {
    let s = session();
    assert!(value(&s, "mean uniform").contains(&Dyadic::from_f64(0.5).unwrap()));
    assert!(value(&s, "total_mass (bernoulli (1/4))").contains(&Dyadic::one()));
    assert!(value(&s, "total_mass (factor 3)").contains(&Dyadic::from_i64(3)));
    assert!(value(&s, "bind (dirac 2) (λ a ⇒ dirac (a * a)) (λ x ⇒ x)").contains(&Dyadic::from_i64(4)));
    assert!(value(&s, "mean (measToProb (add uniform uniform))").contains(&Dyadic::from_f64(0.5).unwrap()));
    assert!(value(&s, "mean (mapM (λ x ⇒ 2 * x) uniform)").contains(&Dyadic::one()));
}

#[test]
fn surfaces_in_the_language() {
    let s = session();
    assert_eq!(value(&s, "circle (0, 0) 1 (0, 0)"), Interval::one());
    assert_eq!(value(&s, "complement (complement (halfplane (1, 2))) (3, 4)"), Interval::from_i64(11));
    assert_eq!(value(&s, "(gradient (circle (0, 0) 1) (1/2, 1/4))[1]"), Interval::point(Dyadic::from_f64(-0.5).unwrap()));
    let tangent = value_at(&s, "(gradient (union (circle (-1, 0) 1) (circle (1, 0) 1)) (0, 0))[0]", Some("4"));
    assert_eq!(tangent, Interval::from_bounds(Dyadic::from_i64(-2), Dyadic::from_i64(2)));
}
