use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::creal::{eval_to_eps, Limits};
use crate::exactnum::Precision;
use crate::tower::{prims, EvalConfig};

fn d(v: f64) -> Dyadic {
    Dyadic::from_f64(v).unwrap()
}

fn k(v: f64, dom: usize) -> Tower {
    Tower::constant(d(v), dom)
}

fn eps(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Converge a closed scalar tower to width `e`.
fn solve(t: &Tower, e: &BigRational) -> Interval {
    solve_with(t, e, EvalConfig::default())
}

fn solve_with(t: &Tower, e: &BigRational, config: EvalConfig) -> Interval {
    let r = eval_to_eps(&t.to_creal(config), e, &Limits { budget: 30, deadline: None });
    match r {
        Ok(c) => c.enclosure.get(0).clone(),
        Err(nc) => panic!("{t:?}: {nc}"),
    }
}

/// `t(c)` as a closed tower.
fn at(t: &Tower, c: f64) -> Tower {
    t.compose(&k(c, 0))
}

/// `t'(c; 1)` as a closed tower.
fn der_at(t: &Tower, c: f64) -> Tower {
    t.derivative().compose(&Tower::pair(&[k(c, 0), k(1.0, 0)]))
}

fn within(iv: &Interval, v: f64, e: f64) -> bool {
    iv.is_bounded() && iv.lo().unwrap().to_f64() <= v + 1e-15 && v - 1e-15 <= iv.hi().unwrap().to_f64() && iv.width_f64() <= e
}

fn x_of(dom: usize) -> Tower {
    Tower::coord(dom - 1, dom)
}

#[test]
fn integral_of_square() {
    let x = x_of(1);
    let r = solve(&integral01(&(&x * &x)), &eps(1, 1000));
    assert!(within(&r, 1.0 / 3.0, 1e-3), "{r}");
    // Exact rational oracle: 1/3 must be inside.
    let third = BigRational::new(1.into(), 3.into());
    assert!(r.lo().unwrap().to_rational() <= third && third <= r.hi().unwrap().to_rational());
}

#[test]
fn integral_of_shifted_relu() {
    let x = x_of(1);
    let f = prims::relu().compose(&(&x - &k(0.6, 1)));
    let r = solve(&integral01(&f), &eps(1, 1000));
    assert!(within(&r, 0.08, 1e-3), "{r}");
}

#[test]
fn derivative_of_integral_wrt_kink_position() {
    let (c, x) = (Tower::coord(0, 2), Tower::coord(1, 2));
    let f = prims::relu().compose(&(&x - &c));
    let r = solve(&der_at(&integral01(&f), 0.6), &eps(1, 100));
    assert!(within(&r, -0.4, 1e-2), "{r}");
}

#[test]
fn derivative_integral_exchange() {
    let (c, x) = (Tower::coord(0, 2), Tower::coord(1, 2));
    let diff = &x - &c;
    let t = integral01(&(&diff * &diff));
    for i in 0..10 {
        let c0 = i as f64 / 8.0 - 0.5;
        let r = solve(&der_at(&t, c0), &eps(1, 1000));
        assert!(within(&r, -2.0 * (0.5 - c0), 1e-3), "c0={c0}: {r}");
    }
}

#[test]
fn integral_is_linear() {
    let x = x_of(1);
    let (f, g) = (prims::sin(), &x * &x);
    let (a, b) = (3.0, -0.5);
    let combo = &(&k(a, 1) * &f) + &(&k(b, 1) * &g);
    let cx = EvalCtx::at(8);
    let lhs = integral01(&combo).value(&cx, &IntervalBox::new(vec![]));
    let p = Precision::new(200);
    let rhs = integral01(&f)
        .value(&cx, &IntervalBox::new(vec![]))
        .get(0)
        .scale(&d(a), p)
        .add(&integral01(&g).value(&cx, &IntervalBox::new(vec![])).get(0).scale(&d(b), p), p);
    assert!(lhs.get(0).try_meet(&rhs).is_some());
}

fn gamma_sq_minus_x() -> Tower {
    let (g, x) = (Tower::coord(0, 2), Tower::coord(1, 2));
    &(&g * &g) - &x
}

#[test]
fn cut_root_value_and_derivative() {
    let r = cut_root(&gamma_sq_minus_x());
    assert!(within(&solve(&at(&r, 0.5), &eps(1, 1_000_000)), 0.25, 1e-6));
    assert!(within(&solve(&der_at(&r, 0.5), &eps(1, 1_000_000)), 1.0, 1e-6));
}

#[test]
fn cut_root_without_positive_region_does_not_converge() {
    let t = cut_root(&Tower::identity(1));
    let r = eval_to_eps(&t.to_creal(EvalConfig::default()), &eps(1, 1000), &Limits { budget: 6, deadline: None });
    let nc = r.expect_err("λx. x has no positive-before region");
    assert!(nc.tightest.get(0).lo().is_none());
}

#[test]
fn implicit_function_theorem_family() {
    let (g, x) = (Tower::coord(0, 2), Tower::coord(1, 2));
    // root(γ), d root/dγ
    type Case = (Tower, fn(f64) -> f64, fn(f64) -> f64);
    let cases: Vec<Case> = vec![
        (gamma_sq_minus_x(), |g| g * g, |g| 2.0 * g),
        (&prims::exp().compose(&g) - &(&x * &k(2.0, 2)), |g| g.exp() / 2.0, |g| g.exp() / 2.0),
        // Monotone on [-1, 1], which is where the window search brackets it.
        (&g - &prims::sin().compose(&(&prims::sin().compose(&x) * &k(0.5, 2))), |g: f64| (2.0 * g.asin()).asin(), |g: f64| {
            let u = 2.0 * g.asin();
            2.0 / (1.0 - g * g).sqrt() / (1.0 - u * u).sqrt()
        }),
    ];
    for (f, root, droot) in &cases {
        let t = cut_root(f);
        for &g0 in &[0.125, 0.25, 0.375] {
            let v = solve(&at(&t, g0), &eps(1, 1_000_000));
            assert!(within(&v, root(g0), 1e-6), "root at {g0}: {v} vs {}", root(g0));
            let dv = solve(&der_at(&t, g0), &eps(1, 1_000_000));
            assert!(within(&dv, droot(g0), 1e-6), "droot at {g0}: {dv} vs {}", droot(g0));
        }
    }
}

#[test]
fn first_root_of_quadratic() {
    let t = x_of(1);
    let u = &t - &k(1.0, 1);
    let f = &k(7.0 / 16.0, 1) - &(&u * &u);
    let r = solve(&first_root(&f), &eps(1, 1_000_000));
    assert!(within(&r, 1.0 - 7f64.sqrt() / 4.0, 1e-6), "{r}");
}

#[test]
fn first_root_derivative_matches_closed_form() {
    let (y, t) = (Tower::coord(0, 2), Tower::coord(1, 2));
    let u = &t - &k(1.0, 2);
    let f = &(&k(1.0, 2) - &(&y * &y)) - &(&u * &u);
    let r = first_root(&f);
    let y0 = -0.75;
    let t_star = 1.0 - (1.0 - y0 * y0 as f64).sqrt();
    let dv = solve(&der_at(&r, y0), &eps(1, 1_000_000));
    assert!(within(&dv, -y0 / (t_star - 1.0), 1e-6), "{dv}");
    assert!((dv.center_f64() + 1.134).abs() < 1e-3);
}

#[test]
fn first_root_with_undecidable_start_does_not_converge() {
    let t = first_root(&Tower::identity(1));
    let r = eval_to_eps(&t.to_creal(EvalConfig::default()), &eps(1, 1000), &Limits { budget: 6, deadline: None });
    assert_eq!(r.expect_err("sign at 0 is unknowable").tightest.get(0), &Interval::unit());
}

#[test]
fn first_root_picks_the_first_of_several() {
    // sin(10 t + 1/2) changes sign at (π - 1/2)/10 and again at (2π - 1/2)/10.
    let f = prims::sin().compose(&(&(&x_of(1) * &k(10.0, 1)) + &k(0.5, 1)));
    let r = solve(&first_root(&f), &eps(1, 1_000_000));
    assert!(within(&r, (std::f64::consts::PI - 0.5) / 10.0, 1e-6), "{r}");
}

#[test]
fn max_and_argmax_of_parabola() {
    let x = x_of(1);
    let f = &x * &(&k(1.0, 1) - &x);
    assert!(within(&solve(&max01(&f), &eps(1, 1_000_000)), 0.25, 1e-6));
    assert!(within(&solve(&argmax01(&f), &eps(1, 1_000_000)), 0.5, 1e-6));
}

#[test]
fn argmax_tracks_a_shift() {
    let (c, x) = (Tower::coord(0, 2), Tower::coord(1, 2));
    let s = &x - &c;
    let f = &s * &(&k(1.0, 2) - &s);
    let a = argmax01(&f);
    assert!(within(&solve(&der_at(&a, 0.0), &eps(1, 1_000_000)), 1.0, 1e-6));
    let m = max01(&f);
    assert!(within(&solve(&der_at(&m, 0.0), &eps(1, 1_000_000)), 0.0, 1e-6));
    // Second derivative of argmax (0.5 + c) is 0.
    let second = a.derivative().derivative().compose(&Tower::pair(&[k(0.0, 0), k(1.0, 0), k(1.0, 0), k(0.0, 0)]));
    assert!(within(&solve(&second, &eps(1, 1000)), 0.0, 1e-3));
}

#[test]
fn boundary_maximum() {
    let x = x_of(1);
    assert!(within(&solve(&max01(&x), &eps(1, 1_000_000)), 1.0, 1e-6));
    assert!(within(&solve(&argmax01(&x), &eps(1, 1_000_000)), 1.0, 1e-6));
    // Positive-slope perturbations keep the argmax pinned at 1.
    let (c, x2) = (Tower::coord(0, 2), Tower::coord(1, 2));
    let f = &(&x2 * &k(2.0, 2)) + &(&c * &x2);
    assert!(within(&solve(&der_at(&argmax01(&f), 0.0), &eps(1, 1000)), 0.0, 0.0));
    assert!(within(&solve(&der_at(&max01(&f), 0.0), &eps(1, 1000)), 1.0, 1e-3));
}

#[test]
fn flat_function_has_full_argmax() {
    let t = argmax01(&Tower::zero(1, 1));
    let cr = t.to_creal(EvalConfig::default());
    for n in [0, 3, 6] {
        assert_eq!(cr.approx(n).get(0), &Interval::unit());
    }
}

#[test]
fn branch_and_bound_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = x_of(1);
    let f = &prims::sin().compose(&(&x * &k(7.0, 1))) + &(&x * &x);
    let cx = EvalCtx::at(6);
    let m = max01(&f).value(&cx, &IntervalBox::new(vec![])).get(0).clone();
    let fx = |v: f64| (7.0 * v).sin() + v * v;
    for _ in 0..100 {
        let s: f64 = rng.gen();
        assert!(m.hi().unwrap().to_f64() >= fx(s) - 1e-12);
    }
    let sup = (0..=100_000).map(|i| fx(i as f64 / 100_000.0)).fold(f64::MIN, f64::max);
    assert!(m.lo().unwrap().to_f64() <= sup + 1e-12);
}

#[test]
fn newton_step_contracts() {
    let x = Tower::coord(0, 1);
    let f = &(&x * &x) - &k(2.0, 1);
    let cx = EvalCtx::at(3);
    let w = Interval::from_bounds(d(1.0), d(2.0));
    let gamma = IntervalBox::new(vec![]);
    let n = newton_accelerate(&cx, &f, &w, &gamma);
    assert!(n.width_f64() < 1.0 && n.subset_of(&w));
    assert!(n.lo().unwrap().to_f64() <= 2f64.sqrt() && 2f64.sqrt() <= n.hi().unwrap().to_f64());
    let n2 = newton_accelerate(&cx, &f, &n, &gamma);
    assert!(n2.subset_of(&n) && n2.width_f64() < n.width_f64());
    let wide = Interval::from_bounds(d(-1.0), d(2.0));
    assert_eq!(newton_accelerate(&cx, &f, &wide, &gamma), wide);
}

#[test]
fn newton_does_not_change_answers() {
    let u = &x_of(1) - &k(1.0, 1);
    let f = &k(7.0 / 16.0, 1) - &(&u * &u);
    let e = eps(1, 1_000_000_000);
    let with = solve_with(&first_root(&f), &e, EvalConfig { newton: true, ..EvalConfig::default() });
    let without = solve_with(&first_root(&f), &e, EvalConfig { newton: false, ..EvalConfig::default() });
    assert!(with.try_meet(&without).is_some());
    let g = cut_root(&gamma_sq_minus_x());
    let with = solve_with(&at(&g, 0.3), &e, EvalConfig { newton: true, ..EvalConfig::default() });
    let without = solve_with(&at(&g, 0.3), &e, EvalConfig { newton: false, ..EvalConfig::default() });
    assert!(with.try_meet(&without).is_some());
}

#[test]
fn weakening_commutes_with_primitives() {
    let (g, x) = (Tower::coord(0, 2), Tower::coord(1, 2));
    let f = &(&g * &x) - &(&x * &x);
    let cx = EvalCtx::at(5);
    let gamma = IntervalBox::points(&[d(0.5)]);
    let extended = IntervalBox::points(&[d(0.5), d(9.0)]);
    // Weakening f in a context slot before the bound variable.
    let f_w = f.compose(&Tower::select(vec![0, 2], 3));
    for p in Primitive::ALL {
        let plain = p.apply(&f).weaken(1).value(&cx, &extended);
        let inner = p.apply(&f_w).value(&cx, &extended);
        assert_eq!(plain, inner, "{}", p.name());
        assert_eq!(plain.get(0), p.apply(&f).value(&cx, &gamma).get(0));
    }
}
