//! The surface language: definitions and queries through a session, as the
//! `smoothish` binary runs them.

use smoothish::lang::{Config, Eps, Session};

fn main() {
    let mut s = Session::new(Config::default());
    let inputs = [
        "let sq (x : ℝ) : ℝ = x * x",
        "sq (sqrt 2)",
        "deriv (λ c ⇒ integral01 (λ x ⇒ relu (x − c))) 0.6",
        "cutRoot (λ x ⇒ 2 − x^3)",
        "argmax01 (λ x ⇒ x * (1 − x))",
        "mean uniform",
        "sq (",
    ];
    for src in inputs {
        match s.run(src, None) {
            Ok(r) => println!("{src}\n  {}", r.render()),
            Err(e) => println!("{src}\n  {e}"),
        }
    }
    // A per-query target overrides the session default.
    let fine = Eps::parse("1e-12").unwrap();
    println!("pi at 1e-12\n  {}", s.run("pi", Some(&fine)).map(|r| r.render()).unwrap_or_else(|e| e.to_string()));
}
