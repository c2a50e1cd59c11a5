//! Shapes as maximizers and the Hausdorff distance between them, driven
//! through the prelude definitions.

use smoothish::lang::{Config, Eps, Session};

fn main() {
    let mut s = Session::new(Config::default());
    // The top and right edges of the unit square against a quarter circle shifted up by y.
    let queries = [
        ("1e-2", "hausdorffDist R2Dist lShape (quarterCircle 0)"),
        ("1e-1", "deriv (λ y : ℝ ⇒ hausdorffDist R2Dist lShape (quarterCircle y)) 0"),
    ];
    for (eps, q) in queries {
        let reply = s.run(q, Some(&Eps::parse(eps).unwrap()));
        println!("eps={eps}> {q}\n  {}", reply.map(|r| r.render()).unwrap_or_else(|e| e.to_string()));
    }
}
