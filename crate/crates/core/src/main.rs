use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, ValueEnum};
use smoothish::lang::{Config, Eps, Session};

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

/// Evaluate smoothish programs to certified intervals.
#[derive(Parser)]
#[command(name = "smoothish", version)]
struct Args {
    /// Target interval width.
    #[arg(long, default_value = "1e-3", value_parser = parse_eps)]
    eps: Eps,
    /// Maximum refinement index per query.
    #[arg(long, default_value_t = smoothish::creal::DEFAULT_BUDGET)]
    budget: u32,
    /// Wall-clock limit per query, in seconds.
    #[arg(long, default_value_t = 120.0)]
    timeout: f64,
    /// Interval Newton steps in root refinement.
    #[arg(long, value_enum, default_value = "on")]
    newton: Switch,
    /// Source files to load after the prelude, in order.
    #[arg(long)]
    load: Vec<PathBuf>,
    /// Evaluate one query and exit instead of starting the REPL.
    #[arg(long)]
    eval: Option<String>,
}

fn parse_eps(s: &str) -> Result<Eps, String> {
    Eps::parse(s).ok_or_else(|| format!("`{s}` is not a positive decimal"))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if !(args.timeout.is_finite() && args.timeout > 0.0) {
        eprintln!("error: --timeout must be a positive number of seconds");
        return ExitCode::from(1);
    }
    let config = Config {
        eps: args.eps,
        budget: args.budget,
        timeout: Duration::from_secs_f64(args.timeout),
        newton: matches!(args.newton, Switch::On),
    };
    let mut session = Session::new(config);
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for path in &args.load {
        if let Err(e) = session.load_file(path) {
            let _ = writeln!(out, "{e}");
            return ExitCode::from(1);
        }
    }
    let status = match &args.eval {
        Some(q) => session.batch(q, &mut out),
        None => session.repl(io::stdin().lock(), &mut out).map(|_| 0),
    };
    let _ = out.flush();
    match status {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
