use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sumdiff_cli::{exit, Certificate, RangeArg, ValueList};
use sumdiff_core::oracle::{self, Limits};
use sumdiff_core::search::{self, Interval, SearchSpec};
use sumdiff_core::{set_counts, Params};

#[derive(Parser)]
#[command(
    name = "sumdiff",
    version,
    about = "Exact sums-vs-differences counts and theta lower bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact counts and theta bound for one (m, L, B), as a JSON certificate.
    Compute {
        #[command(flatten)]
        params: ParamArgs,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank a grid of parameters by their theta bound.
    Search(SearchArgs),
    /// Check the closed forms against brute-force enumeration.
    Oracle {
        #[command(flatten)]
        params: ParamArgs,
        /// Maximum number of enumerated vectors.
        #[arg(long, default_value_t = oracle::DEFAULT_MAX_VECTORS)]
        cap: u64,
        /// Maximum number of pairwise operations for U+U and U-U.
        #[arg(long, default_value_t = oracle::DEFAULT_MAX_PAIR_OPS)]
        pair_cap: u64,
    },
    /// Like `compute`, but always writes a file. Meant for long runs.
    Certify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long = "m")]
    m: u64,
    #[arg(long = "L")]
    l: u64,
    #[arg(long = "B")]
    b: u64,
}

impl ParamArgs {
    fn params(&self) -> Params {
        Params::new(self.m, self.l, self.b)
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Range of m, `lo:hi` inclusive.
    #[arg(long = "m")]
    m: RangeArg,
    /// Values of L: comma-separated values and `lo:hi` ranges.
    #[arg(long = "L")]
    l: ValueList,
    /// Range of B, `lo:hi` inclusive.
    #[arg(long = "B")]
    b: RangeArg,
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Recompute the bound for every returned candidate.
    #[arg(long)]
    confirm: bool,
    /// Worker threads (default: all cores).
    #[arg(long, env = "SUMDIFF_THREADS")]
    threads: Option<usize>,
}

fn compute_certificate(p: Params) -> Certificate {
    let p = p.canonicalize();
    let start = Instant::now();
    let counts = set_counts(p);
    Certificate::new(p, &counts, start.elapsed().as_secs_f64())
}

fn write_file(path: &Path, contents: &str) -> Result<(), ExitCode> {
    std::fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        ExitCode::from(exit::IO)
    })
}

fn emit_certificate(cert: &Certificate, out: Option<&Path>) -> ExitCode {
    let json = cert.to_json();
    match out {
        Some(path) => {
            if let Err(code) = write_file(path, &json) {
                return code;
            }
        }
        None => {
            if std::io::stdout().write_all(json.as_bytes()).is_err() {
                return ExitCode::from(exit::IO);
            }
        }
    }
    if let Some(reason) = &cert.theta_error {
        eprintln!("theta refused: {reason}");
        return ExitCode::from(exit::DEGENERATE);
    }
    ExitCode::SUCCESS
}

fn run_search(args: SearchArgs) -> ExitCode {
    let spec = SearchSpec {
        m_range: Interval::new(args.m.lo, args.m.hi),
        l_values: args.l.0,
        b_range: Interval::new(args.b.lo, args.b.hi),
        top_n: args.top,
        confirm: args.confirm,
    };
    let result = match args.threads {
        Some(n) => search::sweep_with_workers(&spec, n),
        None => search::sweep(&spec),
    };
    match result {
        Ok(r) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&r).expect("result serializes")
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::USAGE)
        }
    }
}

fn run_oracle(p: Params, limits: Limits) -> ExitCode {
    let report = match oracle::validate(p, limits) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::ORACLE);
        }
    };
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let (c, e) = (&report.closed_form, &report.enumerated);
    println!("oracle {}", report.params);
    for (name, closed, enumerated) in [
        ("u", &c.u, &e.u),
        ("s", &c.s, &e.s),
        ("d", &c.d, &e.d),
        ("q", &c.q, &e.q),
    ] {
        println!(
            "  {name}  closed-form={closed}  enumerated={enumerated}  {}",
            verdict(closed == enumerated)
        );
    }
    println!("  injective on W+W and W-W  {}", verdict(report.injective));
    println!("{}", verdict(report.passed()));
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(exit::ORACLE)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(exit::USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Compute { params, out } => {
            let cert = compute_certificate(params.params());
            emit_certificate(&cert, out.as_deref())
        }
        Command::Certify { params, out } => {
            let cert = compute_certificate(params.params());
            emit_certificate(&cert, Some(&out))
        }
        Command::Search(args) => run_search(args),
        Command::Oracle {
            params,
            cap,
            pair_cap,
        } => run_oracle(
            params.params(),
            Limits {
                max_vectors: cap,
                max_pair_ops: pair_cap,
            },
        ),
    }
}
