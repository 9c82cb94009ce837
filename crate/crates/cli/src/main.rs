//! `cullenrec`: bound chains, certified calculators and exact searches.
//!
//! Exit codes: 0 success (and, for `bounds`, agreement with the published
//! bounds), 1 usage or input error, 2 bounds certified but diverging from the
//! published values, 3 precision or numerical failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cullenrec::algebraic::poly_log_height;
use cullenrec::pipeline::k_start_auto;
use cullenrec::search::to_json_lines;
use cullenrec::{
    classify_dominance, cmd_bounds_theorem2, cullen, decimal_digit_count, dominant_root,
    frac_min_upto, run_reduction, search_cullen_in_kbonacci, search_general,
    search_pow2_plus1_in_kbonacci, BigInt, Error, FracMinMethod, IntPolynomial, PipelineConfig,
    RealEnclosure, RecurrenceSpec,
};

#[derive(Parser, Debug)]
#[command(
    name = "cullenrec",
    version,
    about = "Generalized Cullen numbers in linear recurrences"
)]
struct Cli {
    /// Working precision in bits (overrides the config file).
    #[arg(long, global = true, env = "PRECISION_BITS")]
    precision_bits: Option<u32>,
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Pipeline configuration file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full bound chain and compare with the published bounds.
    Bounds {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the reduction loop from a given or automatic starting k.
    Reduce {
        #[arg(long, default_value = "auto")]
        k_start: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enclose the dominant root of x^k - x^(k-1) - ... - 1.
    Root {
        #[arg(long)]
        k: usize,
    },
    /// Logarithmic height of the roots of an irreducible polynomial.
    Height {
        /// e.g. "x^2 - x - 1" or "[-1,-1,1]".
        #[arg(long)]
        poly: String,
    },
    /// Minimum distance of log2(m) to an integer over 3 <= m <= MAX.
    Fracmin {
        /// Upper end of the range, decimal (e.g. 2.5e41).
        #[arg(long)]
        max: String,
        #[arg(long, value_enum, default_value_t = Mode::Analytic)]
        mode: Mode,
    },
    /// Exact searches.
    #[command(subcommand)]
    Search(SearchCommand),
    /// The generalized Cullen number m·s^m + 1.
    Cullen {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 2)]
        s: u64,
        /// Print only the number of decimal digits.
        #[arg(long)]
        digits_only: bool,
    },
    /// Classify the characteristic roots of a recurrence.
    Classify {
        /// Recurrence spec file (JSON).
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Analytic,
    Brute,
}

#[derive(Subcommand, Debug)]
enum SearchCommand {
    /// F_n^(k) = m·2^m + 1.
    Cullen(KBox),
    /// F_n^(k) = 2^m + 1.
    Pow2p1(KBox),
    /// G_n = m·x^m + T(x).
    General {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "T", default_value = "0", allow_hyphen_values = true)]
        t: String,
        /// Inclusive range "a..b".
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        nmax: u64,
        #[arg(long)]
        mmax: u64,
    },
}

#[derive(Args, Debug)]
struct KBox {
    #[arg(long)]
    kmax: u64,
    #[arg(long)]
    nmax: u64,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::Parse(_) => 1,
            Error::PrecisionExhausted { .. } | Error::Singular(_) | Error::NoConvergence(_) => 3,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        msg: msg.into(),
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &PathBuf, body: &str) -> Result<(), Failure> {
    fs::write(path, body).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn load_config(cli: &Cli) -> Result<PipelineConfig, Failure> {
    let mut c = match &cli.config {
        Some(p) => PipelineConfig::from_json(&read(p)?)?,
        None => PipelineConfig::default(),
    };
    if let Some(b) = cli.precision_bits {
        c.precision_bits = b;
    }
    c.validate()?;
    Ok(c)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn show(e: &RealEnclosure) -> String {
    let d = e.decimal_digits().min(40);
    format!("[{}, {}]", e.lo_decimal(d), e.hi_decimal(d))
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<i64>, Failure> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| usage(format!("expected a range a..b, got {s:?}")))?;
    let p = |v: &str| {
        v.trim()
            .parse::<i64>()
            .map_err(|_| usage(format!("bad integer {v:?} in range")))
    };
    Ok(p(a)?..=p(b)?)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let config = load_config(cli)?;
    let bits = config.precision_bits;
    match &cli.command {
        Command::Bounds { out } => {
            let report = cmd_bounds_theorem2(&config)?;
            let body = report.to_json();
            if let Some(p) = out
                .clone()
                .or_else(|| config.output_path.clone().map(PathBuf::from))
            {
                write(&p, &body)?;
            }
            if cli.json {
                println!("{body}");
            } else {
                let i = &report.initial_bounds;
                println!("initial: k < {}, m < {}, n < {}", i.k_raw, i.m_raw, i.n_raw);
                for s in &report.trace.iterations {
                    println!(
                        "  k_in {:>8}  m < {}  s = {:>3}  k_out {}",
                        s.k_in, s.m_bound, s.s, s.k_out
                    );
                }
                let f = &report.final_bounds;
                println!(
                    "final: k <= {}, m < {}, n < {}",
                    f.k_final, f.m_final, f.n_final
                );
                println!("matches published bounds: {}", report.matches_paper);
                for flag in &report.flags {
                    println!("note: {flag}");
                }
            }
            Ok(if report.matches_paper { 0 } else { 2 })
        }
        Command::Reduce { k_start, out } => {
            let k = if k_start == "auto" {
                k_start_auto(&config)?
            } else {
                k_start.parse::<u64>().map_err(|_| {
                    usage(format!(
                        "--k-start must be 'auto' or an integer, got {k_start:?}"
                    ))
                })?
            };
            let trace = run_reduction(k, &config.reduction_config())?;
            let body = trace.to_json();
            if let Some(p) = out {
                write(p, &body)?;
            }
            if cli.json {
                println!("{body}");
            } else {
                for s in &trace.iterations {
                    println!(
                        "k_in {:>8}  m < {}  s = {:>3}  min in {}  k_out {}",
                        s.k_in,
                        s.m_bound,
                        s.s,
                        show(&s.frac_min),
                        s.k_out
                    );
                }
                println!("converged: {}", trace.converged);
            }
            Ok(0)
        }
        Command::Root { k } => {
            let c = dominant_root(*k, bits)?;
            if cli.json {
                println!("{}", json(&c));
            } else {
                println!("alpha_{k} in {}", show(&c.enclosure));
            }
            Ok(0)
        }
        Command::Height { poly } => {
            let p: IntPolynomial = poly.parse()?;
            let h = poly_log_height(&p, bits)?;
            if cli.json {
                println!(
                    "{}",
                    json(&serde_json::json!({ "poly": p.to_string(), "height": h }))
                );
            } else {
                println!("h = {}", show(&h));
            }
            Ok(0)
        }
        Command::Fracmin { max, mode } => {
            let m = RealEnclosure::from_decimal(max, bits)?;
            let method = match mode {
                Mode::Analytic => FracMinMethod::Analytic,
                Mode::Brute => FracMinMethod::BruteForce,
            };
            let r = frac_min_upto(&m, method, bits)?;
            if cli.json {
                println!("{}", json(&r));
            } else {
                let args: Vec<String> = r.argmins.iter().map(BigInt::to_string).collect();
                println!("min = {}", show(&r.min_value));
                println!("argmin = {}", args.join(", "));
            }
            Ok(0)
        }
        Command::Search(s) => {
            let lines = match s {
                SearchCommand::Cullen(b) => {
                    to_json_lines(&search_cullen_in_kbonacci(b.kmax, b.nmax)?)
                }
                SearchCommand::Pow2p1(b) => {
                    to_json_lines(&search_pow2_plus1_in_kbonacci(b.kmax, b.nmax)?)
                }
                SearchCommand::General {
                    spec,
                    t,
                    x,
                    nmax,
                    mmax,
                } => {
                    let spec: RecurrenceSpec = serde_json::from_str(&read(spec)?)
                        .map_err(|e| usage(format!("bad spec: {e}")))?;
                    let t: IntPolynomial = t.parse()?;
                    to_json_lines(&search_general(&spec, &t, parse_range(x)?, *nmax, *mmax)?)
                }
            };
            print!("{lines}");
            Ok(0)
        }
        Command::Cullen { m, s, digits_only } => {
            let v = cullen(*m, *s)?;
            let digits = decimal_digit_count(&v)?;
            if *digits_only {
                println!("{digits}");
            } else if cli.json {
                println!(
                    "{}",
                    json(
                        &serde_json::json!({ "m": m, "s": s, "digits": digits, "value": v.to_string() })
                    )
                );
            } else {
                println!("{v}");
            }
            Ok(0)
        }
        Command::Classify { spec } => {
            let spec: RecurrenceSpec =
                serde_json::from_str(&read(spec)?).map_err(|e| usage(format!("bad spec: {e}")))?;
            let c = classify_dominance(&spec, bits)?;
            if cli.json {
                println!("{}", json(&c));
            } else {
                println!(
                    "{:?}{}",
                    c.variant,
                    if c.undecided { " (undecided)" } else { "" }
                );
                println!("dominant root simple: {}", c.dominant_simple);
                for (m, k) in c.root_moduli.iter().zip(&c.multiplicities) {
                    println!("  |r| in {} (multiplicity {k})", show(m));
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
