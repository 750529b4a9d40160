//! Command-line front end: count/solve/bench/verify/blowup plus JSON-lines
//! batch ingestion. Reports are single-line JSON objects; identical jobs
//! with identical seeds produce byte-identical reports (bench wall-clock
//! fields excepted).

use std::io::{BufRead, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use fewnomial::hybrid::{alpha_bound, hybrid_solve_detailed, Direction, HybridInput};
use fewnomial::oracle;
use fewnomial::parse::{parse_poly, parse_rational};
use fewnomial::poly::{ceil_log2, SparsePoly};
use fewnomial::scalar::{decimal_string, rat_i64, rat_log2_abs, Backend, Rational};
use num_traits::Signed;
use fewnomial::solver::{solve, SolveRequest};
use fewnomial::sturm::{chain_length_stats, count_roots, CountQuery};
use fewnomial::{Error, OpCounter};

const EXIT_OK: u8 = 0;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECISION: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "fewnomial", about = "Sparse real-root engine", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count distinct real roots in an interval.
    Count(CountArgs),
    /// Eps-approximate all roots in [0, R].
    Solve(SolveArgs),
    /// Operation-count scaling benchmarks.
    Bench(BenchArgs),
    /// Run the oracle-equivalence suite.
    Verify(VerifyArgs),
    /// Tetranomial Sturm-blowup table.
    Blowup(BlowupArgs),
    /// Execute JSON-lines jobs from a file ('-' for stdin).
    Batch(BatchArgs),
}

#[derive(Args, Deserialize, Default, Clone)]
struct CountArgs {
    /// Polynomial: semicolon-separated coeff,exponent pairs.
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Interval endpoints "a,b".
    #[arg(long, allow_hyphen_values = true)]
    interval: String,
    /// Open at both endpoints.
    #[arg(long, default_value_t = false)]
    #[serde(default)]
    open: bool,
    /// Open at the left endpoint only.
    #[arg(long, default_value_t = false)]
    #[serde(default)]
    open_left: bool,
    /// Open at the right endpoint only.
    #[arg(long, default_value_t = false)]
    #[serde(default)]
    open_right: bool,
    /// Numeric backend: "exact" or "float:BITS".
    #[arg(long, default_value = "exact")]
    #[serde(default = "default_backend")]
    backend: String,
}

#[derive(Args, Deserialize, Default, Clone)]
struct SolveArgs {
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Interval "0,R" (closed).
    #[arg(long, allow_hyphen_values = true)]
    interval: String,
    /// Approximation radius.
    #[arg(long, allow_hyphen_values = true)]
    eps: String,
    /// Override for the alpha bound.
    #[arg(long)]
    #[serde(default)]
    alpha: Option<String>,
    #[arg(long, default_value = "exact")]
    #[serde(default = "default_backend")]
    backend: String,
    /// Decimal digits in the output (default ceil(-log10 eps) + 2).
    #[arg(long)]
    #[serde(default)]
    digits: Option<u32>,
}

#[derive(Args, Deserialize, Default, Clone)]
struct BenchArgs {
    /// Comma-separated degree list.
    #[arg(long)]
    degrees: String,
    /// Monomial count of the random inputs (trinomials only for now).
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_m")]
    m: u64,
    #[arg(long, default_value_t = 10)]
    #[serde(default = "default_trials")]
    trials: u32,
    #[arg(long, default_value_t = 7)]
    #[serde(default)]
    seed: u64,
    /// count | solve | hybrid
    #[arg(long, default_value = "count")]
    #[serde(default = "default_mode")]
    mode: String,
    #[arg(long, default_value = "1e-9")]
    #[serde(default = "default_eps")]
    eps: String,
    #[arg(long, default_value = "2")]
    #[serde(default = "default_r")]
    r: String,
    #[arg(long, default_value = "float:128")]
    #[serde(default = "default_float_backend")]
    backend: String,
}

fn default_backend() -> String {
    "exact".to_string()
}
fn default_float_backend() -> String {
    "float:128".to_string()
}
fn default_m() -> u64 {
    3
}
fn default_trials() -> u32 {
    10
}
fn default_mode() -> String {
    "count".to_string()
}
fn default_eps() -> String {
    "1e-9".to_string()
}
fn default_r() -> String {
    "2".to_string()
}

#[derive(Args, Deserialize, Default, Clone)]
struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    #[serde(default = "default_cases")]
    cases: u32,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_seed1")]
    seed: u64,
}

fn default_cases() -> u32 {
    200
}
fn default_seed1() -> u64 {
    1
}

#[derive(Args, Deserialize, Default, Clone)]
struct BlowupArgs {
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_min_d")]
    min_d: u64,
    #[arg(long, default_value_t = 20)]
    #[serde(default = "default_max_d")]
    max_d: u64,
}

fn default_min_d() -> u64 {
    3
}
fn default_max_d() -> u64 {
    20
}

#[derive(Args)]
struct BatchArgs {
    /// Path to a JSON-lines job file, or '-' for stdin.
    #[arg(long)]
    file: String,
}

/// One JSON-lines job: a command name plus that command's fields.
#[derive(Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum JobSpec {
    Count(CountArgs),
    Solve(SolveArgs),
    Bench(BenchArgs),
    Verify(VerifyArgs),
    Blowup(BlowupArgs),
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(msg: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_PARSE,
            message: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::PrecisionExhausted => EXIT_PRECISION,
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_PARSE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_backend(s: &str) -> Result<Backend, Failure> {
    if s == "exact" {
        return Ok(Backend::Exact);
    }
    if s == "float" {
        let bits = std::env::var("FEWNOMIAL_FLOAT_BITS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(128);
        return Ok(Backend::float(bits));
    }
    if let Some(bits) = s.strip_prefix("float:") {
        let bits: u32 = bits
            .parse()
            .map_err(|_| Failure::parse(format!("bad backend '{s}'")))?;
        return Ok(Backend::float(bits));
    }
    Err(Failure::parse(format!(
        "backend must be 'exact' or 'float:BITS', got '{s}'"
    )))
}

fn parse_interval(s: &str) -> Result<(Rational, Rational), Failure> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Failure::parse(format!("interval must be 'a,b', got '{s}'")))?;
    Ok((
        parse_rational(a).map_err(Failure::from)?,
        parse_rational(b).map_err(Failure::from)?,
    ))
}

fn run_count(args: &CountArgs) -> Result<Value, Failure> {
    let f = parse_poly(&args.poly)?;
    let (a, b) = parse_interval(&args.interval)?;
    let q = CountQuery::new(
        a,
        b,
        args.open || args.open_left,
        args.open || args.open_right,
    )?;
    let backend = parse_backend(&args.backend)?;
    let mut ctr = OpCounter::default();
    let n = count_roots(&f, &q, backend, &mut ctr)?;
    Ok(json!({ "count": n }))
}

fn run_solve(args: &SolveArgs) -> Result<Value, Failure> {
    let f = parse_poly(&args.poly)?;
    let (a, b) = parse_interval(&args.interval)?;
    if !a.eq(&Rational::from_integer(0.into())) {
        return Err(Failure::parse("solve interval must start at 0".to_string()));
    }
    let eps = parse_rational(&args.eps)?;
    let alpha = match &args.alpha {
        Some(s) => Some(parse_rational(s)?),
        None => None,
    };
    let backend = parse_backend(&args.backend)?;
    let digits = args.digits.unwrap_or_else(|| {
        let l10 = -rat_log2_abs(&eps).unwrap_or(-30.0) * std::f64::consts::LN_2
            / std::f64::consts::LN_10;
        l10.ceil().max(0.0) as u32 + 2
    });
    let req = SolveRequest {
        f: f.clone(),
        r: b.clone(),
        eps: eps.clone(),
        alpha_star: alpha,
    };
    let mut ctr = OpCounter::default();
    let report = solve(&req, backend, &mut ctr)?;
    let mut vctr = OpCounter::default();
    let verified = report
        .verify(&f, &b, &eps, backend, &mut vctr)
        .unwrap_or(false);
    if !verified && !report.zero_function {
        return Err(Failure {
            code: EXIT_INTERNAL,
            message: "solve report failed its residual check".to_string(),
        });
    }
    let roots: Vec<Value> = report
        .entries()
        .iter()
        .map(|(v, p)| {
            json!({
                "value": decimal_string(v, digits),
                "provenance": format!("{p:?}"),
            })
        })
        .collect();
    Ok(json!({
        "count": report.len(),
        "zero_function": report.zero_function,
        "roots": roots,
        "charged_ops": ctr.total_ops(),
        "charged_evals": ctr.evals(),
    }))
}

fn random_trinomial(rng: &mut impl rand::Rng, d: u64) -> SparsePoly {
    let c = |rng: &mut dyn rand::RngCore| loop {
        let v = (rng.next_u64() % 21) as i64 - 10;
        if v != 0 {
            break v;
        }
    };
    let a2 = 1 + rng.next_u64() % (d - 1).max(1);
    SparsePoly::from_int_terms(&[(c(rng), 0), (c(rng), a2.min(d - 1)), (c(rng), d)])
}

fn run_bench(args: &BenchArgs) -> Result<Value, Failure> {
    use rand::SeedableRng;
    if args.m != 3 {
        return Err(Failure::parse("bench currently generates trinomials (m = 3)"));
    }
    let degrees: Result<Vec<u64>, _> = args
        .degrees
        .split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect();
    let degrees = degrees.map_err(|_| Failure::parse("bad degree list"))?;
    if degrees.iter().any(|&d| d < 4) {
        return Err(Failure::parse("bench degrees must be >= 4"));
    }
    let eps = parse_rational(&args.eps)?;
    let r = parse_rational(&args.r)?;
    let backend = parse_backend(&args.backend)?;
    let mut rows = Vec::new();
    let mut ratios: Vec<f64> = Vec::new();
    let model_name = match args.mode.as_str() {
        "count" => "ops / ceil(log2 D)^2",
        "solve" => "ops / (log2 D * log2(D * log2(R/eps)))",
        "hybrid" => "evals / log2(alpha* * log2(R/eps))",
        other => return Err(Failure::parse(format!("unknown bench mode '{other}'"))),
    };
    let log_re = rat_log2_abs(&(&r / &eps)).unwrap_or(30.0);
    for &d in &degrees {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed ^ d);
        let mut ops_sum = 0u64;
        let mut evals_sum = 0u64;
        let mut k_max = 0u64;
        let started = std::time::Instant::now();
        let mut done = 0u32;
        for _ in 0..args.trials {
            let mut ctr = OpCounter::default();
            match args.mode.as_str() {
                "count" => {
                    let f = random_trinomial(&mut rng, d);
                    let q = CountQuery::open(Rational::from_integer(0.into()), r.clone())
                        .map_err(Failure::from)?;
                    count_roots(&f, &q, backend, &mut ctr)?;
                }
                "solve" => {
                    let f = random_trinomial(&mut rng, d);
                    let req = SolveRequest {
                        f,
                        r: r.clone(),
                        eps: eps.clone(),
                        alpha_star: None,
                    };
                    solve(&req, backend, &mut ctr)?;
                }
                "hybrid" => {
                    let inp = HybridInput {
                        eps: eps.clone(),
                        r: r.clone(),
                        phi: SparsePoly::from_int_terms(&[(-2, 0), (1, d)]),
                        alpha_star: alpha_bound(d, 2, None, false)?,
                        direction: Direction::Increasing,
                    };
                    hybrid_solve_detailed(&inp, backend, &mut ctr)?;
                }
                _ => unreachable!(),
            }
            ops_sum += ctr.total_ops();
            evals_sum += ctr.evals();
            k_max = k_max.max(ctr.max_chain_k);
            done += 1;
        }
        let wall_ms = started.elapsed().as_secs_f64() * 1e3;
        let mean_ops = ops_sum as f64 / done as f64;
        let mean_evals = evals_sum as f64 / done as f64;
        let denom = match args.mode.as_str() {
            "count" => (ceil_log2(d) as f64).powi(2),
            "solve" => (d as f64).log2() * (d as f64 * log_re).log2(),
            "hybrid" => {
                let alpha = (d - 1) as f64 / 2.0;
                (alpha * log_re).log2()
            }
            _ => unreachable!(),
        };
        let measure = if args.mode == "hybrid" { mean_evals } else { mean_ops };
        ratios.push(measure / denom);
        rows.push(json!({
            "d": d,
            "m": args.m,
            "eps": args.eps,
            "charged_ops": mean_ops,
            "charged_evals": mean_evals,
            "chain_k": k_max,
            "wall_ms": wall_ms,
        }));
    }
    let cmax = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let cmin = ratios.iter().cloned().fold(f64::MAX, f64::min);
    Ok(json!({
        "mode": args.mode,
        "model": model_name,
        "rows": rows,
        "fitted_c": cmax,
        "max_min_ratio": cmax / cmin,
    }))
}

fn run_verify(args: &VerifyArgs) -> Result<Value, Failure> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let mut count_pass = 0u32;
    for _ in 0..args.cases {
        let d = rng.gen_range(2u64..=512);
        let f = random_trinomial(&mut rng, d.max(2));
        let a = rat_i64(rng.gen_range(-4i64..=1));
        let w = rat_i64(rng.gen_range(1i64..=4));
        let b = &a + w;
        let q = CountQuery::new(a, b, rng.gen_bool(0.5), rng.gen_bool(0.5))
            .map_err(Failure::from)?;
        let mut ctr = OpCounter::default();
        let fast = count_roots(&f, &q, Backend::Exact, &mut ctr)?;
        let dense = oracle::dense_sturm_count(&oracle::expand(&f)?, &q)?;
        if fast == dense {
            count_pass += 1;
        }
    }
    let solve_cases = args.cases / 4;
    let mut solve_pass = 0u32;
    let eps = parse_rational("1e-9")?;
    for _ in 0..solve_cases {
        let d = rng.gen_range(2u64..=256);
        let f = random_trinomial(&mut rng, d.max(2));
        let r = rat_i64([1i64, 2, 10][rng.gen_range(0..3)]);
        let req = SolveRequest {
            f: f.clone(),
            r: r.clone(),
            eps: eps.clone(),
            alpha_star: None,
        };
        let mut ctr = OpCounter::default();
        let Ok(report) = solve(&req, Backend::Exact, &mut ctr) else {
            continue;
        };
        let iso = oracle::isolate_and_refine(
            &oracle::expand(&f)?,
            &CountQuery::closed(Rational::from_integer(0.into()), r).map_err(Failure::from)?,
            &eps,
        )?;
        let pts = iso.points();
        let tol = &eps * rat_i64(2);
        let ok = report.len() == pts.len()
            && report
                .roots()
                .iter()
                .zip(&pts)
                .all(|(g, w)| (g - w).abs() < tol);
        if ok {
            solve_pass += 1;
        }
    }
    let stats = chain_length_stats(&[16, 256, 2048], args.cases.min(50), args.seed);
    let all_ok =
        count_pass == args.cases && solve_pass == solve_cases && stats.bound_violations == 0;
    let out = json!({
        "count_cases": args.cases,
        "count_pass": count_pass,
        "solve_cases": solve_cases,
        "solve_pass": solve_pass,
        "chain_rows": stats.rows.len(),
        "bound_violations": stats.bound_violations,
        "all_ok": all_ok,
    });
    if all_ok {
        Ok(out)
    } else {
        Err(Failure {
            code: EXIT_INTERNAL,
            message: out.to_string(),
        })
    }
}

fn run_blowup(args: &BlowupArgs) -> Result<Value, Failure> {
    if args.min_d < 3 || args.max_d < args.min_d {
        return Err(Failure::parse("blowup needs 3 <= min_d <= max_d"));
    }
    let rows: Vec<Value> = (args.min_d..=args.max_d)
        .map(|d| {
            let row = oracle::tetranomial_blowup(d);
            json!({
                "d": row.d,
                "p2_matches": row.p2_matches_closed_form,
                "p3_degree": row.p3_degree,
                "p3_terms": row.p3_term_count,
                "chain_k": row.chain_k,
            })
        })
        .collect();
    Ok(json!({ "rows": rows }))
}

fn execute_job(job: &JobSpec) -> Result<Value, Failure> {
    match job {
        JobSpec::Count(a) => run_count(a),
        JobSpec::Solve(a) => run_solve(a),
        JobSpec::Bench(a) => run_bench(a),
        JobSpec::Verify(a) => run_verify(a),
        JobSpec::Blowup(a) => run_blowup(a),
    }
}

fn run_batch(args: &BatchArgs) -> Result<Value, Failure> {
    let reader: Box<dyn BufRead> = if args.file == "-" {
        Box::new(std::io::stdin().lock())
    } else {
        let file = std::fs::File::open(&args.file)
            .map_err(|e| Failure::parse(format!("cannot open {}: {e}", args.file)))?;
        Box::new(std::io::BufReader::new(file))
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Failure::parse(format!("read error: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let report = serde_json::from_str::<JobSpec>(&line)
            .map_err(|e| Failure::parse(format!("line {}: {e}", i + 1)))
            .and_then(|job| {
                std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| execute_job(&job)))
                    .unwrap_or_else(|_| {
                        Err(Failure {
                            code: EXIT_INTERNAL,
                            message: "internal invariant violation".to_string(),
                        })
                    })
            });
        let value = match report {
            Ok(v) => v,
            Err(f) => json!({ "error": f.message, "line": i + 1, "status": f.code }),
        };
        writeln!(out, "{value}").ok();
    }
    Ok(Value::Null)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| match &cli.command {
        Command::Count(a) => run_count(a),
        Command::Solve(a) => run_solve(a),
        Command::Bench(a) => run_bench(a),
        Command::Verify(a) => run_verify(a),
        Command::Blowup(a) => run_blowup(a),
        Command::Batch(a) => run_batch(a),
    }))
    .unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".to_string());
        Err(Failure {
            code: EXIT_INTERNAL,
            message: format!("internal invariant violation: {msg}"),
        })
    });
    match result {
        Ok(Value::Null) => ExitCode::from(EXIT_OK),
        Ok(v) => {
            println!("{v}");
            ExitCode::from(EXIT_OK)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
