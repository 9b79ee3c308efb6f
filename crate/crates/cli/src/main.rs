use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::json;

use dirspec_core::approx2d::{best_approx_seq, four_over_pi_lower, spectrum_bounds_check, two_over_sqrt3, TargetVector};
use dirspec_core::builder::{
    compare_certificates, construct_with, finish, parse_branch_bits, replay, validate_limit, BuildOptions, Strategy, TargetInterval,
};
use dirspec_core::cf1d::{basic_relation_check, cf_expand, dirichlet_products};
use dirspec_core::exact::{format_rational, parse_rational, to_f64, RealExpr};
use dirspec_core::{io, sample, Error};

#[derive(Parser)]
#[command(name = "dirspec", version, about = "Dirichlet spectrum tools: continued fractions, 2-D best approximations, constructions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Sweep,
    Strips,
}

#[derive(Subcommand)]
enum Cmd {
    /// Continued fraction of a real expression with Dirichlet products (CSV).
    Cf {
        alpha: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Bits of precision for the basic-relation gap.
        #[arg(long, default_value_t = 256)]
        prec: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best simultaneous approximations of (v1, v2) under the Euclidean norm (JSONL).
    Best2 {
        v1: String,
        v2: String,
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a vector whose normalized cylinder volumes follow the targets.
    Construct {
        /// Targets JSON file.
        #[arg(long, conflicts_with_all = ["lambda", "halfwidth"])]
        targets: Option<PathBuf>,
        #[arg(long, requires = "halfwidth")]
        lambda: Option<String>,
        #[arg(long, requires = "lambda")]
        halfwidth: Option<String>,
        /// Number of steps; defaults to the number of targets.
        #[arg(long)]
        n: Option<usize>,
        /// Branch bits as hex; bit k selects the branch of step k + 1, missing bits are 0.
        #[arg(long, default_value = "0")]
        branch: String,
        /// Sweep windows (or strips per retry) per step.
        #[arg(long, default_value_t = 40)]
        kbudget: usize,
        /// Denominator cap.
        #[arg(long)]
        qmax: Option<String>,
        #[arg(long, value_enum, default_value = "sweep")]
        strategy: StrategyArg,
        /// Result bundle path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-step certificates as JSONL.
        #[arg(long)]
        certs: Option<PathBuf>,
    },
    /// Re-check a result bundle and its limit behavior.
    Verify {
        bundle: PathBuf,
        /// Depth of the limit check; defaults to N - 2.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Histogram of Dirichlet products over random vectors.
    Sample {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 100_000)]
        qmax: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        bins: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Core(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure::Core(Error::InvalidInput(msg.into()))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted(_)
        | Error::UndecidedTie(_)
        | Error::NoEpsilonFound(_)
        | Error::SearchExhausted(_)
        | Error::MarginTooSmall(_) => 2,
        _ => 3,
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| input(e.to_string()))
        }
    }
}

fn read(p: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| input(format!("cannot read {}: {e}", p.display())))
}

fn cmd_cf(alpha: &str, n: usize, prec: u32, out: &Option<PathBuf>) -> Result<(), Failure> {
    let a = RealExpr::parse(alpha)?;
    let cf = cf_expand(&a, n + 1)?;
    let terms = cf.terms();
    let prods = dirichlet_products(&a, n)?;
    let mut text = String::from("n,a_n,q_n,dist_approx,product_approx,basic_relation_gap\n");
    for d in &prods {
        let gap = if d.n >= 1 && !cf.terminated {
            match basic_relation_check(&a, d.n, prec) {
                Ok(b) => format!("{:.3e}", to_f64(&b.gap)),
                Err(_) => String::new(),
            }
        } else {
            String::new()
        };
        text.push_str(&format!("{},{},{},{:.12e},{:.12},{}\n", d.n, terms[d.n], d.q, d.dist.to_f64(), d.product.to_f64(), gap));
    }
    emit(out, &text)
}

fn cmd_best2(v1: &str, v2: &str, qmax: u64, out: &Option<PathBuf>) -> Result<(), Failure> {
    let v = TargetVector::parse(v1, v2)?;
    let chain = best_approx_seq(&v, qmax)?;
    let bounds = spectrum_bounds_check(&v, qmax)?;
    let mut text = io::chain_jsonl(&chain);
    let summary = json!({
        "summary": {
            "records": chain.records.len(),
            "degenerate": chain.degenerate,
            "max_product": bounds.max_product.as_ref().map(|p| p.as_rational().map(format_rational).unwrap_or_else(|| format!("{:.17e}", p.to_f64()))),
            "max_product_approx": bounds.max_product.as_ref().map(|p| p.to_f64()),
            "max_index": bounds.max_index,
            "below_4_over_pi": bounds.below_four_over_pi,
            "below_2_over_sqrt3": bounds.below_two_over_sqrt3,
            "four_over_pi_lower": format_rational(&four_over_pi_lower()),
            "two_over_sqrt3_approx": two_over_sqrt3().to_f64(),
        }
    });
    text.push_str(&summary.to_string());
    text.push('\n');
    emit(out, &text)
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    targets: &Option<PathBuf>,
    lambda: &Option<String>,
    halfwidth: &Option<String>,
    n: Option<usize>,
    branch: &str,
    kbudget: usize,
    qmax: &Option<String>,
    strategy: StrategyArg,
    out: &Option<PathBuf>,
    certs: &Option<PathBuf>,
) -> Result<(), Failure> {
    let ts: Vec<TargetInterval> = match (targets, lambda, halfwidth) {
        (Some(p), _, _) => io::parse_targets(&read(p)?)?,
        (None, Some(l), Some(h)) => {
            let n = n.ok_or_else(|| input("--lambda needs --n"))?;
            let lam = io::parse_surd(&json!(l), "lambda")?;
            vec![TargetInterval::around(&lam, &parse_rational(h)?)?; n]
        }
        _ => return Err(input("give --targets or --lambda with --halfwidth")),
    };
    let n = n.unwrap_or(ts.len());
    let mut bits = parse_branch_bits(branch)?;
    if bits.len() < n {
        bits.resize(n, false);
    }
    let q_cap = match qmax {
        Some(s) => Some(s.parse::<BigInt>().map_err(|_| input("--qmax must be an integer"))?),
        None => None,
    };
    if q_cap.as_ref().is_some_and(|c| c <= &BigInt::zero()) {
        return Err(input("--qmax must be positive"));
    }
    let opts = BuildOptions {
        strategy: match strategy {
            StrategyArg::Sweep => Strategy::Sweep,
            StrategyArg::Strips => Strategy::Strips,
        },
        q_cap,
        budget: kbudget.max(1),
        ..BuildOptions::default()
    };
    let result = construct_with(&ts, &bits, n, &opts, |s| {
        let c = s.certificates.last().unwrap();
        eprintln!("step {:>3}  q = {}  V/pi ~ {:.6}", s.n(), c.w[0], to_f64(c.v_over_pi.last().unwrap()));
    })?;
    emit(out, &format!("{}\n", serde_json::to_string_pretty(&io::result_json(&result)).unwrap()))?;
    if let Some(p) = certs {
        let mut text = String::new();
        for c in &result.state.certificates {
            text.push_str(&io::certificate_json(c).to_string());
            text.push('\n');
        }
        fs::write(p, text).map_err(|e| input(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn cmd_verify(bundle: &PathBuf, depth: Option<usize>) -> Result<(), Failure> {
    let b = io::parse_bundle(&read(bundle)?)?;
    let state = replay(&b.records, &b.targets, &b.branches).map_err(|f| Failure::Check(f.to_string()))?;
    compare_certificates(&b.certificates, &state).map_err(|f| Failure::Check(f.to_string()))?;
    let result = finish(state);
    if result.v != b.v {
        return Err(Failure::Check("recorded v differs from the last record".into()));
    }
    if result.error_bound != b.error_bound {
        return Err(Failure::Check("recorded error bound differs from 2^(1-N)".into()));
    }
    let n = result.state.n();
    let depth = depth.unwrap_or(n.saturating_sub(2));
    let rep = validate_limit(&result, depth)?;
    if !rep.passed {
        return Err(Failure::Check(format!("limit check: best approximation {} of v_N differs from w_{}", rep.mismatch.unwrap(), rep.mismatch.unwrap())));
    }
    println!(
        "PASS: {n} steps re-verified exactly; best approximations of v_N match w_0..w_{depth}{}; proxy error {:.3e}, margin {:.3e}",
        if rep.scan_checked { " (lattice and scan engines)" } else { "" },
        rep.proxy_error,
        rep.margin
    );
    Ok(())
}

fn cmd_sample(count: usize, qmax: u64, seed: u64, bins: usize, out: &Option<PathBuf>) -> Result<(), Failure> {
    if count == 0 {
        return Err(input("--count must be at least 1"));
    }
    let r = sample::sample_spectrum(count, qmax, seed, bins)?;
    emit(out, &r.histogram_csv())?;
    let mahler = two_over_sqrt3();
    let above = r.mass_from(mahler.to_f64());
    eprintln!(
        "{} products, max {:.9}, certified below 4/pi: {}, above 2/sqrt(3)+1e-9: {}, mass in bins from 2/sqrt(3): {above}",
        r.total_products,
        r.max_product.as_ref().map(to_f64).unwrap_or(0.0),
        r.certified_below_four_over_pi,
        r.above_two_over_sqrt3
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Cf { alpha, n, prec, out } => cmd_cf(alpha, *n, *prec, out),
        Cmd::Best2 { v1, v2, qmax, out } => cmd_best2(v1, v2, *qmax, out),
        Cmd::Construct { targets, lambda, halfwidth, n, branch, kbudget, qmax, strategy, out, certs } => {
            cmd_construct(targets, lambda, halfwidth, *n, branch, *kbudget, qmax, *strategy, out, certs)
        }
        Cmd::Verify { bundle, depth } => cmd_verify(bundle, *depth),
        Cmd::Sample { count, qmax, seed, bins, out } => cmd_sample(*count, *qmax, *seed, *bins, out),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            println!("FAIL: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
