//! goodint: decide whether L divides A^K + B^K for some positive K, list
//! the admissible exponents, print the underlying split, enumerate good
//! moduli, and diff predictions against a brute-force oracle.
//!
//! Exit codes: 0 good / success, 1 bad, 2 usage or domain error, 3 internal
//! inconsistency (the oracle disagrees with the decision).

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use good_integers::goodness::classify_special_case;
use good_integers::integer_arith::carmichael_lambda;
use good_integers::oracle::{divides_power_sum, scan_exponents};
use good_integers::{decide_using, CoprimeCriterion, ExponentProgression, GoodnessVerdict};
use good_integers_cli::record::OutputRecord;

/// Default oracle bounds are refused beyond this (pass --bound explicitly).
const MAX_DEFAULT_BOUND: u64 = 10_000_000;

#[derive(Parser)]
#[command(name = "goodint", version, about = "Decide when L divides A^K + B^K")]
struct Cli {
    /// Emit one JSON record per line instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Cross-check every reported result against the brute-force oracle;
    /// any disagreement exits 3.
    #[arg(long, global = true)]
    verify: bool,

    /// Print nothing on stdout; the exit code carries the answer.
    #[arg(long, global = true)]
    quiet: bool,

    /// Decide the coprime core by its 2-adic order structure instead of the
    /// direct half-order test.
    #[arg(long, global = true)]
    structural: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Triple {
    /// Nonzero base A.
    #[arg(value_parser = parse_nonzero, allow_negative_numbers = true)]
    a: BigInt,
    /// Nonzero base B.
    #[arg(value_parser = parse_nonzero, allow_negative_numbers = true)]
    b: BigInt,
    /// Positive modulus L.
    #[arg(value_parser = parse_positive, allow_negative_numbers = true)]
    l: BigUint,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether L is good for (A, B).
    Check {
        #[command(flatten)]
        triple: Triple,
    },
    /// List admissible exponents of a good L.
    Exponents {
        #[command(flatten)]
        triple: Triple,
        /// Emit the first COUNT exponents (default 10).
        #[arg(long, conflicts_with = "limit")]
        count: Option<u64>,
        /// Emit every exponent up to LIMIT instead.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Print the split of L induced by g = gcd(A, B).
    Split {
        #[command(flatten)]
        triple: Triple,
    },
    /// Stream the good moduli up to N, one per line.
    Enumerate {
        /// Nonzero base A.
        #[arg(value_parser = parse_nonzero, allow_negative_numbers = true)]
        a: BigInt,
        /// Nonzero base B.
        #[arg(value_parser = parse_nonzero, allow_negative_numbers = true)]
        b: BigInt,
        /// Inclusive upper bound on L.
        n: u64,
    },
    /// Diff the predicted exponent set against an oracle scan.
    Verify {
        #[command(flatten)]
        triple: Triple,
        /// Scan bound (default 4*lambda(ell) + gamma + 4).
        #[arg(long)]
        bound: Option<u64>,
    },
}

fn parse_nonzero(s: &str) -> Result<BigInt, String> {
    let v: BigInt = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if v.is_zero() {
        return Err("must be nonzero".to_owned());
    }
    Ok(v)
}

fn parse_positive(s: &str) -> Result<BigUint, String> {
    let v: BigUint = s
        .parse()
        .map_err(|_| format!("`{s}` is not a nonnegative integer"))?;
    if v.is_zero() {
        return Err("must be positive".to_owned());
    }
    Ok(v)
}

/// A diagnostic plus the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn domain(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn inconsistency(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

/// Output gating: --quiet beats everything, --json switches stdout to
/// line-delimited records.
#[derive(Clone, Copy)]
struct Output {
    json: bool,
    quiet: bool,
}

impl Output {
    fn human(&self) -> bool {
        !self.json && !self.quiet
    }

    fn record(&self, record: &OutputRecord) {
        if self.json && !self.quiet {
            println!(
                "{}",
                serde_json::to_string(record).expect("record serialization cannot fail")
            );
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let criterion = if cli.structural {
        CoprimeCriterion::Structural
    } else {
        CoprimeCriterion::Direct
    };
    let out = Output {
        json: cli.json,
        quiet: cli.quiet,
    };
    match run(&cli.command, criterion, cli.verify, out) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("goodint: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: &Command, criterion: CoprimeCriterion, verify: bool, out: Output) -> Result<u8, Failure> {
    match command {
        Command::Check { triple } => cmd_check(triple, criterion, verify, out),
        Command::Exponents {
            triple,
            count,
            limit,
        } => cmd_exponents(triple, *count, *limit, criterion, verify, out),
        Command::Split { triple } => cmd_split(triple, criterion, out),
        Command::Enumerate { a, b, n } => cmd_enumerate(a, b, *n, criterion, verify, out),
        Command::Verify { triple, bound } => cmd_verify(triple, *bound, criterion, out),
    }
}

fn decide(triple: &Triple, criterion: CoprimeCriterion) -> Result<GoodnessVerdict, Failure> {
    decide_using(&triple.a, &triple.b, &triple.l, criterion).map_err(|e| domain(e.to_string()))
}

fn print_human_verdict(verdict: &GoodnessVerdict) {
    println!("verdict: {}", if verdict.good { "good" } else { "bad" });
    if let Some(step) = &verdict.failure_step {
        println!("failure_step: {step}");
    }
    println!("split: {}", verdict.context);
    if let Some(p) = &verdict.progression {
        println!("progression: {p}");
        println!("k_min: {}", p.k_min);
    }
    println!("special_case: {}", classify_special_case(&verdict.context).label());
}

fn cmd_check(
    triple: &Triple,
    criterion: CoprimeCriterion,
    verify: bool,
    out: Output,
) -> Result<u8, Failure> {
    let verdict = decide(triple, criterion)?;
    let preview = verdict
        .progression
        .as_ref()
        .map(|p| p.elements().take(5).map(|k| k.to_string()).collect());
    out.record(&OutputRecord::from_verdict(&verdict, preview));
    if out.human() {
        print_human_verdict(&verdict);
    }
    if verify {
        let bound = default_bound(&verdict)?;
        diff_progression(triple, verdict.progression.as_ref(), bound)?;
    }
    Ok(if verdict.good { 0 } else { 1 })
}

fn cmd_exponents(
    triple: &Triple,
    count: Option<u64>,
    limit: Option<u64>,
    criterion: CoprimeCriterion,
    verify: bool,
    out: Output,
) -> Result<u8, Failure> {
    let verdict = decide(triple, criterion)?;
    let Some(progression) = verdict.progression.clone() else {
        out.record(&OutputRecord::from_verdict(&verdict, None));
        let step = verdict
            .failure_step
            .as_ref()
            .expect("bad verdicts carry their failing step");
        eprintln!("goodint: {} is not good for ({}, {}): {step}", triple.l, triple.a, triple.b);
        return Ok(1);
    };
    let items: Vec<BigUint> = match (count, limit) {
        (Some(n), None) => {
            let n = usize::try_from(n).map_err(|_| domain("--count does not fit memory"))?;
            progression.elements().take(n).collect()
        }
        (None, Some(m)) => {
            let cap = BigUint::from(m);
            progression.elements().take_while(|k| *k <= cap).collect()
        }
        (None, None) => progression.elements().take(10).collect(),
        (Some(_), Some(_)) => return Err(domain("--count conflicts with --limit")),
    };
    if verify {
        for k in &items {
            if !divides_power_sum(&triple.a, &triple.b, &triple.l, k) {
                return Err(inconsistency(format!(
                    "oracle rejects K = {k} for ({}, {}, {})",
                    triple.a, triple.b, triple.l
                )));
            }
        }
    }
    let strings: Vec<String> = items.iter().map(ToString::to_string).collect();
    out.record(&OutputRecord::from_verdict(&verdict, Some(strings.clone())));
    if out.human() && !strings.is_empty() {
        println!("{}", strings.join(" "));
    }
    Ok(0)
}

fn cmd_split(triple: &Triple, criterion: CoprimeCriterion, out: Output) -> Result<u8, Failure> {
    let verdict = decide(triple, criterion)?;
    out.record(&OutputRecord::from_verdict(&verdict, None));
    if out.human() {
        println!("{}", verdict.context);
    }
    Ok(0)
}

fn cmd_enumerate(
    a: &BigInt,
    b: &BigInt,
    n: u64,
    criterion: CoprimeCriterion,
    verify: bool,
    out: Output,
) -> Result<u8, Failure> {
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    for l in 1..=n {
        let modulus = BigUint::from(l);
        let verdict =
            decide_using(a, b, &modulus, criterion).map_err(|e| domain(e.to_string()))?;
        if !verdict.good {
            continue;
        }
        if verify {
            let k_min = &verdict
                .progression
                .as_ref()
                .expect("good verdicts carry a progression")
                .k_min;
            if !divides_power_sum(a, b, &modulus, k_min) {
                return Err(inconsistency(format!(
                    "oracle rejects k_min = {k_min} for ({a}, {b}, {l})"
                )));
            }
        }
        if out.quiet {
            continue;
        }
        if out.json {
            let line = serde_json::to_string(&OutputRecord::from_verdict(&verdict, None))
                .expect("record serialization cannot fail");
            writeln!(w, "{line}").map_err(|e| domain(e.to_string()))?;
        } else {
            writeln!(w, "{l}").map_err(|e| domain(e.to_string()))?;
        }
    }
    Ok(0)
}

fn cmd_verify(
    triple: &Triple,
    bound: Option<u64>,
    criterion: CoprimeCriterion,
    out: Output,
) -> Result<u8, Failure> {
    let verdict = decide(triple, criterion)?;
    let bound = match bound {
        Some(b) => b,
        None => default_bound(&verdict)?,
    };
    diff_progression(triple, verdict.progression.as_ref(), bound)?;
    out.record(&OutputRecord::from_verdict(&verdict, None));
    if out.human() {
        println!("verified: decision and oracle agree for K = 1..{bound}");
    }
    Ok(0)
}

/// 4*lambda(ell) + gamma + 4: past k_min for every good L, since the
/// progression modulus divides lambda(ell).
fn default_bound(verdict: &GoodnessVerdict) -> Result<u64, Failure> {
    let ctx = &verdict.context;
    let bound = BigUint::from(4u32) * carmichael_lambda(&ctx.ell)
        + BigUint::from(ctx.gamma)
        + BigUint::from(4u32);
    bound
        .to_u64()
        .filter(|b| *b <= MAX_DEFAULT_BOUND)
        .ok_or_else(|| domain(format!("default oracle bound {bound} is too large; pass --bound")))
}

/// Exact diff of the predicted set against a fresh oracle scan on 1..=bound.
fn diff_progression(
    triple: &Triple,
    progression: Option<&ExponentProgression>,
    bound: u64,
) -> Result<(), Failure> {
    let oracle = scan_exponents(&triple.a, &triple.b, &triple.l, bound).admissible;
    let predicted: Vec<u64> = progression
        .map(|p| {
            let cap = BigUint::from(bound);
            p.elements()
                .take_while(|k| *k <= cap)
                .map(|k| k.to_u64().expect("bounded by a u64"))
                .collect()
        })
        .unwrap_or_default();
    if oracle == predicted {
        return Ok(());
    }
    let k = (1..=bound)
        .find(|k| oracle.binary_search(k).is_ok() != predicted.binary_search(k).is_ok())
        .expect("unequal sorted sets differ somewhere");
    Err(inconsistency(format!(
        "oracle and progression disagree at K = {k} for ({}, {}, {}) within 1..{bound}",
        triple.a, triple.b, triple.l
    )))
}
