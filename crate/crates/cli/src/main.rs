use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use parity_core::arith::parse_rational;
use parity_core::corpus::{run, write_jsonl, RunOutcome};
use parity_core::curves::two_isogeny_pair;
use parity_core::localred::tate_algorithm;
use parity_core::parity::check_identity;
use parity_core::tatecurve::{isogenous_tate_check, DEFAULT_ORDER};
use parity_core::{CorpusSpec, Error, Family, IsogenyContext, Place, Range, RunOptions, WeierstrassModel};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "parity-lab", version, about = "Verify local and global parity identities over corpora of isogenous curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a corpus and verify every curve.
    Run(RunArgs),
    /// Check the Tate curve q-expansions.
    SeriesCheck {
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Local data of one curve at one place.
    Local {
        /// `{"a1": .., "a2": .., "a3": .., "a4": .., "a6": ..}`, or `{"a": .., "b": ..}`
        /// for the 2-isogeny family; values are integers or "n/d" strings.
        #[arg(long)]
        curve: String,
        /// A prime, or `inf`.
        #[arg(long)]
        prime: String,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_parser = ["two", "three"])]
    family: String,
    /// `a` (or `a1`) range, `LO:HI`.
    #[arg(long, allow_hyphen_values = true)]
    a_range: Option<String>,
    /// `b` (or `a3`) range, `LO:HI`.
    #[arg(long, allow_hyphen_values = true)]
    b_range: Option<String>,
    /// Comma-separated squarefree twists.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    twists: Option<Vec<i64>>,
    /// Multiply `b` by this factor (2-isogeny family).
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    b_mult: i64,
    #[arg(long)]
    max_curves: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    fail_fast: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Keep only this place in the per-curve reports.
    #[arg(long)]
    place: Option<String>,
    /// Skip the Selmer group computation.
    #[arg(long)]
    no_descent: bool,
}

const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::SeriesCheck { order } => cmd_series(order),
        Command::Local { curve, prime } => cmd_local(&curve, &prime),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}

fn build_spec(args: &RunArgs) -> Result<CorpusSpec, Error> {
    let family: Family = args.family.parse()?;
    let mut spec = match family {
        Family::Two => CorpusSpec::two_default(),
        Family::Three => CorpusSpec::three_default(),
    };
    if let Some(r) = &args.a_range {
        spec.a_range = r.parse::<Range>()?;
    }
    if let Some(r) = &args.b_range {
        spec.b_range = r.parse::<Range>()?;
    }
    if let Some(t) = &args.twists {
        spec.twists = t.clone();
    }
    spec.b_mult = args.b_mult;
    spec.max_curves = args.max_curves;
    spec.validate()?;
    Ok(spec)
}

fn cmd_run(args: RunArgs) -> Result<u8, Error> {
    let spec = build_spec(&args)?;
    let opts = RunOptions {
        seed: args.seed,
        jobs: args.jobs,
        fail_fast: args.fail_fast,
        place: args.place.as_deref().map(str::parse).transpose()?,
        descent: !args.no_descent,
    };
    let outcome = run(&spec, &opts)?;
    let io = |e: std::io::Error| Error::Parse(format!("writing output: {e}"));
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut out = BufWriter::new(File::create(&args.out).map_err(io)?);
    write_jsonl(&mut out, &outcome, timestamp).map_err(io)?;
    out.flush().map_err(io)?;
    if let Some(path) = &args.csv {
        write_csv(path, &outcome).map_err(|e| Error::Parse(format!("writing csv: {e}")))?;
    }
    let s = &outcome.summary;
    println!("curves {}  passed {}  failed {}  (of {} candidates)", s.curves, s.passed, s.failed, s.candidates);
    for (reason, n) in &s.skipped {
        println!("skipped {reason}: {n}");
    }
    for (class, n) in &s.failures {
        println!("failure {class}: {n}");
    }
    for (flag, n) in &s.flags {
        println!("flag {}: {n}", serde_json::to_value(flag).unwrap_or(Value::Null).as_str().unwrap_or("?"));
    }
    Ok(if outcome.all_passed() { 0 } else { 1 })
}

fn sign_str(s: Option<parity_core::Sign>) -> String {
    s.map(|s| s.to_string()).unwrap_or_default()
}

fn write_csv(path: &PathBuf, outcome: &RunOutcome) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["id", "family", "pass", "W", "S", "oracle", "failed_places", "failures"])?;
    for v in &outcome.verdicts {
        let failed: Vec<String> = v.places.iter().filter(|p| !p.identity_holds).map(|p| p.place.to_string()).collect();
        let failures: Vec<&str> = v.failures.iter().map(|(c, _)| c.as_str()).collect();
        w.write_record([
            v.id.clone(),
            format!("{:?}", v.family).to_lowercase(),
            v.pass.to_string(),
            sign_str(v.w),
            sign_str(v.s),
            sign_str(v.oracle),
            failed.join(" "),
            failures.join(" "),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_series(order: usize) -> Result<u8, Error> {
    match isogenous_tate_check(order) {
        Ok(r) => {
            println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "degree", "a4", "a6", "a4_dagger", "a6_dagger");
            for n in 0..=order {
                println!(
                    "{n:>6} {:>12} {:>12} {:>12} {:>12}",
                    r.a4.coeff(n).to_string(),
                    r.a6.coeff(n).to_string(),
                    r.a4_dagger.coeff(n).to_string(),
                    r.a6_dagger.coeff(n).to_string()
                );
            }
            println!("sqrt(a)     = {}", r.sqrt_a);
            println!("sqrt(delta) = {}", r.sqrt_delta);
            println!("ok: the isogenous curve is the Tate curve at q^2 through degree {order}");
            Ok(0)
        }
        Err(e @ Error::MismatchAtDegree { .. }) => {
            println!("{e}");
            Ok(1)
        }
        Err(e) => Err(e),
    }
}

fn field(obj: &serde_json::Map<String, Value>, key: &str) -> Result<Option<parity_core::BigRational>, Error> {
    match obj.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => parse_rational(s).map(Some),
        Some(Value::Number(n)) => parse_rational(&n.to_string()).map(Some),
        Some(v) => Err(Error::Parse(format!("{key}: expected a number or string, got {v}"))),
    }
}

fn cmd_local(curve: &str, prime: &str) -> Result<u8, Error> {
    let value: Value = serde_json::from_str(curve).map_err(|e| Error::Parse(format!("curve JSON: {e}")))?;
    let obj = value.as_object().ok_or_else(|| Error::Parse("curve JSON must be an object".into()))?;
    let place: Place = prime.parse()?;
    let out = if obj.contains_key("a") || obj.contains_key("b") {
        let a = field(obj, "a")?.ok_or_else(|| Error::Parse("missing a".into()))?;
        let b = field(obj, "b")?.ok_or_else(|| Error::Parse("missing b".into()))?;
        let ctx = IsogenyContext::Two(two_isogeny_pair(&a, &b)?);
        serde_json::to_value(check_identity(&ctx, place)?)
    } else {
        let mut a = Vec::new();
        for key in ["a1", "a2", "a3", "a4", "a6"] {
            a.push(field(obj, key)?.unwrap_or_default());
        }
        let [a1, a2, a3, a4, a6]: [_; 5] = a.try_into().expect("five coefficients");
        let model = WeierstrassModel::new(a1, a2, a3, a4, a6)?;
        let l = place.prime().ok_or_else(|| Error::Parse("Tate's algorithm needs a finite prime".into()))?;
        serde_json::to_value(tate_algorithm(&model, l)?)
    };
    let out = out.map_err(|e| Error::Parse(e.to_string()))?;
    println!("{}", json!(out));
    Ok(0)
}
