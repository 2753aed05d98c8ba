use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use gauss_periods::ducci::{self, CorollaryOptions, DucciAnalyzer, DucciState, StartPeriod};
use gauss_periods::experiments::{self, ScanConfig, ScanFilter};
use gauss_periods::heuristics::{self, HeuristicConstants};
use gauss_periods::{identities, quadratic, Error};

/// Orders of Gauss periods, fundamental units and class numbers.
#[derive(Debug, Parser)]
#[command(name = "gauss-periods", version)]
struct Cli {
    /// Format of stdout: a JSON report, or CSV rows for commands that
    /// produce them.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Suppress progress messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare gcd(ind(ζ+ζ⁻¹), q²-1) with ind(ε_p^h mod q) for one pair.
    VerifyTheorem {
        /// Prime p ≡ 1 mod 4.
        #[arg(long)]
        p: u64,
        /// Prime q.
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        cap: TheoremCap,
    },
    /// Compare both sides for every valid pair with p <= p-max.
    VerifyTheoremRange {
        /// Largest p checked.
        #[arg(long)]
        p_max: u64,
        /// Comma-separated primes q.
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11,13,17,19")]
        q_set: Vec<u64>,
        #[command(flatten)]
        cap: TheoremCap,
    },
    /// Predicted distribution of ind(ε_p mod q).
    Predict {
        /// Prime q.
        #[arg(long)]
        q: u64,
    },
    /// Observed distribution of ind(ε_p mod q) over primes p <= p-max.
    Scan(ScanArgs),
    /// Exact norm and product identities for primes p ≡ 1 mod 4.
    Identities {
        /// Largest p checked.
        #[arg(long)]
        p_max: u64,
    },
    /// h_p, h(-p) and the residue count m for one prime p ≡ 1 mod 4.
    ClassNumbers {
        /// Prime p ≡ 1 mod 4.
        #[arg(long)]
        p: u64,
        /// Working precision in bits; by default it is raised until the
        /// result is certified.
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Eventual periods of Ducci sequences of length p.
    Ducci(DucciArgs),
    /// Heuristic densities and the Gao-Vanstone estimate.
    Heuristics {
        /// Use C = 0.66 instead of the full twin prime constant.
        #[arg(long)]
        rounded_c: bool,
        /// Also evaluate the finite prime sum up to the given bounds.
        #[arg(long)]
        cross_check: bool,
        #[arg(long, default_value_t = 100_000)]
        sg_r_max: u64,
        #[arg(long, default_value_t = 10_000_000)]
        sg_l_max: u64,
    },
}

#[derive(Debug, Args)]
struct TheoremCap {
    /// Largest p accepted.
    #[arg(long, env = "GAUSS_PERIODS_P_CAP", default_value_t = experiments::DEFAULT_THEOREM_P_CAP)]
    p_cap: u64,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Prime q.
    #[arg(long)]
    q: u64,
    #[arg(long, env = "GAUSS_PERIODS_SCAN_P_MAX", default_value_t = 1_000_000)]
    p_max: u64,
    #[arg(long, value_enum, default_value_t = FilterArg::OneMod4)]
    filter: FilterArg,
    /// Resumable checkpoint file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, env = "GAUSS_PERIODS_JOBS", default_value_t = 0)]
    jobs: usize,
    /// Write the per-prime CSV here.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FilterArg {
    #[value(name = "1mod4")]
    OneMod4,
    #[value(name = "5mod8")]
    FiveMod8,
}

impl From<FilterArg> for ScanFilter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::OneMod4 => ScanFilter::OneMod4,
            FilterArg::FiveMod8 => ScanFilter::FiveMod8,
        }
    }
}

#[derive(Debug, Args)]
struct DucciArgs {
    /// Odd prime length of the sequences.
    #[arg(long)]
    p: u64,
    /// Every start in {0,1}^p.
    #[arg(long, conflicts_with_all = ["samples", "seed"])]
    exhaustive: bool,
    /// Number of random integer starts.
    #[arg(long, env = "GAUSS_PERIODS_DUCCI_SAMPLES", default_value_t = 1000)]
    samples: usize,
    /// Seed for the random starts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Entries of random starts are below this.
    #[arg(long, default_value_t = 1 << 16)]
    entry_bound: u64,
    #[arg(long, env = "GAUSS_PERIODS_DUCCI_MAX_STEPS", default_value_t = 1 << 20)]
    max_steps: u64,
    /// Write the per-start CSV here.
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    /// A checked statement did not hold; the report is still printed.
    Assertion(Value),
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::HypothesisViolated { .. }
            | Error::InvalidInput(_)
            | Error::NotInert { .. }
            | Error::NotADivisor { .. }
            | Error::CheckpointCorrupt { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<Output, Failure>;

enum Output {
    Json(Value),
    Text(String),
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

struct Progress {
    quiet: bool,
}

impl Progress {
    fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn verify_theorem(p: u64, q: u64, p_cap: u64) -> Outcome {
    let report = experiments::check_main_theorem_with_cap(p, q, p_cap)?;
    let value = to_value(&report);
    if report.equal {
        Ok(Output::Json(value))
    } else {
        Err(Failure::Assertion(value))
    }
}

fn verify_theorem_range(p_max: u64, q_set: &[u64], p_cap: u64, progress: &Progress) -> Outcome {
    if p_max > p_cap {
        return Err(Failure::Usage(format!("p-max {p_max} exceeds the cap {p_cap}")));
    }
    let mut reports = Vec::new();
    for &q in q_set {
        if !gauss_periods::is_prime_u64(q) {
            return Err(Failure::Usage(format!("q = {q} is not prime")));
        }
        let primes = experiments::theorem_primes(q, p_max);
        progress.say(format!("q = {q}: {} primes", primes.len()));
        for p in primes {
            let r = experiments::check_main_theorem_with_cap(p, q, p_cap)?;
            if !r.equal {
                return Err(Failure::Assertion(json!({
                    "first_failure": to_value(&r),
                    "checked": reports.len() + 1,
                })));
            }
            reports.push(r);
        }
    }
    Ok(Output::Json(json!({
        "p_max": p_max,
        "q_set": q_set,
        "checked": reports.len(),
        "all_equal": true,
        "reports": reports,
    })))
}

fn predict(q: u64) -> Outcome {
    let dist = experiments::predict_distribution(q)?;
    Ok(Output::Json(experiments::ratio_map_json(&dist)))
}

fn scan(args: &ScanArgs, format: Format, progress: &Progress) -> Outcome {
    let config = ScanConfig {
        q: args.q,
        p_max: args.p_max,
        filter: args.filter.into(),
        checkpoint: args.checkpoint.clone(),
        jobs: args.jobs,
    };
    let out = experiments::scan_observed_with_progress(&config, |done, total| {
        progress.say(format!("scan q = {}: block {done}/{total}", args.q));
    })?;
    if let Some(path) = &args.output {
        let mut w = BufWriter::new(File::create(path)?);
        out.write_csv(&mut w)?;
        w.flush()?;
    }
    let predicted = experiments::predict_distribution(args.q)?;
    let mut summary = out.table.summary_json(&predicted);
    let outside: Vec<u64> = out
        .table
        .counts
        .keys()
        .copied()
        .filter(|i| !predicted.contains_key(i))
        .collect();
    let mut ok = outside.is_empty();
    if args.q != 2 {
        let ik = experiments::ik_check(args.q, &out.records)?;
        ok &= ik.holds();
        summary["ik_counterexample"] = to_value(&ik.counterexample);
    }
    if format == Format::Csv {
        let mut buf = Vec::new();
        out.write_csv(&mut buf)?;
        let text = String::from_utf8(buf).expect("CSV is ASCII");
        return if ok {
            Ok(Output::Text(text))
        } else {
            Err(Failure::Assertion(summary))
        };
    }
    if ok {
        Ok(Output::Json(summary))
    } else {
        summary["indices_outside_prediction"] = to_value(&outside);
        Err(Failure::Assertion(summary))
    }
}

fn identities_cmd(p_max: u64, progress: &Progress) -> Outcome {
    let primes: Vec<u64> = gauss_periods::primes_up_to(p_max)
        .into_iter()
        .filter(|p| p % 4 == 1)
        .collect();
    let mut rows = Vec::new();
    let mut first_failure = None;
    for p in primes {
        progress.say(format!("identities p = {p}"));
        let one = identities::norm_identity_one(p)?;
        let two = identities::norm_identity_two(p)?;
        let sun: Vec<_> = (1..=3)
            .map(|a| identities::sun_identity(p, a))
            .collect::<Result<_, _>>()?;
        let all = one.holds && two.holds && sun.iter().all(|s| s.holds);
        if !all && first_failure.is_none() {
            first_failure = Some(p);
        }
        rows.push(json!({
            "p": p,
            "norm_identity_one": one,
            "norm_identity_two": two,
            "product_formula": sun,
            "holds": all,
        }));
    }
    let report = json!({
        "p_max": p_max,
        "checked": rows.len(),
        "first_failure": first_failure,
        "results": rows,
    });
    if first_failure.is_none() {
        Ok(Output::Json(report))
    } else {
        Err(Failure::Assertion(report))
    }
}

fn class_numbers(p: u64, precision: Option<usize>) -> Outcome {
    let mut data = to_value(&quadratic::class_data(p)?);
    if let Some(bits) = precision {
        data["h_real"] = quadratic::class_number_real(p, bits)?.into();
        data["precision_bits"] = bits.into();
    }
    let unit = quadratic::fundamental_unit(p)?;
    data["unit_x"] = unit.x.to_string().into();
    data["unit_y"] = unit.y.to_string().into();
    Ok(Output::Json(data))
}

fn ducci_cmd(args: &DucciArgs, format: Format, progress: &Progress) -> Outcome {
    let p = args.p as usize;
    let analyzer = DucciAnalyzer::new(p)?;
    let starts: Vec<DucciState> = if args.exhaustive {
        ducci::exhaustive_binary_starts(p)?
    } else {
        ducci::random_starts(p, args.samples, args.entry_bound, args.seed)?
    };
    progress.say(format!("ducci p = {p}: {} starts", starts.len()));
    let rows = ducci::periods_of(&analyzer, &starts, args.max_steps)?;
    let csv = periods_csv(&rows);
    if let Some(path) = &args.output {
        std::fs::write(path, &csv)?;
    }

    let primitive = gauss_periods::arith::order_mod_prime(2, args.p)? == args.p - 1;
    let mut ok = true;
    let mut report = json!({
        "p": args.p,
        "starts": rows.len(),
        "exhaustive": args.exhaustive,
        "seed": args.seed,
        "max_period": rows.iter().map(|r| r.period).max(),
    });
    if primitive {
        let algebraic = ducci::algebraic_period(args.p)?;
        let not_dividing = rows
            .iter()
            .find(|r| &algebraic % BigUint::from(r.period) != BigUint::from(0u8));
        ok &= not_dividing.is_none();
        report["algebraic_period"] = algebraic.to_string().into();
        report["period_not_dividing"] = to_value(&not_dividing);
        if args.p % 8 == 5 {
            let options = CorollaryOptions {
                exhaustive_max_p: if args.exhaustive { p } else { 0 },
                samples: if args.exhaustive { 0 } else { args.samples },
                entry_bound: args.entry_bound,
                seed: args.seed,
                max_steps: args.max_steps,
            };
            let cor = ducci::verify_corollary(args.p, options)?;
            ok &= cor.consistent;
            report["equivalences"] = to_value(&cor);
        }
    }
    match (ok, format) {
        (true, Format::Csv) => Ok(Output::Text(csv)),
        (true, Format::Json) => Ok(Output::Json(report)),
        (false, _) => Err(Failure::Assertion(report)),
    }
}

fn periods_csv(rows: &[StartPeriod]) -> String {
    let mut s = String::from("p,start_encoding,transient,period\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{}\n", r.p, r.start_encoding, r.transient, r.period));
    }
    s
}

fn heuristics_cmd(rounded_c: bool, cross_check: bool, r_max: u64, l_max: u64) -> Outcome {
    let constants = HeuristicConstants::compute(rounded_c);
    let mut report = to_value(&constants);
    if cross_check {
        let sum = heuristics::sophie_germain_sum(593, r_max, l_max);
        report["prime_sum"] = json!({
            "r_min": 593,
            "r_max": r_max,
            "l_max": l_max,
            "value": sum,
            "below_integral": sum < constants.gv_expectation,
        });
        if sum >= constants.gv_expectation {
            return Err(Failure::Assertion(report));
        }
    }
    Ok(Output::Json(report))
}

fn dispatch(cli: &Cli) -> Outcome {
    let progress = Progress { quiet: cli.quiet };
    match &cli.command {
        Command::VerifyTheorem { p, q, cap } => verify_theorem(*p, *q, cap.p_cap),
        Command::VerifyTheoremRange { p_max, q_set, cap } => {
            verify_theorem_range(*p_max, q_set, cap.p_cap, &progress)
        }
        Command::Predict { q } => predict(*q),
        Command::Scan(args) => scan(args, cli.format, &progress),
        Command::Identities { p_max } => identities_cmd(*p_max, &progress),
        Command::ClassNumbers { p, precision } => class_numbers(*p, *precision),
        Command::Ducci(args) => ducci_cmd(args, cli.format, &progress),
        Command::Heuristics {
            rounded_c,
            cross_check,
            sg_r_max,
            sg_l_max,
        } => heuristics_cmd(*rounded_c, *cross_check, *sg_r_max, *sg_l_max),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &Value) {
    emit(&(serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(Output::Json(v)) => {
            print_json(&v);
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            emit(&t);
            ExitCode::SUCCESS
        }
        Err(Failure::Assertion(v)) => {
            print_json(&v);
            eprintln!("error: assertion failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            print_json(&json!({ "error": msg }));
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            print_json(&json!({ "error": msg }));
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
