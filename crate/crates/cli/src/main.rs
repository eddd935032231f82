use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use telescope_core::arith::{is_prime_u64, Rational};
use telescope_core::cert::{
    bind_params, check_consistency, find_certificate, naive_sum_counted, reduce_counted, verify_numeric,
    verify_symbolic, CertError,
};
use telescope_core::congr::{self, CongrError, Profile, RunOptions, Status};
use telescope_core::dsl::{parse_polynomial, parse_problem, ProblemSpec};
use telescope_core::seq::{self, CacheRow, SequenceId};
use telescope_core::term::ParamValues;

const BENCH_MAX_N: i64 = 10_000;
const DEFAULT_KMAX: i64 = 20;
const CONSISTENCY_SAMPLE: usize = 50;

#[derive(Parser)]
#[command(name = "telescope", version, about = "Telescoping certificates for double sums and the congruences they prove")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// CSV file of sequence values, read before and written after the command.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    /// Worker threads for instance evaluation.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Print counters to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Check the certificate and closed forms in a problem file.
    Verify {
        file: PathBuf,
        /// Largest k for the pointwise check of G1, G2.
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: i64,
        /// Parameter value, `name=value`. Undeclared values default to 3, 5, 7, 11, ...
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Search for a certificate with the given denominators.
    Solve {
        file: PathBuf,
        #[arg(long)]
        d1: String,
        #[arg(long)]
        d2: String,
        /// Total degree bound on the numerators.
        #[arg(long, default_value_t = 3)]
        deg: u32,
    },
    /// Run registered congruence cases (`all` for every case).
    Check {
        #[arg(required = true)]
        cases: Vec<String>,
        #[arg(long, default_value = "quick")]
        profile: String,
        #[arg(long)]
        max_n: Option<u64>,
        #[arg(long)]
        max_p: Option<u64>,
    },
    /// Print sequence values for k = 0..=max as CSV.
    Seq {
        id: String,
        max: u64,
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Compare naive and reduced summation of a problem file at n.
    Bench {
        file: PathBuf,
        n: i64,
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
}

/// Command outcome: `Ok(true)` exits 0, `Ok(false)` exits 1, errors exit 2.
type Outcome = Result<bool>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    if let Some(path) = &cli.cache {
        load_cache(path)?;
    }
    let out = match &cli.command {
        Command::Verify { file, kmax, params } => cmd_verify(file, *kmax, params),
        Command::Solve { file, d1, d2, deg } => cmd_solve(file, d1, d2, *deg),
        Command::Check { cases, profile, max_n, max_p } => cmd_check(cli.format, cases, profile, *max_n, *max_p),
        Command::Seq { id, max, params } => cmd_seq(id, *max, params),
        Command::Bench { file, n, params } => cmd_bench(cli.format, file, *n, params),
    }?;
    if let Some(path) = &cli.cache {
        save_cache(path)?;
    }
    if cli.verbose {
        eprintln!("computed {}", seq::computed_count());
    }
    Ok(out)
}

fn read_problem(path: &Path) -> Result<ProblemSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_problem(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_assignments(raw: &[String]) -> Result<BTreeMap<String, Rational>> {
    raw.iter()
        .map(|a| {
            let (name, value) = a.split_once('=').ok_or_else(|| anyhow!("expected NAME=VALUE, got `{a}`"))?;
            let v: Rational = value.trim().parse().map_err(|_| anyhow!("bad value in `{a}`"))?;
            Ok((name.trim().to_string(), v))
        })
        .collect()
}

/// Values for every declared parameter: explicit ones first, the rest
/// 3, 5, 7, 11, ... in declaration order.
fn problem_params(spec: &ProblemSpec, raw: &[String]) -> Result<ParamValues> {
    let mut given = parse_assignments(raw)?;
    if let Some(unknown) = given.keys().find(|k| !spec.params.contains(k)) {
        bail!("`{unknown}` is not a declared parameter");
    }
    let mut defaults = (3u64..).filter(|&p| is_prime_u64(p));
    let mut out = ParamValues::new();
    for name in &spec.params {
        let d = defaults.next().expect("infinitely many primes");
        let v = given.remove(name).unwrap_or_else(|| Rational::from_integer(d.into()));
        out.insert(name.clone(), v);
    }
    Ok(out)
}

fn pass_word(ok: bool) -> &'static str {
    if ok { "pass" } else { "fail" }
}

fn cmd_verify(path: &Path, kmax: i64, raw: &[String]) -> Outcome {
    let spec = read_problem(path)?;
    let params = problem_params(&spec, raw)?;
    let cert = spec.certificate();
    let closed = spec.closed_pair();
    if cert.is_none() && closed.is_none() {
        bail!("{} has neither R1, R2 nor G1, G2", path.display());
    }
    let mut ok = true;
    if let Some(cert) = &cert {
        let r = verify_symbolic(&spec.f, cert);
        ok &= r.symbolic_pass;
        print!("symbolic: {}", pass_word(r.symbolic_pass));
        if r.details.is_empty() { println!() } else { println!(" ({})", r.details) }
    }
    if let Some(closed) = &closed {
        let r = verify_numeric(&spec.f, closed, kmax, &params)?;
        ok &= r.numeric_pass;
        print!(
            "numeric: {} (k <= {kmax}, {} points, {} skipped at poles)",
            pass_word(r.numeric_pass),
            r.checked_points,
            r.skipped_poles
        );
        if r.details.is_empty() { println!() } else { println!(" ({})", r.details) }
    }
    if let (Some(cert), Some(closed)) = (&cert, &closed) {
        let c = check_consistency(&spec.f, cert, closed, CONSISTENCY_SAMPLE)?;
        ok &= c;
        println!("consistency: {}", pass_word(c));
    }
    Ok(ok)
}

fn cmd_solve(path: &Path, d1: &str, d2: &str, deg: u32) -> Outcome {
    let spec = read_problem(path)?;
    let d1 = parse_polynomial(d1, &spec.ctx).context("parsing --d1")?;
    let d2 = parse_polynomial(d2, &spec.ctx).context("parsing --d2")?;
    match find_certificate(&spec.f, &d1, &d2, deg) {
        Ok(cert) => {
            let found = ProblemSpec { r1: Some(cert.r1), r2: Some(cert.r2), g1: None, g2: None, ..spec };
            print!("{found}");
            Ok(true)
        }
        Err(CertError::NotFound) => {
            println!("NotFound: no certificate with these denominators and degree <= {deg}");
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    case: &'a str,
    instance: &'a str,
    status: &'a str,
    lhs_mod: &'a str,
    rhs_mod: &'a str,
    modulus: &'a str,
}

fn cmd_check(format: Format, cases: &[String], profile: &str, max_n: Option<u64>, max_p: Option<u64>) -> Outcome {
    let profile: Profile = profile.parse()?;
    let ids: Vec<&str> = if cases.iter().any(|c| c == "all") {
        congr::case_ids()
    } else {
        cases.iter().map(String::as_str).collect()
    };
    let opts = RunOptions { profile, max_n, max_p };
    let reports = congr::run_selected(&ids, &opts).map_err(|e| match e {
        CongrError::UnknownCase(id) => anyhow!("unknown case `{id}`; known: {}", congr::case_ids().join(", ")),
        other => other.into(),
    })?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut ok = true;
    for r in &reports {
        ok &= r.passed();
        match format {
            Format::Jsonl => {
                for rec in &r.records {
                    let line = JsonRecord {
                        case: &rec.case,
                        instance: &rec.instance,
                        status: rec.status.as_str(),
                        lhs_mod: &rec.lhs_mod,
                        rhs_mod: &rec.rhs_mod,
                        modulus: &rec.modulus,
                    };
                    serde_json::to_writer(&mut out, &line)?;
                    writeln!(out)?;
                }
            }
            Format::Human => {
                let failures = r.failures().count();
                let verdict = if failures == 0 {
                    "pass"
                } else if r.failures().all(|f| f.status == Status::ConjectureFail) {
                    "conjecture-fail"
                } else {
                    "fail"
                };
                writeln!(
                    out,
                    "{:<10} {:<15} {:>5} instances {:>4} failures {:>8.2}s",
                    r.id,
                    verdict,
                    r.instances(),
                    failures,
                    r.elapsed.as_secs_f64()
                )?;
                for f in r.failures() {
                    write!(
                        out,
                        "  {} {}: lhs {} rhs {} mod {}",
                        f.status, f.instance, f.lhs_mod, f.rhs_mod, f.modulus
                    )?;
                    match &f.note {
                        Some(n) => writeln!(out, " ({n})")?,
                        None => writeln!(out)?,
                    }
                }
            }
        }
    }
    Ok(ok)
}

fn cmd_seq(id: &str, max: u64, raw: &[String]) -> Outcome {
    let id: SequenceId = id.parse()?;
    let mut given = parse_assignments(raw)?;
    let mut params = Vec::new();
    for name in id.param_names() {
        params.push(given.remove(*name).ok_or_else(|| anyhow!("{id} needs --param {name}=VALUE"))?);
    }
    if let Some(extra) = given.keys().next() {
        bail!("{id} has no parameter `{extra}`");
    }
    let key = seq::params_key(id, &params);
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(["sequence", "params", "k", "value"])?;
    for k in 0..=max {
        let v = seq::value(id, k, &params)?;
        w.write_record([id.name(), key.as_str(), &k.to_string(), &v.to_string()])?;
    }
    w.flush()?;
    Ok(true)
}

#[derive(Serialize)]
struct BenchRecord {
    n: i64,
    naive_value: String,
    naive_evaluations: u64,
    reduced_value: String,
    reduced_evaluations: u64,
    equal: bool,
}

fn cmd_bench(format: Format, path: &Path, n: i64, raw: &[String]) -> Outcome {
    if !(1..=BENCH_MAX_N).contains(&n) {
        bail!("n must be in 1..={BENCH_MAX_N}");
    }
    let spec = read_problem(path)?;
    let params = bind_params(&spec.ctx, n, &problem_params(&spec, raw)?);
    let problem = spec.to_problem();
    let closed = problem.boundary().ok_or_else(|| anyhow!("{} has no certificate or closed forms", path.display()))?;
    let t0 = Instant::now();
    let naive = naive_sum_counted(&problem.f, n, &params)?;
    let t1 = Instant::now();
    let reduced = reduce_counted(&problem.f, &closed, n, &params)?;
    let t2 = Instant::now();
    let equal = naive.value == reduced.value;
    match format {
        Format::Jsonl => {
            let rec = BenchRecord {
                n,
                naive_value: naive.value.to_string(),
                naive_evaluations: naive.evaluations,
                reduced_value: reduced.value.to_string(),
                reduced_evaluations: reduced.evaluations,
                equal,
            };
            println!("{}", serde_json::to_string(&rec)?);
        }
        Format::Human => {
            println!("n = {n}");
            println!("naive:   {} evaluations, {:.3}s", naive.evaluations, (t1 - t0).as_secs_f64());
            println!("reduced: {} evaluations, {:.3}s", reduced.evaluations, (t2 - t1).as_secs_f64());
            println!("value:   {}", reduced.value);
            println!("values {}", if equal { "equal" } else { "DIFFER" });
            if !equal {
                println!("naive value: {}", naive.value);
            }
        }
    }
    Ok(equal)
}

fn load_cache(path: &Path) -> Result<()> {
    if !path.exists() {
        return Ok(());
    }
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).map(str::to_string).ok_or_else(|| anyhow!("short cache row"));
        rows.push(CacheRow {
            sequence: field(0)?,
            params: field(1)?,
            k: field(2)?.parse().context("cache row index")?,
            value: field(3)?,
        });
    }
    seq::load_rows(rows)?;
    Ok(())
}

fn save_cache(path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(["sequence", "params", "k", "value"])?;
    for row in seq::cache_rows() {
        w.write_record([row.sequence, row.params, row.k.to_string(), row.value])?;
    }
    w.flush()?;
    Ok(())
}
