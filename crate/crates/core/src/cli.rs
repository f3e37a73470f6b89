//! The `fibrank` command line: single-value queries, range sweeps, golden
//! table reproduction, verification suites, and cache management.
//!
//! Exit codes: 0 success (all suites passed), 1 verification counterexample
//! or golden-table or backend mismatch, 2 usage error, 3 resource cap
//! exceeded (factoring budget, scan limit, iteration cap, search not found).
//! Every failure also writes one machine-parsable `error: code=... message`
//! line to stderr.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{classify_fixed_point_form, FixedPointForm};
use crate::dynamics::{trajectory, Trajectory};
use crate::rank::{Backend, ZCache, ZContext};
use crate::verify::{self, VerificationReport};
use crate::{nat, parse_nat, Error, Nat, Result};

#[derive(Parser)]
#[command(
    name = "fibrank",
    version,
    about = "Order of appearance z(n) in the Fibonacci sequence: queries, orbits, sweeps, and verification suites"
)]
struct Cli {
    /// Output format for results on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Load this prime-power cache before running and persist it afterwards.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Skip validation of loaded cache entries.
    #[arg(long, global = true)]
    trust_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Oracle,
    Fast,
    Crosscheck,
}

impl From<BackendArg> for Backend {
    fn from(arg: BackendArg) -> Backend {
        match arg {
            BackendArg::Oracle => Backend::Oracle,
            BackendArg::Fast => Backend::Fast,
            BackendArg::Crosscheck => Backend::CrossCheck,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Def2,
    Table2,
}

#[derive(Subcommand)]
enum Command {
    /// Compute z(n).
    Z {
        n: String,
        /// Single queries default to the cross-checked answer.
        #[arg(long, value_enum, default_value_t = BackendArg::Crosscheck)]
        backend: BackendArg,
    },
    /// Iterate z from n to its fixed point and print the whole orbit.
    Traj {
        n: String,
        /// Iteration cap; exceeding it is an error carrying the partial chain.
        #[arg(long, default_value_t = crate::dynamics::DEFAULT_ITERATION_CAP)]
        cap: u32,
        #[arg(long, value_enum, default_value_t = BackendArg::Fast)]
        backend: BackendArg,
    },
    /// Fixed point order of n.
    Order {
        n: String,
        #[arg(long, value_enum, default_value_t = ConventionArg::Table2)]
        convention: ConventionArg,
        #[arg(long, value_enum, default_value_t = BackendArg::Fast)]
        backend: BackendArg,
    },
    /// One record per n in [from, to]: n, z(n), order, terminal.
    Sweep {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Worker threads; output is byte-identical for any value.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        jobs: u32,
        /// Sweeps default to the fast backend for throughput.
        #[arg(long, value_enum, default_value_t = BackendArg::Fast)]
        backend: BackendArg,
    },
    /// List all fixed points up to a limit, with their form.
    FixedPoints {
        #[arg(long)]
        limit: String,
        #[arg(long, value_enum, default_value_t = BackendArg::Fast)]
        backend: BackendArg,
    },
    /// Smallest n whose fixed point order is exactly k.
    Search {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "100000")]
        limit: String,
        #[arg(long, value_enum, default_value_t = BackendArg::Fast)]
        backend: BackendArg,
    },
    /// Reproduce the built-in iteration table for n = 1..12 and diff it.
    Table1,
    /// Reproduce the built-in first-n-with-order table and diff it.
    Table2 {
        #[arg(long, default_value_t = 10)]
        kmax: u32,
        #[arg(long, default_value = "100000")]
        limit: String,
    },
    /// Run one verification suite by name, or all of them.
    Verify {
        /// Suite name or "all".
        suite: String,
        /// Suite parameter overrides, repeatable: --param n=1000
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
}

/// One line of machine-readable output. All `Nat`-valued fields are decimal
/// strings, so JSON and CSV round-trip without loss at any magnitude.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OutputRecord {
    ZQuery {
        n: String,
        z: String,
        backend: String,
    },
    Trajectory {
        start: String,
        iterates: Vec<String>,
        terminal: String,
        order_def2: u32,
        order_table2: u32,
    },
    Order {
        n: String,
        order: u32,
        convention: String,
        terminal: String,
    },
    Sweep {
        n: String,
        z: String,
        order_table2: u32,
        terminal: String,
    },
    FixedPoint {
        n: String,
        form: String,
        k: u32,
    },
    Search {
        k: u32,
        n: String,
        terminal: String,
    },
    Coverage {
        entries: Vec<CoverageEntry>,
    },
    Report(VerificationReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageEntry {
    pub suite: String,
    pub certifies: String,
}

impl OutputRecord {
    /// CSV header for this record kind.
    pub fn csv_header(&self) -> &'static str {
        match self {
            OutputRecord::ZQuery { .. } => "n,z,backend",
            OutputRecord::Trajectory { .. } => "start,terminal,order_def2,order_table2,iterates",
            OutputRecord::Order { .. } => "n,order,convention,terminal",
            OutputRecord::Sweep { .. } => "n,z,order_table2,terminal",
            OutputRecord::FixedPoint { .. } => "n,form,k",
            OutputRecord::Search { .. } => "k,n,terminal",
            OutputRecord::Coverage { .. } => "suite,certifies",
            OutputRecord::Report(_) => "suite,checked,passed",
        }
    }

    /// CSV row(s). Iterate chains are space-joined decimals, so every field
    /// stays comma-free and parses back losslessly.
    pub fn to_csv_rows(&self) -> Vec<String> {
        match self {
            OutputRecord::ZQuery { n, z, backend } => vec![format!("{n},{z},{backend}")],
            OutputRecord::Trajectory {
                start,
                iterates,
                terminal,
                order_def2,
                order_table2,
            } => vec![format!(
                "{start},{terminal},{order_def2},{order_table2},{}",
                iterates.join(" ")
            )],
            OutputRecord::Order {
                n,
                order,
                convention,
                terminal,
            } => vec![format!("{n},{order},{convention},{terminal}")],
            OutputRecord::Sweep {
                n,
                z,
                order_table2,
                terminal,
            } => vec![format!("{n},{z},{order_table2},{terminal}")],
            OutputRecord::FixedPoint { n, form, k } => vec![format!("{n},{form},{k}")],
            OutputRecord::Search { k, n, terminal } => vec![format!("{k},{n},{terminal}")],
            OutputRecord::Coverage { entries } => entries
                .iter()
                .map(|e| format!("{},{}", e.suite, e.certifies.replace(',', ";")))
                .collect(),
            OutputRecord::Report(r) => vec![format!("{},{},{}", r.suite, r.checked, r.passed)],
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            OutputRecord::ZQuery { n, z, .. } => format!("z({n}) = {z}"),
            OutputRecord::Trajectory {
                start,
                iterates,
                terminal,
                order_def2,
                order_table2,
            } => format!(
                "trajectory({start}): {}\norder(def2) = {order_def2}, order(table2) = {order_table2}, terminal = {terminal}",
                iterates.join(" ")
            ),
            OutputRecord::Order { n, order, terminal, .. } => {
                format!("order({n}) = {order} (terminal {terminal})")
            }
            OutputRecord::Sweep {
                n,
                z,
                order_table2,
                terminal,
            } => format!("{n} {z} {order_table2} {terminal}"),
            OutputRecord::FixedPoint { n, form, k } => match form.as_str() {
                "power_of_five" => format!("{n} = 5^{k}"),
                _ => format!("{n} = 12*5^{k}"),
            },
            OutputRecord::Search { k, n, terminal } => {
                format!("first n with order {k}: {n} (terminal {terminal})")
            }
            OutputRecord::Coverage { entries } => {
                let mut out = String::from("coverage:");
                for e in entries {
                    out.push_str(&format!("\n  {} — {}", e.suite, e.certifies));
                }
                out
            }
            OutputRecord::Report(r) => r.to_text(),
        }
    }
}

fn emit(records: &[OutputRecord], format: Format) {
    match format {
        Format::Text => {
            for record in records {
                println!("{}", record.to_text());
            }
        }
        Format::Json => {
            for record in records {
                println!(
                    "{}",
                    serde_json::to_string(record).expect("records serialize")
                );
            }
        }
        Format::Csv => {
            let mut header: Option<&str> = None;
            for record in records {
                if header != Some(record.csv_header()) {
                    println!("{}", record.csv_header());
                    header = Some(record.csv_header());
                }
                for row in record.to_csv_rows() {
                    println!("{row}");
                }
            }
        }
    }
}

fn form_fields(form: FixedPointForm) -> (String, u32) {
    match form {
        FixedPointForm::PowerOfFive(k) => ("power_of_five".into(), k),
        FixedPointForm::TwelveTimesPowerOfFive(k) => ("twelve_times_power_of_five".into(), k),
        FixedPointForm::Neither => ("neither".into(), 0),
    }
}

fn trajectory_record(t: &Trajectory) -> OutputRecord {
    OutputRecord::Trajectory {
        start: t.start.to_string(),
        iterates: t.iterates.iter().map(|x| x.to_string()).collect(),
        terminal: t.terminal.to_string(),
        order_def2: t.order_def2,
        order_table2: t.order_table2,
    }
}

fn sweep_record(t: &Trajectory) -> OutputRecord {
    // z(n) is the first iterate; for a fixed start it is the start itself
    let z = if t.order_def2 == 0 {
        t.start.clone()
    } else {
        t.iterates[0].clone()
    };
    OutputRecord::Sweep {
        n: t.start.to_string(),
        z: z.to_string(),
        order_table2: t.order_table2,
        terminal: t.terminal.to_string(),
    }
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for item in raw {
        let Some((key, value)) = item.split_once('=') else {
            return Err(Error::InvalidInput(format!(
                "--param expects NAME=VALUE, got {item:?}"
            )));
        };
        out.insert(key.to_string(), value.to_string());
    }
    Ok(out)
}

fn limit_as_u64(limit: &Nat, what: &str) -> Result<u64> {
    limit.to_u64().ok_or_else(|| Error::ResourceExceeded {
        what: format!("{what} up to {limit}"),
        limit: "bounds beyond u64 are not scannable".into(),
    })
}

/// Partition `[from, from+count)` across `jobs` workers, compute sweep
/// records, and reassemble in range order. Chunk boundaries never influence
/// the records, so output bytes are independent of `jobs`.
fn run_sweep(from: &Nat, count: u64, jobs: u32, ctx: &ZContext) -> Result<Vec<OutputRecord>> {
    let jobs = (jobs as u64).min(count).max(1);
    let chunk = count.div_ceil(jobs);
    let results: Vec<Result<Vec<OutputRecord>>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..jobs {
            let lo = w * chunk;
            let hi = ((w + 1) * chunk).min(count);
            let start = from + nat(lo);
            handles.push(scope.spawn(move || -> Result<Vec<OutputRecord>> {
                let mut records = Vec::with_capacity((hi.saturating_sub(lo)) as usize);
                let mut n = start;
                for _ in lo..hi {
                    let t = trajectory(&n, crate::dynamics::DEFAULT_ITERATION_CAP, ctx)?;
                    records.push(sweep_record(&t));
                    n += 1u32;
                }
                Ok(records)
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(count as usize);
    for worker in results {
        out.extend(worker?);
    }
    Ok(out)
}

fn execute(cli: &Cli) -> Result<i32> {
    let cache = match &cli.cache {
        Some(path) if path.exists() => ZCache::load(path, cli.trust_cache)?,
        _ => ZCache::new(),
    };
    let context = |backend: BackendArg| ZContext::with_cache(backend.into(), cache);

    let (records, exit_code, ctx) = match &cli.command {
        Command::Z { n, backend } => {
            let ctx = context(*backend);
            let value = ctx.z(&parse_nat(n)?)?;
            let record = OutputRecord::ZQuery {
                n: value.n.to_string(),
                z: value.z.to_string(),
                backend: match value.backend {
                    Backend::Oracle => "oracle".into(),
                    _ => "fast".into(),
                },
            };
            (vec![record], 0, ctx)
        }
        Command::Traj { n, cap, backend } => {
            let ctx = context(*backend);
            let t = trajectory(&parse_nat(n)?, *cap, &ctx)?;
            (vec![trajectory_record(&t)], 0, ctx)
        }
        Command::Order {
            n,
            convention,
            backend,
        } => {
            let ctx = context(*backend);
            let t = trajectory(&parse_nat(n)?, crate::dynamics::DEFAULT_ITERATION_CAP, &ctx)?;
            let (order, name) = match convention {
                ConventionArg::Def2 => (t.order_def2, "def2"),
                ConventionArg::Table2 => (t.order_table2, "table2"),
            };
            let record = OutputRecord::Order {
                n: t.start.to_string(),
                order,
                convention: name.into(),
                terminal: t.terminal.to_string(),
            };
            (vec![record], 0, ctx)
        }
        Command::Sweep {
            from,
            to,
            jobs,
            backend,
        } => {
            let ctx = context(*backend);
            let from = parse_nat(from)?;
            let to = parse_nat(to)?;
            if from > to || from == nat(0) {
                return Err(Error::InvalidInput(
                    "sweep needs 1 <= from <= to".into(),
                ));
            }
            let count = limit_as_u64(&(&to - &from + 1u32), "sweep range")?;
            let records = run_sweep(&from, count, *jobs, &ctx)?;
            (records, 0, ctx)
        }
        Command::FixedPoints { limit, backend } => {
            let ctx = context(*backend);
            let limit = limit_as_u64(&parse_nat(limit)?, "fixed point listing")?;
            let mut records = Vec::new();
            for n in 1..=limit {
                let value = nat(n);
                if ctx.z(&value)?.z == value {
                    let (form, k) = form_fields(classify_fixed_point_form(&value));
                    records.push(OutputRecord::FixedPoint {
                        n: n.to_string(),
                        form,
                        k,
                    });
                }
            }
            (records, 0, ctx)
        }
        Command::Search { k, limit, backend } => {
            let ctx = context(*backend);
            let limit = parse_nat(limit)?;
            let n = crate::dynamics::smallest_n_with_order(*k, &limit, &ctx)?;
            let terminal = crate::dynamics::terminal_fixed_point(&n, &ctx)?;
            let record = OutputRecord::Search {
                k: *k,
                n: n.to_string(),
                terminal: terminal.to_string(),
            };
            (vec![record], 0, ctx)
        }
        Command::Table1 => {
            let ctx = context(BackendArg::Fast);
            let report = verify::reproduce_trajectory_table(&ctx)?;
            let code = if report.passed { 0 } else { 1 };
            (vec![OutputRecord::Report(report)], code, ctx)
        }
        Command::Table2 { kmax, limit } => {
            let ctx = context(BackendArg::Fast);
            let report = verify::reproduce_order_table(*kmax, &parse_nat(limit)?, &ctx)?;
            let code = if report.passed { 0 } else { 1 };
            (vec![OutputRecord::Report(report)], code, ctx)
        }
        Command::Verify { suite, params } => {
            let ctx = context(BackendArg::Fast);
            let params = parse_params(params)?;
            let mut records = Vec::new();
            let mut all_passed = true;
            if suite == "all" {
                let entries = verify::coverage_ledger()
                    .into_iter()
                    .map(|(suite, certifies)| CoverageEntry {
                        suite: suite.to_string(),
                        certifies: certifies.to_string(),
                    })
                    .collect();
                records.push(OutputRecord::Coverage { entries });
                for name in verify::SUITE_NAMES {
                    // under "all", every suite picks out just the overrides it knows
                    let relevant: BTreeMap<String, String> = params
                        .iter()
                        .filter(|(k, _)| verify::suite_params(name).contains(&k.as_str()))
                        .map(|(k, v)| (k.clone(), v.clone()))
                        .collect();
                    let report = verify::run_suite(name, &relevant, &ctx)?;
                    all_passed &= report.passed;
                    records.push(OutputRecord::Report(report));
                }
            } else {
                let report = verify::run_suite(suite, &params, &ctx)?;
                all_passed = report.passed;
                records.push(OutputRecord::Report(report));
            }
            (records, if all_passed { 0 } else { 1 }, ctx)
        }
    };

    emit(&records, cli.format);
    if let Some(path) = &cli.cache {
        ctx.cache.store(path)?;
    }
    Ok(exit_code)
}

fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::BackendMismatch { .. }
        | Error::FormMismatch { .. }
        | Error::ScanBoundViolation { .. } => 1,
        Error::ResourceExceeded { .. }
        | Error::IterationCapExceeded { .. }
        | Error::NotFound { .. } => 3,
        Error::InvalidInput(_)
        | Error::CacheParse { .. }
        | Error::CacheEntry { .. }
        | Error::Io(_) => 2,
    }
}

/// Parse `argv` and run the tool, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            // keep --help/--version on stdout with exit 0; usage errors exit 2
            let code = if err.use_stderr() { 2 } else { 0 };
            err.print().expect("clap error rendering");
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: code={} message={error}", error.code());
            exit_code_for(&error)
        }
    }
}
