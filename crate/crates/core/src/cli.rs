//! Command-line surface. Commands render into a [`CmdOutput`] instead of
//! printing, so they can be driven in-process.
//!
//! Exit codes: 0 all properties held, 1 a property failed, 2 usage or input
//! error, 3 search exhausted.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::SubLattice;
use crate::partition::{enumerate_partitions_capped, Partition, DEFAULT_MAX_N};
use crate::suites::{self, SuiteOptions, VerificationReport, DEFAULT_SEED};
use crate::transposition::{search_necessity_witness, SearchOutcome};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

/// Default largest `n` for exhaustive law suites.
pub const DEFAULT_SUITE_CAP: usize = 6;

#[derive(Debug, Parser)]
#[command(name = "eqlat", version, about = "Lattices of equivalence relations on finite sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every partition of {0,…,n-1} in restricted-growth order.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        cap: usize,
    },
    /// Run an exhaustive (or sampled) verification suite.
    Verify(VerifyArgs),
    /// Search for a witness that a hypothesis cannot be dropped.
    Search {
        kind: SearchKind,
        #[arg(long)]
        n: usize,
        /// Lattices to examine: Eq(n) first, then 2-generated sublattices.
        #[arg(long, default_value_t = 1)]
        max_lattices: usize,
    },
    /// List the members of an interval of a lattice file.
    Interval {
        #[command(flatten)]
        source: LatticeSource,
        #[arg(long)]
        lo: String,
        #[arg(long)]
        hi: String,
        /// Keep only members permuting with this partition.
        #[arg(long)]
        theta: Option<String>,
    },
    /// Export a lattice file.
    Export {
        kind: ExportKind,
        #[command(flatten)]
        source: LatticeSource,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Law {
    Dedekind,
    Transposition,
    Closure,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    Necessity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    Dot,
}

#[derive(Debug, Args)]
pub struct LatticeSource {
    #[arg(long)]
    pub lattice: PathBuf,
    /// Treat the listed partitions as generators and close them.
    #[arg(long)]
    pub close: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub law: Law,
    #[arg(long)]
    pub n: Option<usize>,
    /// Restrict L to the lattice in this file instead of Eq(n).
    #[arg(long)]
    pub lattice: Option<PathBuf>,
    #[arg(long)]
    pub close: bool,
    /// Largest n accepted for exhaustive runs.
    #[arg(long, default_value_t = DEFAULT_SUITE_CAP)]
    pub cap: usize,
    /// Check this many seeded random triples instead of all of them
    /// (dedekind only).
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Abort once the run exceeds this many seconds.
    #[arg(long)]
    pub max_seconds: Option<f64>,
    /// Record elapsed milliseconds in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct CmdOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl CmdOutput {
    fn ok(stdout: String, code: i32) -> Self {
        CmdOutput {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn usage(err: impl std::fmt::Display) -> Self {
        CmdOutput {
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
            code: EXIT_USAGE,
        }
    }
}

/// Runs one parsed command line. With `--out`, stdout goes to the file.
pub fn run(cli: &Cli) -> CmdOutput {
    let result = match &cli.command {
        Command::Enumerate { n, cap } => cmd_enumerate(*n, *cap, cli.format),
        Command::Verify(args) => cmd_verify(args, cli.format),
        Command::Search {
            kind: SearchKind::Necessity,
            n,
            max_lattices,
        } => cmd_search(*n, *max_lattices, cli.format),
        Command::Interval {
            source,
            lo,
            hi,
            theta,
        } => cmd_interval(source, lo, hi, theta.as_deref(), cli.format),
        Command::Export {
            kind: ExportKind::Dot,
            source,
        } => cmd_export_dot(source),
    };
    let mut out = match result {
        Ok(out) => out,
        Err(e) => return CmdOutput::usage(e),
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &out.stdout) {
            return CmdOutput::usage(format!("cannot write {}: {e}", path.display()));
        }
        out.stdout.clear();
    }
    out
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn lines<'a>(items: impl IntoIterator<Item = &'a Partition>) -> String {
    items.into_iter().fold(String::new(), |mut s, p| {
        let _ = writeln!(s, "{p}");
        s
    })
}

pub fn cmd_enumerate(n: usize, cap: usize, format: Format) -> Result<CmdOutput> {
    let all = enumerate_partitions_capped(n, cap)?;
    let stdout = match format {
        Format::Text => lines(&all),
        Format::Json => json(&all),
    };
    Ok(CmdOutput::ok(stdout, EXIT_PASS))
}

fn load_lattice(path: &PathBuf, close: bool) -> Result<SubLattice> {
    SubLattice::load(path, close).map_err(|e| match e {
        Error::Parse { line, message } => {
            Error::Malformed(format!("{}: line {line}: {message}", path.display()))
        }
        other => other,
    })
}

pub fn cmd_verify(args: &VerifyArgs, format: Format) -> Result<CmdOutput> {
    let options = SuiteOptions {
        timing: args.timing,
        budget: match args.max_seconds {
            Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
            Some(s) => return Err(Error::Malformed(format!("invalid --max-seconds {s}"))),
            None => None,
        },
    };

    let report = if let (Law::Dedekind, Some(samples)) = (args.law, args.samples) {
        if args.lattice.is_some() {
            return Err(Error::Malformed("--samples cannot be combined with --lattice".into()));
        }
        let n = args
            .n
            .ok_or_else(|| Error::Malformed("--n is required".into()))?;
        suites::dedekind_sampled(n, samples, args.seed, &options)?
    } else {
        let lattice = match (&args.lattice, args.n) {
            (Some(path), n) => {
                let l = load_lattice(path, args.close)?;
                if let Some(n) = n.filter(|&n| n != l.size()) {
                    return Err(Error::Malformed(format!(
                        "--n {n} disagrees with the lattice file (n={})",
                        l.size()
                    )));
                }
                l
            }
            (None, Some(n)) => SubLattice::full_capped(n, args.cap)?,
            (None, None) => return Err(Error::Malformed("--n or --lattice is required".into())),
        };
        if lattice.size() > args.cap {
            return Err(Error::CapExceeded {
                n: lattice.size(),
                cap: args.cap,
            });
        }
        match args.law {
            Law::Dedekind => suites::dedekind_suite(&lattice, &options)?,
            Law::Transposition => suites::transposition_suite(&lattice, &options)?,
            Law::Closure => suites::closure_suite(&lattice, &options)?,
            Law::Classical if args.lattice.is_some() => {
                suites::classical_suite(&lattice, &options)?
            }
            Law::Classical => suites::classical_generated_suite(&lattice, &options)?,
        }
    };

    let code = if report.pass { EXIT_PASS } else { EXIT_FAIL };
    let stdout = match format {
        Format::Json => json(&report),
        Format::Text => render_report(&report),
    };
    Ok(CmdOutput::ok(stdout, code))
}

fn render_report(r: &VerificationReport) -> String {
    let mut s = format!(
        "{} n={}: {} (cases_checked={}, failures={})\n",
        r.property,
        r.n,
        if r.pass { "PASS" } else { "FAIL" },
        r.cases_checked,
        r.failures.len()
    );
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(s, "elapsed: {ms} ms");
    }
    for o in &r.observations {
        let _ = writeln!(s, "observed: {o}");
    }
    for f in &r.failures {
        let _ = writeln!(s, "failure: {f}");
    }
    s
}

pub fn cmd_search(n: usize, max_lattices: usize, format: Format) -> Result<CmdOutput> {
    match search_necessity_witness(n, max_lattices)? {
        SearchOutcome::Found(w) => {
            let stdout = match format {
                Format::Json => json(&w),
                Format::Text => {
                    let mut s = format!(
                        "witness in a lattice of {} elements: eta={} theta={} ({:?})\n",
                        w.lattice.len(),
                        w.eta,
                        w.theta,
                        w.failure_kind
                    );
                    if let (Some(a), Some(img)) = (&w.alpha, &w.phi_image) {
                        let _ = writeln!(s, "phi({a}) = {img} does not permute with theta");
                    }
                    let _ = writeln!(s, "|upper| = {}, |lower| = {}", w.upper_len, w.lower_len);
                    s
                }
            };
            Ok(CmdOutput::ok(stdout, EXIT_PASS))
        }
        SearchOutcome::Exhausted { lattices, pairs } => {
            let stdout = match format {
                Format::Json => json(&serde_json::json!({
                    "exhausted": true,
                    "lattices": lattices,
                    "pairs": pairs,
                })),
                Format::Text => {
                    format!("exhausted: no witness in {lattices} lattice(s), {pairs} pair(s)\n")
                }
            };
            Ok(CmdOutput::ok(stdout, EXIT_EXHAUSTED))
        }
    }
}

pub fn cmd_interval(
    source: &LatticeSource,
    lo: &str,
    hi: &str,
    theta: Option<&str>,
    format: Format,
) -> Result<CmdOutput> {
    let lattice = load_lattice(&source.lattice, source.close)?;
    let n = lattice.size();
    let lo = Partition::parse_sized(lo, n)?;
    let hi = Partition::parse_sized(hi, n)?;
    let slice = match theta {
        Some(t) => lattice.interval_permuting(&lo, &hi, &Partition::parse_sized(t, n)?)?,
        None => lattice.interval(&lo, &hi)?,
    };
    let stdout = match format {
        Format::Text => lines(&slice.members),
        Format::Json => json(&slice.members),
    };
    Ok(CmdOutput::ok(stdout, EXIT_PASS))
}

pub fn cmd_export_dot(source: &LatticeSource) -> Result<CmdOutput> {
    let lattice = load_lattice(&source.lattice, source.close)?;
    Ok(CmdOutput::ok(lattice.to_dot(), EXIT_PASS))
}
