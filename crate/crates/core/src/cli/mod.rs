//! Command-line front end.
//!
//! Exit codes: 0 clean, 1 criterion failure or mismatch, 2 usage, 3 resource
//! cap.

pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::design::{ard_params, bh_family, complement, derive_params, ArdParams, QsdParams};
use crate::equivalence::{polynomial_grid_mismatches, sample_domain, verify_all};
use crate::oracle::{build_6_3_2, build_pair_design, build_witt_23, verify_design, ExplicitDesign};
use crate::rational::fmt_q;
use crate::scanner::{
    classify, reproduce_tables, scan, Filter, ScanError, ScanRange, Status, DEFAULT_CANDIDATE_CAP,
    DEFAULT_LAMBDA_MAX,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qsd", version, about = "Feasibility checks for quasisymmetric 2-designs")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Worker threads for parallel work (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Tuple {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub x: u64,
    pub y: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one parameter set 2-(v,k,lambda) with intersections x, y.
    Check(Tuple),
    /// Classify every parameter set in a range.
    Scan(ScanArgs),
    /// Recompute the two embedded tables.
    Tables,
    /// Parameter families.
    Family {
        #[command(subcommand)]
        family: Family,
    },
    /// Parameters of the complementary design.
    Complement(Tuple),
    /// Check the H <=> C <=> N chain on sampled rational tuples.
    Equivalence {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Build explicit designs and compare literal counts with the formulas.
    Oracle {
        /// Write each design in the plain text format to this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Blokhuis–Haemers: v = q^3, q a power of two.
    Bh {
        #[arg(long)]
        q: u64,
    },
    /// Affine resolvable design ARD(n,t).
    Ard {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: u64,
    },
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 4)]
    pub v_min: u64,
    #[arg(long)]
    pub v_max: u64,
    #[arg(long)]
    pub k_max: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_LAMBDA_MAX)]
    pub lambda_max: u64,
    /// Only print parameter sets not ruled out by a local criterion.
    #[arg(long)]
    pub survivors: bool,
    /// Scan all k < v instead of k <= v/2.
    #[arg(long)]
    pub all_k: bool,
    /// Do not require integral block-graph eigenvalues.
    #[arg(long)]
    pub relax_eigen: bool,
    /// Disable a filter (repeatable).
    #[arg(long = "disable", value_name = "FILTER")]
    pub disable: Vec<Filter>,
    /// Maximum number of candidates before giving up with exit 3.
    #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
    pub cap: u128,
}

impl ScanArgs {
    pub fn range(&self) -> ScanRange {
        let mut r = ScanRange::up_to(self.v_max);
        r.v_min = self.v_min;
        r.k_max = self.k_max;
        r.lambda_max = self.lambda_max;
        r.survivors_only = self.survivors;
        r.canonical_half = !self.all_k;
        r.candidate_cap = self.cap;
        if self.relax_eigen {
            r.filters.remove(&Filter::SrgIntegrality);
        }
        for f in &self.disable {
            r.filters.remove(f);
        }
        r
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }
    fn with(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }
    fn err(code: i32, msg: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match cli.threads {
        Some(0) => Outcome::err(EXIT_USAGE, "--threads must be at least 1"),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Outcome::err(EXIT_USAGE, e),
        },
        None => dispatch(&cli),
    }
}

/// Runs with the process arguments and writes to stdout/stderr.
pub fn main_exit_code() -> i32 {
    let out = run(std::env::args_os());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.code
}

fn dispatch(cli: &Cli) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Check(t) => match QsdParams::new(t.v, t.k, t.lambda, t.x, t.y) {
            Ok(p) => cmd_check(&p, fmt, None),
            Err(e) => Outcome::err(EXIT_USAGE, e),
        },
        Command::Scan(a) => cmd_scan(&a.range(), fmt),
        Command::Tables => cmd_tables(fmt),
        Command::Family { family } => cmd_family(family, fmt),
        Command::Complement(t) => match QsdParams::new(t.v, t.k, t.lambda, t.x, t.y) {
            Ok(p) => cmd_complement(&p, fmt),
            Err(e) => Outcome::err(EXIT_USAGE, e),
        },
        Command::Equivalence { seed, samples } => cmd_equivalence(*seed, *samples, fmt),
        Command::Oracle { export } => cmd_oracle(export.as_deref(), fmt),
    }
}

fn verdict_exit(status: &Status) -> i32 {
    if status.survives() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

pub fn cmd_check(p: &QsdParams, fmt: OutputFormat, label: Option<&str>) -> Outcome {
    let vd = classify(p);
    let body = match fmt {
        OutputFormat::Text => {
            let mut s = label.map(|l| format!("{:<14}{l}\n", "family")).unwrap_or_default();
            s.push_str(&render::verdict_text(&vd));
            s
        }
        OutputFormat::Csv => render::verdicts_csv([&vd]),
        OutputFormat::Json => {
            let mut v = render::verdict_json(&vd);
            if let Some(l) = label {
                v["family"] = json!(l);
            }
            render::to_json_string(&v)
        }
    };
    Outcome::with(verdict_exit(&vd.status), body)
}

pub fn cmd_scan(range: &ScanRange, fmt: OutputFormat) -> Outcome {
    let out = match scan(range) {
        Ok(o) => o,
        Err(e @ ScanError::CapExceeded { .. }) => return Outcome::err(EXIT_CAP, e),
        Err(e) => return Outcome::err(EXIT_USAGE, e),
    };
    match fmt {
        OutputFormat::Text => Outcome::ok(render::scan_text(&out)),
        OutputFormat::Json => Outcome::ok(render::to_json_string(&render::scan_json(&out))),
        OutputFormat::Csv => Outcome {
            code: EXIT_OK,
            stdout: render::verdicts_csv(&out.verdicts),
            stderr: render::scan_header_lines(&out),
        },
    }
}

pub fn cmd_tables(fmt: OutputFormat) -> Outcome {
    let t = reproduce_tables();
    let code = if t.ok() { EXIT_OK } else { EXIT_FAIL };
    let body = match fmt {
        OutputFormat::Text => render::tables_text(&t),
        OutputFormat::Json => render::to_json_string(&render::tables_json(&t)),
        OutputFormat::Csv => render::verdicts_csv(t.rows.iter().map(|r| &r.verdict)),
    };
    Outcome::with(code, body)
}

fn cmd_family(f: &Family, fmt: OutputFormat) -> Outcome {
    let (p, label) = match f {
        Family::Bh { q } => (bh_family(*q), format!("bh q={q}")),
        Family::Ard { n, t } => (ard_params(ArdParams { n: *n, t: *t }), format!("ard n={n} t={t}")),
    };
    match p {
        Ok(p) => cmd_check(&p, fmt, Some(&label)),
        Err(e) => Outcome::err(EXIT_USAGE, e),
    }
}

fn cmd_complement(p: &QsdParams, fmt: OutputFormat) -> Outcome {
    let d = derive_params(p);
    let (pc, dc) = match complement(p, &d) {
        Ok(c) => c,
        Err(e) => return Outcome::err(EXIT_FAIL, e),
    };
    let (a, b) = (classify(p), classify(&pc));
    let c_equal = a.report.as_ref().map(|r| &r.c_value) == b.report.as_ref().map(|r| &r.c_value);
    let h_equal = a.report.as_ref().map(|r| &r.h_value) == b.report.as_ref().map(|r| &r.h_value);
    let same_status = a.status.name() == b.status.name();
    let v = json!({
        "params": p.to_string(),
        "complement": pc.to_string(),
        "r": fmt_q(&dc.r),
        "b": fmt_q(&dc.b),
        "status": a.status.name(),
        "complement_status": b.status.name(),
        "c_equal": c_equal,
        "h_equal": h_equal,
    });
    let code = if c_equal && h_equal && same_status { EXIT_OK } else { EXIT_FAIL };
    let body = match fmt {
        OutputFormat::Json => render::to_json_string(&v),
        OutputFormat::Csv => render::pairs_csv(&render::flatten(&v)),
        OutputFormat::Text => format!(
            "{p} -> {pc}\nr' = {}, b' = {}\nstatus {} / {}\nC equal: {c_equal}, H equal: {h_equal}\n",
            fmt_q(&dc.r),
            fmt_q(&dc.b),
            a.status.name(),
            b.status.name()
        ),
    };
    Outcome::with(code, body)
}

pub fn cmd_equivalence(seed: u64, samples: usize, fmt: OutputFormat) -> Outcome {
    let tuples = match sample_domain(seed, samples) {
        Ok(t) => t,
        Err(e) => return Outcome::err(EXIT_USAGE, e),
    };
    let summary = verify_all(&tuples);
    let grid = polynomial_grid_mismatches().len();
    let code = if summary.failures.is_empty() && grid == 0 { EXIT_OK } else { EXIT_FAIL };
    let v = render::equivalence_json(seed, &summary, grid);
    let body = match fmt {
        OutputFormat::Text => render::equivalence_text(seed, &summary, grid),
        OutputFormat::Json => render::to_json_string(&v),
        OutputFormat::Csv => render::pairs_csv(&render::flatten(&v)),
    };
    Outcome::with(code, body)
}

pub fn oracle_designs() -> Vec<(&'static str, Result<ExplicitDesign, String>)> {
    vec![
        ("pair-8", build_pair_design(8).map_err(|e| e.to_string())),
        ("design-6-3-2", Ok(build_6_3_2())),
        ("witt-23", build_witt_23().map_err(|e| e.to_string())),
    ]
}

pub fn cmd_oracle(export: Option<&std::path::Path>, fmt: OutputFormat) -> Outcome {
    let designs = oracle_designs();
    if let Some(dir) = export {
        if let Err(e) = std::fs::create_dir_all(dir) {
            return Outcome::err(EXIT_USAGE, format!("{}: {e}", dir.display()));
        }
        for (name, d) in &designs {
            if let Ok(d) = d {
                let path = dir.join(format!("{name}.txt"));
                if let Err(e) = std::fs::write(&path, d.to_text()) {
                    return Outcome::err(EXIT_USAGE, format!("{}: {e}", path.display()));
                }
            }
        }
    }
    let results: Vec<(&str, Result<_, String>)> = designs
        .into_iter()
        .map(|(name, d)| (name, d.and_then(|d| verify_design(&d).map_err(|e| e.to_string()))))
        .collect();
    let code = if results.iter().all(|(_, r)| r.is_ok()) { EXIT_OK } else { EXIT_FAIL };
    let v = json!(results
        .iter()
        .map(|(n, r)| render::oracle_json(n, r))
        .collect::<Vec<_>>());
    let body = match fmt {
        OutputFormat::Text => results.iter().map(|(n, r)| render::oracle_text(n, r)).collect(),
        OutputFormat::Json => render::to_json_string(&v),
        OutputFormat::Csv => render::pairs_csv(&render::flatten(&v)),
    };
    Outcome::with(code, body)
}
