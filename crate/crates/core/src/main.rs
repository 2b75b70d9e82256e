//! Command-line front end: run the verification suites with a
//! reproducible configuration and emit machine-readable reports.
//!
//! Exit codes: 0 when every selected check passes, 1 when any check
//! fails, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dualbraid::braid_wx;
use dualbraid::report::{self, Status, SuiteConfig, SUITE_NAMES};

#[derive(Parser, Debug)]
#[command(
    name = "dualbraid",
    version,
    about = "Exact verification of the two braidings on the formal dual Poisson group of sl2",
    after_help = "Suites: series, poisson, hopf, braiding, qybe, wx, gh, compare, infinitesimal, quea, numeric (or all)."
)]
struct Cli {
    /// Series truncation order N (total degree, inclusive)
    #[arg(long, default_value_t = 6)]
    order: usize,

    /// Parameter truncation order K of the quantum-algebra suite
    #[arg(long, default_value_t = 4)]
    h_order: usize,

    /// Degree D at which the quantum side is compared to the braidings (D <= K)
    #[arg(long, default_value_t = 4)]
    compare_degree: usize,

    /// Number of numeric sample points M
    #[arg(long, default_value_t = 100)]
    samples: usize,

    /// Seed for all pseudo-random choices
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Tolerance for numeric algebraic residuals
    #[arg(long, default_value_t = 1e-9)]
    tol_qybe: f64,

    /// Tolerance for numeric finite-difference residuals
    #[arg(long, default_value_t = 1e-4)]
    tol_fd: f64,

    /// Order of the symbolic Yang-Baxter check on the 9-variable ring
    /// (heavier than the other suites; opt in to 5 or 6)
    #[arg(long, default_value_t = 4)]
    qybe_order: usize,

    /// Suite selection; repeat or comma-separate (default: all)
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,

    /// Write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,

    /// Dump the braiding generator images in the stable text format
    #[arg(long)]
    dump_series: Option<PathBuf>,

    /// Dump the numeric sample points and residuals as CSV
    #[arg(long)]
    dump_samples: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = SuiteConfig {
        order: cli.order,
        h_order: cli.h_order,
        compare_degree: cli.compare_degree,
        samples: cli.samples,
        seed: cli.seed,
        tol_qybe: cli.tol_qybe,
        tol_fd: cli.tol_fd,
        qybe_order: cli.qybe_order,
        suites: if cli.suite.is_empty() {
            vec!["all".to_string()]
        } else {
            cli.suite.clone()
        },
    };

    if let Err(e) = cfg.validate() {
        eprintln!("error: {}", e);
        eprintln!("valid suites: {}, all", SUITE_NAMES.join(", "));
        return ExitCode::from(2);
    }

    if let Some(path) = &cli.dump_series {
        if let Err(e) = std::fs::write(path, report::dump_series(cfg.order)) {
            eprintln!("error: cannot write {}: {}", path.display(), e);
            return ExitCode::from(2);
        }
    }

    let report = match report::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };

    for check in &report.checks {
        let tag = match check.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        let mut line = format!("{} {} [{}] ({})", tag, check.name, check.certified, check.params);
        if !check.details.is_empty() {
            line.push_str(&format!(" -- {}", check.details));
        }
        println!("{}", line);
    }
    println!(
        "summary: {} passed, {} failed, {} skipped",
        report.summary.passed, report.summary.failed, report.summary.skipped
    );

    if let Some(path) = &cli.json {
        if let Err(e) = report.emit_json(path) {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    }

    if let Some(path) = &cli.dump_samples {
        let numeric = braid_wx::numeric_checks(cfg.samples, cfg.seed, 1e-6);
        if let Err(e) = std::fs::write(path, braid_wx::samples_csv(&numeric)) {
            eprintln!("error: cannot write {}: {}", path.display(), e);
            return ExitCode::from(2);
        }
    }

    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
