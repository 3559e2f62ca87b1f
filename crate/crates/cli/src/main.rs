use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use zid_core::phi::{phi_table, write_phi_table_csv, PhiEvaluator};
use zid_core::report::Report;
use zid_core::special::zeta;
use zid_core::suite::{default_threads, run_checks, Format, SuiteConfig};
use zid_core::{AccuracySpec, Complex64, Constants, Error};

const MAX_EVALS_VAR: &str = "ZID_MAX_EVALS";

#[derive(Parser)]
#[command(name = "zid", version, about = "Numerical verification of zeta-function convolution identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write a report
    Verify {
        /// Suite description in TOML
        #[arg(long)]
        config: PathBuf,
        /// Report format; overrides the suite file
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Report path; overrides the suite file. Defaults to stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print φₙ on a log-spaced grid as CSV
    PhiTable {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        min: f64,
        #[arg(long, allow_negative_numbers = true)]
        max: f64,
        #[arg(long)]
        points: usize,
    },
    /// Print the stored constants and the zeta values the expansions use
    Constants,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Run failures: the exit status and the message to print.
enum Failure {
    Numeric,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn env_max_evals() -> Result<Option<usize>, Failure> {
    match std::env::var(MAX_EVALS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("{MAX_EVALS_VAR} must be a positive integer, got `{v}`"))),
        },
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Failure::Usage(format!("{MAX_EVALS_VAR}: {e}"))),
    }
}

fn verify(
    config_path: &Path,
    format: Option<FormatArg>,
    out: Option<PathBuf>,
    threads: Option<usize>,
) -> Result<(), Failure> {
    let text = fs::read_to_string(config_path).map_err(|e| io_failure(config_path, e))?;
    let config = SuiteConfig::parse(&text)?;
    let acc = config.accuracy(env_max_evals()?)?;
    let plan = config.plan()?;
    let checks = run_checks(&plan, &config.constants(), &acc, threads.unwrap_or_else(default_threads))?;
    let report = Report::new(checks);

    let format = match format {
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Csv) => Format::Csv,
        None => config.format,
    };
    // a path in the suite file is relative to the suite file
    let out = out.or_else(|| config.out.as_ref().map(|p| config_path.parent().unwrap_or(Path::new(".")).join(p)));
    let mut bytes = Vec::new();
    match format {
        Format::Json => bytes.extend(report.to_json().into_bytes()),
        Format::Csv => report.write_csv(&mut bytes)?,
    }
    match &out {
        Some(path) => fs::write(path, &bytes).map_err(|e| io_failure(path, e))?,
        None => io::stdout().write_all(&bytes).map_err(|e| Failure::Usage(format!("stdout: {e}")))?,
    }

    for c in report.checks.iter().filter(|c| !c.passed) {
        let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={}", param_text(v))).collect();
        let why = match &c.error {
            Some(e) => e.clone(),
            None if !c.converged => "quadrature did not converge".into(),
            None => format!(
                "abs_err {:.3e} and rel_err {:.3e} exceed tolerance {:.1e}",
                c.abs_err, c.rel_err, c.tolerance_used
            ),
        };
        eprintln!("FAIL {} [{}]: {why}", c.name, params.join(", "));
    }
    eprintln!("{} checks: {} passed, {} failed", report.total, report.passed, report.failed);
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Numeric)
    }
}

fn param_text(v: &zid_core::identities::Param) -> String {
    use zid_core::identities::Param;
    match v {
        Param::Int(i) => i.to_string(),
        Param::Real(x) => x.to_string(),
        Param::Text(s) => s.clone(),
    }
}

fn phi_table_cmd(n: u32, min: f64, max: f64, points: usize) -> Result<(), Failure> {
    if n < 1 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    if !(min.is_finite() && max.is_finite() && min > 0.0 && min < max) {
        return Err(Failure::Usage(format!("need 0 < min < max, got min = {min}, max = {max}")));
    }
    if points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }
    let mut acc = AccuracySpec::default();
    if let Some(m) = env_max_evals()? {
        acc = acc.with_max_evals(m);
    }
    let ev = PhiEvaluator::build(n, &acc).map_err(numeric_or_usage)?;
    let rows = phi_table(&ev, min, max, points).map_err(numeric_or_usage)?;
    let stdout = io::stdout();
    write_phi_table_csv(stdout.lock(), &rows).map_err(|e| Failure::Usage(format!("stdout: {e}")))?;
    Ok(())
}

fn numeric_or_usage(e: Error) -> Failure {
    if e.is_precondition() {
        Failure::Usage(e.to_string())
    } else {
        eprintln!("error: {e}");
        Failure::Numeric
    }
}

/// `ζ(1 − 2m) = −B₂ₘ/(2m)` as a fraction, for the listing.
const ZETA_NEGATIVE_ODD: [(u32, &str); 5] = [(1, "-1/12"), (2, "1/120"), (3, "-1/252"), (4, "1/240"), (5, "-1/132")];

fn constants_cmd() -> Result<(), Failure> {
    let c = Constants::default();
    let acc = AccuracySpec::special();
    let mut lines = vec![
        format!("euler_gamma = {}  (stored 20-digit literal)", c.euler_gamma),
        format!("log_two_pi = {}  (stored 20-digit literal)", c.log_two_pi),
        format!("pi = {}  (stored 20-digit literal)", c.pi),
    ];
    let z0 = zeta(Complex64::new(0.0, 0.0), &acc)?.re;
    lines.push(format!("zeta(0) = {z0}  (Euler-Maclaurin summation at s = 0)"));
    for (m, exact) in ZETA_NEGATIVE_ODD {
        let s = 1.0 - 2.0 * f64::from(m);
        let z = zeta(Complex64::new(s, 0.0), &acc)?.re;
        lines.push(format!("zeta({s}) = {z}  (functional equation from zeta({}); exact {exact})", 1.0 - s));
    }
    let mut out = io::stdout().lock();
    for l in lines {
        writeln!(out, "{l}").map_err(|e| Failure::Usage(format!("stdout: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Verify { config, format, out, threads } => verify(&config, format, out, threads),
        Command::PhiTable { n, min, max, points } => phi_table_cmd(n, min, max, points),
        Command::Constants => constants_cmd(),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Numeric) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
