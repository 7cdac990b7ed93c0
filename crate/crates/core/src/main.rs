use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use qdirac::cli::{
    cmd_calibrate, cmd_dixmier, cmd_pairing, cmd_residual, cmd_spectrum, cmd_verify, pairing_passes, parse_pairs,
    parse_window, render_pairing, render_verify, CliError, OutputFormat, RunConfig, Settings,
};
use qdirac::pairing::PairingMethod;
use qdirac::report::convergence_csv;

#[derive(Parser)]
#[command(name = "qdirac", version, about = "Quasi-spectral triples over the two-sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Monopole charge N (e.g. 3/2 or 1.5)
    #[arg(long = "N", value_name = "N", allow_hyphen_values = true)]
    n: Option<String>,
    /// Highest sector; rounded down to an admissible value
    #[arg(long)]
    lmax: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    d1: Option<String>,
    #[arg(long = "d-offset", allow_hyphen_values = true)]
    d_offset: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Comma-separated subset of checks, or "all"
    #[arg(long)]
    checks: Option<String>,
    /// json or csv
    #[arg(long)]
    format: Option<String>,
    /// Flat key = value file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity checks and write a verification report
    Verify(Common),
    /// Index pairing by one of three methods
    Pairing {
        #[command(flatten)]
        common: Common,
        /// fredholm, local-index or closed-form
        #[arg(long)]
        method: Option<String>,
    },
    /// Spectrum of D as (eigenvalue, multiplicity, l, sign)
    Spectrum(Common),
    /// Scan generator sign conventions
    Calibrate {
        #[command(flatten)]
        common: Common,
        /// Do not require the unitarity relations
        #[arg(long)]
        no_unitarity: bool,
    },
    /// Dixmier trace slope of |D|^-2
    Dixmier {
        #[command(flatten)]
        common: Common,
        /// Sector window lo,hi
        #[arg(long)]
        window: Option<String>,
    },
    /// Per-sector order-one residuals [[D,x],y]
    Residual {
        #[command(flatten)]
        common: Common,
        /// Pairs as "x,y;x,y" with x, y in {A, B, B*}; all nine by default
        #[arg(long)]
        pairs: Option<String>,
    },
}

struct Outcome {
    document: String,
    /// Written next to `--out` with this extension.
    companion: Option<(&'static str, String)>,
    summary: Option<String>,
    passed: bool,
}

fn settings(common: &Common, method: Option<&str>, window: Option<&str>) -> Result<Settings, CliError> {
    let cli = Settings {
        n: common.n.clone(),
        lmax: common.lmax.clone(),
        d1: common.d1.clone(),
        d_offset: common.d_offset.clone(),
        tol: common.tol.clone(),
        checks: common.checks.clone(),
        format: common.format.clone(),
        method: method.map(str::to_string),
        window: window.map(str::to_string),
    };
    let file = match &common.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
            Settings::parse_file(&text)?
        }
        None => Settings::default(),
    };
    Ok(cli.over(file))
}

fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Verify(common) => {
            let cfg = RunConfig::from_settings(&settings(common, None, None)?)?;
            let report = cmd_verify(&cfg)?;
            let failed: Vec<&str> =
                report.checks.iter().filter(|c| c.status == qdirac::cli::Status::Fail).map(|c| c.check.name()).collect();
            Ok(Outcome {
                document: render_verify(&report, cfg.format.unwrap_or(OutputFormat::Json))?,
                companion: None,
                summary: Some(if failed.is_empty() {
                    "all checks pass".to_string()
                } else {
                    format!("failed: {}", failed.join(", "))
                }),
                passed: report.all_pass,
            })
        }
        Command::Pairing { common, method } => {
            let s = settings(common, method.as_deref(), None)?;
            let method: PairingMethod = s
                .method
                .as_deref()
                .unwrap_or("fredholm")
                .parse()
                .map_err(|e: qdirac::error::Error| CliError::Usage(e.to_string()))?;
            let cfg = RunConfig::from_settings(&s)?;
            let report = cmd_pairing(&cfg, method)?;
            let format = cfg.format.unwrap_or(OutputFormat::Json);
            let companion = (format == OutputFormat::Json).then(|| ("csv", convergence_csv(&report)));
            Ok(Outcome {
                document: render_pairing(&report, format)?,
                companion,
                summary: Some(format!("estimate {:.12} target {:.12}", report.estimate, report.target)),
                passed: pairing_passes(&report),
            })
        }
        Command::Spectrum(common) => {
            let cfg = RunConfig::from_settings(&settings(common, None, None)?)?;
            Ok(Outcome { document: cmd_spectrum(&cfg)?, companion: None, summary: None, passed: true })
        }
        Command::Calibrate { common, no_unitarity } => {
            let cfg = RunConfig::from_settings(&settings(common, None, None)?)?;
            Ok(Outcome { document: cmd_calibrate(&cfg, !no_unitarity)?, companion: None, summary: None, passed: true })
        }
        Command::Dixmier { common, window } => {
            let s = settings(common, None, window.as_deref())?;
            let window = parse_window(s.window.as_deref().unwrap_or("200,2000"))?;
            let cfg = RunConfig::from_settings(&s)?;
            Ok(Outcome { document: cmd_dixmier(&cfg, window)?, companion: None, summary: None, passed: true })
        }
        Command::Residual { common, pairs } => {
            let cfg = RunConfig::from_settings(&settings(common, None, None)?)?;
            let pairs = parse_pairs(pairs.as_deref())?;
            Ok(Outcome { document: cmd_residual(&cfg, &pairs)?, companion: None, summary: None, passed: true })
        }
    }
}

fn out_path(command: &Command) -> Option<&Path> {
    let common = match command {
        Command::Verify(c) | Command::Spectrum(c) => c,
        Command::Pairing { common, .. }
        | Command::Calibrate { common, .. }
        | Command::Dixmier { common, .. }
        | Command::Residual { common, .. } => common,
    };
    common.out.as_deref()
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("QDIRAC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("QDIRAC_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Failure(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = configure_threads().and_then(|()| run(&cli.command)).and_then(|outcome| {
        match out_path(&cli.command) {
            Some(path) => {
                write_file(path, &outcome.document)?;
                if let Some((ext, text)) = &outcome.companion {
                    write_file(&path.with_extension(ext), text)?;
                }
                if let Some(s) = &outcome.summary {
                    println!("{s}");
                }
            }
            None => {
                print!("{}", outcome.document);
                if let Some(s) = &outcome.summary {
                    eprintln!("{s}");
                }
            }
        }
        Ok(outcome.passed)
    });
    eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
