use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use optoeq::harness::{canned, emit, run_sweep, selftest, ExperimentConfig, Format, ResultRecord};
use optoeq::Error;

/// Spectrally sliced IM-DD link simulator and equalizer sweeps.
#[derive(Parser)]
#[command(name = "optoeq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep from a TOML config file or a canned config name.
    Run {
        config: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Distance sweep, broadband vs four slices, FFE/ESN/FNN.
    Fig3a(RunOpts),
    /// Distance sweep over slice subsets with ESN(500).
    Fig3b(RunOpts),
    /// Reservoir size sweep with four slices.
    Fig3c(RunOpts),
    /// Run the built-in oracle checks.
    Selftest,
}

#[derive(Args)]
struct RunOpts {
    /// Output file; stdout when absent and the config names none.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json; defaults to the output file extension.
    #[arg(long)]
    format: Option<Format>,
    /// Worker threads for the sweep pool.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// 200k symbols and 10 measurements per point.
    #[arg(long)]
    paper_scale: bool,
    /// Record per-measurement wall time (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
    /// Override a config field, e.g. `--set link.cspr_db=7`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

const EXIT_IO: u8 = 1;
const EXIT_FAILED_POINT: u8 = 2;
const EXIT_CONFIG: u8 = 3;

fn load(config: &str, overrides: &[String]) -> Result<ExperimentConfig, Error> {
    if canned::text(config).is_some() {
        canned::config(config, overrides)
    } else {
        ExperimentConfig::from_path(std::path::Path::new(config), overrides)
    }
}

fn write_records(
    records: &[ResultRecord],
    opts: &RunOpts,
    cfg: &ExperimentConfig,
) -> Result<(), Error> {
    match opts.out.as_ref().or(cfg.output.as_ref()) {
        Some(path) => emit(
            records,
            opts.format.unwrap_or_else(|| Format::from_path(path)),
            path,
        ),
        None => {
            let out = std::io::stdout().lock();
            match opts.format.unwrap_or(Format::Csv) {
                Format::Csv => emit::write_csv(records, out),
                Format::Json => emit::write_json(records, out),
            }
        }
    }
}

fn run(config: &str, opts: &RunOpts) -> ExitCode {
    let cfg = match load(config, &opts.overrides) {
        Ok(c) if opts.paper_scale => c.paper_scale(),
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let records = match run_sweep(&cfg, opts.jobs.max(1), opts.timing) {
        Ok(r) => r,
        Err(e @ Error::Config(_)) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_FAILED_POINT);
        }
    };
    if let Err(e) = write_records(&records, opts, &cfg) {
        eprintln!("{e}");
        return ExitCode::from(EXIT_IO);
    }
    let failed: Vec<_> = records.iter().filter(|r| !r.is_ok()).collect();
    for r in &failed {
        eprintln!("{}", r.status);
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED_POINT)
    }
}

fn run_selftest() -> ExitCode {
    let checks = selftest::run();
    let mut out = std::io::stdout().lock();
    for c in &checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{verdict} {:<28} {}", c.name, c.detail);
    }
    if checks.iter().all(|c| c.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED_POINT)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run { config, opts } => run(config, opts),
        Command::Fig3a(opts) => run("fig3a", opts),
        Command::Fig3b(opts) => run("fig3b", opts),
        Command::Fig3c(opts) => run("fig3c", opts),
        Command::Selftest => run_selftest(),
    }
}
