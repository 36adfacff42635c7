use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use xxchain::experiments::{defaults, run, Config, Format, SUBCOMMANDS};
use xxchain::Error;

/// Experiment drivers for XX-chain logical qubits and the adiabatic CNOT.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    /// Experiment to run.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUBCOMMANDS))]
    subcommand: String,
    /// Flat key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
    /// Extra key=value settings, applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print the accepted keys with their defaults and exit.
    #[arg(long)]
    print_defaults: bool,
}

fn fail(kind: &str, message: &str) -> ExitCode {
    let body = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{body}");
    ExitCode::FAILURE
}

fn execute(cli: &Cli) -> Result<(), Error> {
    if cli.print_defaults {
        let defs = defaults(&cli.subcommand).expect("validated by clap");
        let mut out = std::io::stdout().lock();
        for (k, v) in defs {
            writeln!(out, "{k} = {v}")?;
        }
        return Ok(());
    }
    let mut cfg = match &cli.config {
        Some(path) => Config::parse(&std::fs::read_to_string(path)?)?,
        None => Config::default(),
    };
    for kv in &cli.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        cfg.set(k.trim(), v.trim());
    }
    if let Some(seed) = cli.seed {
        cfg.set("seed", &seed.to_string());
    }
    let format: Format = cli.format.parse()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidArgument("--threads must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let table = pool.install(|| run(&cli.subcommand, &cfg))?;
    match &cli.out {
        Some(path) => table.emit(path, format)?,
        None => std::io::stdout().lock().write_all(table.render(format)?.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return fail("usage", &e.to_string());
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), &e.to_string()),
    }
}
