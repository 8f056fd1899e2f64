use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qstatlab::harness::{
    parse_config, required_parameters, run_experiment, write_report, ExperimentConfig, Format,
    HarnessError, EXPERIMENTS,
};

#[derive(Parser)]
#[command(name = "qstatlab", version, about = "Quantum statistical inference experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its report.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "json")]
        format: Format,
        /// Output file; defaults to the config's output_path, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Parse and validate a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// List experiments and their required parameters.
    List,
}

fn load(path: &Path) -> Result<ExperimentConfig, HarnessError> {
    let bytes = std::fs::read(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&bytes)
}

fn run(config: &Path, format: Format, out: Option<PathBuf>, seed: Option<u64>) -> Result<(), HarnessError> {
    let mut cfg = load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = run_experiment(&cfg)?;
    let bytes = write_report(&report, format);
    match out.or_else(|| cfg.output_path.as_ref().map(PathBuf::from)) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(&path, bytes).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
            eprintln!(
                "{}: {} ({} checks, {})",
                report.experiment,
                path.display(),
                report.checks.len(),
                if report.all_passed() { "all passed" } else { "some failed" }
            );
        }
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| HarnessError::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Run {
            config,
            format,
            out,
            seed,
        } => run(&config, format, out, seed),
        Command::Validate { config } => load(&config).map(|cfg| {
            println!("ok: {} (seed {})", cfg.experiment(), cfg.seed);
        }),
        Command::List => {
            for name in EXPERIMENTS {
                let req = required_parameters(name);
                if req.is_empty() {
                    println!("{name}: (all parameters optional)");
                } else {
                    println!("{name}: {}", req.join(", "));
                }
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
