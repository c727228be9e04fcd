use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qswitch::runner::config::{parse_axis, parse_probe};
use qswitch::runner::{
    cascade_column, emit_csv, emit_svg, fig2_preset_with_threads, format_number, parse_config,
    run_checks, run_sweep_with_threads, NoiseKind, Point, Quantity, Table, FIG2_R_VALUES,
};
use qswitch::{BlochVector, Error, Result};

#[derive(Parser)]
#[command(name = "qswitch", version, about = "Quantum switch phase-estimation sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Control QFI against cascade QFI for five probe lengths.
    Fig2 {
        #[arg(long, default_value_t = 201)]
        steps: usize,
        #[arg(long, default_value_t = 0.628318530718)]
        xi: f64,
        /// CSV destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Worker threads (defaults to the available parallelism).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Sweep described by a configuration file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Evaluate one quantity at one point.
    Point {
        #[arg(long)]
        noise: NoiseKind,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        pc: f64,
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
        #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
        axis: [f64; 3],
        #[arg(long, value_parser = parse_probe, allow_hyphen_values = true)]
        probe: BlochVector,
        #[arg(long)]
        quantity: Quantity,
    },
    /// Run the built-in property checks.
    Verify,
}

fn check_threads(threads: Option<usize>) -> Result<()> {
    match threads {
        Some(0) => Err(Error::OutOfRange {
            name: "threads",
            value: 0.0,
            range: "[1, inf)",
        }),
        _ => Ok(()),
    }
}

fn write_csv(table: &Table, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            emit_csv(table, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            emit_csv(table, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Fig2 {
            steps,
            xi,
            out,
            svg,
            threads,
        } => {
            check_threads(threads)?;
            let rows = fig2_preset_with_threads(steps, &FIG2_R_VALUES, xi, threads)?;
            let table = Table::compact(&rows);
            if let Some(path) = svg {
                let names: Vec<String> = std::iter::once("fq_con".to_string())
                    .chain(FIG2_R_VALUES.iter().map(|&r| cascade_column(r)))
                    .collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                let mut w = BufWriter::new(File::create(path)?);
                emit_svg(&table, "p", &refs, &mut w)?;
                w.flush()?;
            }
            write_csv(&table, out.as_deref())?;
            Ok(true)
        }
        Command::Sweep {
            config,
            out,
            threads,
        } => {
            check_threads(threads)?;
            let text = std::fs::read_to_string(&config)?;
            let cfg = parse_config(&text)?;
            let rows = run_sweep_with_threads(&cfg, threads)?;
            write_csv(&Table::from_rows(&rows), out.as_deref())?;
            Ok(true)
        }
        Command::Point {
            noise,
            p,
            pc,
            xi,
            axis,
            probe,
            quantity,
        } => {
            let point = Point {
                noise,
                p,
                p_c: pc,
                xi,
                axis,
                probe,
            };
            let value = point.evaluate(quantity)?;
            if !value.is_finite() {
                return Err(Error::NonFinite);
            }
            println!("{}", format_number(value));
            Ok(true)
        }
        Command::Verify => {
            let checks = run_checks()?;
            let mut all = true;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                all &= c.passed;
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} of {} checks passed", checks.len() - failed, checks.len());
            Ok(all)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
