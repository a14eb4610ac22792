use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dualsplit::harness::{self, load_overlay, parse_point, run_algorithm, run_suite, Registry, RunAlgorithm, RunOptions, Suite};
use dualsplit::splitting::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use dualsplit::{Point, Result};

/// Default directory for reports and traces when no explicit path is given.
const OUT_DIR_VAR: &str = "DUALSPLIT_OUT_DIR";

#[derive(Parser)]
#[command(name = "dualsplit", version, about = "Primal-dual checks for monotone operator pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered fixtures.
    List {
        /// Also load fixtures from a JSON overlay file.
        #[arg(long)]
        load: Option<PathBuf>,
    },
    /// Run a verification suite on a fixture.
    Verify {
        #[arg(long)]
        fixture: String,
        /// identities, duality, paramonotone, projections, or fenchel.
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        load: Option<PathBuf>,
    },
    /// Run a splitting algorithm on a fixture.
    Run {
        #[arg(long)]
        fixture: String,
        /// dr, pr_averaged, halpern, or haugazeau.
        #[arg(long)]
        algorithm: RunAlgorithm,
        /// Starting point, comma separated.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        x0: Option<Point>,
        /// Anchor for halpern and haugazeau; defaults to x0.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        anchor: Option<Point>,
        /// Relaxation for pr_averaged.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Write the iteration trace as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        load: Option<PathBuf>,
    },
    /// Load and validate a fixture overlay file.
    Fixtures {
        #[arg(long)]
        load: PathBuf,
    },
}

fn registry(load: Option<&Path>) -> Result<Registry> {
    let mut reg = Registry::default();
    if let Some(path) = load {
        for fx in load_overlay(path)? {
            reg.add(fx);
        }
    }
    Ok(reg)
}

/// The explicit path, or `file_name` under the output directory if set.
fn output_path(explicit: Option<PathBuf>, file_name: &str) -> Option<PathBuf> {
    explicit.or_else(|| std::env::var_os(OUT_DIR_VAR).map(|dir| PathBuf::from(dir).join(file_name)))
}

fn write_json(path: &Path, report: &harness::Report) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, report.to_json() + "\n")?;
    Ok(())
}

fn print_fixtures(reg: &Registry) {
    for fx in reg.fixtures() {
        println!(
            "{:<20} dim={} paramonotone={:<5} {}",
            fx.name,
            fx.dim(),
            fx.pair.is_paramonotone(),
            fx.summary
        );
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::List { load } => {
            let reg = registry(load.as_deref())?;
            for fx in reg.fixtures() {
                fx.validate()?;
            }
            print_fixtures(&reg);
            Ok(true)
        }
        Command::Fixtures { load } => {
            let loaded = load_overlay(&load)?;
            for fx in &loaded {
                println!("{:<20} dim={} paramonotone={:<5} valid", fx.name, fx.dim(), fx.pair.is_paramonotone());
            }
            Ok(true)
        }
        Command::Verify {
            fixture,
            suite,
            samples,
            seed,
            json,
            load,
        } => {
            let reg = registry(load.as_deref())?;
            let report = run_suite(reg.get(&fixture)?, suite, samples, seed)?;
            print!("{}", report.to_text());
            if let Some(path) = output_path(json, &format!("{fixture}.{suite}.json")) {
                write_json(&path, &report)?;
            }
            Ok(report.passed)
        }
        Command::Run {
            fixture,
            algorithm,
            x0,
            anchor,
            lambda,
            tol,
            max_iter,
            csv,
            json,
            load,
        } => {
            let reg = registry(load.as_deref())?;
            let opts = RunOptions {
                x0,
                anchor,
                lambda,
                tol,
                max_iter,
            };
            let (report, trace) = run_algorithm(reg.get(&fixture)?, algorithm, &opts)?;
            println!(
                "{algorithm}: converged={} iterations={} limit={} shadow={} residual={}",
                trace.converged,
                trace.iterations_used,
                trace.last(),
                trace.last_shadow(),
                harness::format_f64(trace.last_residual())
            );
            print!("{}", report.to_text());
            if let Some(path) = output_path(csv, &format!("{fixture}.{algorithm}.csv")) {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                trace.write_csv(BufWriter::new(File::create(&path)?))?;
            }
            if let Some(path) = output_path(json, &format!("{fixture}.{algorithm}.json")) {
                write_json(&path, &report)?;
            }
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
