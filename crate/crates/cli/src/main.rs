use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use pettitt_cli::analysis::{analyze, TestOptions};
use pettitt_cli::config::{Profile, SimConfig};
use pettitt_cli::error::Result;
use pettitt_cli::grid::run_grid;
use pettitt_cli::report::{render, ReportKind};
use pettitt_cli::table::{read_table, write_table};
use pettitt_cli::{input, CliError, DEFAULT_SEED};
use pettitt_core::{BootstrapConfig, Gate};

#[derive(Parser)]
#[command(
    name = "pettitt",
    version,
    about = "Classical and bootstrap Pettitt change-point tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a series (CSV: `value` or `label,value` per line) for a change point.
    Test(TestArgs),
    /// Run a size/power simulation grid described by a TOML config.
    Simulate(SimulateArgs),
    /// Reshape a simulation table into a size table or power-curve data.
    Report(ReportArgs),
}

fn parse_alpha(s: &str) -> std::result::Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("{a} must lie strictly between 0 and 1"))
    }
}

#[derive(clap::Args)]
struct TestArgs {
    input: PathBuf,
    /// Significance level; repeat for several. The first one gates prewhitening.
    #[arg(long = "alpha", value_parser = parse_alpha)]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = BootstrapConfig::DEFAULT_RESAMPLES as u64, value_parser = clap::value_parser!(u64).range(1..))]
    bootstrap_resamples: u64,
    #[arg(long, env = "PETTITT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Run the step-preserving lag-1 prewhitening procedure first.
    #[arg(long)]
    prewhiten: bool,
    /// Decide the prewhitening first step with the bootstrap test instead of the classical one.
    #[arg(long, requires = "prewhiten")]
    gate_bootstrap: bool,
    /// Also write test_results.csv and test_summary.csv here.
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    /// R = 2000, B = 500
    Desk,
    /// R = 10000, B = 1000
    Paper,
}

#[derive(clap::Args)]
struct SimulateArgs {
    config: PathBuf,
    /// Overrides the config's `alphas`.
    #[arg(long = "alpha", value_parser = parse_alpha)]
    alphas: Vec<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    replications: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    bootstrap_resamples: Option<u64>,
    #[arg(long, env = "PETTITT_SEED")]
    seed: Option<u64>,
    #[arg(long, env = "PETTITT_PARALLELISM", value_parser = clap::value_parser!(u64).range(1..))]
    parallelism: Option<u64>,
    #[arg(long, value_enum, default_value = "desk")]
    profile: ProfileArg,
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    SizeTable,
    PowerCurves,
}

#[derive(clap::Args)]
struct ReportArgs {
    table: PathBuf,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Write size_table.tsv / power_curves.csv here instead of stdout.
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

fn cmd_test(args: TestArgs) -> Result<()> {
    let data = input::read_series(&args.input)?;
    let options = TestOptions {
        alphas: if args.alphas.is_empty() {
            vec![0.05]
        } else {
            args.alphas
        },
        resamples: args.bootstrap_resamples as usize,
        seed: args.seed,
        prewhiten: args.prewhiten,
        gate: if args.gate_bootstrap {
            Gate::Bootstrap
        } else {
            Gate::Classical
        },
    };
    let report = analyze(&data, &options)?;
    print!("{}", report.render_text(&args.input.display().to_string()));
    if let Some(dir) = args.output_dir {
        write_file(&dir, "test_results.csv", &report.results_csv())?;
        write_file(&dir, "test_summary.csv", &report.summary_csv())?;
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let cfg = SimConfig::from_path(&args.config)?;
    let profile = match args.profile {
        ProfileArg::Desk => Profile::Desk,
        ProfileArg::Paper => Profile::Paper,
    };
    let alphas = if args.alphas.is_empty() {
        cfg.alphas.clone()
    } else {
        args.alphas
    };
    let replications = args.replications.or(cfg.replications).unwrap_or(profile.replications());
    let resamples = args
        .bootstrap_resamples
        .map(|b| b as usize)
        .or(cfg.bootstrap_resamples)
        .unwrap_or(profile.resamples());
    let seed = args.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let parallelism = args
        .parallelism
        .map(|p| p as usize)
        .or(cfg.parallelism)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));

    let scenarios = cfg.scenarios()?;
    let boot = BootstrapConfig::new(resamples, seed)?;
    println!(
        "simulating {} scenarios x {} alphas: R = {replications}, B = {resamples}, seed = {seed}, parallelism = {parallelism}",
        scenarios.len(),
        alphas.len()
    );
    let started = Instant::now();
    let table = run_grid(&scenarios, &alphas, replications, boot, parallelism)?;

    fs::create_dir_all(&args.output_dir).map_err(|e| CliError::io(&args.output_dir, e))?;
    let path = args.output_dir.join("rejection_table.csv");
    let file = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
    write_table(&table, std::io::BufWriter::new(file)).map_err(|e| CliError::io(&path, e))?;

    println!("{:<40} {:>6} {:>9} {:>9}", "scenario", "alpha", "P.T", "P.T*");
    for row in &table.rows {
        println!(
            "{:<40} {:>6} {:>9.4} {:>9.4}",
            row.scenario.label,
            row.alpha,
            row.rate_classical(),
            row.rate_bootstrap()
        );
    }
    println!("wrote {} in {:.1}s", path.display(), started.elapsed().as_secs_f64());
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let name = args.table.display().to_string();
    let file = fs::File::open(&args.table).map_err(|e| CliError::io(&args.table, e))?;
    let records = read_table(file, &name)?;
    let (kind, out_name) = match args.kind {
        KindArg::SizeTable => (ReportKind::SizeTable, "size_table.tsv"),
        KindArg::PowerCurves => (ReportKind::PowerCurves, "power_curves.csv"),
    };
    let text = render(&records, kind, &name)?;
    match args.output_dir {
        Some(dir) => {
            let path = write_file(&dir, out_name, &text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Test(a) => cmd_test(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
