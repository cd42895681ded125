use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use climgov::engine::{with_threads, write_trace_csv, Simulation};
use climgov::population::write_population_csv;
use climgov::sweep::{run_sweep, write_sweep_csv, SweepSpec};
use climgov::{Error, SimulationConfig};

/// Climate-governance simulator.
#[derive(Parser)]
#[command(name = "climgov", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file and list every violation.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run one scenario and write trace.csv and summary.json.
    Run(RunArgs),
    /// Run a one-parameter sweep and write sweep.csv.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Master seed. Required: runs never draw ambient entropy.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
    /// Also write population.csv with the initial citizens.
    #[arg(long)]
    dump_population: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    sweep: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parse(_) => 1,
        _ => 2,
    }
}

fn report(e: &Error) {
    match e {
        Error::Config(vs) => {
            for v in vs {
                eprintln!("{v}");
            }
        }
        other => eprintln!("error: {other}"),
    }
}

fn load(path: &Path) -> Result<SimulationConfig, Error> {
    let cfg = SimulationConfig::load(path)?;
    cfg.check()?;
    Ok(cfg)
}

fn validate(config: &Path) -> Result<(), Error> {
    let cfg = SimulationConfig::load(config)?;
    let violations = cfg.violations();
    if violations.is_empty() {
        println!("ok");
        return Ok(());
    }
    for v in &violations {
        println!("{v}");
    }
    Err(Error::Config(Vec::new()))
}

fn run(args: &RunArgs) -> Result<(), Error> {
    let seed = args
        .seed
        .ok_or_else(|| Error::Contract("an explicit --seed is required".into()))?;
    let cfg = load(&args.config)?;
    fs::create_dir_all(&args.out)?;
    let (summary, records) = with_threads(args.parallelism, || -> Result<_, Error> {
        let mut sim = Simulation::new(cfg, seed)?;
        if args.dump_population {
            write_population_csv(sim.citizens(), BufWriter::new(File::create(args.out.join("population.csv"))?))?;
        }
        while !sim.is_finished() {
            sim.step()?;
        }
        let records = sim.records().to_vec();
        Ok((sim.run()?, records))
    })??;
    write_trace_csv(&records, BufWriter::new(File::create(args.out.join("trace.csv"))?))?;
    fs::write(args.out.join("summary.json"), summary.to_json()?)?;
    println!("decision: {}", summary.decision.name());
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<(), Error> {
    let cfg = load(&args.config)?;
    let spec = SweepSpec::load(&args.sweep)?;
    let rows = run_sweep(&cfg, &spec, args.parallelism)?;
    fs::create_dir_all(&args.out)?;
    write_sweep_csv(&spec.parameter, &rows, BufWriter::new(File::create(args.out.join("sweep.csv"))?))?;
    println!("runs: {}", rows.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { config } => validate(config),
        Command::Run(args) => run(args),
        Command::Sweep(args) => sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report(&e);
            ExitCode::from(exit_code(&e))
        }
    }
}
