use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use latent_bandits::bench::{
    curves_from_summary, emit_report, read_summary_csv, render_regret_svg, run_experiment, run_scaling_study,
    ExperimentConfig,
};
use latent_bandits::checker::{check_instance, CheckerConfig};
use latent_bandits::env::io::write_instance;
use latent_bandits::Error;

#[derive(Parser)]
#[command(name = "latbench", version, about = "Latent-cluster bandit benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the configured instance to <out>/instance.txt.
    Generate(Common),
    /// Run one experiment and write CSVs and a regret plot.
    Run(Common),
    /// Run the regret-scaling study listed under [scaling].
    Bench(Common),
    /// Print the assumption report of the configured instance.
    Check(Common),
    /// Re-render <out>/regret.svg from <out>/summary.csv.
    Plot {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated interaction seeds, replacing the configured list.
    #[arg(long, value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,
    /// Output directory, replacing the configured one.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an assumption report.
    #[arg(long)]
    check: bool,
    /// Write every round to regret.csv.
    #[arg(long)]
    full_history: bool,
}

enum Failure {
    Config(Error),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig { .. }
            | Error::UnknownAlgorithm(_)
            | Error::Parse { .. }
            | Error::InvalidDimensions(_)
            | Error::InvalidEpsilon(_)
            | Error::SeparationUnsatisfiable { .. } => Failure::Config(e),
            other => Failure::Runtime(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn load(common: &Common) -> Result<ExperimentConfig, Failure> {
    let text = fs::read_to_string(&common.config).map_err(|e| Failure::Config(e.into()))?;
    let mut config = ExperimentConfig::from_toml_str(&text)?;
    if let Some(seeds) = &common.seed_list {
        config.seeds = seeds.clone();
    }
    if let Some(out) = &common.out {
        config.out_dir = out.clone();
    }
    config.check |= common.check;
    config.full_history |= common.full_history;
    config.validate()?;
    Ok(config)
}

fn generate(common: &Common) -> Result<(), Failure> {
    let config = load(common)?;
    let instance = config.instance.build()?;
    fs::create_dir_all(&config.out_dir)?;
    let path = config.out_dir.join("instance.txt");
    write_instance(&mut BufWriter::new(fs::File::create(&path)?), &instance)?;
    println!("wrote {}", path.display());
    if config.check {
        let report = check_instance(&instance, &CheckerConfig::default(), config.instance.seed())?;
        let path = config.out_dir.join("assumptions.txt");
        fs::write(&path, report.to_string())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run(common: &Common) -> Result<(), Failure> {
    let config = load(common)?;
    let report = run_experiment(&config)?;
    print!("{}", report.describe());
    for path in emit_report(&report, &config.out_dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn bench(common: &Common) -> Result<(), Failure> {
    let config = load(common)?;
    let horizons = config
        .scaling
        .as_ref()
        .map(|s| s.horizons.clone())
        .ok_or_else(|| Error::config("scaling", "missing [scaling] section"))?;
    let study = run_scaling_study(&config, &horizons)?;
    for alg in study.algorithms() {
        let slope = study.slope(&alg).map_or("n/a".to_string(), |s| format!("{s:.3}"));
        println!("{alg:<20} log-log slope {slope}");
    }
    fs::create_dir_all(&config.out_dir)?;
    let path = config.out_dir.join("scaling.csv");
    study.write_csv(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn check(common: &Common) -> Result<(), Failure> {
    let config = load(common)?;
    let instance = config.instance.build()?;
    let report = check_instance(&instance, &CheckerConfig::default(), config.instance.seed())?;
    print!("{report}");
    if common.out.is_some() {
        fs::create_dir_all(&config.out_dir)?;
        fs::write(config.out_dir.join("assumptions.txt"), report.to_string())?;
    }
    Ok(())
}

fn plot(out: &Path) -> Result<(), Failure> {
    let rows = read_summary_csv(&out.join("summary.csv")).map_err(Failure::Runtime)?;
    let horizon = rows.iter().map(|r| r.checkpoint_t).max().unwrap_or(1);
    let path = out.join("regret.svg");
    fs::write(&path, render_regret_svg(&curves_from_summary(&rows), horizon))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(c) => generate(c),
        Command::Run(c) => run(c),
        Command::Bench(c) => bench(c),
        Command::Check(c) => check(c),
        Command::Plot { out } => plot(out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
