//! `binae`: run one experiment and write its table as CSV or JSON.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use binae::experiments::{self, Experiment, ExperimentConfig, Table};
use binae::models::{DecoderKind, ModelKind};
use clap::{Parser, ValueEnum};

mod output;

#[derive(Parser, Debug)]
#[command(name = "binae", version, about = "Run a binary autoencoder experiment and write its table")]
struct Cli {
    /// One of: sweep-sparsity, sweep-ratio, sweep-ax, sweep-aw, mi-curve,
    /// map-curve, analytic-compare, threshold-approx, attractor-census,
    /// weights-comparison, axr-average.
    experiment: String,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    ax: Option<usize>,
    #[arg(long)]
    aw: Option<usize>,
    /// Restrict the run to one model.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, value_enum)]
    decoder: Option<DecoderArg>,
    /// Trials per sweep point (default depends on the experiment).
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Write the table here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: json for a `.json` path, otherwise csv).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Threshold,
    Kwta,
    Bmp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecoderArg {
    Transpose,
    Random,
    Pairwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Config(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn config_from(cli: &Cli) -> Result<ExperimentConfig, Failure> {
    let experiment: Experiment = cli.experiment.parse().map_err(|e: binae::Error| Failure::Config(e.to_string()))?;
    let mut config = ExperimentConfig::new(experiment);
    config.n_x = cli.nx.unwrap_or(config.n_x);
    config.n_y = cli.ny.unwrap_or(config.n_y);
    config.a_x = cli.ax.unwrap_or(config.a_x);
    config.a_w = cli.aw.unwrap_or(config.a_w);
    if let Some(m) = cli.model {
        config.models = vec![match m {
            ModelArg::Threshold => ModelKind::Threshold,
            ModelArg::Kwta => ModelKind::Kwta,
            ModelArg::Bmp => ModelKind::Bmp,
        }];
    }
    if let Some(d) = cli.decoder {
        config.decoder = match d {
            DecoderArg::Transpose => DecoderKind::Transpose,
            DecoderArg::Random => DecoderKind::IndependentRandom,
            DecoderArg::Pairwise => DecoderKind::Pairwise,
        };
    }
    config.trials = cli.trials;
    config.seed = cli.seed;
    config.validate().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(config)
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let config = config_from(cli)?;
    if cli.workers == Some(0) {
        return Err(Failure::Config("--workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Config(e.to_string()))?;
    let format = cli.format.unwrap_or(match &cli.out {
        Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
        _ => Format::Csv,
    });

    let start = Instant::now();
    let table: Table = pool
        .install(|| experiments::run(&config))
        .map_err(|e| Failure::Config(e.to_string()))?;
    let runtime = start.elapsed().as_secs_f64();

    let summary = output::summary(&table, runtime);
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_table(&mut w, format, &config, &table, runtime)?;
            w.flush()?;
            let mut out = io::stdout().lock();
            writeln!(out, "{summary}")?;
            writeln!(out, "wrote {}", path.display())?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_table(&mut w, format, &config, &table, runtime)?;
            w.flush()?;
            writeln!(io::stderr(), "{summary}")?;
        }
    }
    Ok(())
}

fn write_table<W: Write>(w: &mut W, format: Format, config: &ExperimentConfig, table: &Table, runtime: f64) -> io::Result<()> {
    match format {
        Format::Csv => output::write_csv(w, table),
        Format::Json => output::write_json(w, config, table, runtime),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("binae: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("binae: {e}");
            ExitCode::from(1)
        }
    }
}
