use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stiefel_qg::matio;
use stiefel_qg_cli::{
    cmd_bench, cmd_connect, cmd_figure1, cmd_table1, parse_distance, parse_p_range, CliError,
    CurveKind, ExperimentConfig, ExperimentReport, Format,
};

/// Quasi-geodesics on the Stiefel manifold.
///
/// Set QG_TOL (for example `QG_TOL=point=1e-8,frame=1e-9`) to override the
/// numerical tolerances.
#[derive(Parser)]
#[command(name = "qgeo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a curve between two frames stored in matrix files.
    Connect {
        start: PathBuf,
        end: PathBuf,
        #[arg(long, value_enum, default_value = "short")]
        curve: CurveArg,
        #[arg(long, default_value_t = 51)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance of both quasi-geodesics to the geodesic along the curve.
    Figure1(ExperimentArgs),
    /// Relative length deviation over a range of p.
    Table1(ExperimentArgs),
    /// Timings of the economy, short and full representations.
    Bench(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveArg {
    Econ,
    Short,
    GeodesicShooting,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// Sweep over p as `start:end:step`.
    #[arg(long, value_parser = parse_p_range)]
    p_range: Option<(usize, usize, usize)>,
    /// Comma separated distances; `0.5pi` means π/2.
    #[arg(long, value_delimiter = ',', value_parser = parse_distance)]
    d: Vec<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Start from the larger published problem sizes.
    #[arg(long)]
    paper_scale: bool,
}

impl ExperimentArgs {
    fn config(&self, desk: ExperimentConfig, paper: ExperimentConfig) -> ExperimentConfig {
        let mut cfg = if self.paper_scale { paper } else { desk };
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(p) = self.p {
            cfg.p = p;
            cfg.p_range = None;
        }
        if self.p_range.is_some() {
            cfg.p_range = self.p_range;
        }
        if !self.d.is_empty() {
            cfg.distances = self.d.clone();
        }
        if let Some(s) = self.samples {
            cfg.samples_per_curve = s;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg.format = match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
        cfg
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn render(report: &ExperimentReport) -> String {
    match report.config.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Connect {
            start,
            end,
            curve,
            samples,
            out,
        } => {
            let kind = match curve {
                CurveArg::Econ => CurveKind::Econ,
                CurveArg::Short => CurveKind::Short,
                CurveArg::GeodesicShooting => CurveKind::GeodesicShooting,
            };
            let m = cmd_connect(&start, &end, kind, samples)?;
            emit(&matio::write_matrix(&m), out.as_ref())
        }
        Command::Figure1(args) => {
            let cfg = args.config(
                ExperimentConfig::figure1_default(),
                ExperimentConfig::figure1_paper(),
            );
            emit(&render(&cmd_figure1(&cfg)?), args.out.as_ref())
        }
        Command::Table1(args) => {
            let cfg = args.config(
                ExperimentConfig::table1_default(),
                ExperimentConfig::table1_paper(),
            );
            emit(&render(&cmd_table1(&cfg)?), args.out.as_ref())
        }
        Command::Bench(args) => {
            let cfg = args.config(
                ExperimentConfig::bench_default(),
                ExperimentConfig::bench_paper(),
            );
            emit(&render(&cmd_bench(&cfg)?), args.out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.name());
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
