use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::CliError;

#[derive(Parser)]
#[command(name = "circlemap", version, about = "Circle homeomorphisms, Blaschke quotients and Fourier spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Below,
    Above,
}

#[derive(Subcommand)]
enum Command {
    /// Fourier spectrum (CSV) and a JSON summary of support, area and Parseval defect.
    Fourier {
        spec: PathBuf,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        /// Keep coefficients with |n| ≤ window.
        #[arg(long)]
        window: Option<usize>,
        /// Coefficients at or below this modulus are outside the support.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// Directory for spectrum.csv and summary.json.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Certify a quotient as a circle diffeomorphism, or screen sampled maps.
    Certify {
        spec: PathBuf,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Approximate a homeomorphism by a certified rational diffeomorphism.
    Approximate {
        spec: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = DirectionArg::Below)]
        direction: DirectionArg,
        /// Also write the result JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the image curve as an SVG polyline.
    Figure {
        spec: PathBuf,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value = "figure.svg")]
        out: PathBuf,
    },
    /// Hall/Weitsman report, horizontal convexity report and curvature bound.
    Bounds {
        spec: PathBuf,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// Random search over star-shaped polygons for small low-order coefficients.
    Search {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        window: usize,
        #[arg(long, default_value_t = 6)]
        vertices: usize,
    },
    /// Re-run the worked examples and write their artifacts.
    Reproduce {
        #[arg(long, default_value = "reproduce")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include the slow homeomorphism approximation runs.
        #[arg(long)]
        full: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fourier {
            spec,
            grid,
            window,
            tolerance,
            out,
        } => commands::fourier(&spec, grid, window, tolerance, &out),
        Command::Certify { spec, grid } => commands::certify(&spec, grid),
        Command::Approximate {
            spec,
            eps,
            direction,
            out,
        } => {
            let direction = match direction {
                DirectionArg::Below => circlemap::Direction::Below,
                DirectionArg::Above => circlemap::Direction::Above,
            };
            commands::approximate(&spec, eps, direction, out.as_deref())
        }
        Command::Figure { spec, grid, out } => commands::figure(&spec, grid, &out),
        Command::Bounds { spec, grid } => commands::bounds(&spec, grid),
        Command::Search {
            seed,
            trials,
            window,
            vertices,
        } => commands::search(seed, trials, window, vertices),
        Command::Reproduce { out, seed, full } => commands::reproduce(&out, seed, full),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
