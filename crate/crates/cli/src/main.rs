use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fateq_cli::commands::{self, RunOptions};
use fateq_cli::csv::{render, CsvRow};
use fateq_cli::parse::{parse_angle, InstanceSpec, PointSpec};
use fateq_cli::sweep::{sweep_panels, sweep_rows, SweepConfig};
use fateq_cli::verify::{run_checks, Fault, Level, VerifyOptions};
use fateq_cli::{svg, CliError};
use fateq_core::rng::default_workers;
use fateq_core::Params;

#[derive(Parser)]
#[command(
    name = "fateq",
    version,
    about = "Equatorial strips, concentration bounds and Monte Carlo checks on spheres"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Root seed for every random stream
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo sample count
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,
    /// Write CSV here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG plot (sweep only)
    #[arg(long, global = true)]
    svg: bool,
    /// Worker threads; output does not depend on it
    #[arg(long, global = true)]
    workers: Option<usize>,
}

fn angle(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Exact strip fraction of S^n and every bound on it
    Strip {
        #[arg(short, long)]
        n: usize,
        /// Half-width in (0, pi/2); accepts pi/6, asin(0.3), ...
        #[arg(short, long, value_parser = angle)]
        epsilon: f64,
        #[arg(short, long, default_value_t = 15.0 / 32.0)]
        delta: f64,
    },
    /// Geodesic cap fraction of radius r
    Cap {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long, value_parser = angle)]
        radius: f64,
    },
    /// All bounds, including the eigenvalue and Yau bounds when their constants are given
    Bounds {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long, value_parser = angle)]
        epsilon: f64,
        #[arg(short, long, default_value_t = 15.0 / 32.0)]
        delta: f64,
        #[arg(long, requires = "a")]
        lambda1: Option<f64>,
        #[arg(long, requires = "lambda1")]
        a: Option<f64>,
        #[arg(long, requires = "c2")]
        c1: Option<f64>,
        #[arg(long, requires = "c1")]
        c2: Option<f64>,
    },
    /// Moments E[cos^{2k}] on S^m, MGF rows, or Monte Carlo moments of an instance
    Moments {
        #[arg(short, long, required_unless_present = "instance")]
        m: Option<usize>,
        #[arg(short, long, default_value_t = 10)]
        kmax: usize,
        /// MGF arguments, comma separated
        #[arg(short, long, value_parser = angle, value_delimiter = ',')]
        t: Vec<f64>,
        /// Estimate on an instance instead: "subsphere M N", "torus M1,M2"
        #[arg(short, long)]
        instance: Option<InstanceSpec>,
        #[arg(short, long, default_value = "axis 0")]
        point: PointSpec,
    },
    /// Monte Carlo strip occupancy of an instance with the bounds on it
    Estimate {
        #[arg(short, long)]
        instance: InstanceSpec,
        #[arg(short, long, default_value = "axis 0")]
        point: PointSpec,
        #[arg(short, long, value_parser = angle)]
        epsilon: f64,
        /// Extra delta values for the parametric bound
        #[arg(short, long, value_parser = angle, value_delimiter = ',')]
        deltas: Vec<f64>,
    },
    /// Sign counts of <p, x> and the two-piece verdict
    TwoPiece {
        #[arg(short, long)]
        instance: InstanceSpec,
        #[arg(short, long, default_value = "random")]
        point: PointSpec,
        #[arg(long, default_value_t = fateq_core::montecarlo::DEFAULT_TWO_PIECE_TOLERANCE)]
        tol: f64,
    },
    /// Dimension sweep from a key = value config file
    Sweep { config: PathBuf },
    /// Run every invariant check
    Verify {
        #[arg(default_value = "quick")]
        level: Level,
        /// Seed a fault to exercise the failure path
        #[arg(long)]
        inject_fault: Option<Fault>,
    },
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn emit(rows: &[CsvRow], out: Option<&Path>) -> Result<(), CliError> {
    let text = render(rows);
    match out {
        Some(path) => write_file(path, &text),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let c = cli.common;
    let workers = c.workers.unwrap_or_else(default_workers).max(1);
    let opts = RunOptions {
        seed: c.seed,
        samples: c.samples,
        workers,
    };
    if c.svg && !matches!(cli.command, Command::Sweep { .. }) {
        return Err(CliError::Usage("--svg is only supported by sweep".into()));
    }
    let out = c.out.as_deref();
    match cli.command {
        Command::Strip { n, epsilon, delta } => {
            emit(&commands::strip_rows(n, epsilon, delta)?, out)
        }
        Command::Cap { n, radius } => emit(&commands::cap_rows(n, radius)?, out),
        Command::Bounds {
            n,
            epsilon,
            delta,
            lambda1,
            a,
            c1,
            c2,
        } => {
            let mut params = Params::new(delta)?;
            if let (Some(l), Some(a)) = (lambda1, a) {
                params = params.with_eigenvalue(l, a)?;
            }
            if let (Some(c1), Some(c2)) = (c1, c2) {
                params = params.with_yau_constants(c1, c2)?;
            }
            emit(&commands::bounds_rows(n, epsilon, &params)?, out)
        }
        Command::Moments {
            m,
            kmax,
            t,
            instance,
            point,
        } => {
            let rows = match instance {
                Some(spec) => commands::moment_estimate_rows(&spec, point, kmax, &opts)?,
                None => commands::moment_rows(m.unwrap_or(1), kmax, &t)?,
            };
            emit(&rows, out)
        }
        Command::Estimate {
            instance,
            point,
            epsilon,
            deltas,
        } => emit(
            &commands::estimate_rows(&instance, point, epsilon, &deltas, &opts)?,
            out,
        ),
        Command::TwoPiece {
            instance,
            point,
            tol,
        } => emit(
            &commands::two_piece_rows(&instance, point, tol, &opts)?,
            out,
        ),
        Command::Sweep { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::io(config.display().to_string(), e))?;
            let cfg = SweepConfig::parse(&text)?;
            let rows = sweep_rows(&cfg, workers)?;
            let csv_path = c.out.or(cfg.output.clone());
            let svg_path = match (&cfg.svg, c.svg, &csv_path) {
                (Some(p), _, _) => Some(p.clone()),
                (None, true, Some(p)) => Some(p.with_extension("svg")),
                (None, true, None) => {
                    return Err(CliError::Usage(
                        "--svg needs --out or an output key in the config".into(),
                    ))
                }
                (None, false, _) => None,
            };
            emit(&rows, csv_path.as_deref())?;
            if let Some(p) = svg_path {
                write_file(&p, &svg::render(&sweep_panels(&cfg, &rows)))?;
            }
            Ok(())
        }
        Command::Verify {
            level,
            inject_fault,
        } => {
            let vopts = VerifyOptions {
                level,
                seed: c.seed,
                workers,
                fault: inject_fault,
            };
            let report = run_checks(vopts, |outcome| println!("{}", outcome.line()));
            if let Some(path) = out {
                write_file(path, &render(&report.rows()))?;
            }
            let failed = report.failures();
            println!(
                "{} of {} checks passed",
                report.checks.len() - failed,
                report.checks.len()
            );
            if failed > 0 {
                return Err(CliError::VerificationFailed(failed));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fateq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
