use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use stiefel_cli::commands::{self, ActionsParams, HolonomyParams, OracleParams, PolarParams, TablesParams, TgParams};
use stiefel_cli::{Config, RunReport};
use stiefel_core::actions::{ActionRow, RowParams};
use stiefel_core::totgeo::{DEFAULT_T_SAMPLES, PASS_TOL};
use stiefel_core::{Error, Exec};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "stiefel", version, about = "Verification suites for the Stiefel manifold V2(R^{n+2})")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// TOML file with default values for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jacobi spectra along the singular segment and at X_13.
    Tables {
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long)]
        t_steps: Option<usize>,
    },
    /// Tojo's criterion on catalog candidates and perturbed controls.
    VerifyTg {
        #[arg(long)]
        n: Option<usize>,
        /// all, stiefel:P, spheres:P,Q, hopf:K, hopf-real:K, reflective:1,P,
        /// reflective:2,P or reflective:3. Repeatable.
        #[arg(long)]
        candidate: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        t_samples: Vec<f64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Directions per candidate (default 2 dim s).
        #[arg(long)]
        dirs: Option<usize>,
        /// Perturbed controls when checking the whole catalog.
        #[arg(long)]
        controls: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Curvature algebra, its commutant and the wedge identities.
    Holonomy {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Isometric actions on Stiefel manifolds.
    Actions {
        #[command(subcommand)]
        command: ActionsCommand,
    },
    /// Sectional curvature against the bracket oracle on random pairs.
    Oracle {
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long)]
        pairs: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum ActionsCommand {
    /// Cohomogeneity of catalogued actions.
    Verify {
        /// Row identifier.
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        row: Option<String>,
        /// Every catalogued row at its default parameters.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Section and orbit checks for [SO(q) x SO(n+2-q)] x SO(2).
    Polar {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

/// Flag, else config value, else built-in default.
fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

fn pick_list<T: Clone>(flag: Vec<T>, config: Option<Vec<T>>, default: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        config.unwrap_or(default)
    } else {
        flag
    }
}

fn single(list: Option<Vec<usize>>) -> Result<Option<usize>, Error> {
    match list.as_deref() {
        None => Ok(None),
        Some([x]) => Ok(Some(*x)),
        Some(other) => Err(Error::Argument(format!("expected a single n, got {other:?}"))),
    }
}

fn run(cli: Cli, cfg: Config) -> Result<RunReport, Error> {
    let seed = pick(cli.seed, cfg.seed, 0);
    let exec = if cli.sequential || cfg.sequential == Some(true) { Exec::Sequential } else { Exec::default() };
    let cfg_n = cfg.n.clone().map(|n| n.into_vec());
    match cli.command {
        Command::Tables { n, t_steps } => commands::tables(&TablesParams {
            ns: pick_list(n, cfg_n, (2..=8).collect()),
            t_steps: pick(t_steps, cfg.t_steps, 16),
            seed,
            exec,
        }),
        Command::VerifyTg { n, candidate, t_samples, tol, dirs, controls, epsilon } => commands::verify_tg(&TgParams {
            n: pick(n, single(cfg_n)?, 4),
            candidates: pick_list(candidate, cfg.candidate.map(|c| vec![c]), vec!["all".into()]),
            t_samples: pick_list(t_samples, cfg.t_samples, DEFAULT_T_SAMPLES.to_vec()),
            tol: pick(tol, cfg.tol, PASS_TOL),
            dirs: dirs.or(cfg.dirs),
            controls: pick(controls, cfg.controls, 200),
            epsilon: pick(epsilon, cfg.epsilon, 0.05),
            seed,
            exec,
        }),
        Command::Holonomy { n } => commands::holonomy(&HolonomyParams { n: pick(n, single(cfg_n)?, 2), seed }),
        Command::Actions { command: ActionsCommand::Verify { row, all, n, k, m, q, samples } } => {
            let rows = if all {
                commands::all_rows()
            } else {
                let params = RowParams { n: n.or(single(cfg_n)?), k: k.or(cfg.k), m: m.or(cfg.m), q: q.or(cfg.q) };
                vec![ActionRow::from_id(row.as_deref().unwrap_or_default(), params)?]
            };
            commands::actions_verify(&ActionsParams { rows, samples: pick(samples, cfg.samples, 10), seed, exec })
        }
        Command::Actions { command: ActionsCommand::Polar { n, q, grid, samples } } => {
            commands::actions_polar(&PolarParams {
                n: pick(n, single(cfg_n)?, 4),
                q: pick(q, cfg.q, 3),
                grid: pick(grid, cfg.grid, 20),
                samples: pick(samples, cfg.samples, 10),
                seed,
                exec,
            })
        }
        Command::Oracle { n, pairs } => commands::oracle(&OracleParams {
            ns: pick_list(n, cfg_n, (2..=8).collect()),
            pairs: pick(pairs, cfg.pairs, 1000),
            seed,
            exec,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: config {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        },
        None => Config::default(),
    };
    let format = match (cli.format, cfg.format.as_deref()) {
        (Some(f), _) => f,
        (None, None) => Format::Json,
        (None, Some(s)) => match Format::from_str(s, true) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: config format: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        },
    };
    let output = cli.output.clone();
    let report = match run(cli, cfg) {
        Ok(r) => r,
        Err(e @ Error::Argument(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILED);
        }
    };
    let body = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    let written = match &output {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(EXIT_FAILED);
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}
