use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use layerpot::HelmholtzRoute;
use layerpot_cli::bench::{run_bench, BenchConfig};
use layerpot_cli::eval::{run_eval, EvalInput};
use layerpot_cli::fixtures::{format_tables, run_tables, FIXTURE_GATE};
use layerpot_cli::sweep::{log_grid, run_stability, run_sweep, write_csv, KernelName, SweepSpec};
use layerpot_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "layerpot", version, about = "Layer potentials over flat triangles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum)]
    kernel: Option<Kernel>,
    /// Wavenumber for the Helmholtz kernel (defaults to k D = 1).
    #[arg(long)]
    k: Option<f64>,
    /// Polynomial order of the density.
    #[arg(long)]
    ps: Option<usize>,
    /// Largest number of Taylor terms for e^(ikr) [default: 32].
    #[arg(long)]
    pe_max: Option<usize>,
    /// Tolerance of the Taylor expansion of e^(ikr) [default: 1e-12].
    #[arg(long)]
    tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Distance, in element diameters, below which the recursions are advised.
    #[arg(long, default_value_t = 2.0)]
    switch_radius: f64,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum Kernel {
    Laplace,
    Helmholtz,
}

impl From<Kernel> for KernelName {
    fn from(k: Kernel) -> Self {
        match k {
            Kernel::Laplace => KernelName::Laplace,
            Kernel::Helmholtz => KernelName::Helmholtz,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Distance sweep above the element: recursions, 12th-order Gauss-Legendre and the oracle.
    Sweep {
        /// Sweep description; the unit-triangle x^3 profile when absent.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-12)]
        oracle_tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute the published singular and hypersingular tables.
    Tables {
        #[command(flatten)]
        common: Common,
    },
    /// Median timings of the recursions and the oracle.
    Bench {
        /// Comma-separated density orders.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        orders: Vec<usize>,
        #[arg(long, default_value_t = 21)]
        repeat: usize,
        #[arg(long, default_value_t = 1e-4)]
        h_over_d: f64,
        #[arg(long, default_value_t = 1e-10)]
        oracle_tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Accuracy of every monomial against the oracle for increasing orders.
    Stability {
        #[arg(long, default_value_t = 9)]
        max_order: usize,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 1e-13)]
        oracle_tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate one density at one point, described by a key/value file.
    Eval {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn output(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sweep { spec, oracle_tol, common } => {
            let mut s = match &spec {
                Some(p) => SweepSpec::from_toml(&read(p)?)?,
                None => SweepSpec::default(),
            };
            if let Some(k) = common.kernel {
                s.kernel = k.into();
            }
            if let Some(k) = common.k {
                s.kernel = KernelName::Helmholtz;
                s.kd = k * s.geometry()?.diameter;
            }
            if let Some(ps) = common.ps {
                s.density = vec![(ps, 0, 1.0)];
            }
            s.pe_max = common.pe_max.unwrap_or(s.pe_max);
            s.taylor_tol = common.tol.unwrap_or(s.taylor_tol);
            s.oracle_tol = oracle_tol;
            let (rows, failures) = run_sweep(&s, HelmholtzRoute::Auto)?;
            write_csv(&rows, output(&common.out)?)?;
            if failures > 0 {
                return Err(CliError::OracleFailures(failures));
            }
        }
        Command::Tables { common } => {
            let rows = run_tables()?;
            write!(output(&common.out)?, "{}", format_tables(&rows))?;
            let bad = rows.iter().flat_map(|r| r.rel_diff).filter(|d| d.is_nan() || *d > FIXTURE_GATE).count();
            if bad > 0 {
                return Err(CliError::FixtureGate {
                    count: bad,
                    gate: FIXTURE_GATE,
                });
            }
        }
        Command::Bench {
            orders,
            repeat,
            h_over_d,
            oracle_tol,
            common,
        } => {
            let mut cfg = BenchConfig {
                orders,
                repeat,
                h_over_d,
                pe: common.pe_max.unwrap_or(32),
                oracle_tol,
                ..BenchConfig::default()
            };
            if let Some(ps) = common.ps {
                cfg.orders = vec![ps];
            }
            write_csv(&run_bench(&cfg)?, output(&common.out)?)?;
        }
        Command::Stability {
            max_order,
            points,
            oracle_tol,
            common,
        } => {
            let kernels = match common.kernel {
                Some(k) => vec![k.into()],
                None => vec![KernelName::Laplace, KernelName::Helmholtz],
            };
            let orders: Vec<usize> = (1..=max_order).collect();
            let grid = log_grid(1e-4, 1.0, points);
            let rows = run_stability(&orders, &kernels, &grid, oracle_tol, HelmholtzRoute::Auto)?;
            write_csv(&rows, output(&common.out)?)?;
        }
        Command::Eval { input, common } => {
            let mut e = EvalInput::from_toml(&read(&input)?)?;
            if let Some(k) = common.k {
                e.kernel = KernelName::Helmholtz;
                e.k = k;
            }
            e.pe_max = common.pe_max.unwrap_or(e.pe_max);
            e.tol = common.tol.unwrap_or(e.tol);
            write!(output(&common.out)?, "{}", run_eval(&e, common.switch_radius)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(h) = e.hint() {
                eprintln!("hint: {h}");
            }
            e.exit_code()
        }
    }
}
