use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use covertnet_harness::commands::{run_command, Command};
use covertnet_harness::config::{parse_config, ExperimentConfig};
use covertnet_harness::figures::{run_figure, write_figure};
use covertnet_harness::plot::{line_chart, series_from};
use covertnet_harness::selftest::run_selftest;
use covertnet_harness::table::ResultTable;
use covertnet_harness::{HarnessError, Result};

#[derive(Parser)]
#[command(
    name = "covertnet",
    version,
    about = "Covert communication and THz secrecy experiments"
)]
struct Cli {
    /// Master seed (overrides the configuration file)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo trials (overrides the configuration file)
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output directory (overrides the configuration file)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML experiment configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; results do not depend on this
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reproduce a built-in figure (3-14)
    Fig { id: u32 },
    /// Covert communication under AWGN with PPP interference
    Awgn {
        #[command(subcommand)]
        what: AwgnCmd,
    },
    /// THz interference and secrecy
    Thz {
        #[command(subcommand)]
        what: ThzCmd,
    },
    /// Cross-check the kernels against independent oracles
    Selftest,
}

#[derive(Subcommand, Clone, Copy)]
enum AwgnCmd {
    /// Analytic bounds on Willie's and Bob's error, covert distance and bits
    Bound,
    /// Empirical radiometer detection error
    Detect,
    /// Spatial throughput of the jammer and interference schemes
    Throughput,
}

#[derive(Subcommand, Clone, Copy)]
enum ThzCmd {
    /// Interference mean and variance, closed form and simulated
    Interference,
    /// Secrecy capacity over the scattering geometry
    Secrecy,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(match cli.workers {
            Some(0) => return Err(HarnessError::Usage("--workers must be at least 1".into())),
            Some(w) => w,
            None => 0,
        })
        .build()
        .map_err(|e| HarnessError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| dispatch(&cli))
}

fn dispatch(cli: &Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => parse_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.file.run.seed = seed;
    }
    if let Some(trials) = cli.trials {
        if trials == 0 {
            return Err(HarnessError::Usage("--trials must be at least 1".into()));
        }
        cfg.file.run.trials = trials;
    }
    let out = cli.out.clone().unwrap_or_else(|| cfg.file.run.out.clone());

    let cmd = match cli.cmd {
        Cmd::Fig { id } => {
            let fig = run_figure(id, cfg.seed(), cli.trials)?;
            let (csv, svg) = write_figure(&fig, &out)?;
            println!("{}\n{}", csv.display(), svg.display());
            return Ok(());
        }
        Cmd::Selftest => {
            let t = run_selftest(cfg.seed(), cli.trials.unwrap_or(4000))?;
            let path = write_table(&t, &out)?;
            println!("all {} checks passed\n{}", t.rows().len(), path.display());
            return Ok(());
        }
        Cmd::Awgn { what: AwgnCmd::Bound } => Command::AwgnBound,
        Cmd::Awgn { what: AwgnCmd::Detect } => Command::AwgnDetect,
        Cmd::Awgn {
            what: AwgnCmd::Throughput,
        } => Command::AwgnThroughput,
        Cmd::Thz {
            what: ThzCmd::Interference,
        } => Command::ThzInterference,
        Cmd::Thz { what: ThzCmd::Secrecy } => Command::ThzSecrecy,
    };
    let t = run_command(cmd, &cfg)?;
    let csv = write_table(&t, &out)?;
    let x = t.columns()[0].clone();
    let series: Vec<_> = t.columns()[1..]
        .iter()
        .flat_map(|c| series_from(&t, &x, c, &[]))
        .collect();
    let svg = out.join(format!("{}.svg", t.name));
    std::fs::write(&svg, line_chart(&t.name, &x, "value", &series)).map_err(|e| HarnessError::Io {
        context: format!("writing {}", svg.display()),
        source: e,
    })?;
    println!("{}\n{}", csv.display(), svg.display());
    Ok(())
}

fn write_table(t: &ResultTable, out: &Path) -> Result<PathBuf> {
    let io = |p: &Path, e| HarnessError::Io {
        context: format!("writing {}", p.display()),
        source: e,
    };
    std::fs::create_dir_all(out).map_err(|e| io(out, e))?;
    let path = out.join(format!("{}.csv", t.name));
    std::fs::write(&path, t.to_csv()).map_err(|e| io(&path, e))?;
    Ok(path)
}
