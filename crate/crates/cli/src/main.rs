use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use scma_cli::{
    load_config, parse_sweep, run_optimize, run_sweep, CliError, Engine, OptimizeMode, Result, Scenario, SweepSpec,
};
use scma_hybrid::simulator::{allocate_resources, sample_snapshot, DEFAULT_TRIALS};
use scma_hybrid::NetworkConfig;

#[derive(Parser)]
#[command(name = "scma-hybrid", version, about = "SCMA-enabled hybrid cellular/D2D network analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// `key = value` parameter file; omitted keys keep their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Figure preset applied over the config.
    #[arg(long, default_value = "custom")]
    scenario: Scenario,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter and write a CSV table.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// KEY=start:stop:steps[:log]; defaults to the scenario's sweep.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "analytic")]
        engines: Vec<Engine>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Closed-form optimum against a brute-force search.
    Optimize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mode: OptimizeMode,
    },
    /// Sample one snapshot and write its points.
    DumpSnapshot {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn base_config(common: &Common) -> Result<NetworkConfig> {
    let base = match &common.config {
        Some(path) => load_config(path)?,
        None => NetworkConfig::default(),
    };
    let cfg = common.scenario.configure(&base);
    cfg.validate()?;
    Ok(cfg)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p.display().to_string(), e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { common, sweep, engines, trials, seed } => {
            let arg = match sweep.as_deref().or(common.scenario.default_sweep()) {
                Some(s) => s.to_string(),
                None => return Err(CliError::Usage("the custom scenario needs --sweep".into())),
            };
            let (swept_key, values) = parse_sweep(&arg)?;
            let spec = SweepSpec {
                scenario: common.scenario,
                swept_key,
                values,
                engines,
                trials,
                seed,
                output_path: common.out.clone(),
            };
            let result = run_sweep(&spec, &base_config(&common)?)?;
            result.write_csv(output(spec.output_path.as_deref())?)
        }
        Command::Optimize { common, mode } => {
            let report = run_optimize(&base_config(&common)?, mode)?;
            write!(output(common.out.as_deref())?, "{report}").map_err(|e| CliError::io("writing report", e))
        }
        Command::DumpSnapshot { common, seed } => {
            let cfg = base_config(&common)?;
            let snap = allocate_resources(&sample_snapshot(&cfg, seed), &cfg);
            let mut out = output(common.out.as_deref())?;
            snap.write_dump(&mut out).and_then(|_| out.flush()).map_err(|e| CliError::io("writing snapshot", e))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
