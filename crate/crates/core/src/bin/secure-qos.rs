//! Command-line front end of the experiment runner.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use secure_qos::experiment::{reproduce, Command, Figure, MethodKind, Overrides, RunOutput, Scenario};
use secure_qos::Result;

#[derive(Parser)]
#[command(name = "secure-qos", version, about = "Secure throughput and energy efficiency under QoS constraints")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed; overrides the scenario file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Expectation method; overrides the scenario file.
    #[arg(long, global = true, value_enum)]
    method: Option<Method>,
    /// Monte Carlo sample count; overrides the scenario file.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Mc,
    Quad,
}

#[derive(Subcommand)]
enum Cmd {
    /// Effective capacity and maximum arrival rate against SNR.
    Analyze,
    /// Throughput against energy per bit with low-SNR reference values.
    Energy,
    /// Buffer simulation and overflow exponent fit.
    Simulate,
    /// Fixed-rate transmission without transmitter CSI.
    Nocsi,
    /// Run a bundled figure scenario (fig2 .. fig12).
    Reproduce {
        #[arg(value_parser = parse_figure)]
        figure: Figure,
    },
}

fn parse_figure(s: &str) -> std::result::Result<Figure, String> {
    s.parse().map_err(|e: secure_qos::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let c = &cli.common;
    let overrides = Overrides {
        seed: c.seed,
        method: c.method.map(|m| match m {
            Method::Mc => MethodKind::Mc,
            Method::Quad => MethodKind::Quad,
        }),
        samples: c.samples,
    };
    let output = match &cli.command {
        Cmd::Reproduce { figure } => reproduce(*figure, &overrides)?,
        cmd => {
            let command = match cmd {
                Cmd::Analyze => Command::Analyze,
                Cmd::Energy => Command::Energy,
                Cmd::Simulate => Command::Simulate,
                Cmd::Nocsi => Command::NoCsi,
                Cmd::Reproduce { .. } => unreachable!(),
            };
            let path = c.config.as_ref().ok_or_else(|| {
                secure_qos::Error::Config(format!("`{}` needs --config <PATH>", command.name()))
            })?;
            let mut scenario = Scenario::load(path)?;
            scenario.apply(&overrides);
            scenario.validate()?;
            command.run(&scenario)?
        }
    };
    report(&output, c)
}

fn report(output: &RunOutput, c: &Common) -> Result<()> {
    for line in &output.summary {
        println!("{line}");
    }
    for p in output.write(&c.out)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
