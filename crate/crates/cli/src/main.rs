use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fpp_core::harness::{run, ExperimentConfig};
use fpp_core::Error;

/// Monte Carlo experiments for first-passage percolation on Z^d.
#[derive(Parser)]
#[command(name = "fpp", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Maximal geodesic weight against the growth order.
    Scaling(RunArgs),
    /// Tail of sums of i.i.d. weights.
    LdpIid(RunArgs),
    /// Tail of box-restricted passage times.
    LdpRestricted(RunArgs),
    /// Frequencies of good edges, black boxes and A-conditions.
    EventProb(RunArgs),
    /// Variance of t(0, N e_1).
    Concentration(RunArgs),
    /// Structural checks of the Xi construction.
    XiVerify(RunArgs),
    /// Per-replica passage times and maximal weights.
    Simulate(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory for <kind>.csv and <kind>.json; CSV goes to stdout
    /// when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Cmd {
    fn parts(&self) -> (&'static str, &RunArgs) {
        match self {
            Cmd::Scaling(a) => ("scaling", a),
            Cmd::LdpIid(a) => ("ldp_iid", a),
            Cmd::LdpRestricted(a) => ("ldp_restricted", a),
            Cmd::EventProb(a) => ("event_prob", a),
            Cmd::Concentration(a) => ("concentration", a),
            Cmd::XiVerify(a) => ("xi_verify", a),
            Cmd::Simulate(a) => ("simulate", a),
        }
    }
}

const EXIT_CONFIG: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceCap(_) => EXIT_RESOURCE,
        Error::Config(_)
        | Error::InvalidParameter(_)
        | Error::OutOfRange(_)
        | Error::Dimension(_)
        | Error::DimensionMismatch { .. } => EXIT_CONFIG,
        _ => 1,
    }
}

fn load(kind: &str, args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    if cfg.experiment.kind() != kind {
        return Err(Error::Config(format!(
            "configuration describes a {} experiment, not {kind}",
            cfg.experiment.kind()
        )));
    }
    if let Some(s) = args.seed {
        cfg.master_seed = s;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    if args.out.is_some() {
        cfg.output = args.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.cmd.parts();
    let result = load(kind, args).and_then(|cfg| {
        let report = run(&cfg)?;
        match &cfg.output {
            Some(dir) => {
                let (c, j) = report.write_to(dir)?;
                eprintln!("wrote {} and {}", c.display(), j.display());
            }
            None => print!("{}", report.to_csv()?),
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
