use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use racs_core::apd::{evaluate, ApdInputs, RangeParams};
use racs_core::sim::{
    self, damage_bound, emit_report, proposition_gains_collusion, proposition_gains_link,
    PropositionReport, SimConfig,
};
use racs_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "racs",
    version,
    about = "Reputation-based MANET cooperation simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every repetition of one configuration.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Run one configuration per malicious count.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated malicious counts.
        #[arg(long, value_delimiter = ',', required = true)]
        malicious: Vec<usize>,
    },
    /// Print the honesty-versus-deviation gains and the damage bound.
    CheckProps {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        phi: f64,
        #[arg(long, requires = "psi2")]
        psi1: Option<f64>,
        #[arg(long, requires = "psi1")]
        psi2: Option<f64>,
        #[arg(long, default_value_t = 10.0)]
        hop: f64,
        #[arg(long, default_value_t = 5.0)]
        max_suspicions: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
    },
    /// Penalty decider utilities.
    Apd {
        #[command(subcommand)]
        command: ApdCommand,
    },
}

#[derive(Subcommand)]
enum ApdCommand {
    /// Fuzzify crisp inputs and run the rule tables.
    Eval {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        e: f64,
        #[arg(long)]
        z: f64,
        /// Path fraction; omit for the delay variant.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        phi: usize,
        #[arg(long)]
        hop: u32,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for metrics.csv, runs.csv and trace.txt.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep the full event trace.
    #[arg(long)]
    trace: bool,
}

impl Common {
    fn load(&self) -> Result<SimConfig> {
        let text = fs::read_to_string(&self.config).map_err(|e| Error::Output {
            path: self.config.clone(),
            reason: e.to_string(),
        })?;
        let mut cfg = SimConfig::parse(&text)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.trace |= self.trace;
        Ok(cfg)
    }
}

fn print_report(name: &str, r: &PropositionReport) {
    println!("{name}.theta_h = {}", r.theta_h);
    println!("{name}.theta_d = {}", r.theta_d);
    println!("{name}.margin = {}", r.margin);
}

fn write_outputs(out: Option<&Path>, results: &[&sim::SimulationResult], csv: &str) -> Result<()> {
    match out {
        Some(dir) => {
            let reports: Vec<_> = results.iter().map(|r| r.report.clone()).collect();
            let trace: Option<Vec<String>> = results
                .iter()
                .flat_map(|r| r.outputs.iter())
                .map(|o| o.trace.clone())
                .collect::<Option<Vec<_>>>()
                .map(|v| v.concat());
            emit_report(&reports, dir, trace.as_deref())
        }
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { common } => {
            let cfg = common.load()?;
            let result = sim::run_simulation(&cfg)?;
            let csv = sim::metrics_csv(std::slice::from_ref(&result.report));
            write_outputs(common.out.as_deref(), &[&result], &csv)?;
            let events: u64 = result.outputs.iter().map(|o| o.events).sum();
            eprintln!("events {events}");
            eprintln!("trace_hash {}", result.trace_hash());
        }
        Command::Sweep { common, malicious } => {
            let cfg = common.load()?;
            let sweep = sim::sweep(&cfg, &malicious)?;
            let refs: Vec<_> = sweep.results.iter().collect();
            write_outputs(common.out.as_deref(), &refs, &sweep.csv())?;
            eprintln!("trace_hash {}", sweep.trace_hash());
        }
        Command::CheckProps {
            alpha,
            phi,
            psi1,
            psi2,
            hop,
            max_suspicions,
            sigma,
        } => {
            print_report("collusion", &proposition_gains_collusion(alpha, phi)?);
            if let (Some(p1), Some(p2)) = (psi1, psi2) {
                print_report("link", &proposition_gains_link(p1, p2, alpha, phi)?);
            }
            println!(
                "damage_bound = {}",
                damage_bound(hop, max_suspicions, sigma, phi)
            );
        }
        Command::Apd {
            command:
                ApdCommand::Eval {
                    c,
                    e,
                    z,
                    p,
                    phi,
                    hop,
                },
        } => {
            let eval = evaluate(
                &ApdInputs {
                    comparative: c,
                    expectation: e,
                    correctness: z,
                    path_fraction: p,
                },
                RangeParams {
                    phi_size: phi,
                    hop_limit: hop,
                },
            )?;
            println!("C = {}", eval.c);
            println!("E = {}", eval.e);
            println!("Z = {}", eval.z);
            if let Some(pg) = eval.p {
                println!("P = {pg}");
            }
            println!("rho1 = {}", eval.rho1);
            println!("rho2 = {}", eval.rho2);
            println!("RAQ = {}", eval.raq);
            println!("kappa = {}", eval.kappa);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidConfig { .. } | Error::ConfigSyntax { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
