//! Configuration, the simulation engine, metrics, closed-form checks,
//! sweeps and CSV output.

pub mod config;
pub mod metrics;
pub mod props;
pub mod report;
pub mod world;

use sha2::{Digest, Sha256};

pub use config::{MaliciousStrategy, PactMode, SimConfig};
pub use metrics::{
    detection_rates, Aggregate, InvestigationEntry, MetricsReport, RunMetrics, RunStats,
};
pub use props::{
    collusion_margin_closed_form, damage_bound, link_margin_closed_form,
    proposition_gains_collusion, proposition_gains_link, PropositionReport,
};
pub use report::{emit_report, metrics_csv, runs_csv, CSV_HEADER};
pub use world::{run_once, run_seed, RunOutput, World};

use crate::error::{Error, Result};

/// All repetitions of one configuration.
#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub report: MetricsReport,
    pub outputs: Vec<RunOutput>,
}

impl SimulationResult {
    /// SHA-256 over the per-run trace hashes in run order.
    pub fn trace_hash(&self) -> String {
        combine_hashes(self.outputs.iter().map(|o| o.trace_hash.as_str()))
    }
}

fn combine_hashes<'a>(hashes: impl Iterator<Item = &'a str>) -> String {
    let mut h = Sha256::new();
    for s in hashes {
        h.update(s.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// Both closed-form margins must be positive for the run's α and |Φ|.
pub fn check_margins(cfg: &SimConfig) -> Result<()> {
    let phi = cfg.node_count as f64;
    let c = proposition_gains_collusion(cfg.alpha, phi)?;
    let l = proposition_gains_link(1.0, 1.0, cfg.alpha, phi)?;
    if c.margin <= 0.0 || l.margin <= 0.0 {
        return Err(Error::PropositionPrecondition(
            "non-positive honesty margin".into(),
        ));
    }
    Ok(())
}

/// Runs every repetition, concurrently, and aggregates in run order.
pub fn run_simulation(cfg: &SimConfig) -> Result<SimulationResult> {
    cfg.validate()?;
    check_margins(cfg)?;
    let outputs: Vec<RunOutput> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..cfg.runs)
            .map(|r| scope.spawn(move || run_once(cfg, r)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("run thread panicked"))
            .collect()
    });
    let report = MetricsReport::from_runs(
        cfg.malicious_count,
        outputs.iter().map(|o| o.metrics.clone()).collect(),
    );
    Ok(SimulationResult { report, outputs })
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub results: Vec<SimulationResult>,
}

impl SweepResult {
    pub fn reports(&self) -> Vec<MetricsReport> {
        self.results.iter().map(|r| r.report.clone()).collect()
    }

    pub fn csv(&self) -> String {
        metrics_csv(&self.reports())
    }

    pub fn trace_hash(&self) -> String {
        let per: Vec<String> = self.results.iter().map(|r| r.trace_hash()).collect();
        combine_hashes(per.iter().map(String::as_str))
    }
}

/// One run set per malicious count, same seed for each.
pub fn sweep(cfg: &SimConfig, malicious_counts: &[usize]) -> Result<SweepResult> {
    let mut results = Vec::with_capacity(malicious_counts.len());
    for &m in malicious_counts {
        if m > cfg.node_count {
            return Err(Error::config(
                "malicious_count",
                format!("{m} exceeds node_count"),
            ));
        }
        let c = SimConfig {
            malicious_count: m,
            ..cfg.clone()
        };
        results.push(run_simulation(&c)?);
    }
    Ok(SweepResult { results })
}
