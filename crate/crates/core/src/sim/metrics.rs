//! Per-run counters and the four reported performance metrics.

use std::collections::BTreeMap;

use super::config::SimConfig;
use crate::behavior::StrategyKind;
use crate::reputation::ReputationLedger;
use crate::NodeId;

/// Raw counters gathered while a run executes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    pub strategies: Vec<StrategyKind>,
    /// Energy spent per node.
    pub energy: Vec<f64>,
    /// First attack action per malicious node.
    pub first_attack: BTreeMap<NodeId, f64>,
    /// First time any receiver blacklisted the node on an allegation verdict.
    pub detected: BTreeMap<NodeId, f64>,
    pub generated: u64,
    pub delivered: u64,
    pub unroutable: u64,
    pub lost: u64,
    pub overflow: u64,
    pub repairs: u64,
    pub route_errors: u64,
    pub delay_suspicions: u64,
    pub penalties: u64,
    pub investigations: u64,
    pub no_alternate: u64,
    pub alternate_checks: u64,
    pub allegations: u64,
    /// Allegations carrying a proof and naming a selfish node.
    pub allegations_against_selfish: u64,
    pub allegation_energy: f64,
    /// Receivers that blacklisted a selfish node on an allegation verdict.
    pub selfish_blacklistings: u64,
    /// Transitions into a local blacklist.
    pub local_blacklistings: u64,
    /// Every link-breakage investigation that queried responders, in order.
    pub investigation_log: Vec<InvestigationEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvestigationEntry {
    pub at: f64,
    pub investigator: NodeId,
    pub suspect: NodeId,
    /// The findings justified a network-wide allegation.
    pub blacklist: bool,
}

/// What the metrics need to know about one data packet.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketSummary {
    pub attacked_by: Option<NodeId>,
    pub transmissions: Vec<(NodeId, u32)>,
    pub delivered: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    /// Mean over selfish nodes of the reputation they hold, summed over all observers.
    pub rep_efficiency: Option<f64>,
    /// Energy selfish nodes spent on attacked traffic, per selfish node.
    pub dmg_selfish: f64,
    /// Reputation below zero held by selfish nodes, percent of the floor, per selfish node.
    pub dmg_selfish_reputation_pct: f64,
    /// Reputation below zero held by malicious nodes, percent of the floor, per malicious node.
    pub dmg_malicious: f64,
    /// Energy malicious nodes spent on attacked traffic, per malicious node.
    pub dmg_malicious_energy: f64,
    pub detection_rate_pct: Option<f64>,
    pub paper_literal_pct: Option<f64>,
    pub act_mal: usize,
    pub mal_det: usize,
    /// Energy of all transmissions of traffic each attacker dropped or held.
    pub attacker_waste: BTreeMap<NodeId, f64>,
    pub allegations: u64,
    pub nodes_blacklisted: usize,
    /// (observer, subject) pairs on local blacklists at the end.
    pub local_blacklist_pairs: usize,
    pub delivered: u64,
    pub generated: u64,
}

/// Detection rate and its literal complement, undefined without acting attackers.
pub fn detection_rates(mal_det: usize, act_mal: usize) -> (Option<f64>, Option<f64>) {
    if act_mal == 0 {
        return (None, None);
    }
    let rate = 100.0 * mal_det as f64 / act_mal as f64;
    (Some(rate), Some(100.0 - rate))
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

impl RunMetrics {
    pub fn compute(
        stats: &RunStats,
        ledgers: &[&ReputationLedger],
        packets: &[PacketSummary],
        cfg: &SimConfig,
    ) -> Self {
        let n = stats.strategies.len();
        let ids = || (0..n).map(|k| NodeId(k as u32));
        let malicious = |id: NodeId| stats.strategies[id.index()].is_malicious();
        let bound = n as f64;
        let held = |x: NodeId| -> f64 {
            ledgers
                .iter()
                .filter(|l| l.observer() != x)
                .map(|l| l.score(x))
                .sum()
        };
        let loss_pct = |x: NodeId| -> f64 {
            let lost: f64 = ledgers
                .iter()
                .filter(|l| l.observer() != x)
                .map(|l| (-l.score(x)).max(0.0))
                .sum();
            100.0 * lost / (bound * (n as f64 - 1.0))
        };
        let n_selfish = ids().filter(|&x| !malicious(x)).count();
        let n_mal = n - n_selfish;

        let mut attacker_waste: BTreeMap<NodeId, f64> = BTreeMap::new();
        let (mut selfish_energy, mut mal_energy) = (0.0, 0.0);
        for p in packets {
            let Some(a) = p.attacked_by else { continue };
            let mut total = 0.0;
            for &(x, count) in &p.transmissions {
                let e = cfg.sigma * count as f64;
                total += e;
                if malicious(x) {
                    mal_energy += e;
                } else {
                    selfish_energy += e;
                }
            }
            *attacker_waste.entry(a).or_insert(0.0) += total;
        }
        let per = |v: f64, k: usize| if k == 0 { 0.0 } else { v / k as f64 };

        let acting: Vec<NodeId> = stats
            .first_attack
            .keys()
            .copied()
            .filter(|&x| malicious(x))
            .collect();
        let act_mal = acting.len();
        let mal_det = acting
            .iter()
            .filter(|x| stats.detected.contains_key(x))
            .count();
        let (detection_rate_pct, paper_literal_pct) = detection_rates(mal_det, act_mal);

        Self {
            rep_efficiency: mean(ids().filter(|&x| !malicious(x)).map(held)),
            dmg_selfish: per(selfish_energy, n_selfish),
            dmg_selfish_reputation_pct: mean(ids().filter(|&x| !malicious(x)).map(loss_pct))
                .unwrap_or(0.0),
            dmg_malicious: mean(ids().filter(|&x| malicious(x)).map(loss_pct)).unwrap_or(0.0),
            dmg_malicious_energy: per(mal_energy, n_mal),
            detection_rate_pct,
            paper_literal_pct,
            act_mal,
            mal_det,
            attacker_waste,
            allegations: stats.allegations,
            nodes_blacklisted: stats.detected.len(),
            local_blacklist_pairs: ledgers.iter().map(|l| l.local_blacklist().len()).sum(),
            delivered: stats.delivered,
            generated: stats.generated,
        }
    }
}

/// Arithmetic means over runs; undefined entries are skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub rep_efficiency: Option<f64>,
    pub dmg_selfish: f64,
    pub dmg_malicious: f64,
    pub detection_rate_pct: Option<f64>,
    pub paper_literal_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub malicious_count: usize,
    pub runs: Vec<RunMetrics>,
    pub aggregate: Aggregate,
}

impl MetricsReport {
    pub fn from_runs(malicious_count: usize, runs: Vec<RunMetrics>) -> Self {
        let detection = mean(runs.iter().filter_map(|r| r.detection_rate_pct));
        let aggregate = Aggregate {
            rep_efficiency: mean(runs.iter().filter_map(|r| r.rep_efficiency)),
            dmg_selfish: mean(runs.iter().map(|r| r.dmg_selfish)).unwrap_or(0.0),
            dmg_malicious: mean(runs.iter().map(|r| r.dmg_malicious)).unwrap_or(0.0),
            detection_rate_pct: detection,
            paper_literal_pct: detection.map(|d| 100.0 - d),
        };
        Self {
            malicious_count,
            runs,
            aggregate,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reputation::{ReputationEvent, RewardSchedule};

    #[test]
    fn rates() {
        assert_eq!(detection_rates(4, 5), (Some(80.0), Some(20.0)));
        assert_eq!(detection_rates(0, 0), (None, None));
        for (d, a) in [(1, 3), (2, 3), (5, 7), (0, 9)] {
            let (r, l) = detection_rates(d, a);
            assert_eq!(r.unwrap() + l.unwrap(), 100.0);
        }
    }

    #[test]
    fn efficiency_is_mean_over_selfish() {
        // Nodes 0 and 1 selfish with 6 and 4 total reputation, node 2 malicious.
        let sched = RewardSchedule::new(2.0, 3 + 1).unwrap();
        let mut ledgers: Vec<ReputationLedger> = (0..3)
            .map(|k| ReputationLedger::new(NodeId(k), sched))
            .collect();
        ledgers[1].apply(NodeId(0), ReputationEvent::Assign(4.0));
        ledgers[2].apply(NodeId(0), ReputationEvent::Assign(2.0));
        ledgers[0].apply(NodeId(1), ReputationEvent::Assign(4.0));
        ledgers[2].apply(NodeId(2), ReputationEvent::Assign(3.0));
        let stats = RunStats {
            strategies: vec![
                StrategyKind::Supportive,
                StrategyKind::InterruptDriven,
                StrategyKind::Flood,
            ],
            energy: vec![0.0; 3],
            ..RunStats::default()
        };
        let refs: Vec<&ReputationLedger> = ledgers.iter().collect();
        let m = RunMetrics::compute(&stats, &refs, &[], &SimConfig::desk());
        assert_eq!(m.rep_efficiency, Some(5.0));
        assert_eq!(m.detection_rate_pct, None);
        assert_eq!(m.dmg_selfish, 0.0);
    }

    #[test]
    fn attack_energy_attributed() {
        let stats = RunStats {
            strategies: vec![
                StrategyKind::Supportive,
                StrategyKind::Supportive,
                StrategyKind::LinkBreak,
            ],
            energy: vec![0.0; 3],
            first_attack: [(NodeId(2), 1.0)].into(),
            detected: [(NodeId(2), 5.0)].into(),
            ..RunStats::default()
        };
        let packets = vec![
            PacketSummary {
                attacked_by: Some(NodeId(2)),
                transmissions: vec![(NodeId(0), 3), (NodeId(1), 1)],
                delivered: false,
            },
            PacketSummary {
                attacked_by: None,
                transmissions: vec![(NodeId(0), 1)],
                delivered: true,
            },
        ];
        let m = RunMetrics::compute(&stats, &[], &packets, &SimConfig::desk());
        assert_eq!(m.attacker_waste[&NodeId(2)], 4.0);
        assert_eq!(m.dmg_selfish, 2.0);
        assert_eq!((m.act_mal, m.mal_det), (1, 1));
        assert_eq!(m.detection_rate_pct, Some(100.0));
    }
}
