//! Link-breakage investigation over HELLO histories returned by the
//! suspect's current neighbours.

use std::collections::BTreeMap;

use crate::net::{HelloRecord, Point};
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlacklistRule {
    /// In-range count reaches the ceiling estimate `z` (or `z - 1`).
    #[default]
    Pseudocode,
    /// Every one of the `y` expected beacons was collected and in range.
    Prose,
}

impl std::str::FromStr for BlacklistRule {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pseudocode" => Ok(BlacklistRule::Pseudocode),
            "prose" => Ok(BlacklistRule::Prose),
            other => Err(format!("expected pseudocode|prose, got `{other}`")),
        }
    }
}

/// `y = ⌊3τ' / τ_hello⌋`.
pub fn expected_hellos(tau_prime: f64, hello_interval: f64) -> u64 {
    (3.0 * tau_prime / hello_interval).floor() as u64
}

/// `z = ⌈(t2 - t1) / τ_hello⌉`.
pub fn estimated_hellos(t1: f64, t2: f64, hello_interval: f64) -> u64 {
    ((t2 - t1) / hello_interval).ceil().max(0.0) as u64
}

/// Records one responder disclosed.
#[derive(Debug, Clone, PartialEq)]
pub struct HelloReply {
    pub responder: NodeId,
    pub records: Vec<HelloRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvestigationFindings {
    /// `y`
    pub expected: u64,
    /// `z`
    pub estimated: u64,
    /// `x'`: distinct beacons of the suspect collected in the window.
    pub collected: u64,
    /// `x''`: collected beacons sent while the investigator was in range.
    pub in_range: u64,
    /// Responders that were listed as receivers of a beacon yet omitted it.
    pub concealers: Vec<NodeId>,
    /// Non-concealing responders that contributed at least one beacon.
    pub supporters: Vec<NodeId>,
    /// Union of disclosed beacons, ordered by timestamp.
    pub records: Vec<HelloRecord>,
    pub blacklist: bool,
}

impl InvestigationFindings {
    /// `(x'', x')` clipped so that `x'' ≤ x' ≤ y`.
    pub fn clamped_counts(&self) -> (u64, u64) {
        let collected = self.collected.min(self.expected);
        (self.in_range.min(collected), collected)
    }
}

/// Blacklist test on counts alone.
pub fn blacklist_decision(
    rule: BlacklistRule,
    in_range: u64,
    collected: u64,
    expected: u64,
    estimated: u64,
) -> bool {
    match rule {
        BlacklistRule::Pseudocode => in_range > 0 && in_range + 1 >= estimated,
        BlacklistRule::Prose => expected > 0 && in_range == collected && collected >= expected,
    }
}

/// Number of beacons in `records` sent by `suspect` within `[t1, t2]` from
/// inside the investigator's range.
pub fn count_in_range(
    records: &[HelloRecord],
    suspect: NodeId,
    t1: f64,
    t2: f64,
    investigator_range: f64,
    investigator_at: &dyn Fn(f64) -> Point,
) -> u64 {
    records
        .iter()
        .filter(|r| r.sender == suspect && r.timestamp >= t1 && r.timestamp <= t2)
        .filter(|r| r.position.distance(investigator_at(r.timestamp)) < investigator_range)
        .count() as u64
}

#[allow(clippy::too_many_arguments)]
pub fn analyze_hello_replies(
    investigator: NodeId,
    suspect: NodeId,
    investigator_range: f64,
    investigator_at: &dyn Fn(f64) -> Point,
    t1: f64,
    t2: f64,
    tau_prime: f64,
    suspect_hello_interval: f64,
    replies: &[HelloReply],
    rule: BlacklistRule,
) -> InvestigationFindings {
    let in_window = |r: &HelloRecord| r.sender == suspect && r.timestamp >= t1 && r.timestamp <= t2;

    let mut union: BTreeMap<u64, HelloRecord> = BTreeMap::new();
    for reply in replies {
        for r in reply.records.iter().filter(|r| in_window(r)) {
            union
                .entry(r.timestamp.to_bits())
                .or_insert_with(|| r.clone());
        }
    }
    let mut records: Vec<HelloRecord> = union.into_values().collect();
    records.sort_by(|a, b| a.timestamp.total_cmp(&b.timestamp));

    let mut concealers = Vec::new();
    let mut supporters = Vec::new();
    for reply in replies {
        if reply.responder == investigator {
            continue;
        }
        let hid = records.iter().any(|rec| {
            rec.lists_downlink(reply.responder)
                && !reply.records.iter().any(|r| r.timestamp == rec.timestamp)
        });
        if hid {
            concealers.push(reply.responder);
        } else if reply.records.iter().any(in_window) {
            supporters.push(reply.responder);
        }
    }
    concealers.sort();
    concealers.dedup();
    supporters.sort();
    supporters.dedup();

    let collected = records.len() as u64;
    let in_range = count_in_range(
        &records,
        suspect,
        t1,
        t2,
        investigator_range,
        investigator_at,
    );
    let expected = expected_hellos(tau_prime, suspect_hello_interval);
    let estimated = estimated_hellos(t1, t2, suspect_hello_interval);
    InvestigationFindings {
        expected,
        estimated,
        collected,
        in_range,
        concealers,
        supporters,
        blacklist: blacklist_decision(rule, in_range, collected, expected, estimated),
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apd::correctness_link;

    fn rec(ts: f64, x: f64, receivers: &[u32]) -> HelloRecord {
        HelloRecord {
            sender: NodeId(9),
            position: Point::new(x, 0.0),
            radio_range: 200.0,
            timestamp: ts,
            downlinks: receivers
                .iter()
                .map(|&n| (NodeId(n), Point::new(0.0, 0.0)))
                .collect(),
            uplinks: vec![],
        }
    }

    fn at_origin(_: f64) -> Point {
        Point::new(0.0, 0.0)
    }

    #[test]
    fn hello_estimates() {
        assert_eq!(expected_hellos(10.0, 6.0), 5);
        assert_eq!(expected_hellos(10.0, 10.0), 3);
        assert_eq!(estimated_hellos(0.0, 30.0, 6.0), 5);
        assert_eq!(estimated_hellos(0.0, 31.0, 6.0), 6);
    }

    #[test]
    fn all_beacons_in_range_blacklists() {
        let records: Vec<_> = (1..=5)
            .map(|k| rec(k as f64 * 6.0, 50.0, &[1, 2]))
            .collect();
        let replies = vec![
            HelloReply {
                responder: NodeId(1),
                records: records.clone(),
            },
            HelloReply {
                responder: NodeId(2),
                records: records.clone(),
            },
        ];
        for rule in [BlacklistRule::Pseudocode, BlacklistRule::Prose] {
            let f = analyze_hello_replies(
                NodeId(0),
                NodeId(9),
                100.0,
                &at_origin,
                0.0,
                30.0,
                10.0,
                6.0,
                &replies,
                rule,
            );
            assert_eq!(
                (f.in_range, f.collected, f.expected, f.estimated),
                (5, 5, 5, 5)
            );
            assert!(f.blacklist);
            assert!(f.concealers.is_empty());
            assert_eq!(f.supporters, vec![NodeId(1), NodeId(2)]);
        }
    }

    #[test]
    fn partial_coverage_goes_to_penalty() {
        // Three of five beacons collected, two in range.
        let records = vec![
            rec(6.0, 50.0, &[1]),
            rec(12.0, 50.0, &[1]),
            rec(18.0, 150.0, &[1]),
        ];
        let replies = vec![HelloReply {
            responder: NodeId(1),
            records,
        }];
        let f = analyze_hello_replies(
            NodeId(0),
            NodeId(9),
            100.0,
            &at_origin,
            0.0,
            30.0,
            10.0,
            6.0,
            &replies,
            BlacklistRule::Pseudocode,
        );
        assert_eq!((f.in_range, f.collected, f.expected), (2, 3, 5));
        assert!(!f.blacklist);
        let (x2, x1) = f.clamped_counts();
        let z = correctness_link(x2, x1, f.expected).unwrap();
        let oracle = 1.0 - (1.0 - 2.0 / 4.0) * (1.0 - 3.0 / 6.0);
        assert!((z - oracle).abs() < 1e-12);
    }

    #[test]
    fn concealment_detected_against_union() {
        let records: Vec<_> = (1..=5)
            .map(|k| rec(k as f64 * 6.0, 50.0, &[1, 2]))
            .collect();
        let replies = vec![
            HelloReply {
                responder: NodeId(1),
                records: records.clone(),
            },
            HelloReply {
                responder: NodeId(2),
                records: records[..4].to_vec(),
            },
        ];
        let f = analyze_hello_replies(
            NodeId(0),
            NodeId(9),
            100.0,
            &at_origin,
            0.0,
            30.0,
            10.0,
            6.0,
            &replies,
            BlacklistRule::Pseudocode,
        );
        assert_eq!(f.concealers, vec![NodeId(2)]);
        assert_eq!(f.supporters, vec![NodeId(1)]);
        assert_eq!(f.collected, 5);
    }

    #[test]
    fn pseudocode_tolerates_one_missing() {
        assert!(blacklist_decision(BlacklistRule::Pseudocode, 4, 4, 5, 5));
        assert!(!blacklist_decision(BlacklistRule::Pseudocode, 3, 4, 5, 5));
        assert!(!blacklist_decision(BlacklistRule::Pseudocode, 0, 0, 0, 1));
        assert!(!blacklist_decision(BlacklistRule::Prose, 4, 4, 5, 5));
        assert!(!blacklist_decision(BlacklistRule::Prose, 4, 5, 5, 5));
    }
}
