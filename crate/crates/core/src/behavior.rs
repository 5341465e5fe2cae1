//! Node strategies and Poisson traffic.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::net::HelloRecord;
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrategyKind {
    /// Selfish, volunteers as a witness.
    Supportive,
    /// Selfish, acts only when asked directly.
    InterruptDriven,
    /// Silently drops traffic it should forward.
    LinkBreak,
    /// Acknowledges receipt, then holds traffic past the honest bound.
    Delay,
    /// Broadcasts route requests above the allowed rate.
    Flood,
    /// Drops traffic and asks neighbours to hide its beacons.
    Collude,
    /// Broadcasts allegations without proof.
    Slander,
}

impl StrategyKind {
    pub const MALICIOUS: [StrategyKind; 5] = [
        StrategyKind::LinkBreak,
        StrategyKind::Delay,
        StrategyKind::Flood,
        StrategyKind::Collude,
        StrategyKind::Slander,
    ];

    pub fn is_malicious(self) -> bool {
        !matches!(
            self,
            StrategyKind::Supportive | StrategyKind::InterruptDriven
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Supportive => "supportive",
            StrategyKind::InterruptDriven => "interrupt_driven",
            StrategyKind::LinkBreak => "link_break",
            StrategyKind::Delay => "delay",
            StrategyKind::Flood => "flood",
            StrategyKind::Collude => "collude",
            StrategyKind::Slander => "slander",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            StrategyKind::Supportive,
            StrategyKind::InterruptDriven,
            StrategyKind::LinkBreak,
            StrategyKind::Delay,
            StrategyKind::Flood,
            StrategyKind::Collude,
            StrategyKind::Slander,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| format!("unknown strategy `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackParams {
    /// Extra hold time of a delay attacker.
    pub delay_extra: f64,
    /// Route requests per second of a flooder.
    pub flood_rate: f64,
    /// Mean gap between slanders.
    pub slander_interval: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strategy {
    pub kind: StrategyKind,
    pub params: AttackParams,
    /// Colluder whose beacons this one hides.
    pub pact_partner: Option<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForwardAction {
    Forward,
    Silent,
    /// Acknowledge now, forward after the given extra time.
    Hold(f64),
}

pub fn decide_forward_action(s: &Strategy) -> ForwardAction {
    match s.kind {
        StrategyKind::LinkBreak | StrategyKind::Collude => ForwardAction::Silent,
        StrategyKind::Delay => ForwardAction::Hold(s.params.delay_extra),
        _ => ForwardAction::Forward,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessAction {
    Relay,
    Ignore,
}

pub fn decide_witness_action(s: &Strategy) -> WitnessAction {
    match s.kind {
        StrategyKind::Supportive => WitnessAction::Relay,
        _ => WitnessAction::Ignore,
    }
}

/// Beacons a responder discloses when asked about `accused`.
pub fn decide_hello_reply(
    s: &Strategy,
    accused: NodeId,
    records: &[HelloRecord],
) -> Vec<HelloRecord> {
    if s.kind == StrategyKind::Collude && s.pact_partner == Some(accused) {
        records
            .iter()
            .filter(|r| r.sender != accused)
            .cloned()
            .collect()
    } else {
        records.to_vec()
    }
}

/// Whether the node raises allegations when it holds proof.
pub fn decide_allege(s: &Strategy) -> bool {
    !s.kind.is_malicious()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficProfile {
    /// Messages per second.
    pub rate: f64,
}

/// Next Poisson arrival after `clock` and a uniform destination other than `me`.
pub fn next_traffic_event<R: Rng + ?Sized>(
    profile: &TrafficProfile,
    rng: &mut R,
    clock: f64,
    me: NodeId,
    node_count: usize,
) -> Option<(f64, NodeId)> {
    if profile.rate <= 0.0 || node_count < 2 {
        return None;
    }
    let gap = Exp::new(profile.rate).ok()?.sample(rng);
    let mut dest = rng.gen_range(0..node_count as u32 - 1);
    if dest >= me.0 {
        dest += 1;
    }
    Some((clock + gap, NodeId(dest)))
}

pub fn pick_malicious_strategy<R: Rng + ?Sized>(rng: &mut R) -> StrategyKind {
    StrategyKind::MALICIOUS[rng.gen_range(0..StrategyKind::MALICIOUS.len())]
}
