//! Network allegations: proof replay and the verdict each receiver applies.

use std::collections::BTreeSet;

use super::delay::{classify_delay, DelayRule, DelayVerdict, ForwardEvidence};
use super::link_break::{
    blacklist_decision, count_in_range, estimated_hellos, expected_hellos, BlacklistRule,
};
use super::message::{Message, MessageCode};
use super::rreq::RreqStamp;
use crate::net::{HelloRecord, Point};
use crate::reputation::{EventOutcome, ReputationEvent, ReputationLedger};
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AllegationKind {
    LinkBreak,
    Delay,
    Flood,
    Collusion,
}

impl AllegationKind {
    pub fn code(self) -> MessageCode {
        match self {
            AllegationKind::LinkBreak => MessageCode::AllegationLink,
            AllegationKind::Delay => MessageCode::AllegationDelay,
            AllegationKind::Flood => MessageCode::AllegationFlood,
            AllegationKind::Collusion => MessageCode::AllegationCollusion,
        }
    }
}

/// Beacon history showing the suspect stayed in range during a breakage.
#[derive(Debug, Clone, PartialEq)]
pub struct HelloProof {
    pub t1: f64,
    pub t2: f64,
    pub tau_prime: f64,
    pub suspect_hello_interval: f64,
    pub investigator_range: f64,
    /// Investigator position samples `(time, position)`, ascending by time.
    pub investigator_track: Vec<(f64, Point)>,
    pub records: Vec<HelloRecord>,
    pub rule: BlacklistRule,
}

impl HelloProof {
    fn investigator_at(&self, t: f64) -> Point {
        let idx = self.investigator_track.partition_point(|(ts, _)| *ts <= t);
        self.investigator_track[idx.saturating_sub(1)].1
    }
}

/// The investigator's own copy and the successor's forwarded copy.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayProof {
    pub sent: Message,
    pub forwarded: Message,
    pub evidence: ForwardEvidence,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Proof {
    HelloHistory(HelloProof),
    /// Beacons listing the accused as receiver next to what it disclosed.
    Concealment {
        records: Vec<HelloRecord>,
        disclosed: Vec<f64>,
    },
    BicastCopyPair(Box<DelayProof>),
    RreqBundle(Vec<RreqStamp>),
    CollusionRequest(Message),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllegationPacket {
    pub kind: AllegationKind,
    pub accuser: NodeId,
    pub accused: NodeId,
    pub proof: Option<Proof>,
    /// Nodes whose evidence backed the proof.
    pub witnesses: Vec<NodeId>,
    pub issued_at: f64,
}

/// Network-wide constants a receiver needs to replay proofs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofContext {
    pub eta: u32,
    pub tau: f64,
    pub tau_prime: f64,
    pub tx_delay: f64,
    pub delay_rule: DelayRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllegationOutcome {
    /// Accuser or accused already network-blacklisted here, or self-directed.
    Ignored,
    AccusedBlacklisted,
    AccuserBlacklisted,
}

/// Replays the proof; `true` means the accused is guilty.
pub fn check_proof(packet: &AllegationPacket, ctx: &ProofContext) -> bool {
    let Some(proof) = &packet.proof else {
        return false;
    };
    let accused = packet.accused;
    match (packet.kind, proof) {
        (AllegationKind::LinkBreak, Proof::HelloHistory(p)) => {
            if p.investigator_track.is_empty() || p.records.iter().any(|r| r.sender != accused) {
                return false;
            }
            let stamps: BTreeSet<u64> = p
                .records
                .iter()
                .filter(|r| r.timestamp >= p.t1 && r.timestamp <= p.t2)
                .map(|r| r.timestamp.to_bits())
                .collect();
            let collected = stamps.len() as u64;
            let in_range = count_in_range(
                &p.records,
                accused,
                p.t1,
                p.t2,
                p.investigator_range,
                &|t| p.investigator_at(t),
            );
            blacklist_decision(
                p.rule,
                in_range,
                collected,
                expected_hellos(p.tau_prime, p.suspect_hello_interval),
                estimated_hellos(p.t1, p.t2, p.suspect_hello_interval),
            )
        }
        (AllegationKind::LinkBreak, Proof::Concealment { records, disclosed }) => records
            .iter()
            .any(|r| r.lists_downlink(accused) && !disclosed.contains(&r.timestamp)),
        (AllegationKind::Delay, Proof::BicastCopyPair(p)) => {
            p.sent.same_content(&p.forwarded)
                && p.forwarded.sender_attrs().node_id == accused.0
                && matches!(
                    classify_delay(
                        &p.evidence,
                        ctx.tau,
                        ctx.tau_prime,
                        ctx.tx_delay,
                        ctx.delay_rule
                    ),
                    Ok(DelayVerdict::Attack)
                )
        }
        (AllegationKind::Flood, Proof::RreqBundle(bundle)) => {
            if bundle.len() as u32 <= ctx.eta || bundle.iter().any(|s| s.requester != accused) {
                return false;
            }
            let lo = bundle
                .iter()
                .map(|s| s.timestamp)
                .fold(f64::INFINITY, f64::min);
            let hi = bundle
                .iter()
                .map(|s| s.timestamp)
                .fold(f64::NEG_INFINITY, f64::max);
            hi - lo <= 1.0
        }
        (AllegationKind::Collusion, Proof::CollusionRequest(m)) => {
            m.code() == MessageCode::CollusionReq && m.origin() == accused
        }
        _ => false,
    }
}

/// Applies the verdict at one receiver.
pub fn process_allegation(
    ledger: &mut ReputationLedger,
    packet: &AllegationPacket,
    ctx: &ProofContext,
) -> AllegationOutcome {
    let me = ledger.observer();
    if ledger.is_network_blacklisted(packet.accuser) || packet.accused == me {
        return AllegationOutcome::Ignored;
    }
    if check_proof(packet, ctx) {
        if ledger.apply(packet.accused, ReputationEvent::NetworkBlacklist) == EventOutcome::Ignored
        {
            return AllegationOutcome::Ignored;
        }
        if packet.accuser != me {
            ledger.apply(packet.accuser, ReputationEvent::SetMax);
        }
        for &w in &packet.witnesses {
            if w != me && w != packet.accused {
                ledger.apply(w, ReputationEvent::SetMax);
            }
        }
        AllegationOutcome::AccusedBlacklisted
    } else {
        if packet.accuser == me {
            return AllegationOutcome::Ignored;
        }
        ledger.apply(packet.accuser, ReputationEvent::NetworkBlacklist);
        AllegationOutcome::AccuserBlacklisted
    }
}
