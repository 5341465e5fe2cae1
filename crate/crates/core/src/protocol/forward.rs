//! Hop-level forwarding: up to three transmissions spaced `τ'` apart, then a
//! link-breakage investigation at `t1 + 3τ'`.

use crate::net::Topology;
use crate::NodeId;

pub const MAX_TRANSMISSIONS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForwardStatus {
    /// Waiting for any acknowledgement.
    Pending,
    /// A receipt acknowledgement arrived; waiting for forward evidence.
    Acknowledged,
    /// Forward evidence processed.
    Confirmed,
    /// Retransmissions exhausted and investigated.
    Investigated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeoutAction {
    Retransmit,
    Investigate,
    /// The timeout is stale.
    Nothing,
}

/// State kept by a sender for one message handed to one next hop.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardState {
    pub next_hop: NodeId,
    /// Time of the first transmission (the bicast self-copy timestamp).
    pub first_sent: f64,
    pub last_sent: f64,
    pub attempts: u32,
    pub status: ForwardStatus,
}

impl ForwardState {
    pub fn start(next_hop: NodeId, now: f64) -> Self {
        Self {
            next_hop,
            first_sent: now,
            last_sent: now,
            attempts: 1,
            status: ForwardStatus::Pending,
        }
    }

    /// Timeout for the `attempt`-th transmission, which fires `τ'` after it.
    pub fn deadline(&self, tau_prime: f64) -> f64 {
        self.last_sent + tau_prime
    }

    pub fn on_timeout(&mut self, attempt: u32, now: f64) -> TimeoutAction {
        if self.status != ForwardStatus::Pending || attempt != self.attempts {
            return TimeoutAction::Nothing;
        }
        if self.attempts < MAX_TRANSMISSIONS {
            self.attempts += 1;
            self.last_sent = now;
            TimeoutAction::Retransmit
        } else {
            self.status = ForwardStatus::Investigated;
            TimeoutAction::Investigate
        }
    }

    pub fn on_receipt_ack(&mut self) {
        if self.status == ForwardStatus::Pending {
            self.status = ForwardStatus::Acknowledged;
        }
    }

    /// True the first time evidence is accepted.
    pub fn on_evidence(&mut self) -> bool {
        match self.status {
            ForwardStatus::Pending | ForwardStatus::Acknowledged => {
                self.status = ForwardStatus::Confirmed;
                true
            }
            _ => false,
        }
    }

    pub fn is_open(&self) -> bool {
        matches!(
            self.status,
            ForwardStatus::Pending | ForwardStatus::Acknowledged
        )
    }
}

/// Whether `l` may overhear `j`'s forward and relay the copy back to `i`
/// when `i` itself is out of `j`'s range.
pub fn witness_eligible(topology: &Topology, i: NodeId, j: NodeId, l: NodeId) -> bool {
    l != i
        && l != j
        && !topology.reaches(j, i)
        && topology.reaches(j, l)
        && topology.reaches(l, j)
        && topology.reaches(l, i)
}
