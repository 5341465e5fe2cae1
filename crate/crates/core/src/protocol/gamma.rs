//! End-to-end acknowledgement budget and the alternate-path check run when
//! it expires.

use crate::reputation::{EventOutcome, ReputationEvent, ReputationLedger};
use crate::NodeId;

/// The routers of one route and their queue sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    pub router_queue_sizes: Vec<u32>,
}

/// `Γ(r) = (λ+1)τ + (τ+3τ')λ + Σ(m_i − 2)τ` over the `λ` routers.
pub fn compute_gamma(router_queue_sizes: &[u32], tau: f64, tau_prime: f64) -> f64 {
    let lambda = router_queue_sizes.len() as f64;
    let queues: f64 = router_queue_sizes
        .iter()
        .map(|&m| (m as f64 - 2.0) * tau)
        .sum();
    (lambda + 1.0) * tau + (tau + 3.0 * tau_prime) * lambda + queues
}

/// Answer obtained when asking the successor's successor whether it got the
/// message, over a route that avoids the suspect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltPathOutcome {
    Confirmed,
    Denied,
    NoRoute,
}

/// Reputation effect of an alternate-path check on `suspect` at `ledger`.
pub fn apply_alt_path_outcome(
    ledger: &mut ReputationLedger,
    suspect: NodeId,
    outcome: AltPathOutcome,
    max_suspicions: u32,
) -> EventOutcome {
    match outcome {
        AltPathOutcome::Confirmed => ledger.apply(suspect, ReputationEvent::AckConfirmedForward),
        AltPathOutcome::Denied => ledger.apply(suspect, ReputationEvent::SetMin),
        AltPathOutcome::NoRoute => {
            if ledger.note_unverified(suspect) >= max_suspicions {
                ledger.apply(suspect, ReputationEvent::SetMin)
            } else {
                EventOutcome::Applied
            }
        }
    }
}
