//! Responses to a collusion request.

use crate::behavior::{Strategy, StrategyKind};
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollusionResponse {
    /// Report the requester with the request as proof.
    Allege,
    /// Agree to hide the requester's beacons.
    Comply,
    Ignore,
}

pub fn handle_collusion_request(responder: &Strategy, requester: NodeId) -> CollusionResponse {
    match responder.kind {
        StrategyKind::Supportive | StrategyKind::InterruptDriven => CollusionResponse::Allege,
        StrategyKind::Collude if responder.pact_partner == Some(requester) => {
            CollusionResponse::Comply
        }
        _ => CollusionResponse::Ignore,
    }
}
