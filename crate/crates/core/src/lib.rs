//! Deterministic discrete-event simulator of mobile ad hoc networks whose
//! nodes run a reputation-based, attack-resistant cooperation protocol.
//!
//! Layout:
//! - [`reputation`]: observer-local ledgers, reward events, queue priority.
//! - [`apd`]: the fuzzy Adaptive Penalty Decider and its crisp input formulas.
//! - [`net`]: geometry, random-waypoint mobility, HELLO archives, the event
//!   queue, radio timing/energy and the 53-bit attribute block.
//! - [`protocol`]: per-node detection procedures (link breakage, delay,
//!   traffic injection, collusion, slander) and allegation verification.
//! - [`behavior`]: selfish and malicious strategies, Poisson traffic.
//! - [`sim`]: configuration, the simulation engine, metrics, analytic
//!   proposition checks, sweeps and CSV output.

use std::fmt;

pub mod apd;
pub mod behavior;
pub mod error;
pub mod net;
pub mod protocol;
pub mod reputation;
pub mod sim;

pub use error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}
