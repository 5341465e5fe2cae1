//! Per-requester route-request rate limiting.

use std::collections::BTreeMap;

use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RreqStamp {
    pub requester: NodeId,
    pub timestamp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RreqVerdict {
    Accepted,
    /// The `η+1`-th request inside one window; carries all of them.
    Flood(Vec<RreqStamp>),
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Window {
    start: f64,
    stored: Vec<RreqStamp>,
}

/// One observer's counters over all requesters.
#[derive(Debug, Clone, PartialEq)]
pub struct RreqLimiter {
    eta: u32,
    windows: BTreeMap<NodeId, Window>,
}

impl RreqLimiter {
    pub fn new(eta: u32) -> Self {
        Self {
            eta,
            windows: BTreeMap::new(),
        }
    }

    pub fn eta(&self) -> u32 {
        self.eta
    }

    pub fn observe(&mut self, stamp: RreqStamp, clock: f64) -> RreqVerdict {
        let w = self.windows.entry(stamp.requester).or_default();
        if w.stored.is_empty() || clock - w.start > 1.0 {
            w.start = clock;
            w.stored.clear();
        }
        w.stored.push(stamp);
        if w.stored.len() as u32 > self.eta {
            let bundle = std::mem::take(&mut w.stored);
            RreqVerdict::Flood(bundle)
        } else {
            RreqVerdict::Accepted
        }
    }

    /// Requests currently counted in the requester's window.
    pub fn window_count(&self, requester: NodeId) -> usize {
        self.windows.get(&requester).map_or(0, |w| w.stored.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(t: f64) -> RreqStamp {
        RreqStamp {
            requester: NodeId(7),
            timestamp: t,
        }
    }

    #[test]
    fn sixth_in_window_is_flood() {
        let mut l = RreqLimiter::new(5);
        for k in 0..5 {
            let t = k as f64 * 0.2;
            assert_eq!(l.observe(s(t), t), RreqVerdict::Accepted);
        }
        match l.observe(s(0.9), 0.9) {
            RreqVerdict::Flood(b) => assert_eq!(b.len(), 6),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn window_resets_after_one_second() {
        let mut l = RreqLimiter::new(5);
        for k in 0..5 {
            let t = k as f64 * 0.2;
            l.observe(s(t), t);
        }
        assert_eq!(l.observe(s(1.1), 1.1), RreqVerdict::Accepted);
        assert_eq!(l.window_count(NodeId(7)), 1);
    }

    proptest! {
        #[test]
        fn count_never_exceeds_eta_plus_one(gaps in prop::collection::vec(0.0f64..0.6, 1..200)) {
            let mut l = RreqLimiter::new(5);
            let mut t = 0.0;
            for g in gaps {
                t += g;
                if let RreqVerdict::Flood(b) = l.observe(s(t), t) {
                    prop_assert_eq!(b.len(), 6);
                    let span = b.last().unwrap().timestamp - b[0].timestamp;
                    prop_assert!(span <= 1.0);
                }
                prop_assert!(l.window_count(NodeId(7)) <= 6);
            }
        }
    }
}
