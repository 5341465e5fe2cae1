//! Observer-local reputation bookkeeping.
//!
//! Every node owns one [`ReputationLedger`] describing how it rates the peers it
//! has dealt with. Scores live in `[-|Φ|, +|Φ|]`; an update whose unclamped
//! result falls below `-|Φ|` blacklists the subject locally, and a proven
//! allegation blacklists it network-wide (absorbing).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::NodeId;

/// Reward constants for one simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardSchedule {
    pub alpha: f64,
    pub phi_size: usize,
}

impl RewardSchedule {
    pub fn new(alpha: f64, phi_size: usize) -> Result<Self> {
        if alpha.is_nan() || alpha <= 1.0 {
            return Err(Error::config("alpha", format!("must be > 1, got {alpha}")));
        }
        if phi_size <= 3 {
            return Err(Error::config(
                "node_count",
                format!("must be > 3, got {phi_size}"),
            ));
        }
        Ok(Self { alpha, phi_size })
    }

    /// `|Φ|` as a score bound.
    pub fn bound(&self) -> f64 {
        self.phi_size as f64
    }
}

/// Discrete reputation adjustments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReputationEvent {
    /// `+α`: a successor's forward was confirmed.
    AckConfirmedForward,
    /// `-α²`: charged to a message generator by each router serving it.
    GeneratorDebit,
    /// `+α²`: reward for helping an investigation.
    DetectionReward,
    /// Score set to `α|Φ|`, clamped to `|Φ|`.
    SupportiveSet,
    /// Score set to `+|Φ|`.
    SetMax,
    /// Score set to `-|Φ|`; the subject is blacklisted locally.
    SetMin,
    /// Score replaced by an externally computed value (penalty decider output).
    Assign(f64),
    LocalBlacklist,
    NetworkBlacklist,
}

/// What an event did to the ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventOutcome {
    Applied,
    /// Applied and the subject became locally blacklisted by it.
    LocallyBlacklisted,
    /// Applied and the subject became network-blacklisted by it.
    NetworkBlacklisted,
    /// Subject already network-blacklisted.
    Ignored,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PeerRecord {
    pub score: f64,
    pub link_break_count: u32,
    pub delay_count: u32,
    /// Γ(r) expiries where no alternate path to the successor was found.
    pub unverified_count: u32,
    /// T_j(i): messages the subject generated that reached the observer.
    pub traffic_generated: u64,
    /// F_j(i): messages of the subject the observer forwarded.
    pub traffic_forwarded: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReputationLedger {
    observer: NodeId,
    schedule: RewardSchedule,
    peers: BTreeMap<NodeId, PeerRecord>,
    local_blacklist: BTreeSet<NodeId>,
    network_blacklist: BTreeSet<NodeId>,
    r_min: f64,
    r_max: f64,
}

impl ReputationLedger {
    pub fn new(observer: NodeId, schedule: RewardSchedule) -> Self {
        Self {
            observer,
            schedule,
            peers: BTreeMap::new(),
            local_blacklist: BTreeSet::new(),
            network_blacklist: BTreeSet::new(),
            r_min: 0.0,
            r_max: 0.0,
        }
    }

    pub fn observer(&self) -> NodeId {
        self.observer
    }

    pub fn schedule(&self) -> RewardSchedule {
        self.schedule
    }

    /// First contact with `subject`. Idempotent.
    pub fn init_peer(&mut self, subject: NodeId) {
        if self.peers.contains_key(&subject) {
            return;
        }
        if self.peers.is_empty() {
            self.r_min = 0.0;
            self.r_max = 0.0;
        } else {
            self.r_min = self.r_min.min(0.0);
            self.r_max = self.r_max.max(0.0);
        }
        self.peers.insert(subject, PeerRecord::default());
    }

    pub fn knows(&self, subject: NodeId) -> bool {
        self.peers.contains_key(&subject)
    }

    pub fn peer(&self, subject: NodeId) -> Option<&PeerRecord> {
        self.peers.get(&subject)
    }

    pub fn peers(&self) -> impl Iterator<Item = (NodeId, &PeerRecord)> {
        self.peers.iter().map(|(id, rec)| (*id, rec))
    }

    /// Current score; peers never contacted sit at the neutral 0.
    pub fn score(&self, subject: NodeId) -> f64 {
        self.peers.get(&subject).map_or(0.0, |p| p.score)
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn is_locally_blacklisted(&self, subject: NodeId) -> bool {
        self.local_blacklist.contains(&subject)
    }

    pub fn is_network_blacklisted(&self, subject: NodeId) -> bool {
        self.network_blacklist.contains(&subject)
    }

    pub fn local_blacklist(&self) -> &BTreeSet<NodeId> {
        &self.local_blacklist
    }

    pub fn network_blacklist(&self) -> &BTreeSet<NodeId> {
        &self.network_blacklist
    }

    /// `C_i(j) = (R_i(j) - R_min) / (R_max - R_min + 1)`.
    pub fn comparative_reputation(&self, subject: NodeId) -> Result<f64> {
        let rec = self
            .peers
            .get(&subject)
            .ok_or(Error::UnknownPeer(subject))?;
        Ok((rec.score - self.r_min) / (self.r_max - self.r_min + 1.0))
    }

    /// `E_j(i)` from the observer's traffic counters for `subject`.
    pub fn expectation_of(&self, subject: NodeId) -> Result<f64> {
        let rec = self
            .peers
            .get(&subject)
            .ok_or(Error::UnknownPeer(subject))?;
        expectation(rec.traffic_forwarded, rec.traffic_generated)
    }

    pub fn record_generated(&mut self, subject: NodeId) {
        self.init_peer(subject);
        if let Some(rec) = self.peers.get_mut(&subject) {
            rec.traffic_generated += 1;
        }
    }

    pub fn record_forwarded(&mut self, subject: NodeId) {
        self.init_peer(subject);
        if let Some(rec) = self.peers.get_mut(&subject) {
            // F_j(i) counts forwards of messages j generated, so it can never
            // overtake T_j(i).
            rec.traffic_forwarded = (rec.traffic_forwarded + 1).min(rec.traffic_generated);
        }
    }

    /// Bumps the link-breakage suspicion counter and returns its new value.
    pub fn note_link_break(&mut self, subject: NodeId) -> u32 {
        self.bump(subject, |r| &mut r.link_break_count)
    }

    pub fn note_delay(&mut self, subject: NodeId) -> u32 {
        self.bump(subject, |r| &mut r.delay_count)
    }

    pub fn note_unverified(&mut self, subject: NodeId) -> u32 {
        self.bump(subject, |r| &mut r.unverified_count)
    }

    fn bump(&mut self, subject: NodeId, field: impl Fn(&mut PeerRecord) -> &mut u32) -> u32 {
        self.init_peer(subject);
        let rec = self.peers.get_mut(&subject).expect("peer initialised");
        let counter = field(rec);
        *counter += 1;
        *counter
    }

    pub fn apply(&mut self, subject: NodeId, event: ReputationEvent) -> EventOutcome {
        if self.network_blacklist.contains(&subject) {
            return EventOutcome::Ignored;
        }
        self.init_peer(subject);

        let bound = self.schedule.bound();
        let alpha = self.schedule.alpha;
        let old = self.peers[&subject].score;
        let mut outcome = EventOutcome::Applied;

        let unclamped = match event {
            ReputationEvent::AckConfirmedForward => old + alpha,
            ReputationEvent::GeneratorDebit => old - alpha * alpha,
            ReputationEvent::DetectionReward => old + alpha * alpha,
            ReputationEvent::SupportiveSet => alpha * bound,
            ReputationEvent::SetMax => bound,
            ReputationEvent::SetMin => {
                if self.local_blacklist.insert(subject) {
                    outcome = EventOutcome::LocallyBlacklisted;
                }
                -bound
            }
            ReputationEvent::Assign(value) => value,
            ReputationEvent::LocalBlacklist => {
                if self.local_blacklist.insert(subject) {
                    outcome = EventOutcome::LocallyBlacklisted;
                }
                old
            }
            ReputationEvent::NetworkBlacklist => {
                self.local_blacklist.insert(subject);
                self.network_blacklist.insert(subject);
                outcome = EventOutcome::NetworkBlacklisted;
                -bound
            }
        };

        if unclamped < -bound && self.local_blacklist.insert(subject) {
            outcome = EventOutcome::LocallyBlacklisted;
        }
        let new = unclamped.clamp(-bound, bound);
        self.set_raw(subject, old, new);
        outcome
    }

    fn set_raw(&mut self, subject: NodeId, old: f64, new: f64) {
        if let Some(rec) = self.peers.get_mut(&subject) {
            rec.score = new;
        }
        if new < self.r_min {
            self.r_min = new;
        }
        if new > self.r_max {
            self.r_max = new;
        }
        let left_min = old == self.r_min && new > old;
        let left_max = old == self.r_max && new < old;
        if left_min || left_max {
            self.recompute_extremes();
        }
    }

    fn recompute_extremes(&mut self) {
        let mut scores = self.peers.values().map(|p| p.score);
        if let Some(first) = scores.next() {
            let (lo, hi) = scores.fold((first, first), |(lo, hi), s| (lo.min(s), hi.max(s)));
            self.r_min = lo;
            self.r_max = hi;
        }
    }
}

/// `E = F / (T + 1)`.
pub fn expectation(forwarded: u64, generated: u64) -> Result<f64> {
    if forwarded > generated {
        return Err(Error::ForwardedExceedsGenerated {
            forwarded,
            generated,
        });
    }
    Ok(forwarded as f64 / (generated as f64 + 1.0))
}

/// A pending message as seen by the queue scheduler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueEntry<T> {
    pub source: NodeId,
    pub reputation: f64,
    pub arrival: u64,
    pub item: T,
}

/// Highest source reputation first, FIFO among equals. Messages generated by
/// network-blacklisted sources are discarded.
pub fn order_message_queue<T>(
    entries: Vec<QueueEntry<T>>,
    network_blacklisted: impl Fn(NodeId) -> bool,
) -> Vec<QueueEntry<T>> {
    let mut kept: Vec<_> = entries
        .into_iter()
        .filter(|e| !network_blacklisted(e.source))
        .collect();
    kept.sort_by(|a, b| {
        b.reputation
            .total_cmp(&a.reputation)
            .then(a.arrival.cmp(&b.arrival))
    });
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ledger(alpha: f64, phi: usize) -> ReputationLedger {
        ReputationLedger::new(NodeId(0), RewardSchedule::new(alpha, phi).unwrap())
    }

    #[test]
    fn init_peer_starts_neutral() {
        let mut l = ledger(2.0, 100);
        l.init_peer(NodeId(7));
        let rec = l.peer(NodeId(7)).unwrap();
        assert_eq!(rec.score, 0.0);
        assert_eq!(rec.link_break_count, 0);
        assert_eq!(rec.delay_count, 0);
        assert!(l.knows(NodeId(7)));
    }

    #[test]
    fn init_peer_twice_is_noop() {
        let mut l = ledger(2.0, 100);
        l.init_peer(NodeId(7));
        l.apply(NodeId(7), ReputationEvent::AckConfirmedForward);
        let snapshot = l.clone();
        l.init_peer(NodeId(7));
        assert_eq!(l, snapshot);
    }

    #[test]
    fn init_peer_keeps_extremes_containing_zero() {
        let mut l = ledger(2.0, 100);
        l.apply(NodeId(1), ReputationEvent::Assign(-5.0));
        l.apply(NodeId(2), ReputationEvent::Assign(10.0));
        assert_eq!((l.r_min(), l.r_max()), (-5.0, 10.0));
        l.init_peer(NodeId(3));
        assert_eq!((l.r_min(), l.r_max()), (-5.0, 10.0));
    }

    #[test]
    fn comparative_reputation_examples() {
        let mut l = ledger(2.0, 100);
        l.apply(NodeId(1), ReputationEvent::Assign(-5.0));
        l.apply(NodeId(2), ReputationEvent::Assign(10.0));
        l.init_peer(NodeId(3));
        assert_eq!(l.comparative_reputation(NodeId(3)).unwrap(), 0.3125);
        assert_eq!(l.comparative_reputation(NodeId(1)).unwrap(), 0.0);
        assert_eq!(l.comparative_reputation(NodeId(2)).unwrap(), 0.9375);
        assert_eq!(
            l.comparative_reputation(NodeId(9)),
            Err(Error::UnknownPeer(NodeId(9)))
        );
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expectation(0, 0).unwrap(), 0.0);
        assert_eq!(expectation(9, 9).unwrap(), 0.9);
        assert_eq!(expectation(3, 5).unwrap(), 0.5);
        assert!(matches!(
            expectation(4, 3),
            Err(Error::ForwardedExceedsGenerated { .. })
        ));
    }

    #[test]
    fn reward_and_clamp_examples() {
        let mut l = ledger(2.0, 100);
        l.apply(NodeId(1), ReputationEvent::AckConfirmedForward);
        assert_eq!(l.score(NodeId(1)), 2.0);

        l.apply(NodeId(2), ReputationEvent::Assign(99.0));
        l.apply(NodeId(2), ReputationEvent::DetectionReward);
        assert_eq!(l.score(NodeId(2)), 100.0);
    }

    #[test]
    fn crossing_lower_bound_blacklists_locally() {
        let mut l = ledger(2.0, 100);
        l.apply(NodeId(3), ReputationEvent::Assign(-99.0));
        let out = l.apply(NodeId(3), ReputationEvent::GeneratorDebit);
        assert_eq!(out, EventOutcome::LocallyBlacklisted);
        assert_eq!(l.score(NodeId(3)), -100.0);
        assert!(l.is_locally_blacklisted(NodeId(3)));
        assert!(!l.is_network_blacklisted(NodeId(3)));
    }

    #[test]
    fn supportive_set_clamps_to_bound() {
        let mut l = ledger(2.0, 100);
        l.apply(NodeId(4), ReputationEvent::SupportiveSet);
        assert_eq!(l.score(NodeId(4)), 100.0);
    }

    #[test]
    fn network_blacklist_is_absorbing() {
        let mut l = ledger(2.0, 100);
        l.apply(NodeId(5), ReputationEvent::NetworkBlacklist);
        assert_eq!(
            l.apply(NodeId(5), ReputationEvent::SetMax),
            EventOutcome::Ignored
        );
        assert_eq!(l.score(NodeId(5)), -100.0);
        assert!(l.is_locally_blacklisted(NodeId(5)));
    }

    #[test]
    fn queue_orders_by_reputation_then_arrival() {
        let e = |s: u32, r: f64, a: u64| QueueEntry {
            source: NodeId(s),
            reputation: r,
            arrival: a,
            item: (),
        };
        let ids = |v: Vec<QueueEntry<()>>| v.iter().map(|e| e.source.0).collect::<Vec<_>>();
        assert_eq!(
            ids(order_message_queue(
                vec![e(1, 5.0, 0), e(2, 7.0, 1)],
                |_| false
            )),
            [2, 1]
        );
        assert_eq!(
            ids(order_message_queue(
                vec![e(1, 5.0, 0), e(2, 5.0, 1)],
                |_| false
            )),
            [1, 2]
        );
        assert_eq!(
            ids(order_message_queue(vec![e(1, 5.0, 0), e(9, 9.0, 1)], |n| n == NodeId(9))),
            [1]
        );
    }

    fn event_strategy() -> impl Strategy<Value = ReputationEvent> {
        prop_oneof![
            Just(ReputationEvent::AckConfirmedForward),
            Just(ReputationEvent::GeneratorDebit),
            Just(ReputationEvent::DetectionReward),
            Just(ReputationEvent::SupportiveSet),
            Just(ReputationEvent::SetMax),
            Just(ReputationEvent::SetMin),
            Just(ReputationEvent::LocalBlacklist),
            (-500.0f64..500.0).prop_map(ReputationEvent::Assign),
            Just(ReputationEvent::NetworkBlacklist),
        ]
    }

    proptest! {
        #[test]
        fn scores_stay_in_bounds(
            phi in 4usize..200,
            alpha in 1.01f64..4.0,
            events in proptest::collection::vec((0u32..8, event_strategy()), 1..200),
        ) {
            let mut l = ledger(alpha, phi);
            let bound = phi as f64;
            let sup = 2.0 * bound / (2.0 * bound + 1.0);
            for (subject, ev) in events {
                l.apply(NodeId(subject), ev);
                for (id, rec) in l.peers() {
                    prop_assert!(rec.score >= -bound && rec.score <= bound);
                    prop_assert!(l.r_min() <= rec.score && rec.score <= l.r_max());
                    // Attained exactly when R = R_max = |Φ| and R_min = -|Φ|.
                    let c = l.comparative_reputation(id).unwrap();
                    prop_assert!((0.0..=sup).contains(&c));
                }
                prop_assert!(l.network_blacklist().is_subset(l.local_blacklist()));
            }
        }

        #[test]
        fn network_blacklist_never_changes(events in proptest::collection::vec(event_strategy(), 0..50)) {
            let mut l = ledger(2.0, 50);
            l.apply(NodeId(1), ReputationEvent::NetworkBlacklist);
            for ev in events {
                l.apply(NodeId(1), ev);
                prop_assert_eq!(l.score(NodeId(1)), -50.0);
                prop_assert!(l.is_network_blacklisted(NodeId(1)));
            }
        }

        #[test]
        fn expectation_below_one(t in 0u64..10_000, f_frac in 0.0f64..=1.0) {
            let f = (t as f64 * f_frac).floor() as u64;
            let e = expectation(f, t).unwrap();
            prop_assert!((0.0..1.0).contains(&e));
        }

        #[test]
        fn queue_is_stable_permutation(
            entries in proptest::collection::vec((0u32..10, -5i32..5), 0..40),
            banned in 0u32..10,
        ) {
            let input: Vec<_> = entries.iter().enumerate().map(|(i, (s, r))| QueueEntry {
                source: NodeId(*s), reputation: *r as f64, arrival: i as u64, item: i,
            }).collect();
            let out = order_message_queue(input.clone(), |n| n == NodeId(banned));
            let mut expected: Vec<_> = input.iter().filter(|e| e.source != NodeId(banned)).map(|e| e.item).collect();
            let mut got: Vec<_> = out.iter().map(|e| e.item).collect();
            for w in out.windows(2) {
                prop_assert!(w[0].reputation > w[1].reputation
                    || (w[0].reputation == w[1].reputation && w[0].arrival < w[1].arrival));
            }
            expected.sort();
            got.sort();
            prop_assert_eq!(got, expected);
        }
    }
}
