//! HELLO beacons and the per-node archive of beacons heard from others.

use std::collections::BTreeMap;
use std::rc::Rc;

use super::geometry::Point;
use crate::NodeId;

/// One beacon as archived by a receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct HelloRecord {
    pub sender: NodeId,
    pub position: Point,
    pub radio_range: f64,
    pub timestamp: f64,
    /// `N(sender)` at emission time with each member's last known position.
    pub downlinks: Vec<(NodeId, Point)>,
    /// `U(sender)` at emission time.
    pub uplinks: Vec<NodeId>,
}

impl HelloRecord {
    pub fn lists_downlink(&self, node: NodeId) -> bool {
        self.downlinks.iter().any(|(n, _)| *n == node)
    }
}

/// Emission times `offset + k·interval` for `k ≥ 1` up to `horizon` inclusive.
pub fn hello_times(offset: f64, interval: f64, horizon: f64) -> impl Iterator<Item = f64> {
    (1u64..)
        .map(move |k| offset + k as f64 * interval)
        .take_while(move |t| *t <= horizon + 1e-9)
}

/// Append-only store keyed by sender; records of one sender are in
/// non-decreasing timestamp order. Records are shared between receivers.
#[derive(Debug, Clone, Default)]
pub struct HelloArchive {
    by_sender: BTreeMap<NodeId, Vec<Rc<HelloRecord>>>,
}

impl HelloArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn archive(&mut self, record: impl Into<Rc<HelloRecord>>) {
        let record = record.into();
        let list = self.by_sender.entry(record.sender).or_default();
        debug_assert!(list.last().is_none_or(|r| r.timestamp <= record.timestamp));
        list.push(record);
    }

    /// Records from `sender` with `from <= timestamp <= to`.
    pub fn query(&self, sender: NodeId, from: f64, to: f64) -> &[Rc<HelloRecord>] {
        let Some(list) = self.by_sender.get(&sender) else {
            return &[];
        };
        let lo = list.partition_point(|r| r.timestamp < from);
        let hi = list.partition_point(|r| r.timestamp <= to);
        &list[lo..hi.max(lo)]
    }

    pub fn len(&self) -> usize {
        self.by_sender.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_sender.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(sender: u32, t: f64) -> HelloRecord {
        HelloRecord {
            sender: NodeId(sender),
            position: Point::default(),
            radio_range: 100.0,
            timestamp: t,
            downlinks: vec![],
            uplinks: vec![],
        }
    }

    #[test]
    fn arithmetic_schedule() {
        let t: Vec<f64> = hello_times(0.0, 6.0, 30.0).collect();
        assert_eq!(t, [6.0, 12.0, 18.0, 24.0, 30.0]);
    }

    #[test]
    fn schedules_are_independent() {
        let a: Vec<f64> = hello_times(0.0, 6.0, 30.0).collect();
        let b: Vec<f64> = hello_times(0.0, 10.0, 30.0).collect();
        assert_eq!(b, [10.0, 20.0, 30.0]);
        assert_eq!(a.len(), 5);
    }

    #[test]
    fn window_query_is_inclusive() {
        let mut a = HelloArchive::new();
        for t in [6.0, 12.0, 18.0, 24.0, 30.0] {
            a.archive(rec(1, t));
        }
        a.archive(rec(2, 12.0));
        let got: Vec<f64> = a
            .query(NodeId(1), 12.0, 24.0)
            .iter()
            .map(|r| r.timestamp)
            .collect();
        assert_eq!(got, [12.0, 18.0, 24.0]);
        assert!(a.query(NodeId(3), 0.0, 100.0).is_empty());
        assert!(a.query(NodeId(1), 25.0, 20.0).is_empty());
        assert_eq!(a.len(), 6);
    }
}
