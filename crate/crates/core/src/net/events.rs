use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// An entry of the schedule. Ordering is by `(time, seq)`.
#[derive(Debug, Clone)]
pub struct Scheduled<T> {
    pub time: f64,
    pub seq: u64,
    pub payload: T,
}

impl<T> PartialEq for Scheduled<T> {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq
    }
}

impl<T> Eq for Scheduled<T> {}

impl<T> PartialOrd for Scheduled<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Scheduled<T> {
    // Reversed: BinaryHeap is a max-heap.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Time-ordered schedule with FIFO tie-breaking.
#[derive(Debug)]
pub struct EventQueue<T> {
    heap: BinaryHeap<Scheduled<T>>,
    next_seq: u64,
    now: f64,
}

impl<T> Default for EventQueue<T> {
    fn default() -> Self {
        Self {
            heap: BinaryHeap::new(),
            next_seq: 0,
            now: 0.0,
        }
    }
}

impl<T> EventQueue<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    /// Schedules `payload` at `time`, which must not lie in the past.
    pub fn schedule(&mut self, time: f64, payload: T) -> u64 {
        assert!(
            time >= self.now,
            "event scheduled in the past ({time} < {})",
            self.now
        );
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Scheduled { time, seq, payload });
        seq
    }

    pub fn pop(&mut self) -> Option<Scheduled<T>> {
        let ev = self.heap.pop()?;
        self.now = ev.time;
        Some(ev)
    }

    pub fn peek_time(&self) -> Option<f64> {
        self.heap.peek().map(|e| e.time)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ties_resolve_fifo() {
        let mut q = EventQueue::new();
        q.schedule(1.0, "a");
        q.schedule(0.5, "b");
        q.schedule(1.0, "c");
        let order: Vec<_> = std::iter::from_fn(|| q.pop().map(|e| e.payload)).collect();
        assert_eq!(order, ["b", "a", "c"]);
    }

    #[test]
    #[should_panic(expected = "in the past")]
    fn rejects_past_events() {
        let mut q = EventQueue::new();
        q.schedule(2.0, ());
        q.pop();
        q.schedule(1.0, ());
    }

    proptest! {
        #[test]
        fn dequeues_in_time_order(times in proptest::collection::vec(0.0f64..1000.0, 1..200)) {
            let mut q = EventQueue::new();
            for t in &times {
                q.schedule(*t, ());
            }
            let mut last = (f64::NEG_INFINITY, 0u64);
            while let Some(ev) = q.pop() {
                prop_assert!(ev.time > last.0 || (ev.time == last.0 && ev.seq > last.1));
                last = (ev.time, ev.seq);
            }
        }
    }
}
