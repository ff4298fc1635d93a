use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    /// A traffic source emits its next packet.
    PacketGenerated { source_slot: usize },
    /// The packet in service on `channel` finishes transmitting.
    TransmissionComplete { channel: usize },
    /// A router broadcasts its cost vector to all neighbors.
    ProtocolUpdate { router: usize },
    /// A learning-interval boundary for the tagged agent group; the engine
    /// hands control back to the caller when it dispatches one.
    IntervalBoundary { group: u8 },
    /// End-of-run marker, only used for tracing.
    SimulationEnd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEvent {
    pub time: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("event scheduled at {event_time} but the clock is already at {clock}")]
    EventInPast { event_time: f64, clock: f64 },
    #[error("event time {0} is not finite")]
    NonFiniteTime(f64),
    #[error("interarrival bounds must satisfy 0 < low <= high, got [{low}, {high}]")]
    InvalidInterarrival { low: f64, high: f64 },
}

#[derive(Debug)]
struct QueueEntry {
    time: f64,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}
impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse for earliest-first, with the
        // insertion sequence breaking ties deterministically.
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}
impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Time-ordered event queue; ties dispatch in insertion order.
#[derive(Debug, Default)]
pub(crate) struct EventQueue {
    heap: BinaryHeap<QueueEntry>,
    next_seq: u64,
}

impl EventQueue {
    pub fn schedule(&mut self, clock: f64, event: SimEvent) -> Result<(), SimError> {
        if !event.time.is_finite() {
            return Err(SimError::NonFiniteTime(event.time));
        }
        if event.time < clock {
            return Err(SimError::EventInPast {
                event_time: event.time,
                clock,
            });
        }
        self.heap.push(QueueEntry {
            time: event.time,
            seq: self.next_seq,
            kind: event.kind,
        });
        self.next_seq += 1;
        Ok(())
    }

    /// Pops the next event if it is due at or before `until`.
    pub fn pop_through(&mut self, until: f64) -> Option<SimEvent> {
        if self.heap.peek().map(|e| e.time <= until)? {
            self.heap.pop().map(|e| SimEvent {
                time: e.time,
                kind: e.kind,
            })
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }
}
