//! Deterministic discrete-event engine: topology, packets, link
//! transmission, router queues, the global clock, and metric accounting.
//!
//! Links are duplex and modeled as two independent unidirectional channels
//! with unbounded FIFO transmit queues; transmission takes `size/bandwidth`
//! seconds and propagation is instantaneous. Routing decisions cost zero
//! simulated time. Identical configuration and seeds produce bit-identical
//! event traces and ledgers.

mod engine;
mod event;
mod metrics;
mod packet;
mod router;
mod topology;

pub use engine::{ProtocolConfig, RunOutcome, SimConfig, Simulation};
pub use event::{EventKind, SimError, SimEvent};
pub use metrics::{IntervalAggregate, MetricsLedger};
pub use packet::{Packet, PacketId, Payload};
pub use router::{ProportionalPolicy, RouteDecision, Router, RoutingPolicy};
pub use topology::{Channel, ChannelId, Link, NodeId, Topology, TopologyError};
