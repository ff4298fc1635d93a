use crate::protocols::DistanceVectorMessage;
use crate::sim::topology::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PacketId(pub u64);

impl std::fmt::Display for PacketId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    /// Application traffic; counted by the metrics ledger.
    Data,
    /// A distance-vector update, consumed by the adjacent receiver.
    Protocol(DistanceVectorMessage),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub id: PacketId,
    pub source: NodeId,
    pub destination: NodeId,
    /// Bits; transmission takes `size / bandwidth` seconds per hop.
    pub size: f64,
    pub created_at: f64,
    pub delivered_at: Option<f64>,
    pub payload: Payload,
    /// Time this packet entered its current channel queue; the sender
    /// observes `completion - entered_channel_at` as the per-hop cost.
    pub(crate) entered_channel_at: f64,
    /// Nodes visited with arrival times. Test instrumentation, populated
    /// only when the engine runs with hop tracing on; begins at the source.
    pub hop_trace: Option<Vec<(NodeId, f64)>>,
}

impl Packet {
    pub(crate) fn new_data(
        id: PacketId,
        source: NodeId,
        destination: NodeId,
        size: f64,
        created_at: f64,
        trace_hops: bool,
    ) -> Self {
        Self {
            id,
            source,
            destination,
            size,
            created_at,
            delivered_at: None,
            payload: Payload::Data,
            entered_channel_at: created_at,
            hop_trace: trace_hops.then(|| vec![(source, created_at)]),
        }
    }

    pub(crate) fn new_protocol(
        id: PacketId,
        source: NodeId,
        destination: NodeId,
        size: f64,
        created_at: f64,
        msg: DistanceVectorMessage,
    ) -> Self {
        Self {
            id,
            source,
            destination,
            size,
            created_at,
            delivered_at: None,
            payload: Payload::Protocol(msg),
            entered_channel_at: created_at,
            hop_trace: None,
        }
    }

    pub fn is_data(&self) -> bool {
        matches!(self.payload, Payload::Data)
    }

    pub(crate) fn record_hop(&mut self, node: NodeId, time: f64) {
        if let Some(trace) = &mut self.hop_trace {
            trace.push((node, time));
        }
    }

    /// Visited nodes in order, starting at the source.
    pub fn visited_nodes(&self) -> Option<Vec<NodeId>> {
        self.hop_trace
            .as_ref()
            .map(|t| t.iter().map(|&(n, _)| n).collect())
    }

    pub fn delay(&self) -> Option<f64> {
        self.delivered_at.map(|d| d - self.created_at)
    }
}
