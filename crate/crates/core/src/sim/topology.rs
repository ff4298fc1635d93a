use std::fmt;

use thiserror::Error;

/// Index into the topology's node table; unique and stable across a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of a unidirectional channel. Each duplex link contributes two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelId(pub usize);

/// A duplex link, modeled as two independent unidirectional channels with
/// zero propagation delay and pure transmission delay `size / bandwidth`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    /// Bits per simulated second, per direction.
    pub bandwidth: f64,
}

/// One direction of a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub from: NodeId,
    pub to: NodeId,
    pub bandwidth: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("bandwidth must be positive, got {0}")]
    NonPositiveBandwidth(f64),
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
    #[error("self-links are not allowed (node {0})")]
    SelfLink(NodeId),
    #[error("duplicate link between {0} and {1}")]
    DuplicateLink(NodeId, NodeId),
}

/// Static node-and-link structure of a network.
#[derive(Debug, Clone, Default)]
pub struct Topology {
    names: Vec<String>,
    links: Vec<Link>,
    channels: Vec<Channel>,
    /// Outbound channels per node, ordered by ascending neighbor id.
    outbound: Vec<Vec<ChannelId>>,
    /// For each channel, the sender node and the channel's position in the
    /// sender's outbound list.
    sender_pos: Vec<(NodeId, usize)>,
}

impl Topology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: &str) -> NodeId {
        let id = NodeId(self.names.len());
        self.names.push(name.to_string());
        self.outbound.push(Vec::new());
        id
    }

    pub fn add_duplex_link(
        &mut self,
        a: NodeId,
        b: NodeId,
        bandwidth: f64,
    ) -> Result<(), TopologyError> {
        if !(bandwidth > 0.0) {
            return Err(TopologyError::NonPositiveBandwidth(bandwidth));
        }
        for &n in &[a, b] {
            if n.0 >= self.names.len() {
                return Err(TopologyError::UnknownNode(n));
            }
        }
        if a == b {
            return Err(TopologyError::SelfLink(a));
        }
        if self
            .links
            .iter()
            .any(|l| (l.a == a && l.b == b) || (l.a == b && l.b == a))
        {
            return Err(TopologyError::DuplicateLink(a, b));
        }
        self.links.push(Link { a, b, bandwidth });
        for (from, to) in [(a, b), (b, a)] {
            let id = ChannelId(self.channels.len());
            self.channels.push(Channel {
                from,
                to,
                bandwidth,
            });
            // Keep outbound lists ordered by neighbor id.
            let list = &mut self.outbound[from.0];
            let pos = list
                .iter()
                .position(|&c| self.channels[c.0].to > to)
                .unwrap_or(list.len());
            list.insert(pos, id);
        }
        self.rebuild_sender_positions();
        Ok(())
    }

    fn rebuild_sender_positions(&mut self) {
        self.sender_pos = vec![(NodeId(0), 0); self.channels.len()];
        for (node, list) in self.outbound.iter().enumerate() {
            for (pos, &ch) in list.iter().enumerate() {
                self.sender_pos[ch.0] = (NodeId(node), pos);
            }
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.names.len()
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn node_name(&self, n: NodeId) -> &str {
        &self.names[n.0]
    }

    /// Node id by name, if present.
    pub fn find_node(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name).map(NodeId)
    }

    pub fn channel(&self, c: ChannelId) -> &Channel {
        &self.channels[c.0]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Outbound channels of `n`, ordered by ascending neighbor id.
    pub fn outbound(&self, n: NodeId) -> &[ChannelId] {
        &self.outbound[n.0]
    }

    /// Neighbors of `n` in outbound order.
    pub fn neighbors(&self, n: NodeId) -> Vec<NodeId> {
        self.outbound[n.0]
            .iter()
            .map(|&c| self.channels[c.0].to)
            .collect()
    }

    /// Sender node of a channel and the channel's outbound position there.
    pub fn sender_of(&self, c: ChannelId) -> (NodeId, usize) {
        self.sender_pos[c.0]
    }

    /// Position of the channel toward `neighbor` in `n`'s outbound list.
    pub fn outbound_pos(&self, n: NodeId, neighbor: NodeId) -> Option<usize> {
        self.outbound[n.0]
            .iter()
            .position(|&c| self.channels[c.0].to == neighbor)
    }

    /// Hop count of the shortest path from `from` to `dest` (BFS).
    pub fn min_hop_distance(&self, from: NodeId, dest: NodeId) -> Option<usize> {
        self.bfs_distances(dest)[from.0]
    }

    /// First hop of the min-hop path from `from` toward `dest`; ties go to
    /// the lowest neighbor id. `None` when unreachable or already there.
    pub fn min_hop_next(&self, from: NodeId, dest: NodeId) -> Option<NodeId> {
        if from == dest {
            return None;
        }
        let dist = self.bfs_distances(dest);
        let here = dist[from.0]?;
        self.neighbors(from)
            .into_iter()
            .find(|nb| dist[nb.0] == Some(here - 1))
    }

    fn bfs_distances(&self, dest: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_nodes()];
        dist[dest.0] = Some(0);
        let mut frontier = vec![dest];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for node in frontier {
                let d = dist[node.0].unwrap();
                for nb in self.neighbors(node) {
                    if dist[nb.0].is_none() {
                        dist[nb.0] = Some(d + 1);
                        next.push(nb);
                    }
                }
            }
            frontier = next;
        }
        dist
    }
}
