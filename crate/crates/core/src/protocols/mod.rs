//! Distance-vector routing.
//!
//! Each router keeps a table of per-destination cost estimates and next
//! hops, refreshed from the cost vectors its neighbors report. The reports
//! travel the simulated network as real packets (see the engine's protocol
//! update events), so route information consumes link bandwidth like any
//! other traffic. The table's per-destination minimum cost doubles as the
//! ordering value consumed by masking.

use std::fmt::Write as _;

use thiserror::Error;

use crate::sim::NodeId;

/// Smoothing factor applied per observed packet.
pub const DEFAULT_COST_ALPHA: f64 = 0.1;
/// Default interval between vector broadcasts, simulated seconds.
pub const DEFAULT_UPDATE_PERIOD: f64 = 1.0;
/// Default message size per table entry, bits.
pub const DEFAULT_BITS_PER_ENTRY: f64 = 64.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RouteError {
    #[error("router {router} has no route to destination {destination}")]
    UnknownDestination {
        router: NodeId,
        destination: NodeId,
    },
}

/// Per-destination routing state: the minimum cost estimate (the ordering
/// value `v`) and the neighbor it is reached through.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingTableEntry {
    pub destination: NodeId,
    /// Estimated delay to the destination, seconds.
    pub cost: f64,
    pub next_hop: NodeId,
    pub updated_at: f64,
}

/// A router's cost vector as reported to its neighbors.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceVectorMessage {
    pub sender: NodeId,
    pub vector: Vec<(NodeId, f64)>,
}

impl DistanceVectorMessage {
    /// Wire size when each entry costs `bits_per_entry` bits.
    pub fn size_bits(&self, bits_per_entry: f64) -> f64 {
        self.vector.len() as f64 * bits_per_entry
    }
}

/// Exponentially weighted per-channel delay estimate.
///
/// Observations are the full queueing-plus-transmission delay of packets the
/// router pushed through the channel. A channel that has never carried a
/// packet reports the floor: the transmission time of one reference packet.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkCostEstimator {
    value: f64,
    alpha: f64,
}

impl LinkCostEstimator {
    pub fn new(floor: f64, alpha: f64) -> Self {
        assert!(floor > 0.0, "cost floor must be positive");
        Self {
            value: floor,
            alpha,
        }
    }

    pub fn observe(&mut self, delay: f64) {
        self.value = (1.0 - self.alpha) * self.value + self.alpha * delay;
    }

    pub fn estimate(&self) -> f64 {
        self.value
    }
}

/// Distance-vector state of one router: latest neighbor reports plus the
/// table recomputed from them.
#[derive(Debug, Clone)]
pub struct DistanceVectorState {
    self_id: NodeId,
    num_nodes: usize,
    /// Direct neighbors, ascending by id; parallel to `reports`.
    neighbors: Vec<NodeId>,
    /// Latest reported cost per neighbor per destination.
    reports: Vec<Vec<Option<f64>>>,
    table: Vec<Option<RoutingTableEntry>>,
}

impl DistanceVectorState {
    pub fn new(self_id: NodeId, num_nodes: usize, neighbors: Vec<NodeId>) -> Self {
        debug_assert!(neighbors.windows(2).all(|w| w[0] < w[1]));
        let mut table = vec![None; num_nodes];
        table[self_id.0] = Some(RoutingTableEntry {
            destination: self_id,
            cost: 0.0,
            next_hop: self_id,
            updated_at: 0.0,
        });
        let reports = vec![vec![None; num_nodes]; neighbors.len()];
        Self {
            self_id,
            num_nodes,
            neighbors,
            reports,
            table,
        }
    }

    pub fn self_id(&self) -> NodeId {
        self.self_id
    }

    pub fn neighbors(&self) -> &[NodeId] {
        &self.neighbors
    }

    pub fn neighbor_pos(&self, id: NodeId) -> Option<usize> {
        self.neighbors.iter().position(|&n| n == id)
    }

    /// Latest cost `neighbor` reported for `dest`, if any.
    pub fn neighbor_cost(&self, neighbor_pos: usize, dest: NodeId) -> Option<f64> {
        self.reports[neighbor_pos][dest.0]
    }

    pub fn entry(&self, dest: NodeId) -> Option<&RoutingTableEntry> {
        self.table[dest.0].as_ref()
    }

    /// Stores a neighbor's report and recomputes the table from the latest
    /// reports. Costs can rise as well as fall: a worse report from the
    /// current next hop re-raises the entry to the best remaining
    /// alternative.
    pub fn bf_update(
        &mut self,
        msg: &DistanceVectorMessage,
        link_costs: &[f64],
        now: f64,
    ) {
        let Some(pos) = self.neighbor_pos(msg.sender) else {
            debug_assert!(false, "update from non-neighbor {}", msg.sender);
            return;
        };
        for &(dest, cost) in &msg.vector {
            self.reports[pos][dest.0] = Some(cost);
        }
        self.recompute(link_costs, now);
    }

    /// Recomputes every table entry as the minimum over neighbors of
    /// `link_cost + reported_cost`, with ties to the lowest neighbor id.
    /// The self entry stays pinned at cost zero.
    pub fn recompute(&mut self, link_costs: &[f64], now: f64) {
        assert_eq!(link_costs.len(), self.neighbors.len());
        for dest in 0..self.num_nodes {
            if dest == self.self_id.0 {
                continue;
            }
            let mut best: Option<(f64, NodeId)> = None;
            for (pos, &neighbor) in self.neighbors.iter().enumerate() {
                let Some(reported) = self.reports[pos][dest] else {
                    continue;
                };
                let cost = link_costs[pos] + reported;
                let better = match best {
                    None => true,
                    Some((c, _)) => cost < c,
                };
                if better {
                    best = Some((cost, neighbor));
                }
            }
            self.table[dest] = best.map(|(cost, next_hop)| RoutingTableEntry {
                destination: NodeId(dest),
                cost,
                next_hop,
                updated_at: now,
            });
        }
    }

    /// The ordering value `v`: the current minimum cost estimate for `dest`.
    pub fn ordering_value(&self, dest: NodeId) -> Result<f64, RouteError> {
        self.entry(dest)
            .map(|e| e.cost)
            .ok_or(RouteError::UnknownDestination {
                router: self.self_id,
                destination: dest,
            })
    }

    /// Next hop for `dest`, per the converged minimum.
    pub fn next_hop(&self, dest: NodeId) -> Result<NodeId, RouteError> {
        self.entry(dest)
            .map(|e| e.next_hop)
            .ok_or(RouteError::UnknownDestination {
                router: self.self_id,
                destination: dest,
            })
    }

    /// The cost vector this router broadcasts.
    pub fn message(&self) -> DistanceVectorMessage {
        DistanceVectorMessage {
            sender: self.self_id,
            vector: self
                .table
                .iter()
                .flatten()
                .map(|e| (e.destination, e.cost))
                .collect(),
        }
    }

    /// Installs a table entry directly, bypassing the protocol. Useful for
    /// tests that need converged or frozen tables.
    pub fn install_entry(&mut self, dest: NodeId, cost: f64, next_hop: NodeId) {
        self.table[dest.0] = Some(RoutingTableEntry {
            destination: dest,
            cost,
            next_hop,
            updated_at: 0.0,
        });
    }

    /// Installs a neighbor report directly (same caveat as `install_entry`).
    pub fn install_report(&mut self, neighbor: NodeId, dest: NodeId, cost: f64) {
        let pos = self
            .neighbor_pos(neighbor)
            .expect("report from non-neighbor");
        self.reports[pos][dest.0] = Some(cost);
    }

    /// One line per destination: `router dest cost next_hop`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for entry in self.table.iter().flatten() {
            writeln!(
                out,
                "{} {} {:.6} {}",
                self.self_id, entry.destination, entry.cost, entry.next_hop
            )
            .unwrap();
        }
        out
    }
}
