//! Per-node routing state and the per-packet forwarding decision.

use std::collections::BTreeMap;

use crate::proportional::{
    apply_mask, reset_splitter, split_choose, MaskError, MaskingConfig, ProportionVector,
    SplitterState,
};
use crate::protocols::{DistanceVectorState, LinkCostEstimator};
use crate::sim::topology::NodeId;

/// Threshold above which a changed applied vector resets the splitter, so
/// realized proportions always track the vector currently in force.
const APPLIED_CHANGE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone)]
pub enum RoutingPolicy {
    /// Forward everything for a destination along the table's next hop.
    ShortestPath,
    /// Split traffic per destination according to a (possibly masked)
    /// proportion vector.
    Proportional(ProportionalPolicy),
}

#[derive(Debug, Clone)]
pub struct ProportionalPolicy {
    pub masking: MaskingConfig,
    /// Base vector per destination, indexed over the node's outbound
    /// channels. Destinations without a base vector fall back to the
    /// shortest-path rule.
    base: BTreeMap<usize, ProportionVector>,
    splitters: BTreeMap<usize, SplitterSlot>,
}

#[derive(Debug, Clone)]
struct SplitterSlot {
    last_applied: ProportionVector,
    state: SplitterState,
}

impl ProportionalPolicy {
    pub fn new(masking: MaskingConfig) -> Self {
        Self {
            masking,
            base: BTreeMap::new(),
            splitters: BTreeMap::new(),
        }
    }

    pub fn set_base(&mut self, dest: NodeId, vector: ProportionVector) {
        self.base.insert(dest.0, vector);
    }

    pub fn base(&self, dest: NodeId) -> Option<&ProportionVector> {
        self.base.get(&dest.0)
    }
}

/// Where a packet goes next from this node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteDecision {
    /// The packet is at its destination.
    Deliver,
    /// Forward on the outbound channel at this position.
    Forward(usize),
    /// No route known yet; hold the packet until a table entry arrives.
    Park,
}

#[derive(Debug)]
pub struct Router {
    pub id: NodeId,
    pub dv: DistanceVectorState,
    /// Per outbound channel, parallel to the topology's outbound list.
    pub estimators: Vec<LinkCostEstimator>,
    pub policy: RoutingPolicy,
    pub(crate) parked: Vec<crate::sim::packet::Packet>,
}

impl Router {
    pub fn new(
        id: NodeId,
        dv: DistanceVectorState,
        estimators: Vec<LinkCostEstimator>,
        policy: RoutingPolicy,
    ) -> Self {
        Self {
            id,
            dv,
            estimators,
            policy,
            parked: Vec::new(),
        }
    }

    pub fn link_costs(&self) -> Vec<f64> {
        self.estimators.iter().map(|e| e.estimate()).collect()
    }

    pub fn parked_count(&self) -> usize {
        self.parked.len()
    }

    /// Decides the outbound channel for a packet bound to `dest`.
    pub fn decide(&mut self, dest: NodeId) -> RouteDecision {
        if dest == self.id {
            return RouteDecision::Deliver;
        }
        match &self.policy {
            RoutingPolicy::ShortestPath => self.shortest_path_decision(dest),
            RoutingPolicy::Proportional(p) => {
                if p.base(dest).is_none() {
                    return self.shortest_path_decision(dest);
                }
                self.proportional_decision(dest)
            }
        }
    }

    fn shortest_path_decision(&self, dest: NodeId) -> RouteDecision {
        match self.dv.next_hop(dest) {
            Ok(hop) => match self.dv.neighbor_pos(hop) {
                Some(pos) => RouteDecision::Forward(pos),
                None => RouteDecision::Park,
            },
            Err(_) => RouteDecision::Park,
        }
    }

    fn proportional_decision(&mut self, dest: NodeId) -> RouteDecision {
        let Ok(v_self) = self.dv.ordering_value(dest) else {
            return RouteDecision::Park;
        };
        let v_neighbors: Vec<f64> = (0..self.dv.neighbors().len())
            .map(|pos| self.dv.neighbor_cost(pos, dest).unwrap_or(f64::INFINITY))
            .collect();
        let RoutingPolicy::Proportional(policy) = &mut self.policy else {
            unreachable!()
        };
        let base = policy.base.get(&dest.0).expect("checked by caller");
        match apply_mask(&policy.masking, base, v_self, &v_neighbors) {
            Ok(applied) => {
                let slot = policy
                    .splitters
                    .entry(dest.0)
                    .or_insert_with(|| SplitterSlot {
                        last_applied: applied.clone(),
                        state: SplitterState::new(applied.len()),
                    });
                if slot.last_applied.max_component_delta(&applied) > APPLIED_CHANGE_EPSILON {
                    reset_splitter(&mut slot.state);
                    slot.last_applied = applied;
                }
                RouteDecision::Forward(split_choose(&mut slot.state, &slot.last_applied))
            }
            Err(MaskError::NoAdmissibleLink) => {
                // Fall back to the neighbor with the smallest ordering
                // value, i.e. plain minimum-cost forwarding.
                let best = v_neighbors
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.is_finite())
                    .min_by(|(_, a), (_, b)| a.total_cmp(b))
                    .map(|(pos, _)| pos);
                match best {
                    Some(pos) => RouteDecision::Forward(pos),
                    None => self.shortest_path_decision(dest),
                }
            }
            Err(err) => panic!("masking misconfigured at router {}: {err}", self.id),
        }
    }
}
