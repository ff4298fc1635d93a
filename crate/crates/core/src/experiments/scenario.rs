//! Scenario objects: everything a trial needs except the arm under test.

use thiserror::Error;

use crate::learning::{LearnerConfig, ScheduleError, StageSchedule};
use crate::proportional::{MaskingConfig, ProportionVector};
use crate::sim::{NodeId, ProtocolConfig, SimError, Topology};

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficSpec {
    pub source: NodeId,
    pub destination: NodeId,
    /// Uniform interarrival bounds, seconds.
    pub interarrival: (f64, f64),
    pub packet_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("traffic source {from} cannot reach destination {to}")]
    Unreachable { from: NodeId, to: NodeId },
    #[error("traffic source and destination coincide at {0}")]
    SelfTraffic(NodeId),
    #[error("two traffic specs share source {0}; one agent per source node")]
    DuplicateSource(NodeId),
    #[error("source {node} has {links} outbound links; agent actions need exactly 2")]
    SourceNotBinary { node: NodeId, links: usize },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// A complete experiment configuration minus the arm: topology, traffic,
/// the intermediates' fixed split vectors, masking and learner settings,
/// the stage schedule, and the base seed trials derive theirs from.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub topology: Topology,
    pub traffic: Vec<TrafficSpec>,
    /// Fixed per-destination base vectors of the intermediate routers,
    /// applied in every arm except the all-shortest-path baseline.
    pub intermediate_bases: Vec<(NodeId, Vec<(NodeId, ProportionVector)>)>,
    pub masking: MaskingConfig,
    pub learner: LearnerConfig,
    pub schedule: StageSchedule,
    pub interval_length: f64,
    pub protocol: ProtocolConfig,
    pub base_seed: u64,
    /// Traffic slot acting as leader in leader/follower runs.
    pub leader_slot: usize,
    /// Record hop traces in every trial (test instrumentation).
    pub trace_hops: bool,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.schedule.validate(self.interval_length)?;
        for spec in &self.traffic {
            if spec.source == spec.destination {
                return Err(ScenarioError::SelfTraffic(spec.source));
            }
            if self
                .topology
                .min_hop_distance(spec.source, spec.destination)
                .is_none()
            {
                return Err(ScenarioError::Unreachable {
                    from: spec.source,
                    to: spec.destination,
                });
            }
            if !(spec.interarrival.0 > 0.0) || spec.interarrival.1 < spec.interarrival.0 {
                return Err(ScenarioError::Sim(SimError::InvalidInterarrival {
                    low: spec.interarrival.0,
                    high: spec.interarrival.1,
                }));
            }
        }
        for (i, spec) in self.traffic.iter().enumerate() {
            if self.traffic[..i].iter().any(|s| s.source == spec.source) {
                return Err(ScenarioError::DuplicateSource(spec.source));
            }
        }
        Ok(())
    }

    /// Checks that every traffic source has exactly two outbound links, the
    /// shape scalar agent actions assume.
    pub fn validate_binary_sources(&self) -> Result<(), ScenarioError> {
        for spec in &self.traffic {
            let links = self.topology.outbound(spec.source).len();
            if links != 2 {
                return Err(ScenarioError::SourceNotBinary {
                    node: spec.source,
                    links,
                });
            }
        }
        Ok(())
    }

    /// Multiplies every interarrival bound by `factor`, scaling offered
    /// load by `1/factor` while preserving the rate ratio between sources.
    pub fn scale_interarrival(&mut self, factor: f64) {
        assert!(factor > 0.0);
        for spec in &mut self.traffic {
            spec.interarrival.0 *= factor;
            spec.interarrival.1 *= factor;
        }
    }

    /// Uniform 90/10 forward-split base vectors for every intermediate
    /// node: 0.9 on the min-hop link toward each destination, the remaining
    /// 0.1 spread over the other links.
    pub fn forward_split_bases(
        topology: &Topology,
        intermediates: &[NodeId],
        destinations: &[NodeId],
        forward_share: f64,
    ) -> Vec<(NodeId, Vec<(NodeId, ProportionVector)>)> {
        intermediates
            .iter()
            .map(|&node| {
                let per_dest = destinations
                    .iter()
                    .filter_map(|&dest| {
                        let next = topology.min_hop_next(node, dest)?;
                        let pos = topology.outbound_pos(node, next)?;
                        let m = topology.outbound(node).len();
                        let weights = if m == 1 {
                            vec![1.0]
                        } else {
                            let rest = (1.0 - forward_share) / (m - 1) as f64;
                            (0..m)
                                .map(|i| if i == pos { forward_share } else { rest })
                                .collect()
                        };
                        Some((dest, ProportionVector::new(weights).unwrap()))
                    })
                    .collect();
                (node, per_dest)
            })
            .collect()
    }
}
