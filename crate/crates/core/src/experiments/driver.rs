//! Runs one trial: builds the simulation for an arm, drives it through the
//! stage schedule, and handles agent decisions at interval boundaries.

use std::fmt::Write as _;

use crate::learning::{
    interaction_schedule, interval_reward, GroupTag, InteractionMode, InteractionStructure,
    MemoryLearner, StageSchedule, TRAINING_STRIDES,
};
use crate::proportional::ProportionVector;
use crate::rng::{stream, StreamKind};
use crate::sim::{
    EventKind, IntervalAggregate, NodeId, ProportionalPolicy, RoutingPolicy, RunOutcome,
    SimConfig, SimEvent, Simulation,
};

use super::scenario::{Scenario, ScenarioError};

/// How the traffic sources route in a given arm. Intermediates keep their
/// fixed masked splits in every variant except the all-shortest-path
/// baseline.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceSetup {
    /// Sources forward along the routing table like everything else.
    ShortestPath,
    /// Sources hold these actions (one per traffic slot) for the whole run.
    Fixed(Vec<f64>),
    /// Sources are learning agents under this interaction structure.
    Learning(InteractionMode),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArmSetup {
    pub sources: SourceSetup,
    pub masked_intermediates: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TrialOptions {
    pub learning_log: bool,
    pub event_trace: bool,
    pub trace_hops: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial: u32,
    /// Sum of delays of packets generated in the measurement window,
    /// credited at delivery.
    pub total_cost: f64,
    pub packets_counted: u64,
    pub packets_delivered: u64,
    pub per_interval: Vec<IntervalAggregate>,
}

#[derive(Debug, Clone)]
pub struct TrialOutput {
    pub result: TrialResult,
    pub learning_log: Option<String>,
    pub event_trace: Option<String>,
    /// Final per-agent datasets (one per traffic slot; empty for
    /// non-learning arms), in slot order.
    pub datasets: Vec<Vec<crate::learning::TrainingExample>>,
}

struct AgentState {
    slot: usize,
    node: NodeId,
    dest: NodeId,
    group: GroupTag,
    learner: MemoryLearner,
    /// Traffic slots whose actions fill this agent's feature vector after
    /// its own action.
    peers: Vec<usize>,
    current_action: f64,
    decisions: u32,
    selected_once: bool,
    open: Option<OpenInterval>,
}

struct OpenInterval {
    start: f64,
    action: f64,
    features: Vec<f64>,
    estimate: Option<f64>,
}

pub fn run_trial(
    scenario: &Scenario,
    setup: &ArmSetup,
    trial: u32,
    opts: &TrialOptions,
) -> Result<TrialOutput, ScenarioError> {
    scenario.validate()?;
    let trial_seed = scenario.base_seed.wrapping_add(trial as u64);
    let schedule = scenario.schedule;
    let interval = scenario.interval_length;

    let cfg = SimConfig {
        measure_window: schedule.measure_window(),
        interval_len: interval,
        num_groups: 2,
        trace_hops: opts.trace_hops || scenario.trace_hops,
        trace_events: opts.event_trace,
        protocol: scenario.protocol,
        ..SimConfig::default()
    };
    let mut sim = Simulation::new(scenario.topology.clone(), cfg);

    if setup.masked_intermediates {
        for (node, bases) in &scenario.intermediate_bases {
            let mut policy = ProportionalPolicy::new(scenario.masking);
            for (dest, vector) in bases {
                policy.set_base(*dest, vector.clone());
            }
            sim.set_policy(*node, RoutingPolicy::Proportional(policy));
        }
    }

    match &setup.sources {
        SourceSetup::ShortestPath => {}
        // Source base vectors (fixed or learned) pass through the same
        // masking as everything else; masking throttles a link as its
        // ordering margin closes, which both prevents cycles and keeps a
        // badly chosen split from piling up unbounded queue during
        // training.
        SourceSetup::Fixed(actions) => {
            assert_eq!(actions.len(), scenario.traffic.len());
            scenario.validate_binary_sources()?;
            for (spec, &a) in scenario.traffic.iter().zip(actions) {
                let mut policy = ProportionalPolicy::new(scenario.masking);
                policy.set_base(spec.destination, ProportionVector::binary(a).unwrap());
                sim.set_policy(spec.source, RoutingPolicy::Proportional(policy));
            }
        }
        SourceSetup::Learning(_) => {
            scenario.validate_binary_sources()?;
            for spec in &scenario.traffic {
                let policy = ProportionalPolicy::new(scenario.masking);
                sim.set_policy(spec.source, RoutingPolicy::Proportional(policy));
            }
        }
    }

    for (slot, spec) in scenario.traffic.iter().enumerate() {
        sim.add_traffic(
            spec.source,
            spec.destination,
            spec.interarrival.0,
            spec.interarrival.1,
            stream(trial_seed, StreamKind::Traffic, slot as u64),
            schedule.init_end,
            schedule.drain_end,
            spec.packet_bits,
        )?;
    }
    sim.start_protocol();

    let mut agents: Vec<AgentState> = Vec::new();
    let mut mode = InteractionMode::Standard;
    let mut learning_log = opts.learning_log.then(String::new);
    if let SourceSetup::Learning(m) = &setup.sources {
        mode = *m;
        let structure = structure_for(mode, scenario, interval);
        structure.validate(scenario.traffic.len())?;
        for b in interaction_schedule(&structure, &schedule)? {
            sim.schedule(SimEvent {
                time: b.time,
                kind: EventKind::IntervalBoundary {
                    group: b.group.index(),
                },
            })?;
        }
        for (slot, spec) in scenario.traffic.iter().enumerate() {
            let group = structure.assignments[slot];
            let peers: Vec<usize> = match mode {
                InteractionMode::Standard => Vec::new(),
                // Followers condition on the leaders; leaders keep empty
                // feature spaces.
                InteractionMode::LeaderFollower => {
                    if group == GroupTag::B {
                        (0..scenario.traffic.len())
                            .filter(|&s| structure.assignments[s] == GroupTag::A)
                            .collect()
                    } else {
                        Vec::new()
                    }
                }
                // Everyone conditions on the other group's current action.
                InteractionMode::Interleaved => (0..scenario.traffic.len())
                    .filter(|&s| structure.assignments[s] != group)
                    .collect(),
            };
            agents.push(AgentState {
                slot,
                node: spec.source,
                dest: spec.destination,
                group,
                learner: MemoryLearner::new(
                    scenario.learner.clone(),
                    TRAINING_STRIDES[slot % TRAINING_STRIDES.len()],
                    stream(trial_seed, StreamKind::Exploration, slot as u64),
                    stream(trial_seed, StreamKind::Selection, slot as u64),
                ),
                peers,
                current_action: 0.0,
                decisions: 0,
                selected_once: false,
                open: None,
            });
        }
    }

    loop {
        match sim.advance(schedule.drain_end) {
            RunOutcome::Boundary { time, group } => handle_boundary(
                &mut sim,
                &mut agents,
                mode,
                group,
                time,
                interval,
                &schedule,
                learning_log.as_mut(),
            ),
            RunOutcome::Completed => break,
        }
    }

    let ledger = &sim.ledger;
    let result = TrialResult {
        trial,
        total_cost: ledger.total_delay,
        packets_counted: ledger.packets_counted,
        packets_delivered: ledger.packets_delivered,
        per_interval: ledger.per_interval.clone(),
    };
    let event_trace = opts.event_trace.then(|| sim.event_trace().to_string());
    let datasets = agents
        .into_iter()
        .map(|a| a.learner.into_dataset())
        .collect();
    Ok(TrialOutput {
        result,
        learning_log,
        event_trace,
        datasets,
    })
}

fn structure_for(
    mode: InteractionMode,
    scenario: &Scenario,
    interval: f64,
) -> InteractionStructure {
    let n = scenario.traffic.len();
    let assignments = match mode {
        InteractionMode::Standard => vec![GroupTag::A; n],
        InteractionMode::LeaderFollower => (0..n)
            .map(|i| {
                if i == scenario.leader_slot {
                    GroupTag::A
                } else {
                    GroupTag::B
                }
            })
            .collect(),
        InteractionMode::Interleaved => (0..n)
            .map(|i| if i % 2 == 0 { GroupTag::A } else { GroupTag::B })
            .collect(),
    };
    InteractionStructure {
        mode,
        assignments,
        interval_length: interval,
    }
}

/// Closes the finished interval and decides the next action for every agent
/// the boundary concerns. Aligned structures emit group-A boundaries that
/// cover all agents, leaders resolving before followers so followers can
/// read the leaders' fresh choices; interleaved boundaries touch only the
/// matching group.
#[allow(clippy::too_many_arguments)]
fn handle_boundary(
    sim: &mut Simulation,
    agents: &mut [AgentState],
    mode: InteractionMode,
    group: u8,
    time: f64,
    interval: f64,
    schedule: &StageSchedule,
    mut learning_log: Option<&mut String>,
) {
    let (delay_sum, _delivered) = sim.ledger.take_group(group as usize);
    let reward = interval_reward(delay_sum);

    // Group A (leaders) first, then group B, stable by slot within a group.
    let mut order: Vec<usize> = Vec::new();
    for tag in [GroupTag::A, GroupTag::B] {
        for (i, agent) in agents.iter().enumerate() {
            if agent.group == tag {
                order.push(i);
            }
        }
    }

    for &i in &order {
        let participates = match mode {
            InteractionMode::Interleaved => agents[i].group.index() == group,
            _ => true,
        };
        if !participates {
            continue;
        }

        // Close the finished interval. Half-length start-up intervals under
        // interleaving reset the accumulator but record no example.
        if let Some(open) = agents[i].open.take() {
            if (time - open.start - interval).abs() < 1e-6 {
                agents[i].learner.record(open.features, reward);
                if let Some(log) = learning_log.as_deref_mut() {
                    let estimate = open
                        .estimate
                        .map(|e| format!("{e:.6}"))
                        .unwrap_or_else(|| "na".to_string());
                    writeln!(
                        log,
                        "{}\t{}\t{:.6}\t{:.6}\t{}",
                        agents[i].slot,
                        agents[i].learner.dataset().len() - 1,
                        open.action,
                        reward,
                        estimate
                    )
                    .unwrap();
                }
            }
        }

        if time >= schedule.learning_end - 1e-9 {
            continue; // actions freeze through the drain
        }

        let peer_actions: Vec<f64> = agents[i]
            .peers
            .iter()
            .map(|&slot| {
                agents
                    .iter()
                    .find(|a| a.slot == slot)
                    .expect("peer slot exists")
                    .current_action
            })
            .collect();

        let (action, estimate) = if time < schedule.training_end - 1e-9 {
            (agents[i].learner.training_action(agents[i].decisions), None)
        } else if !agents[i].selected_once {
            agents[i].selected_once = true;
            let a = agents[i]
                .learner
                .post_training_selection(&peer_actions)
                .expect("training data exists after the training stage");
            let mut query = vec![a];
            query.extend_from_slice(&peer_actions);
            (a, agents[i].learner.estimate(&query).ok())
        } else {
            let prev = agents[i].current_action;
            let (a, e) = agents[i]
                .learner
                .learning_step(prev, &peer_actions)
                .expect("dataset is nonempty during the learning stage");
            (a, Some(e))
        };

        agents[i].decisions += 1;
        agents[i].current_action = action;
        let mut features = vec![action];
        features.extend_from_slice(&peer_actions);
        agents[i].open = Some(OpenInterval {
            start: time,
            action,
            features,
            estimate,
        });

        let node = agents[i].node;
        let dest = agents[i].dest;
        if let RoutingPolicy::Proportional(policy) = &mut sim.router_mut(node).policy {
            policy.set_base(dest, ProportionVector::binary(action).unwrap());
        }
    }
}
