//! Trial-driver behavior: dataset growth, feature plumbing per interaction
//! structure, interval rewards, and trial determinism.

use maskroute_core::experiments::{
    run_trial, ArmSetup, Scenario, SourceSetup, TrafficSpec, TrialOptions,
};
use maskroute_core::learning::{
    FitKind, InteractionMode, LearnerConfig, StageSchedule,
};
use maskroute_core::proportional::MaskingConfig;
use maskroute_core::sim::{NodeId, ProtocolConfig, Topology};

/// Two sources feeding two sinks through a shared middle node, the smallest
/// shape where both agents have two outbound links.
///
/// ```text
///   s1 - m - d1      s1 - x1 - d1 (private)
///   s2 /   \ d2      s2 - x2 - d2 (private)
/// ```
fn tiny_scenario() -> Scenario {
    let mut topo = Topology::new();
    let s1 = topo.add_node("s1");
    let s2 = topo.add_node("s2");
    let m = topo.add_node("m");
    let x1 = topo.add_node("x1");
    let x2 = topo.add_node("x2");
    let d1 = topo.add_node("d1");
    let d2 = topo.add_node("d2");
    for (a, b) in [
        (s1, m),
        (s2, m),
        (s1, x1),
        (s2, x2),
        (m, d1),
        (m, d2),
        (x1, d1),
        (x2, d2),
    ] {
        topo.add_duplex_link(a, b, 1000.0).unwrap();
    }
    let intermediate_bases =
        Scenario::forward_split_bases(&topo, &[m, x1, x2], &[d1, d2], 0.9);
    Scenario {
        name: "tiny".to_string(),
        traffic: vec![
            TrafficSpec {
                source: s1,
                destination: d1,
                interarrival: (1.5, 2.5),
                packet_bits: 1000.0,
            },
            TrafficSpec {
                source: s2,
                destination: d2,
                interarrival: (1.5, 2.5),
                packet_bits: 1000.0,
            },
        ],
        topology: topo,
        intermediate_bases,
        masking: MaskingConfig::default(),
        learner: LearnerConfig {
            k: 3,
            fit: FitKind::Mean,
            ..LearnerConfig::default()
        },
        schedule: StageSchedule {
            init_end: 20.0,
            training_end: 120.0,
            learning_end: 220.0,
            drain_end: 260.0,
        },
        interval_length: 20.0,
        protocol: ProtocolConfig::default(),
        base_seed: 7,
        leader_slot: 0,
        trace_hops: false,
    }
}

fn learning_setup(mode: InteractionMode) -> ArmSetup {
    ArmSetup {
        sources: SourceSetup::Learning(mode),
        masked_intermediates: true,
    }
}

#[test]
fn one_example_per_completed_interval() {
    let scenario = tiny_scenario();
    let out = run_trial(
        &scenario,
        &learning_setup(InteractionMode::Standard),
        0,
        &TrialOptions::default(),
    )
    .unwrap();
    // 5 training + 5 learning intervals per agent.
    assert_eq!(out.datasets.len(), 2);
    for ds in &out.datasets {
        assert_eq!(ds.len(), 10);
        for (i, ex) in ds.iter().enumerate() {
            assert_eq!(ex.interval_index, i as u32);
            assert!(ex.reward.is_finite());
            assert_eq!(ex.features.len(), 1, "standard mode sees own action only");
            assert!((0.0..=1.0).contains(&ex.features[0]));
        }
    }
}

#[test]
fn leader_follower_features_carry_the_leader_action() {
    let scenario = tiny_scenario();
    let out = run_trial(
        &scenario,
        &learning_setup(InteractionMode::LeaderFollower),
        0,
        &TrialOptions::default(),
    )
    .unwrap();
    let leader = &out.datasets[0];
    let follower = &out.datasets[1];
    for ex in leader {
        assert_eq!(ex.features.len(), 1, "leaders keep empty peer features");
    }
    for (i, ex) in follower.iter().enumerate() {
        assert_eq!(ex.features.len(), 2);
        // The follower's second feature is the action the leader chose at
        // the same boundary.
        assert_eq!(ex.features[1], leader[i].features[0]);
    }
}

#[test]
fn interleaved_features_carry_the_action_in_force() {
    let scenario = tiny_scenario();
    let out = run_trial(
        &scenario,
        &learning_setup(InteractionMode::Interleaved),
        0,
        &TrialOptions::default(),
    )
    .unwrap();
    let group_a = &out.datasets[0];
    let group_b = &out.datasets[1];
    assert!(!group_a.is_empty() && !group_b.is_empty());
    for ds in [group_a, group_b] {
        for ex in ds {
            assert_eq!(ex.features.len(), 2);
        }
    }
    // During training each agent walks its grid deterministically, so the
    // overlap structure is checkable in closed form: when A closes its k-th
    // full interval it sees the action B set half an interval earlier.
    // A decides at 20, 40, ...; B decides at 20 (stub), 30, 50, ...
    // A's interval k (decided at 20 + 20k) overlaps B's decision at
    // 30 + 20k; the feature A recorded was B's action from 10 s earlier,
    // i.e. B's decision k (made at 30 + 20(k-1), or the stub for k = 0).
    let grid = |i: usize, stride: usize| ((i * stride) % 21) as f64 / 20.0;
    // A slots are even traffic indices -> stride 1; B -> stride 8.
    for k in 0..4 {
        assert_eq!(group_a[k].features[0], grid(k, 1));
        assert_eq!(group_a[k].features[1], grid(k, 8));
    }
}

#[test]
fn deterministic_single_packet_rewards() {
    // One packet per interval on an idle private path: every delivery takes
    // exactly 2 s (two idle 1000-bit hops), so each closed interval after
    // the first records reward -2.
    let mut scenario = tiny_scenario();
    // Zero-size updates: tables converge but consume no bandwidth, so data
    // packets see exactly two idle 1 s hops.
    scenario.protocol = ProtocolConfig {
        bits_per_entry: 0.0,
        ..ProtocolConfig::default()
    };
    // Interarrival pinned to the interval length: one packet per interval.
    scenario.traffic[0].interarrival = (20.0, 20.0);
    // The second source never fires inside the run.
    scenario.traffic[1].interarrival = (10_000.0, 10_000.0);
    let out = run_trial(
        &scenario,
        &learning_setup(InteractionMode::Standard),
        0,
        &TrialOptions {
            learning_log: true,
            ..TrialOptions::default()
        },
    )
    .unwrap();
    let ds = &out.datasets[0];
    assert_eq!(ds.len(), 10);
    // First interval: its packet (generated exactly at the boundary) is
    // delivered 2 s into the next interval, so interval 0 scores 0 and the
    // rest score -2 each.
    assert_eq!(ds[0].reward, 0.0);
    for ex in &ds[1..] {
        assert_eq!(ex.reward, -2.0);
    }
    let log = out.learning_log.unwrap();
    assert_eq!(log.lines().count(), 20);
}

#[test]
fn trials_replay_identically_and_differ_across_seeds() {
    let scenario = tiny_scenario();
    let setup = learning_setup(InteractionMode::Standard);
    let opts = TrialOptions {
        learning_log: true,
        ..TrialOptions::default()
    };
    let a = run_trial(&scenario, &setup, 3, &opts).unwrap();
    let b = run_trial(&scenario, &setup, 3, &opts).unwrap();
    assert_eq!(a.result, b.result);
    assert_eq!(a.learning_log, b.learning_log);
    let c = run_trial(&scenario, &setup, 4, &opts).unwrap();
    assert_ne!(a.result.total_cost, c.result.total_cost);
}

#[test]
fn fixed_sources_hold_their_split() {
    let mut scenario = tiny_scenario();
    scenario.trace_hops = true;
    let setup = ArmSetup {
        sources: SourceSetup::Fixed(vec![1.0, 0.0]),
        masked_intermediates: true,
    };
    let out = run_trial(&scenario, &setup, 0, &TrialOptions::default()).unwrap();
    assert!(out.result.packets_delivered > 0);
    assert!(out.datasets.iter().all(|d| d.is_empty()));
}
