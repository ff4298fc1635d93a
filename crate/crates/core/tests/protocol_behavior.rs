//! Distance-vector behavior through the running engine: convergence on
//! static costs, background protocol traffic accounting, and route choice
//! on the benchmark topology.

use maskroute_core::experiments::gemini_topology;
use maskroute_core::rng::{stream, StreamKind};
use maskroute_core::sim::{NodeId, ProtocolConfig, SimConfig, Simulation, Topology};

fn triangle() -> (Topology, NodeId, NodeId, NodeId) {
    let mut topo = Topology::new();
    let a = topo.add_node("a");
    let b = topo.add_node("b");
    let c = topo.add_node("c");
    topo.add_duplex_link(a, b, 1000.0).unwrap();
    topo.add_duplex_link(b, c, 1000.0).unwrap();
    topo.add_duplex_link(a, c, 1000.0).unwrap();
    (topo, a, b, c)
}

#[test]
fn tables_converge_to_static_shortest_paths() {
    let (topo, a, b, c) = triangle();
    let mut sim = Simulation::new(topo, SimConfig::default());
    sim.start_protocol();
    sim.run(10.0);
    // Idle link costs sit at the 1 s floor, so best routes are direct.
    for (from, to) in [(a, b), (a, c), (b, c)] {
        let entry = sim.router(from).dv.entry(to).unwrap();
        assert_eq!(entry.cost, 1.0, "{from}->{to}");
        assert_eq!(entry.next_hop, to);
    }
    // The ordering value decreases monotonically along a shortest path.
    let v_a = sim.router(a).dv.ordering_value(c).unwrap();
    let v_c = sim.router(c).dv.ordering_value(c).unwrap();
    assert!(v_a > v_c);
    assert_eq!(v_c, 0.0);
}

#[test]
fn protocol_bits_match_period_arithmetic() {
    let (topo, a, b, _) = triangle();
    let ab = topo.outbound(a)[topo.outbound_pos(a, b).unwrap()];
    let mut sim = Simulation::new(topo, SimConfig::default());
    sim.start_protocol();
    // Let tables converge so message sizes are stable at 3 entries.
    sim.run(10.0);
    let (bits_start, proto_start) = sim.channel_bits(ab);
    assert_eq!(bits_start, proto_start, "only protocol traffic runs");
    sim.run(20.0);
    let (_, proto_end) = sim.channel_bits(ab);
    let observed = proto_end - proto_start;
    // One 3-entry message per period over 10 s, within one boundary message.
    let message = 3.0 * 64.0;
    let expected = 10.0 * message;
    assert!(
        (observed - expected).abs() <= message,
        "observed {observed}, expected {expected} +/- {message}"
    );
}

#[test]
fn zero_size_messages_still_update_tables() {
    let (topo, a, _, c) = triangle();
    let ac = topo.outbound(a)[topo.outbound_pos(a, c).unwrap()];
    let mut sim = Simulation::new(
        topo,
        SimConfig {
            protocol: ProtocolConfig {
                bits_per_entry: 0.0,
                ..ProtocolConfig::default()
            },
            ..SimConfig::default()
        },
    );
    sim.start_protocol();
    sim.run(10.0);
    assert_eq!(sim.router(a).dv.entry(c).unwrap().cost, 1.0);
    let (bits, proto) = sim.channel_bits(ac);
    assert_eq!(bits, 0.0);
    assert_eq!(proto, 0.0);
}

#[test]
fn gemini_source_routes_via_the_two_hop_path() {
    let (topo, n) = gemini_topology();
    let mut sim = Simulation::new(topo, SimConfig::default());
    sim.start_protocol();
    sim.run(20.0);
    // With all link costs at the idle floor, S1 reaches D1 in 2 s via T and
    // 3 s via A; shortest-path forwarding picks T.
    assert_eq!(sim.router(n.s1).dv.next_hop(n.d1).unwrap(), n.t);
    assert_eq!(sim.router(n.s1).dv.ordering_value(n.d1).unwrap(), 2.0);
    assert_eq!(sim.router(n.s2).dv.next_hop(n.d2).unwrap(), n.u);
    // v decreases strictly along S1 -> T -> D1.
    let v_s1 = sim.router(n.s1).dv.ordering_value(n.d1).unwrap();
    let v_t = sim.router(n.t).dv.ordering_value(n.d1).unwrap();
    assert!(v_s1 > v_t && v_t > 0.0);
}

#[test]
fn early_packets_park_until_routes_arrive() {
    let (topo, a, _, c) = triangle();
    let mut sim = Simulation::new(
        topo,
        SimConfig {
            trace_hops: true,
            ..SimConfig::default()
        },
    );
    // Traffic starts immediately, before any update has propagated; the
    // first packets wait in the pre-routing buffer and go out once the
    // first vectors land.
    sim.add_traffic(
        a,
        c,
        0.05,
        0.05,
        stream(8, StreamKind::Traffic, 0),
        0.0,
        0.3,
        1000.0,
    )
    .unwrap();
    sim.start_protocol();
    sim.run(0.05);
    assert!(sim.data_packets_parked() > 0, "no packet parked at t=0.05");
    sim.run(30.0);
    assert_eq!(sim.data_packets_parked(), 0);
    assert_eq!(sim.ledger.packets_delivered_all, sim.ledger.packets_generated);
}

#[test]
fn table_dump_lists_entries() {
    let (topo, a, _, _) = triangle();
    let mut sim = Simulation::new(topo, SimConfig::default());
    sim.start_protocol();
    sim.run(10.0);
    let dump = sim.router(a).dv.dump();
    let lines: Vec<&str> = dump.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("0 0 0.000000 0"));
}
