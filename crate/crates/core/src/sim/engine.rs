//! The single-threaded discrete-event engine.
//!
//! One `Simulation` owns a run: the clock, the event queue, per-channel
//! transmit queues, per-router state, and the metrics ledger. Whole runs are
//! independent and safe to execute in parallel; nothing here is shared.
//!
//! Interval boundaries are events like any other, but dispatching one hands
//! control back to the caller (see [`Simulation::advance`]) so the learning
//! layer can close out the interval and install new proportion vectors
//! before time moves on.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::distr::{Distribution, Uniform};
use rand_chacha::ChaCha8Rng;

use crate::protocols::{
    DistanceVectorState, LinkCostEstimator, DEFAULT_BITS_PER_ENTRY, DEFAULT_COST_ALPHA,
    DEFAULT_UPDATE_PERIOD,
};
use crate::sim::event::{EventKind, EventQueue, SimError, SimEvent};
use crate::sim::metrics::MetricsLedger;
use crate::sim::packet::{Packet, PacketId, Payload};
use crate::sim::router::{RouteDecision, Router, RoutingPolicy};
use crate::sim::topology::{ChannelId, NodeId, Topology};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub enabled: bool,
    /// Seconds between vector broadcasts.
    pub period: f64,
    /// Wire size per table entry; a message costs `entries * bits_per_entry`.
    pub bits_per_entry: f64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            period: DEFAULT_UPDATE_PERIOD,
            bits_per_entry: DEFAULT_BITS_PER_ENTRY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Packets generated inside `[start, end)` count toward total delay.
    pub measure_window: (f64, f64),
    /// Bucket width for the ledger's per-interval series.
    pub interval_len: f64,
    /// Number of agent groups whose reward accumulators the ledger tracks.
    pub num_groups: usize,
    /// Record per-packet hop traces (test instrumentation).
    pub trace_hops: bool,
    /// Record a line-delimited event trace.
    pub trace_events: bool,
    pub protocol: ProtocolConfig,
    /// Reference packet size for idle-channel cost floors, bits.
    pub reference_packet_bits: f64,
    /// Smoothing factor of the per-channel cost estimators.
    pub cost_alpha: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            measure_window: (0.0, f64::MAX / 4.0),
            interval_len: 1.0,
            num_groups: 1,
            trace_hops: false,
            trace_events: false,
            protocol: ProtocolConfig::default(),
            reference_packet_bits: 1000.0,
            cost_alpha: DEFAULT_COST_ALPHA,
        }
    }
}

/// Why [`Simulation::advance`] returned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunOutcome {
    /// An interval boundary fired; the clock sits exactly on it.
    Boundary { time: f64, group: u8 },
    /// All events up to the horizon were dispatched.
    Completed,
}

#[derive(Debug)]
struct ChannelState {
    bandwidth: f64,
    in_service: Option<Packet>,
    fifo: VecDeque<Packet>,
    bits_total: f64,
    bits_protocol: f64,
}

#[derive(Debug)]
struct TrafficSource {
    node: NodeId,
    dest: NodeId,
    sampler: Uniform<f64>,
    rng: ChaCha8Rng,
    stop_at: f64,
    packet_bits: f64,
}

#[derive(Debug)]
pub struct Simulation {
    clock: f64,
    queue: EventQueue,
    topo: Topology,
    channels: Vec<ChannelState>,
    routers: Vec<Router>,
    pub ledger: MetricsLedger,
    traffic: Vec<TrafficSource>,
    cfg: SimConfig,
    next_packet_id: u64,
    trace: String,
    /// Delivered data packets, kept only when hop tracing is on.
    pub delivered: Vec<Packet>,
}

impl Simulation {
    pub fn new(topo: Topology, cfg: SimConfig) -> Self {
        let channels = (0..topo.num_channels())
            .map(|c| ChannelState {
                bandwidth: topo.channel(ChannelId(c)).bandwidth,
                in_service: None,
                fifo: VecDeque::new(),
                bits_total: 0.0,
                bits_protocol: 0.0,
            })
            .collect();
        let routers = (0..topo.num_nodes())
            .map(|n| {
                let node = NodeId(n);
                let dv = DistanceVectorState::new(node, topo.num_nodes(), topo.neighbors(node));
                let estimators = topo
                    .outbound(node)
                    .iter()
                    .map(|&ch| {
                        let floor = cfg.reference_packet_bits / topo.channel(ch).bandwidth;
                        LinkCostEstimator::new(floor, cfg.cost_alpha)
                    })
                    .collect();
                Router::new(node, dv, estimators, RoutingPolicy::ShortestPath)
            })
            .collect();
        let ledger = MetricsLedger::new(cfg.measure_window, cfg.interval_len, cfg.num_groups);
        Self {
            clock: 0.0,
            queue: EventQueue::default(),
            topo,
            channels,
            routers,
            ledger,
            traffic: Vec::new(),
            cfg,
            next_packet_id: 0,
            trace: String::new(),
            delivered: Vec::new(),
        }
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn topology(&self) -> &Topology {
        &self.topo
    }

    pub fn router(&self, node: NodeId) -> &Router {
        &self.routers[node.0]
    }

    pub fn router_mut(&mut self, node: NodeId) -> &mut Router {
        &mut self.routers[node.0]
    }

    pub fn set_policy(&mut self, node: NodeId, policy: RoutingPolicy) {
        self.routers[node.0].policy = policy;
    }

    /// Enqueues an event; events must not predate the clock.
    pub fn schedule(&mut self, event: SimEvent) -> Result<(), SimError> {
        self.queue.schedule(self.clock, event)
    }

    /// Registers a traffic source emitting fixed-size packets with i.i.d.
    /// uniform interarrival in `[low, high]`, starting after `start` and
    /// stopping at `stop_at`. Each source draws from its own stream.
    pub fn add_traffic(
        &mut self,
        node: NodeId,
        dest: NodeId,
        low: f64,
        high: f64,
        rng: ChaCha8Rng,
        start: f64,
        stop_at: f64,
        packet_bits: f64,
    ) -> Result<usize, SimError> {
        if !(low > 0.0) || !(high >= low) {
            return Err(SimError::InvalidInterarrival { low, high });
        }
        let sampler =
            Uniform::new_inclusive(low, high).map_err(|_| SimError::InvalidInterarrival {
                low,
                high,
            })?;
        let slot = self.traffic.len();
        let mut source = TrafficSource {
            node,
            dest,
            sampler,
            rng,
            stop_at,
            packet_bits,
        };
        let first = start + source.sampler.sample(&mut source.rng);
        self.traffic.push(source);
        if first <= stop_at {
            self.schedule(SimEvent {
                time: first,
                kind: EventKind::PacketGenerated { source_slot: slot },
            })?;
        }
        Ok(slot)
    }

    /// Schedules the first protocol broadcast for every router at t = 0.
    pub fn start_protocol(&mut self) {
        if !self.cfg.protocol.enabled {
            return;
        }
        for r in 0..self.routers.len() {
            self.queue
                .schedule(
                    self.clock,
                    SimEvent {
                        time: self.clock,
                        kind: EventKind::ProtocolUpdate { router: r },
                    },
                )
                .expect("protocol start is never in the past");
        }
    }

    /// Dispatches events until `until` or the next interval boundary,
    /// whichever comes first.
    pub fn advance(&mut self, until: f64) -> RunOutcome {
        while let Some(ev) = self.queue.pop_through(until) {
            debug_assert!(ev.time >= self.clock);
            self.clock = ev.time;
            match ev.kind {
                EventKind::IntervalBoundary { group } => {
                    self.trace_line("boundary", None, Some(group as u64));
                    return RunOutcome::Boundary {
                        time: ev.time,
                        group,
                    };
                }
                kind => self.dispatch(kind),
            }
        }
        if until > self.clock {
            self.clock = until;
        }
        RunOutcome::Completed
    }

    /// Runs through `until`, dispatching interval boundaries as no-ops, and
    /// returns the ledger.
    pub fn run(&mut self, until: f64) -> &MetricsLedger {
        while let RunOutcome::Boundary { .. } = self.advance(until) {}
        &self.ledger
    }

    fn dispatch(&mut self, kind: EventKind) {
        match kind {
            EventKind::PacketGenerated { source_slot } => self.handle_generation(source_slot),
            EventKind::TransmissionComplete { channel } => self.handle_completion(channel),
            EventKind::ProtocolUpdate { router } => self.handle_protocol_update(router),
            EventKind::SimulationEnd => self.trace_line("end", None, None),
            EventKind::IntervalBoundary { .. } => unreachable!("handled by advance"),
        }
    }

    fn handle_generation(&mut self, slot: usize) {
        let (node, dest, bits, next_time, stop_at) = {
            let src = &mut self.traffic[slot];
            let gap = src.sampler.sample(&mut src.rng);
            (
                src.node,
                src.dest,
                src.packet_bits,
                self.clock + gap,
                src.stop_at,
            )
        };
        if next_time <= stop_at {
            self.schedule(SimEvent {
                time: next_time,
                kind: EventKind::PacketGenerated { source_slot: slot },
            })
            .expect("next generation is in the future");
        }
        let id = PacketId(self.next_packet_id);
        self.next_packet_id += 1;
        let packet = Packet::new_data(id, node, dest, bits, self.clock, self.cfg.trace_hops);
        self.ledger.on_generated(self.clock);
        self.trace_line("gen", Some(node), Some(id.0));
        self.route_at(node, packet);
    }

    fn handle_completion(&mut self, ch: usize) {
        let (packet, follow_up) = {
            let cs = &mut self.channels[ch];
            let packet = cs
                .in_service
                .take()
                .expect("completion for an idle channel");
            let follow_up = cs.fifo.pop_front().map(|next| {
                let done = self.clock + next.size / cs.bandwidth;
                cs.in_service = Some(next);
                done
            });
            (packet, follow_up)
        };
        if let Some(done) = follow_up {
            self.schedule(SimEvent {
                time: done,
                kind: EventKind::TransmissionComplete { channel: ch },
            })
            .expect("follow-up completion is in the future");
        }
        // The sender observes the full queueing + transmission delay of the
        // data packets it pushed through this channel.
        if packet.is_data() {
            let (sender, pos) = self.topo.sender_of(ChannelId(ch));
            let delay = self.clock - packet.entered_channel_at;
            self.routers[sender.0].estimators[pos].observe(delay);
        }
        let to = self.topo.channel(ChannelId(ch)).to;
        self.arrival(to, packet);
    }

    fn arrival(&mut self, node: NodeId, mut packet: Packet) {
        packet.record_hop(node, self.clock);
        match &packet.payload {
            Payload::Protocol(_) => {
                self.trace_line("proto", Some(node), Some(packet.id.0));
                self.handle_protocol_arrival(node, packet);
            }
            Payload::Data => {
                self.trace_line("arrive", Some(node), Some(packet.id.0));
                if packet.destination == node {
                    self.deliver(packet);
                } else {
                    self.route_at(node, packet);
                }
            }
        }
    }

    fn handle_protocol_arrival(&mut self, node: NodeId, packet: Packet) {
        let Payload::Protocol(msg) = packet.payload else {
            unreachable!()
        };
        let costs = self.routers[node.0].link_costs();
        self.routers[node.0].dv.bf_update(&msg, &costs, self.clock);
        // New table entries may unblock packets waiting for a route.
        let parked = std::mem::take(&mut self.routers[node.0].parked);
        for p in parked {
            self.trace_line("release", Some(node), Some(p.id.0));
            self.route_at(node, p);
        }
    }

    fn handle_protocol_update(&mut self, router: usize) {
        let node = NodeId(router);
        let (msg, size) = {
            let r = &mut self.routers[router];
            let costs = r.link_costs();
            r.dv.recompute(&costs, self.clock);
            let msg = r.dv.message();
            let size = msg.size_bits(self.cfg.protocol.bits_per_entry);
            (msg, size)
        };
        let targets: Vec<(ChannelId, NodeId)> = self
            .topo
            .outbound(node)
            .iter()
            .map(|&ch| (ch, self.topo.channel(ch).to))
            .collect();
        for (ch, neighbor) in targets {
            let id = PacketId(self.next_packet_id);
            self.next_packet_id += 1;
            let packet =
                Packet::new_protocol(id, node, neighbor, size, self.clock, msg.clone());
            self.enqueue(ch, packet);
        }
        self.schedule(SimEvent {
            time: self.clock + self.cfg.protocol.period,
            kind: EventKind::ProtocolUpdate { router },
        })
        .expect("next broadcast is in the future");
    }

    fn route_at(&mut self, node: NodeId, packet: Packet) {
        match self.routers[node.0].decide(packet.destination) {
            RouteDecision::Deliver => self.deliver(packet),
            RouteDecision::Forward(pos) => {
                let ch = self.topo.outbound(node)[pos];
                self.enqueue(ch, packet);
            }
            RouteDecision::Park => {
                self.trace_line("park", Some(node), Some(packet.id.0));
                self.routers[node.0].parked.push(packet);
            }
        }
    }

    fn enqueue(&mut self, ch: ChannelId, mut packet: Packet) {
        packet.entered_channel_at = self.clock;
        let cs = &mut self.channels[ch.0];
        cs.bits_total += packet.size;
        if !packet.is_data() {
            cs.bits_protocol += packet.size;
        }
        if cs.in_service.is_none() {
            let done = self.clock + packet.size / cs.bandwidth;
            cs.in_service = Some(packet);
            self.schedule(SimEvent {
                time: done,
                kind: EventKind::TransmissionComplete { channel: ch.0 },
            })
            .expect("completion is in the future");
        } else {
            cs.fifo.push_back(packet);
        }
    }

    fn deliver(&mut self, mut packet: Packet) {
        debug_assert!(packet.is_data());
        packet.delivered_at = Some(self.clock);
        self.ledger.on_delivered(packet.created_at, self.clock);
        self.trace_line("deliver", Some(packet.destination), Some(packet.id.0));
        if self.cfg.trace_hops {
            self.delivered.push(packet);
        }
    }

    fn trace_line(&mut self, kind: &str, node: Option<NodeId>, id: Option<u64>) {
        if !self.cfg.trace_events {
            return;
        }
        let node = node.map(|n| n.0 as i64).unwrap_or(-1);
        match id {
            Some(id) => writeln!(self.trace, "{:.6} {kind} {node} {id}", self.clock).unwrap(),
            None => writeln!(self.trace, "{:.6} {kind} {node} -", self.clock).unwrap(),
        }
    }

    /// The line-delimited event trace (empty unless `trace_events`).
    pub fn event_trace(&self) -> &str {
        &self.trace
    }

    /// Data packets currently queued or in transmission on any channel.
    pub fn data_packets_in_channels(&self) -> u64 {
        self.channels
            .iter()
            .map(|cs| {
                let in_service = cs.in_service.as_ref().map(|p| p.is_data() as u64);
                in_service.unwrap_or(0) + cs.fifo.iter().filter(|p| p.is_data()).count() as u64
            })
            .sum()
    }

    /// Data packets parked in pre-routing buffers.
    pub fn data_packets_parked(&self) -> u64 {
        self.routers
            .iter()
            .map(|r| r.parked.iter().filter(|p| p.is_data()).count() as u64)
            .sum()
    }

    /// Total and protocol-only bits that entered a channel.
    pub fn channel_bits(&self, ch: ChannelId) -> (f64, f64) {
        let cs = &self.channels[ch.0];
        (cs.bits_total, cs.bits_protocol)
    }

    pub fn pending_events(&self) -> usize {
        self.queue.len()
    }
}
