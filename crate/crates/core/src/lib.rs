//! Discrete-event network simulation with masked proportional routing.
//!
//! The crate is organized in layers:
//!
//! - [`sim`] — the deterministic event engine: topology, packets, channel
//!   queues, the global clock, and metric accounting.
//! - [`protocols`] — distance-vector routing: per-router tables kept current
//!   by periodic update messages that travel the network as real packets.
//! - [`proportional`] — proportion vectors, the hard/soft masking transforms
//!   that keep multi-path routing cycle-free, and the deterministic splitter
//!   that realizes a proportion vector packet by packet.
//! - [`learning`] — memory-based learners that pick proportion vectors from
//!   observed system-wide delay, plus the interaction structures (standard,
//!   leader/follower, interleaved) that schedule their decisions.
//! - [`experiments`] — scenario construction (the Gemini benchmark network),
//!   experiment arms, the exhaustive proportion sweep, multi-trial
//!   replication, and summary statistics.

pub mod experiments;
pub mod learning;
pub mod proportional;
pub mod protocols;
pub mod rng;
pub mod sim;
