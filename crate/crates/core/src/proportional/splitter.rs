//! Deterministic proportional routing.
//!
//! Rather than drawing a link at random with probabilities given by the
//! proportion vector, the splitter keeps per-link packet counts and sends
//! each packet down the link with the largest shortfall between the desired
//! count `(pkt_total + 1) · p_i` and the realized count `pkt_i`. The greedy
//! choice keeps the realized split as close as possible to the target after
//! every single packet, not just in the long run.

use super::vector::ProportionVector;

/// Hook for weighing recent routing decisions more heavily than old ones.
/// Only the identity policy is implemented; the variants that age counts or
/// suppress round-robin orderings plug in here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AgingPolicy {
    #[default]
    None,
}

/// Per-(router, destination) packet counters realizing a proportion vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitterState {
    counts: Vec<u64>,
    total: u64,
    aging: AgingPolicy,
}

impl SplitterState {
    pub fn new(links: usize) -> Self {
        assert!(links > 0, "splitter needs at least one link");
        Self {
            counts: vec![0; links],
            total: 0,
            aging: AgingPolicy::None,
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Picks the next link for `p` and updates the counters.
///
/// Returns the index maximizing `(pkt_total + 1) · p_i − pkt_i`; ties go to
/// the lowest index.
pub fn split_choose(state: &mut SplitterState, p: &ProportionVector) -> usize {
    assert_eq!(
        state.counts.len(),
        p.len(),
        "splitter tracks {} links but vector has {}",
        state.counts.len(),
        p.len()
    );
    match state.aging {
        AgingPolicy::None => {}
    }
    let desired_total = (state.total + 1) as f64;
    let mut best = 0;
    let mut best_gap = f64::NEG_INFINITY;
    for (i, &count) in state.counts.iter().enumerate() {
        let gap = desired_total * p.get(i) - count as f64;
        if gap > best_gap {
            best_gap = gap;
            best = i;
        }
    }
    state.counts[best] += 1;
    state.total += 1;
    best
}

/// Zeroes all counters, e.g. when the applied vector changes and stale
/// counts would chase an obsolete target.
pub fn reset_splitter(state: &mut SplitterState) {
    state.counts.iter_mut().for_each(|c| *c = 0);
    state.total = 0;
}
