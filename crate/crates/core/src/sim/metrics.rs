//! Delay and delivery accounting.
//!
//! Two views coexist. The measurement window view sums the delays of data
//! packets *generated* inside the configured window, credited when they are
//! delivered (possibly during the drain phase); this is the trial's total
//! cost. The group view accumulates the delays of *all* data deliveries
//! since each agent group's last interval boundary; that running sum, taken
//! and negated at the boundary, is the system-wide reward signal.

/// Aggregate for one measurement-window interval, bucketed by the packet's
/// generation time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalAggregate {
    pub delivered: u64,
    pub delay_sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsLedger {
    /// Delays of window-generated packets, summed at delivery.
    pub total_delay: f64,
    /// Data packets generated inside the measurement window.
    pub packets_counted: u64,
    /// Window-generated packets delivered so far.
    pub packets_delivered: u64,
    /// All data packets generated.
    pub packets_generated: u64,
    /// All data packets delivered.
    pub packets_delivered_all: u64,
    /// Window aggregates bucketed by generation interval.
    pub per_interval: Vec<IntervalAggregate>,
    window: (f64, f64),
    interval_len: f64,
    group_delay: Vec<f64>,
    group_delivered: Vec<u64>,
}

impl MetricsLedger {
    pub fn new(window: (f64, f64), interval_len: f64, num_groups: usize) -> Self {
        assert!(window.1 >= window.0);
        assert!(interval_len > 0.0);
        // Preallocate buckets for bounded windows; open-ended windows grow
        // on demand at delivery time.
        let buckets = (window.1 - window.0) / interval_len;
        let prealloc = if buckets.is_finite() && buckets <= 1_000_000.0 {
            buckets.ceil() as usize
        } else {
            0
        };
        Self {
            total_delay: 0.0,
            packets_counted: 0,
            packets_delivered: 0,
            packets_generated: 0,
            packets_delivered_all: 0,
            per_interval: vec![IntervalAggregate::default(); prealloc],
            window,
            interval_len,
            group_delay: vec![0.0; num_groups],
            group_delivered: vec![0; num_groups],
        }
    }

    pub fn measurement_window(&self) -> (f64, f64) {
        self.window
    }

    fn in_window(&self, created_at: f64) -> bool {
        created_at >= self.window.0 && created_at < self.window.1
    }

    pub(crate) fn on_generated(&mut self, created_at: f64) {
        self.packets_generated += 1;
        if self.in_window(created_at) {
            self.packets_counted += 1;
        }
    }

    pub(crate) fn on_delivered(&mut self, created_at: f64, delivered_at: f64) {
        let delay = delivered_at - created_at;
        debug_assert!(delay >= 0.0);
        self.packets_delivered_all += 1;
        for g in &mut self.group_delay {
            *g += delay;
        }
        for g in &mut self.group_delivered {
            *g += 1;
        }
        if self.in_window(created_at) {
            self.packets_delivered += 1;
            self.total_delay += delay;
            let idx = ((created_at - self.window.0) / self.interval_len) as usize;
            if idx >= self.per_interval.len() {
                self.per_interval
                    .resize(idx + 1, IntervalAggregate::default());
            }
            let agg = &mut self.per_interval[idx];
            agg.delivered += 1;
            agg.delay_sum += delay;
        }
    }

    /// Takes and resets group `g`'s accumulated (delay sum, delivery count)
    /// since its last boundary.
    pub fn take_group(&mut self, g: usize) -> (f64, u64) {
        let out = (self.group_delay[g], self.group_delivered[g]);
        self.group_delay[g] = 0.0;
        self.group_delivered[g] = 0;
        out
    }
}
