//! Run stages and interval-boundary schedules for the interaction
//! structures.
//!
//! A run passes through four stages: initialization (routing tables
//! converge, no application traffic), training (agents walk a fixed action
//! grid and record rewards), learning (agents pick actions from their
//! datasets), and drain (actions freeze, traffic continues so in-flight
//! packets finish under stationary conditions).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("stage boundaries must be strictly increasing: {0:?}")]
    NotIncreasing(StageSchedule),
    #[error("{stage} stage spans {span}s, not a multiple of the {interval}s interval")]
    NotIntervalMultiple {
        stage: &'static str,
        span: f64,
        interval: f64,
    },
    #[error("interval length must be positive, got {0}")]
    BadInterval(f64),
    #[error("leader/follower structure needs at least one leader and one follower")]
    MissingRole,
    #[error("interleaved structure needs both groups nonempty")]
    EmptyGroup,
    #[error("structure assigns {assigned} agents but {expected} exist")]
    WrongAgentCount { assigned: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageSchedule {
    pub init_end: f64,
    pub training_end: f64,
    pub learning_end: f64,
    pub drain_end: f64,
}

impl StageSchedule {
    /// Full-length reproduction schedule: 20 s initialization, training to
    /// 15,020 s, learning to 40,020 s, then a 5,000 s drain. Both learning
    /// stages are whole multiples of the 500 s default interval.
    pub fn paper() -> Self {
        Self {
            init_end: 20.0,
            training_end: 15_020.0,
            learning_end: 40_020.0,
            drain_end: 45_020.0,
        }
    }

    /// Short schedule for fast iteration and CI.
    pub fn desk() -> Self {
        Self {
            init_end: 20.0,
            training_end: 1_520.0,
            learning_end: 4_020.0,
            drain_end: 4_520.0,
        }
    }

    /// The measurement window: packets generated during the learning stage.
    pub fn measure_window(&self) -> (f64, f64) {
        (self.training_end, self.learning_end)
    }

    pub fn validate(&self, interval: f64) -> Result<(), ScheduleError> {
        if !(interval > 0.0) {
            return Err(ScheduleError::BadInterval(interval));
        }
        let increasing = self.init_end < self.training_end
            && self.training_end < self.learning_end
            && self.learning_end < self.drain_end;
        if !increasing {
            return Err(ScheduleError::NotIncreasing(*self));
        }
        for (stage, span) in [
            ("training", self.training_end - self.init_end),
            ("learning", self.learning_end - self.training_end),
        ] {
            let ratio = span / interval;
            if (ratio - ratio.round()).abs() > 1e-9 {
                return Err(ScheduleError::NotIntervalMultiple {
                    stage,
                    span,
                    interval,
                });
            }
        }
        Ok(())
    }
}

/// How learning agents observe each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteractionMode {
    /// Every agent sees only its own action.
    Standard,
    /// Followers see the actions the leaders picked at the same boundary.
    LeaderFollower,
    /// Two groups with boundaries offset by half an interval; each agent
    /// sees the other group's action currently in force.
    Interleaved,
}

/// Group tag carried by interval-boundary events.
///
/// `A` doubles as the leader set under leader/follower and as the aligned
/// group under interleaving; `B` is the follower/offset group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroupTag {
    A,
    B,
}

impl GroupTag {
    pub fn index(self) -> u8 {
        match self {
            GroupTag::A => 0,
            GroupTag::B => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionStructure {
    pub mode: InteractionMode,
    /// Per learning agent, in agent order.
    pub assignments: Vec<GroupTag>,
    /// Learning-interval length, seconds.
    pub interval_length: f64,
}

impl InteractionStructure {
    pub fn standard(num_agents: usize, interval_length: f64) -> Self {
        Self {
            mode: InteractionMode::Standard,
            assignments: vec![GroupTag::A; num_agents],
            interval_length,
        }
    }

    pub fn validate(&self, num_agents: usize) -> Result<(), ScheduleError> {
        if self.assignments.len() != num_agents {
            return Err(ScheduleError::WrongAgentCount {
                assigned: self.assignments.len(),
                expected: num_agents,
            });
        }
        let a = self.assignments.iter().filter(|&&g| g == GroupTag::A).count();
        let b = self.assignments.len() - a;
        match self.mode {
            InteractionMode::Standard => Ok(()),
            InteractionMode::LeaderFollower => {
                if a == 0 || b == 0 {
                    Err(ScheduleError::MissingRole)
                } else {
                    Ok(())
                }
            }
            InteractionMode::Interleaved => {
                if a == 0 || b == 0 {
                    Err(ScheduleError::EmptyGroup)
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Group B's boundary offset: half an interval under interleaving,
    /// aligned otherwise.
    pub fn group_offset(&self) -> f64 {
        match self.mode {
            InteractionMode::Interleaved => self.interval_length / 2.0,
            _ => 0.0,
        }
    }
}

/// One scheduled decision point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundary {
    pub time: f64,
    pub group: GroupTag,
}

/// All interval boundaries from the start of training through the end of
/// learning, in dispatch order.
///
/// Standard and leader/follower structures share one aligned boundary per
/// interval (leaders decide before followers within it). Interleaving gives
/// group A boundaries at `init_end + k·L` and group B boundaries offset by
/// `L/2`, plus a start-up decision at `init_end` so B has an action in
/// force during its first half interval.
pub fn interaction_schedule(
    structure: &InteractionStructure,
    schedule: &StageSchedule,
) -> Result<Vec<Boundary>, ScheduleError> {
    schedule.validate(structure.interval_length)?;
    structure.validate(structure.assignments.len())?;
    let interval = structure.interval_length;
    let mut boundaries = Vec::new();
    let mut t = schedule.init_end;
    while t <= schedule.learning_end + 1e-9 {
        boundaries.push(Boundary {
            time: t,
            group: GroupTag::A,
        });
        t += interval;
    }
    if structure.mode == InteractionMode::Interleaved {
        boundaries.push(Boundary {
            time: schedule.init_end,
            group: GroupTag::B,
        });
        let mut t = schedule.init_end + interval / 2.0;
        while t <= schedule.learning_end - interval / 2.0 + 1e-9 {
            boundaries.push(Boundary {
                time: t,
                group: GroupTag::B,
            });
            t += interval;
        }
    }
    boundaries.sort_by(|x, y| x.time.total_cmp(&y.time).then(x.group.cmp(&y.group)));
    Ok(boundaries)
}
