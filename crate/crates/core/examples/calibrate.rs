//! Quick arm comparison on the desk schedule, for calibrating scenario
//! constants. Usage: `cargo run --release --example calibrate [trials]`.

use std::time::Instant;

use maskroute_core::experiments::{
    gemini_preset, ideal_sweep, run_arm, Arm, SchedulePreset, TrialOptions,
};

fn main() {
    let trials: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let scenario = gemini_preset(SchedulePreset::Desk);
    let opts = TrialOptions::default();

    let t0 = Instant::now();
    let sweep = ideal_sweep(&scenario, 0.05).unwrap();
    println!(
        "sweep: best actions {:?} cost {:.0}  ({} cells, {:.1}s)",
        sweep.best.actions,
        sweep.best.total_cost,
        sweep.surface.len(),
        t0.elapsed().as_secs_f64()
    );
    // A slice of the surface along a2 = best a2.
    let a2 = sweep.best.actions[1];
    for p in &sweep.surface {
        if (p.actions[1] - a2).abs() < 1e-9 {
            println!("  a1={:.2} cost {:.0}", p.actions[0], p.total_cost);
        }
    }

    for arm in Arm::ALL {
        let t = Instant::now();
        let summary = run_arm(arm, &scenario, trials, &opts).unwrap();
        println!(
            "{:<18} mean {:>12.0}  +/- {:>8.0}   ({} trials, {:.1}s)",
            arm.name(),
            summary.mean_total_cost,
            summary.std_error,
            summary.trial_count,
            t.elapsed().as_secs_f64()
        );
    }

    // Action trajectories of single trials, per structure.
    let log_opts = TrialOptions {
        learning_log: true,
        ..TrialOptions::default()
    };
    let mode = std::env::args().nth(2).unwrap_or_else(|| "std".to_string());
    let mode = match mode.as_str() {
        "lf" => maskroute_core::learning::InteractionMode::LeaderFollower,
        "int" => maskroute_core::learning::InteractionMode::Interleaved,
        _ => maskroute_core::learning::InteractionMode::Standard,
    };
    let trial: u32 = std::env::args()
        .nth(3)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let out = maskroute_core::experiments::run_trial(
        &scenario,
        &maskroute_core::experiments::ArmSetup {
            sources: maskroute_core::experiments::SourceSetup::Learning(mode),
            masked_intermediates: true,
        },
        trial,
        &log_opts,
    )
    .unwrap();
    println!(
        "{mode:?} trial {trial} cost {:.0} log (agent interval action reward estimate):",
        out.result.total_cost
    );
    for line in out.learning_log.unwrap().lines() {
        println!("  {line}");
    }
}
