// The hybrid wrapper around the dueling loop when the right iteration count
// is unknown: each outer round draws a rotation budget from a geometrically
// growing range, runs the loop truncated to fit, measures once, and keeps
// the best verified solution.
//
//     cargo run --release --example hybrid_loop

use dueling::baselines::{run_dueling_hybrid, HybridTermination, ParamSeq, RotationSchedule};
use dueling::problem::{DistributionSpec, MeasureSpec, ProblemInstance};
use dueling::EngineKind;

fn main() {
    let inst = ProblemInstance::build(
        8,
        MeasureSpec::identity(),
        &DistributionSpec::ModularUniform { t: 1, s: 16 },
    )
    .expect("valid instance");
    let optimum = inst.optimum();

    println!("outer budget   found  oracles  success rate over 200 seeds");
    for max_outer in [1u64, 2, 4, 8] {
        let mut hits = 0u32;
        let mut oracles = 0u64;
        for seed in 0..200u64 {
            let run = run_dueling_hybrid(
                &inst,
                &ParamSeq::ones(),
                &ParamSeq::ones(),
                RotationSchedule::Geometric { lambda: 1.5 },
                EngineKind::Cluster,
                seed,
                HybridTermination {
                    max_outer: Some(max_outer),
                    max_oracles: None,
                },
            )
            .expect("bounded run");
            hits += (run.best == Some(optimum)) as u32;
            oracles += run.oracle_count;
        }
        println!(
            "{:>12} {:>7} {:>8.1} {:>13.2}",
            max_outer,
            hits,
            oracles as f64 / 200.0,
            hits as f64 / 200.0
        );
    }
}
