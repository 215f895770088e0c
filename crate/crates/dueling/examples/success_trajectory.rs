// Evolution of the success probability under unit parameter sequences on the
// near-uniform comb at N = 256, M = 16: the probability of measuring the
// best, second, and third solutions after the better of both registers is
// kept, iteration by iteration.
//
//     cargo run --release --example success_trajectory

use dueling::baselines::ParamSeq;
use dueling::dense::first_local_max;
use dueling::experiments::run_fixed_parameters;
use dueling::problem::{DistributionSpec, MeasureSpec, ProblemInstance};
use dueling::EngineKind;

fn main() {
    let inst = ProblemInstance::build(
        8,
        MeasureSpec::identity(),
        &DistributionSpec::ModularUniform { t: 1, s: 16 },
    )
    .expect("valid instance");

    let run = run_fixed_parameters(
        &inst,
        &ParamSeq::ones(),
        &ParamSeq::ones(),
        20,
        EngineKind::Dense,
        true,
    )
    .expect("simulation runs");

    let dists = run.distributions.as_ref().expect("distributions kept");
    println!("iter  oracles      P_1     P_17     P_33");
    for (i, (oracles, dist)) in run.oracle_counts.iter().zip(dists).enumerate() {
        println!(
            "{:>4} {:>8} {:>8.4} {:>8.4} {:>8.4}",
            i + 1,
            oracles,
            dist[0],
            dist[16],
            dist[32]
        );
    }
    let (at, peak) = first_local_max(&run.combined).expect("nonempty");
    println!("\nfirst local maximum: P = {peak:.4} after {at} iterations");
}
