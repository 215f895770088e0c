// Windowed exhaustive search for a near-optimal gate sequence on a shifted
// comb where unit parameters underperform. Prints the committed gate string,
// its run-length encoding, and the per-gate probability trace.
//
//     cargo run --release --example parameter_search

use dueling::engine::Op;
use dueling::problem::{DistributionSpec, MeasureSpec, ProblemInstance};
use dueling::search::{heuristic_search, oracles_to_threshold, run_length_encode, SearchConfig};
use dueling::EngineKind;

fn main() {
    // Comb anchored at t = 16: unit parameters peak at P = 0.27 only.
    let inst = ProblemInstance::build(
        8,
        MeasureSpec::identity(),
        &DistributionSpec::ModularUniform { t: 16, s: 16 },
    )
    .expect("valid instance");

    let cfg = SearchConfig::new(12, 6)
        .with_threshold(0.9)
        .with_max_gates(60);
    let trace = heuristic_search(&inst, &cfg, EngineKind::Cluster).expect("search runs");

    println!("committed sequence: {}", Op::string_of(&trace.ops));
    let (alpha, beta) = run_length_encode(&trace.ops);
    println!("alpha = {alpha:?}");
    println!("beta  = {beta:?}");
    println!();
    println!("gate  op  P_combined");
    for i in 0..trace.len() {
        println!(
            "{:>4}  {}  {:>9.4}",
            i + 1,
            trace.ops[i],
            trace.probs_combined[i]
        );
    }
    match oracles_to_threshold(&trace, 0.9) {
        Some(t) => println!("\nreached P >= 0.9 after {t} oracles"),
        None => println!("\nthreshold not reached within {} gates", cfg.max_gates),
    }
}
