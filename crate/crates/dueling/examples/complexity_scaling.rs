// Oracle-complexity scaling: tuned window searches across search-space sizes
// record the oracle count T reaching 40% success probability; the log-log
// fit lands near the square-root scaling of amplitude amplification.
//
//     cargo run --release --example complexity_scaling

use dueling::experiments::{run_complexity, COMPLEXITY_PARAMS};

fn main() {
    let outcome = run_complexity(5..=12, &COMPLEXITY_PARAMS, 0.4, 1000).expect("runs");
    println!("{:>3} {:>6} {:>4} {:>6} {:>13} {:>5}", "n", "N", "M", "depth", "change_limit", "T");
    for p in &outcome.points {
        println!(
            "{:>3} {:>6} {:>4} {:>6} {:>13} {:>5}",
            p.n,
            p.size,
            p.solutions,
            p.depth,
            p.change_limit,
            p.oracles.map(|t| t.to_string()).unwrap_or_else(|| "-".into())
        );
    }
    if let Some(fit) = outcome.fit {
        println!(
            "\nlog2 T = {:.3}(±{:.3}) log2 N {:+.2}(±{:.2}),  R^2 = {:.4}",
            fit.slope, fit.slope_stderr, fit.intercept, fit.intercept_stderr, fit.r_squared
        );
    }
}
