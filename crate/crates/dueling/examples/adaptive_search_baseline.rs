// Grover adaptive search baseline: oracle counts to reach the optimum across
// search-space sizes, emitted in the comparison CSV format
// `algorithm,N,M,seed,oracles,found_optimum` and summarized by a log-log
// regression of the per-size mean.
//
//     cargo run --release --example adaptive_search_baseline [out.csv]

use dueling::baselines::{run_gas, GasTermination};
use dueling::experiments::io;
use dueling::experiments::linear_fit;
use dueling::problem::{uniform_solution_count, DistributionSpec, MeasureSpec, ProblemInstance};

fn main() {
    let seeds = 100u64;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    println!("{:>3} {:>6} {:>4} {:>12}", "n", "N", "M", "mean oracles");
    for n in 6..=12u32 {
        let size = 1usize << n;
        let m = uniform_solution_count(size);
        let inst = ProblemInstance::build(
            n,
            MeasureSpec::identity(),
            &DistributionSpec::modular_uniform(size, m, 1).expect("valid count"),
        )
        .expect("valid instance");
        let termination = GasTermination::until_optimum(&inst);
        let mut mean_log = 0.0;
        let mut mean = 0.0;
        for seed in 0..seeds {
            let trace = run_gas(&inst, 1.34, seed, termination).expect("bounded run");
            rows.push(vec![
                "gas".into(),
                size.to_string(),
                m.to_string(),
                seed.to_string(),
                trace.total_oracles.to_string(),
                (trace.found_optimum as u8).to_string(),
            ]);
            mean_log += (trace.total_oracles.max(1) as f64).log2();
            mean += trace.total_oracles as f64;
        }
        xs.push(n as f64);
        ys.push(mean_log / seeds as f64);
        println!("{:>3} {:>6} {:>4} {:>12.1}", n, size, m, mean / seeds as f64);
    }

    let fit = linear_fit(&xs, &ys).expect("fit");
    println!("\nmean log2(oracles) slope vs log2 N: {:.3}", fit.slope);

    if let Some(path) = std::env::args().nth(1) {
        io::write_csv(&path, "algorithm,N,M,seed,oracles,found_optimum", rows)
            .expect("csv written");
        println!("wrote {path}");
    }
}
