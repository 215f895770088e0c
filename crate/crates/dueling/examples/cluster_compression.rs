// The contracted representation: elements that the comparison oracle cannot
// distinguish share amplitudes forever, so the N x N grid compresses to
// q x q exactly. For near-uniform layouts q ~ 2M, which turns million-element
// search spaces into trivial simulations.
//
//     cargo run --release --example cluster_compression

use dueling::cluster::{ClusterIndex, ClusterState};
use dueling::dense::DenseState;
use dueling::problem::{uniform_solution_count, DistributionSpec, MeasureSpec, ProblemInstance};

fn main() {
    // Compression ratio across sizes with M = ceil(sqrt(N)).
    println!("{:>3} {:>9} {:>5} {:>6}  grid shrink", "n", "N", "M", "q");
    for n in [8u32, 12, 16, 20] {
        let size = 1usize << n;
        let m = uniform_solution_count(size);
        let inst = ProblemInstance::build(
            n,
            MeasureSpec::identity(),
            &DistributionSpec::modular_uniform(size, m, 1).expect("valid count"),
        )
        .expect("valid instance");
        let index = ClusterIndex::build(&inst);
        let q = index.q();
        let shrink = (size * size) as f64 / (q * q) as f64;
        println!("{n:>3} {size:>9} {m:>5} {q:>6}  {shrink:>10.0}x");
    }

    // Exactness: evolve both representations and compare after expansion.
    let inst = ProblemInstance::build(
        6,
        MeasureSpec::identity(),
        &DistributionSpec::modular_uniform(64, 8, 1).expect("valid count"),
    )
    .expect("valid instance");
    let index = ClusterIndex::build(&inst);
    let mut contracted = ClusterState::init(&index);
    let mut dense = DenseState::init(&inst).expect("small enough");
    let mut worst: f64 = 0.0;
    for gate in 0..40 {
        if gate % 2 == 0 {
            contracted.apply_g1(&index);
            dense.apply_g1(&inst);
        } else {
            contracted.apply_g2(&index);
            dense.apply_g2(&inst);
        }
        let expanded = contracted.expand_to_dense(&index).expect("small enough");
        for (a, b) in expanded.amplitudes().iter().zip(dense.amplitudes()) {
            worst = worst.max((a - b).abs());
        }
    }
    println!("\nmax |dense - expanded(contracted)| over 40 gates at N = 64: {worst:.2e}");

    // A 2^20-element space evolved through its 2048-cluster contraction.
    let n = 20u32;
    let size = 1usize << n;
    let m = uniform_solution_count(size);
    let inst = ProblemInstance::build(
        n,
        MeasureSpec::identity(),
        &DistributionSpec::modular_uniform(size, m, 1).expect("valid count"),
    )
    .expect("valid instance");
    let index = ClusterIndex::build(&inst);
    let mut state = ClusterState::init(&index);
    for _ in 0..200 {
        state.apply_g1(&index);
        state.apply_g2(&index);
    }
    println!(
        "N = 2^20 after 400 gates: q = {}, norm drift {:.2e}, P(optimum) = {:.4}",
        index.q(),
        (state.norm_sq() - 1.0).abs(),
        state.p_combined_optimum(&index)
    );
}
