// Sweeps the solution count M at N = 256 under unit parameter sequences.
// Performance degrades gracefully with growing M until M crosses N/4, where
// single rotations overshoot and both the peak probability and the iteration
// count collapse.
//
//     cargo run --release --example solution_count_sweep

use dueling::experiments::run_m_sweep;

fn main() {
    let counts = [1, 2, 4, 8, 16, 32, 64, 86, 128, 256];
    let rows = run_m_sweep(8, &counts, 60).expect("sweep runs");
    println!("{:>4} {:>9} {:>6} {:>9} {:>7}", "M", "P_max", "p_max", "P'_max", "p'_max");
    for row in rows {
        match row.peaks {
            Some(p) => println!(
                "{:>4} {:>9.4} {:>6} {:>9.4} {:>7}",
                row.m, p.p_max, p.p_max_iteration, p.p_first_max, p.p_first_max_iteration
            ),
            None => println!("{:>4}  (no near-uniform distribution)", row.m),
        }
    }
    println!("\nnote the collapse past M = N/4 = 64");
}
