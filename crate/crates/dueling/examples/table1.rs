// Reproduces the six-distribution benchmark at N = 256 with unit parameter
// sequences: for each solution layout, the first local maximum of the
// combined and first-register success probabilities and the iteration
// counts reaching them.
//
//     cargo run --release --example table1

fn main() {
    let rows = dueling::experiments::run_table1().expect("benchmark runs");
    println!("{:<22} {:>8} {:>6} {:>8} {:>7}", "f(x)", "P_max", "p_max", "P'_max", "p'_max");
    for row in rows {
        println!(
            "{:<22} {:>8.4} {:>6} {:>8.4} {:>7}",
            row.distribution,
            row.p_max,
            row.p_max_iteration,
            row.p_first_max,
            row.p_first_max_iteration
        );
    }
}
