//! Command-line experiment harness. Every subcommand writes CSV results plus
//! a `*.meta.json` sidecar with the command, config hash, version, and wall
//! time.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use dueling::baselines::ParamSeq;
use dueling::experiments::{
    self,
    io::{self, IterationRow, IterationTrace, RunClock},
    COMPLEXITY_PARAMS,
};
use dueling::problem::ProblemConfig;
use dueling::search::SearchConfig;
use dueling::EngineKind;

#[derive(Parser)]
#[command(name = "duel", version, about = "Two-register amplitude-amplification experiment harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory for CSV and JSON files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Simulation engine.
    #[arg(long, default_value = "auto")]
    engine: EngineKind,
    /// Seed for stochastic runs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one instance under fixed parameter sequences and emit a
    /// per-iteration trace.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Problem definition file (TOML: n, v, distribution).
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated alpha sequence, or a single constant.
        #[arg(long, default_value = "1")]
        alpha: String,
        /// Comma-separated beta sequence, or a single constant.
        #[arg(long, default_value = "1")]
        beta: String,
        /// Dueling iterations to run.
        #[arg(long, default_value_t = 40)]
        rounds: usize,
        /// Also dump the per-element combined distribution each iteration.
        #[arg(long)]
        dump_elements: bool,
        /// Also dump the cluster partition of the instance.
        #[arg(long)]
        dump_clusters: bool,
    },
    /// Reproduce the six-distribution benchmark table at N = 256.
    Table1 {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep the solution count at fixed N with unit parameters.
    Msweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Qubit count n (N = 2^n).
        #[arg(long, default_value_t = 8)]
        n_qubits: u32,
        /// Comma-separated solution counts; defaults to every valid count.
        #[arg(long)]
        m_list: Option<String>,
        /// Dueling iterations per count.
        #[arg(long, default_value_t = 60)]
        rounds: usize,
    },
    /// Windowed search traces for the figure cases or a custom instance.
    Heuristic {
        #[command(flatten)]
        common: CommonArgs,
        /// Case set: shifts | counts | structured | all, or none with --config.
        #[arg(long)]
        case: Option<String>,
        /// Custom problem definition file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 18)]
        depth: usize,
        /// Defaults to depth - 1 (no pruning).
        #[arg(long)]
        change_limit: Option<usize>,
        #[arg(long, default_value_t = 0.98)]
        threshold: f64,
        #[arg(long, default_value_t = 90)]
        max_gates: usize,
    },
    /// Oracles-to-threshold scaling across search-space sizes, with the
    /// log-log fit.
    Complexity {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 5)]
        n_min: u32,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[arg(long, default_value_t = 0.4)]
        threshold: f64,
        #[arg(long, default_value_t = 1000)]
        max_gates: usize,
    },
    /// Stand-alone log-log regression over two CSV columns.
    Fit {
        #[command(flatten)]
        common: CommonArgs,
        /// Input CSV file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "N")]
        x_col: String,
        #[arg(long, default_value = "T")]
        y_col: String,
    },
}

fn parse_seq(text: &str) -> Result<ParamSeq, Box<dyn std::error::Error>> {
    let values: Vec<u64> = text
        .split(',')
        .map(|part| part.trim().parse())
        .collect::<Result<_, _>>()?;
    Ok(match values.as_slice() {
        [single] => ParamSeq::Constant(*single),
        _ => ParamSeq::Table(values),
    })
}

fn ensure_out(dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate {
            common,
            config,
            alpha,
            beta,
            rounds,
            dump_elements,
            dump_clusters,
        } => {
            ensure_out(&common.out)?;
            let problem = ProblemConfig::load(&config)?;
            let clock = RunClock::start(
                "simulate",
                &json!({
                    "problem": problem,
                    "alpha": alpha,
                    "beta": beta,
                    "rounds": rounds,
                    "engine": common.engine.to_string(),
                }),
            );
            let inst = problem.build()?;
            let alpha = parse_seq(&alpha)?;
            let beta = parse_seq(&beta)?;
            let run = experiments::run_fixed_parameters(
                &inst,
                &alpha,
                &beta,
                rounds,
                common.engine,
                dump_elements,
            )?;
            let trace = IterationTrace {
                iterations: (0..run.combined.len())
                    .map(|i| IterationRow {
                        iteration: i + 1,
                        oracle_count: run.oracle_counts[i],
                        p_combined: run.combined[i],
                        p_first: run.first[i],
                        elements: run.distributions.as_ref().map(|d| d[i].clone()),
                    })
                    .collect(),
                dump_elements,
            };
            let out = common.out.join("trace.csv");
            trace.write(&out)?;
            if dump_clusters {
                let index = dueling::cluster::ClusterIndex::build(&inst);
                fs::write(common.out.join("clusters.csv"), index.to_csv())?;
            }
            clock.finish(&out)?;
            println!("wrote {}", out.display());
        }
        Command::Table1 { common } => {
            ensure_out(&common.out)?;
            let clock = RunClock::start("table1", &json!({"rounds": experiments::BENCHMARK_ROUNDS}));
            let rows = experiments::run_table1()?;
            let out = common.out.join("table1.csv");
            experiments::write_benchmark_csv(&rows, &out)?;
            clock.finish(&out)?;
            for row in &rows {
                println!(
                    "{:<22} P_max={:.4} at {:>2}   P'_max={:.4} at {:>2}",
                    row.distribution,
                    row.p_max,
                    row.p_max_iteration,
                    row.p_first_max,
                    row.p_first_max_iteration
                );
            }
            println!("wrote {}", out.display());
        }
        Command::Msweep {
            common,
            n_qubits,
            m_list,
            rounds,
        } => {
            ensure_out(&common.out)?;
            let counts = match &m_list {
                Some(text) => text
                    .split(',')
                    .map(|part| part.trim().parse())
                    .collect::<Result<Vec<usize>, _>>()?,
                None => experiments::valid_solution_counts(1usize << n_qubits),
            };
            let clock = RunClock::start(
                "msweep",
                &json!({"n": n_qubits, "m_list": counts, "rounds": rounds}),
            );
            let rows = experiments::run_m_sweep(n_qubits, &counts, rounds)?;
            let out = common.out.join("msweep.csv");
            experiments::write_sweep_csv(&rows, &out)?;
            clock.finish(&out)?;
            println!("wrote {} ({} rows)", out.display(), rows.len());
        }
        Command::Heuristic {
            common,
            case,
            config,
            depth,
            change_limit,
            threshold,
            max_gates,
        } => {
            ensure_out(&common.out)?;
            let cfg = SearchConfig::new(depth, change_limit.unwrap_or(depth - 1))
                .with_threshold(threshold)
                .with_max_gates(max_gates);
            let engine = match common.engine {
                EngineKind::Auto => EngineKind::Cluster,
                other => other,
            };
            let cases = match (case.as_deref(), &config) {
                (Some("shifts"), _) => experiments::shifted_comb_cases()?,
                (Some("counts"), _) => experiments::solution_count_cases()?,
                (Some("structured"), _) => experiments::structured_cases()?,
                (Some("all"), _) => {
                    let mut cases = experiments::shifted_comb_cases()?;
                    cases.extend(experiments::solution_count_cases()?);
                    cases.extend(experiments::structured_cases()?);
                    cases
                }
                (None, Some(path)) => {
                    let problem = ProblemConfig::load(path)?;
                    vec![experiments::HeuristicCase {
                        label: "custom".into(),
                        instance: problem.build()?,
                    }]
                }
                (Some(other), _) => {
                    return Err(format!(
                        "unknown case set '{other}', expected shifts|counts|structured|all"
                    )
                    .into())
                }
                (None, None) => {
                    return Err("heuristic needs --case or --config".into());
                }
            };
            let clock = RunClock::start(
                "heuristic",
                &json!({
                    "cases": cases.iter().map(|c| c.label.clone()).collect::<Vec<_>>(),
                    "depth": depth,
                    "change_limit": cfg.change_limit,
                    "threshold": threshold,
                    "max_gates": max_gates,
                    "engine": engine.to_string(),
                }),
            );
            let traces = experiments::run_heuristic_figures(&cases, &cfg, engine)?;
            let mut last_out = common.out.join("heuristic.json");
            let mut reports = Vec::new();
            for (label, trace) in &traces {
                let csv = common.out.join(format!("heuristic_{label}.csv"));
                io::write_gate_trace(trace, &csv)?;
                let case = cases.iter().find(|c| &c.label == label).expect("label");
                reports.push(experiments::search_report(
                    &case.instance,
                    &cfg,
                    trace,
                    &csv.to_string_lossy(),
                ));
                println!(
                    "{label}: {} gates, final P = {:.4}",
                    trace.len(),
                    trace.probs_combined.last().copied().unwrap_or(0.0)
                );
                last_out = csv;
            }
            fs::write(
                common.out.join("heuristic.json"),
                serde_json::to_string_pretty(&reports)?,
            )?;
            clock.finish(&last_out)?;
            println!("wrote {}", common.out.join("heuristic.json").display());
        }
        Command::Complexity {
            common,
            n_min,
            n_max,
            threshold,
            max_gates,
        } => {
            ensure_out(&common.out)?;
            let clock = RunClock::start(
                "complexity",
                &json!({
                    "n_min": n_min, "n_max": n_max,
                    "threshold": threshold, "max_gates": max_gates,
                }),
            );
            let outcome =
                experiments::run_complexity(n_min..=n_max, &COMPLEXITY_PARAMS, threshold, max_gates)?;
            let out = common.out.join("complexity.csv");
            experiments::write_complexity_csv(&outcome, &out)?;
            fs::write(
                common.out.join("complexity_fit.json"),
                serde_json::to_string_pretty(&outcome)?,
            )?;
            clock.finish(&out)?;
            for point in &outcome.points {
                println!(
                    "n={:>2} N={:>6} M={:>3}: T = {}",
                    point.n,
                    point.size,
                    point.solutions,
                    point
                        .oracles
                        .map(|t| t.to_string())
                        .unwrap_or_else(|| "unreached".into())
                );
            }
            if let Some(fit) = &outcome.fit {
                println!(
                    "log2 T = {:.3}({:.0}) log2 N {:+.2}({:.0})   R^2 = {:.4}",
                    fit.slope,
                    fit.slope_stderr * 1000.0,
                    fit.intercept,
                    fit.intercept_stderr * 100.0,
                    fit.r_squared
                );
            }
            println!("wrote {}", out.display());
        }
        Command::Fit {
            common,
            input,
            x_col,
            y_col,
        } => {
            ensure_out(&common.out)?;
            let clock = RunClock::start(
                "fit",
                &json!({"input": input.display().to_string(), "x": x_col, "y": y_col}),
            );
            let points = io::read_csv_columns(&input, &x_col, &y_col)?;
            let fit = experiments::loglog_fit(&points)?;
            let out = common.out.join("fit.json");
            fs::write(&out, serde_json::to_string_pretty(&fit)?)?;
            clock.finish(&out)?;
            println!(
                "slope {:.6} +- {:.6}, intercept {:.4} +- {:.4}, R^2 {:.6}",
                fit.slope, fit.slope_stderr, fit.intercept, fit.intercept_stderr, fit.r_squared
            );
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}
