//! Batch experiment runners behind the CLI: fixed-parameter sweeps, the
//! distribution table, heuristic-search figure traces, and the complexity
//! scaling fit, all emitting CSV plus JSON sidecars.

pub mod fit;
pub mod io;

use rayon::prelude::*;
use serde::Serialize;
use std::ops::RangeInclusive;
use std::path::Path;

use crate::baselines::ParamSeq;
use crate::dense::first_local_max;
use crate::engine::{ClusterEngine, DenseEngine, Engine, EngineKind, Op};
use crate::problem::{uniform_solution_count, DistributionSpec, MeasureSpec, ProblemInstance};
use crate::search::{heuristic_search, oracles_to_threshold, run_length_encode, GateTrace, SearchConfig};
use crate::Result;

pub use fit::{linear_fit, loglog_fit, FitResult};

/// The six benchmark distributions, parameterized by search-space size:
/// three shifted near-uniform combs, a head range, a tail range, and an
/// isolated optimum over a tail range. Range bounds clamp into `1..=size`
/// so the shapes downscale to small spaces.
pub fn benchmark_distributions(size: usize) -> Vec<(String, DistributionSpec)> {
    let head_hi = size.min(16);
    let tail_lo = size.saturating_sub(15).max(1);
    let split_lo = size.saturating_sub(14).max(1);
    vec![
        (
            "[x==1 mod 16]".into(),
            DistributionSpec::ModularUniform { t: 1, s: 16 },
        ),
        (
            "[x==8 mod 16]".into(),
            DistributionSpec::ModularUniform { t: 8, s: 16 },
        ),
        (
            "[x==0 mod 16]".into(),
            DistributionSpec::ModularUniform { t: 16, s: 16 },
        ),
        (
            format!("[x<={head_hi}]"),
            DistributionSpec::Range { lo: 1, hi: head_hi },
        ),
        (
            format!("[x>{}]", tail_lo - 1),
            DistributionSpec::Range {
                lo: tail_lo,
                hi: size,
            },
        ),
        (
            format!("[x==1 or x>{}]", split_lo - 1),
            DistributionSpec::Union {
                parts: vec![
                    DistributionSpec::Range { lo: 1, hi: 1 },
                    DistributionSpec::Range {
                        lo: split_lo,
                        hi: size,
                    },
                ],
            },
        ),
    ]
}

/// Per-iteration probabilities of a fixed-parameter run; iteration `i`
/// applies `alpha_i` first-register gates then `beta_i` second-register gates.
#[derive(Debug, Clone)]
pub struct FixedRun {
    pub combined: Vec<f64>,
    pub first: Vec<f64>,
    pub oracle_counts: Vec<u64>,
    /// Combined output distribution per iteration when requested.
    pub distributions: Option<Vec<Vec<f64>>>,
}

fn fixed_run_on<E: Engine>(
    engine: &E,
    alpha: &ParamSeq,
    beta: &ParamSeq,
    rounds: usize,
    keep_distributions: bool,
) -> Result<FixedRun> {
    let mut state = engine.init_state()?;
    let mut run = FixedRun {
        combined: Vec::with_capacity(rounds),
        first: Vec::with_capacity(rounds),
        oracle_counts: Vec::with_capacity(rounds),
        distributions: keep_distributions.then(Vec::new),
    };
    for i in 1..=rounds {
        let a = alpha.get(i).unwrap_or(0);
        let b = beta.get(i).unwrap_or(0);
        for _ in 0..a {
            engine.apply(&mut state, Op::G1);
        }
        for _ in 0..b {
            engine.apply(&mut state, Op::G2);
        }
        run.combined.push(engine.p_combined_optimum(&state));
        run.first.push(engine.p_first_optimum(&state));
        run.oracle_counts.push(E::oracle_count(&state));
        if let Some(dists) = &mut run.distributions {
            dists.push(engine.output_distribution(&state));
        }
    }
    Ok(run)
}

/// Runs the dueling loop with fixed parameter sequences for a number of
/// iterations, recording per-iteration success probabilities.
pub fn run_fixed_parameters(
    inst: &ProblemInstance,
    alpha: &ParamSeq,
    beta: &ParamSeq,
    rounds: usize,
    engine: EngineKind,
    keep_distributions: bool,
) -> Result<FixedRun> {
    match engine.resolve(inst) {
        EngineKind::Dense => fixed_run_on(
            &DenseEngine::new(inst),
            alpha,
            beta,
            rounds,
            keep_distributions,
        ),
        EngineKind::Cluster => fixed_run_on(
            &ClusterEngine::new(inst),
            alpha,
            beta,
            rounds,
            keep_distributions,
        ),
        EngineKind::Auto => unreachable!("resolve never returns Auto"),
    }
}

/// One row of the distribution benchmark: first local maxima of the combined
/// and first-register success probabilities with their iteration counts.
#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkRow {
    pub distribution: String,
    pub p_max: f64,
    pub p_max_iteration: usize,
    pub p_first_max: f64,
    pub p_first_max_iteration: usize,
}

/// Number of dueling iterations used for the fixed-parameter benchmark rows;
/// comfortably past every reported peak.
pub const BENCHMARK_ROUNDS: usize = 40;

/// Unit-parameter benchmark over the six distributions at `N = 256`.
pub fn run_table1() -> Result<Vec<BenchmarkRow>> {
    let specs = benchmark_distributions(256);
    specs
        .into_par_iter()
        .map(|(label, dist)| {
            let inst = ProblemInstance::build(8, MeasureSpec::identity(), &dist)?;
            let run = run_fixed_parameters(
                &inst,
                &ParamSeq::ones(),
                &ParamSeq::ones(),
                BENCHMARK_ROUNDS,
                EngineKind::Dense,
                false,
            )?;
            let (pi, pv) = first_local_max(&run.combined).expect("nonempty series");
            let (fi, fv) = first_local_max(&run.first).expect("nonempty series");
            Ok(BenchmarkRow {
                distribution: label,
                p_max: pv,
                p_max_iteration: pi,
                p_first_max: fv,
                p_first_max_iteration: fi,
            })
        })
        .collect()
}

pub fn write_benchmark_csv(rows: &[BenchmarkRow], path: &Path) -> Result<()> {
    io::write_csv(
        path,
        "distribution,P_max,p_max,P_first_max,p_first_max",
        rows.iter().map(|r| {
            vec![
                r.distribution.clone(),
                io::fmt_float(r.p_max),
                r.p_max_iteration.to_string(),
                io::fmt_float(r.p_first_max),
                r.p_first_max_iteration.to_string(),
            ]
        }),
    )
}

/// One row of the solution-count sweep; `peaks` is absent for counts that
/// admit no near-uniform distribution.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub m: usize,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peaks: Option<BenchmarkRow>,
}

/// Solution counts admitting a near-uniform distribution over `size`
/// elements.
pub fn valid_solution_counts(size: usize) -> Vec<usize> {
    (1..=size)
        .filter(|&m| DistributionSpec::modular_uniform(size, m, 1).is_ok())
        .collect()
}

/// Unit-parameter sweep over solution counts at `N = 2^n`, near-uniform
/// distribution anchored at the first element.
pub fn run_m_sweep(n: u32, m_list: &[usize], rounds: usize) -> Result<Vec<SweepRow>> {
    let size = 1usize << n;
    m_list
        .par_iter()
        .map(|&m| {
            let Ok(dist) = DistributionSpec::modular_uniform(size, m, 1) else {
                return Ok(SweepRow {
                    m,
                    valid: false,
                    peaks: None,
                });
            };
            let inst = ProblemInstance::build(n, MeasureSpec::identity(), &dist)?;
            let run = run_fixed_parameters(
                &inst,
                &ParamSeq::ones(),
                &ParamSeq::ones(),
                rounds,
                EngineKind::Auto,
                false,
            )?;
            let (pi, pv) = first_local_max(&run.combined).expect("nonempty series");
            let (fi, fv) = first_local_max(&run.first).expect("nonempty series");
            Ok(SweepRow {
                m,
                valid: true,
                peaks: Some(BenchmarkRow {
                    distribution: format!("[x-1==0 mod ceil({size}/{m})]"),
                    p_max: pv,
                    p_max_iteration: pi,
                    p_first_max: fv,
                    p_first_max_iteration: fi,
                }),
            })
        })
        .collect()
}

pub fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    io::write_csv(
        path,
        "M,valid,P_max,p_max,P_first_max,p_first_max",
        rows.iter().map(|r| match &r.peaks {
            Some(p) => vec![
                r.m.to_string(),
                "1".into(),
                io::fmt_float(p.p_max),
                p.p_max_iteration.to_string(),
                io::fmt_float(p.p_first_max),
                p.p_first_max_iteration.to_string(),
            ],
            None => vec![r.m.to_string(), "0".into(), String::new(), String::new(), String::new(), String::new()],
        }),
    )
}

/// A labeled instance for the heuristic-search figure runs.
#[derive(Debug, Clone)]
pub struct HeuristicCase {
    pub label: String,
    pub instance: ProblemInstance,
}

/// Shifted near-uniform combs at `N = 256`, `M = 16`: `t` in `{1, 8, 16}`.
pub fn shifted_comb_cases() -> Result<Vec<HeuristicCase>> {
    [1usize, 8, 16]
        .iter()
        .map(|&t| {
            Ok(HeuristicCase {
                label: format!("t={t}"),
                instance: ProblemInstance::build(
                    8,
                    MeasureSpec::identity(),
                    &DistributionSpec::ModularUniform { t, s: 16 },
                )?,
            })
        })
        .collect()
}

/// Near-uniform distributions at `N = 256` over a spread of solution counts.
pub fn solution_count_cases() -> Result<Vec<HeuristicCase>> {
    [4usize, 16, 32, 86, 256]
        .iter()
        .map(|&m| {
            Ok(HeuristicCase {
                label: format!("M={m}"),
                instance: ProblemInstance::build(
                    8,
                    MeasureSpec::identity(),
                    &DistributionSpec::modular_uniform(256, m, 1)?,
                )?,
            })
        })
        .collect()
}

/// Structured distributions at `N = 256`, `M = 16`: perfect squares, the
/// best-placed head range, and the worst-placed tail range.
pub fn structured_cases() -> Result<Vec<HeuristicCase>> {
    Ok(vec![
        HeuristicCase {
            label: "squares".into(),
            instance: ProblemInstance::build(
                8,
                MeasureSpec::identity(),
                &DistributionSpec::PerfectSquares,
            )?,
        },
        HeuristicCase {
            label: "head-range".into(),
            instance: ProblemInstance::build(
                8,
                MeasureSpec::identity(),
                &DistributionSpec::Range { lo: 1, hi: 16 },
            )?,
        },
        HeuristicCase {
            label: "tail-range".into(),
            instance: ProblemInstance::build(
                8,
                MeasureSpec::identity(),
                &DistributionSpec::Range { lo: 241, hi: 256 },
            )?,
        },
    ])
}

/// Default window configuration for the figure traces: depth 18, no pruning,
/// enough committed gates to cover the slow tail case.
pub fn figure_search_config() -> SearchConfig {
    SearchConfig::new(18, 17)
        .with_threshold(0.98)
        .with_max_gates(90)
}

/// Runs the windowed search on every case, returning per-gate traces.
pub fn run_heuristic_figures(
    cases: &[HeuristicCase],
    cfg: &SearchConfig,
    engine: EngineKind,
) -> Result<Vec<(String, GateTrace)>> {
    cases
        .par_iter()
        .map(|case| {
            let trace = heuristic_search(&case.instance, cfg, engine)?;
            Ok((case.label.clone(), trace))
        })
        .collect()
}

/// JSON report of one heuristic search run.
#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    #[serde(rename = "N")]
    pub size: usize,
    #[serde(rename = "M")]
    pub solutions: usize,
    pub depth: usize,
    pub change_limit: usize,
    /// Oracles to the configured threshold, absent when unreached.
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub oracles_to_threshold: Option<usize>,
    pub ops_string: String,
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
    pub trace_csv_path: String,
}

pub fn search_report(
    inst: &ProblemInstance,
    cfg: &SearchConfig,
    trace: &GateTrace,
    trace_csv_path: &str,
) -> SearchReport {
    let (alpha, beta) = run_length_encode(&trace.ops);
    SearchReport {
        size: inst.size(),
        solutions: inst.solution_count(),
        depth: cfg.depth,
        change_limit: cfg.change_limit,
        oracles_to_threshold: oracles_to_threshold(trace, cfg.threshold),
        ops_string: Op::string_of(&trace.ops),
        alpha,
        beta,
        trace_csv_path: trace_csv_path.to_string(),
    }
}

/// Tuned `(n, depth, change_limit)` rows of the complexity experiment.
pub const COMPLEXITY_PARAMS: [(u32, usize, usize); 12] = [
    (5, 6, 3),
    (6, 8, 4),
    (7, 12, 3),
    (8, 10, 8),
    (9, 14, 10),
    (10, 17, 14),
    (11, 13, 10),
    (12, 8, 4),
    (13, 9, 4),
    (14, 11, 4),
    (15, 12, 4),
    (16, 14, 4),
];

/// Published oracle counts `T` at the 40% threshold for the tuned rows.
pub const COMPLEXITY_REFERENCE_ORACLES: [(u32, usize); 12] = [
    (5, 3),
    (6, 5),
    (7, 9),
    (8, 10),
    (9, 14),
    (10, 19),
    (11, 27),
    (12, 44),
    (13, 66),
    (14, 104),
    (15, 131),
    (16, 187),
];

#[derive(Debug, Clone, Serialize)]
pub struct ComplexityPoint {
    pub n: u32,
    pub size: usize,
    pub solutions: usize,
    pub depth: usize,
    pub change_limit: usize,
    /// Oracles to threshold; absent when the gate budget ran out.
    pub oracles: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexityOutcome {
    pub threshold: f64,
    pub points: Vec<ComplexityPoint>,
    /// Present once at least four points resolved.
    pub fit: Option<FitResult>,
}

/// Runs the tuned heuristic search per qubit count over near-uniform
/// instances with `M = ceil(sqrt(N))`, collecting oracles-to-threshold and
/// the log-log scaling fit. Window parameters default to the tuned table.
pub fn run_complexity(
    range: RangeInclusive<u32>,
    params: &[(u32, usize, usize)],
    threshold: f64,
    max_gates: usize,
) -> Result<ComplexityOutcome> {
    let jobs: Vec<(u32, usize, usize)> = range
        .clone()
        .map(|n| {
            params
                .iter()
                .find(|&&(pn, _, _)| pn == n)
                .copied()
                .ok_or_else(|| {
                    crate::Error::InvalidConfig(format!("no window parameters for n = {n}"))
                })
        })
        .collect::<Result<_>>()?;
    let points: Vec<ComplexityPoint> = jobs
        .par_iter()
        .map(|&(n, depth, change_limit)| {
            let size = 1usize << n;
            let m = uniform_solution_count(size);
            let inst = ProblemInstance::build(
                n,
                MeasureSpec::identity(),
                &DistributionSpec::modular_uniform(size, m, 1)?,
            )?;
            let cfg = SearchConfig::new(depth, change_limit)
                .with_threshold(threshold)
                .with_max_gates(max_gates);
            let trace = heuristic_search(&inst, &cfg, EngineKind::Cluster)?;
            Ok(ComplexityPoint {
                n,
                size,
                solutions: m,
                depth,
                change_limit,
                oracles: oracles_to_threshold(&trace, threshold),
            })
        })
        .collect::<Result<_>>()?;
    let resolved: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| p.oracles.map(|t| (p.size as f64, t as f64)))
        .collect();
    let fit = if resolved.len() >= 4 {
        Some(loglog_fit(&resolved)?)
    } else {
        None
    };
    Ok(ComplexityOutcome {
        threshold,
        points,
        fit,
    })
}

pub fn write_complexity_csv(outcome: &ComplexityOutcome, path: &Path) -> Result<()> {
    io::write_csv(
        path,
        "n,N,M,depth,change_limit,T",
        outcome.points.iter().map(|p| {
            vec![
                p.n.to_string(),
                p.size.to_string(),
                p.solutions.to_string(),
                p.depth.to_string(),
                p.change_limit.to_string(),
                p.oracles.map(|t| t.to_string()).unwrap_or_default(),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::grover_success;

    #[test]
    fn benchmark_rows_match_reference_table() {
        let rows = run_table1().unwrap();
        let expected = [
            (0.7061, 10, 0.3498, 10),
            (0.4497, 8, 0.2257, 8),
            (0.2730, 5, 0.1399, 5),
            (0.0903, 2, 0.0549, 2),
            (0.0112, 1, 0.0056, 1),
            (0.9919, 8, 0.5035, 8),
        ];
        assert_eq!(rows.len(), 6);
        for (row, (p, pi, pf, fi)) in rows.iter().zip(expected) {
            assert!(
                (row.p_max - p).abs() < 5e-4,
                "{}: P {} vs {p}",
                row.distribution,
                row.p_max
            );
            assert_eq!(row.p_max_iteration, pi, "{}", row.distribution);
            assert!((row.p_first_max - pf).abs() < 5e-4, "{}", row.distribution);
            assert_eq!(row.p_first_max_iteration, fi, "{}", row.distribution);
        }
    }

    #[test]
    fn sweep_row_at_16_matches_benchmark_row_1() {
        let rows = run_m_sweep(8, &[16], 60).unwrap();
        let peaks = rows[0].peaks.as_ref().unwrap();
        assert!((peaks.p_max - 0.7061).abs() < 5e-4);
        assert_eq!(peaks.p_max_iteration, 10);
    }

    #[test]
    fn sweep_collapses_past_quarter_n() {
        let rows = run_m_sweep(8, &[64, 86, 128, 256], 60).unwrap();
        let at = |m: usize| {
            rows.iter()
                .find(|r| r.m == m)
                .unwrap()
                .peaks
                .as_ref()
                .unwrap()
                .clone()
        };
        let before = at(64);
        for m in [86, 128, 256] {
            let row = at(m);
            assert!(row.p_max < 0.25 * before.p_max, "M={m} kept P {}", row.p_max);
            assert!(
                row.p_max_iteration <= 2 && before.p_max_iteration >= 10,
                "M={m} iterations {} vs {}",
                row.p_max_iteration,
                before.p_max_iteration
            );
        }
    }

    #[test]
    fn sweep_flags_invalid_counts() {
        let rows = run_m_sweep(8, &[16, 100], 10).unwrap();
        assert!(rows[0].valid);
        assert!(!rows[1].valid && rows[1].peaks.is_none());
        let counts = valid_solution_counts(16);
        assert!(counts.contains(&4) && !counts.is_empty());
        for &m in &counts {
            assert!(DistributionSpec::modular_uniform(16, m, 1).is_ok());
        }
    }

    #[test]
    fn single_solution_first_register_tracks_plane_model() {
        // With one solution every second-register section rotates like a
        // plain Grover search; only the solution's own section diffuses in
        // place. The first-register marginal after r first-register gates is
        // sin^2((2r+1) theta) (N-1)/N + 1/N^2.
        let size = 256usize;
        let inst = ProblemInstance::build(
            8,
            MeasureSpec::identity(),
            &DistributionSpec::modular_uniform(size, 1, 1).unwrap(),
        )
        .unwrap();
        let run = run_fixed_parameters(
            &inst,
            &ParamSeq::ones(),
            &ParamSeq::Constant(0),
            30,
            EngineKind::Dense,
            false,
        )
        .unwrap();
        let n = size as f64;
        let mut predicted_max = 0.0f64;
        for (i, &p) in run.first.iter().enumerate() {
            let r = (i + 1) as u64;
            let predicted = grover_success(size, 1, r) * (n - 1.0) / n + 1.0 / (n * n);
            assert!((p - predicted).abs() <= 1e-12, "r = {r}");
            predicted_max = predicted_max.max(predicted);
        }
        let observed_max = run.first.iter().cloned().fold(0.0f64, f64::max);
        assert!((observed_max - predicted_max).abs() <= 1e-6);
    }

    #[test]
    fn complexity_reference_parameters_recover_published_small_rows() {
        let outcome = run_complexity(5..=8, &COMPLEXITY_PARAMS, 0.4, 500).unwrap();
        let expect: Vec<usize> = COMPLEXITY_REFERENCE_ORACLES[..4]
            .iter()
            .map(|&(_, t)| t)
            .collect();
        let got: Vec<usize> = outcome.points.iter().map(|p| p.oracles.unwrap()).collect();
        assert_eq!(got, expect);
        assert!(outcome.fit.is_some());
    }

    #[test]
    fn heuristic_figcampaign_shapes() {
        let cases = structured_cases().unwrap();
        assert_eq!(cases.len(), 3);
        // Head range reaches the plateau within 30 gates; the tail case does
        // not, and jumps around instead.
        let cfg = SearchConfig::new(18, 17).with_threshold(0.5).with_max_gates(36);
        let traces =
            run_heuristic_figures(&cases[1..], &cfg, EngineKind::Cluster).unwrap();
        let head = &traces[0].1;
        let head_cross = head
            .probs_combined
            .iter()
            .position(|&p| p >= 0.5)
            .map(|i| i + 1);
        assert!(head_cross.is_some_and(|g| g <= 30), "head: {head_cross:?}");
        let tail = &traces[1].1;
        let tail_cross = tail
            .probs_combined
            .iter()
            .position(|&p| p >= 0.5)
            .map(|i| i + 1);
        assert!(tail_cross.is_none(), "tail crossed at {tail_cross:?}");
        let dips = tail
            .probs_combined
            .windows(2)
            .filter(|p| p[1] < p[0] - 1e-12)
            .count();
        assert!(dips >= 3, "tail trace shows only {dips} dips");
    }

    #[test]
    fn no_indicator_information_still_boosts_the_optimum() {
        // All elements solutions: the search can only exploit measure order,
        // yet still lifts the optimum well above the uniform baseline.
        let all = solution_count_cases().unwrap();
        let case = all.last().unwrap();
        assert_eq!(case.instance.solution_count(), 256);
        let cfg = SearchConfig::new(8, 7).with_threshold(0.99).with_max_gates(40);
        let trace = heuristic_search(&case.instance, &cfg, EngineKind::Cluster).unwrap();
        let size = case.instance.size() as f64;
        let baseline = 2.0 / size - 1.0 / (size * size);
        let last = *trace.probs_combined.last().unwrap();
        assert!(
            last >= 10.0 * baseline,
            "final probability {last} under 10x baseline {baseline}"
        );
    }

    #[test]
    fn search_report_fields() {
        let inst = ProblemInstance::build(
            5,
            MeasureSpec::identity(),
            &DistributionSpec::modular_uniform(32, 6, 1).unwrap(),
        )
        .unwrap();
        let cfg = SearchConfig::new(6, 3);
        let trace = heuristic_search(&inst, &cfg, EngineKind::Cluster).unwrap();
        let report = search_report(&inst, &cfg, &trace, "trace.csv");
        assert_eq!(report.size, 32);
        assert_eq!(report.solutions, 6);
        assert_eq!(report.oracles_to_threshold, Some(3));
        assert_eq!(report.ops_string.len(), trace.len());
        assert_eq!(
            crate::search::run_length_decode(&report.alpha, &report.beta),
            trace.ops
        );
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["N"], 32);
        assert_eq!(json["T"], 3);
    }
}
