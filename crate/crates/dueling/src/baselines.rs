//! Oracle-counted reference algorithms: the exact two-plane Grover model,
//! Grover search with unknown solution count, Grover adaptive search, and
//! the hybrid dueling wrapper with randomized rotation counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{ClusterEngine, DenseEngine, Engine, EngineKind, Op};
use crate::problem::ProblemInstance;
use crate::{Error, Result};

/// Success probability of measuring a target after `r` Grover iterations on
/// a uniform start: `sin^2((2r + 1) * asin(sqrt(m / n)))`.
pub fn grover_success(n: usize, m: usize, r: u64) -> f64 {
    debug_assert!(m >= 1 && m <= n);
    let theta = (m as f64 / n as f64).sqrt().asin();
    let sigma = (2 * r + 1) as f64 * theta;
    sigma.sin().powi(2)
}

/// Rotation count closest to the real-valued optimum `(pi / (2 theta) - 1) / 2`,
/// clamped to zero. Past `m = n / 2` a single rotation already overshoots, so
/// the preferred count collapses to zero.
pub fn preferred_rotations(n: usize, m: usize) -> u64 {
    debug_assert!(m >= 1 && m <= n);
    let theta = (m as f64 / n as f64).sqrt().asin();
    let ideal = (std::f64::consts::FRAC_PI_2 / theta - 1.0) / 2.0;
    ideal.round().max(0.0) as u64
}

/// State of a Grover run reduced to the rotation plane spanned by the mean
/// of targets and the mean of the rest; exact for uniform starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverPlaneState {
    /// Angle against the non-target axis.
    pub sigma: f64,
    /// Initial angle `asin(sqrt(m / n))`; one iteration adds `2 theta`.
    pub theta: f64,
    /// Target-set size.
    pub target_count: usize,
    /// Search-space size.
    pub space: usize,
}

impl GroverPlaneState {
    pub fn init(space: usize, target_count: usize) -> Self {
        let theta = (target_count as f64 / space as f64).sqrt().asin();
        Self {
            sigma: theta,
            theta,
            target_count,
            space,
        }
    }

    pub fn advance(&mut self, rotations: u64) {
        self.sigma += 2.0 * rotations as f64 * self.theta;
    }

    /// Probability of measuring inside the target set.
    pub fn success_probability(&self) -> f64 {
        self.sigma.sin().powi(2)
    }
}

/// One recorded step of a Grover-adaptive-search run.
#[derive(Debug, Clone, PartialEq)]
pub struct GasStep {
    /// 0 for the initial unknown-count search, then 1, 2, ...
    pub iteration: u32,
    /// Rotations drawn this step; for step 0, the whole initial-search cost.
    pub rotations: u64,
    /// Cumulative oracle queries after this step.
    pub oracles: u64,
    /// Current best element.
    pub best: usize,
    /// Measure of the current best.
    pub best_value: f64,
    /// Rotation-budget parameter after this step.
    pub k: f64,
}

/// Full record of a Grover-adaptive-search run.
#[derive(Debug, Clone, PartialEq)]
pub struct GasTrace {
    pub steps: Vec<GasStep>,
    pub total_oracles: u64,
    pub found_optimum: bool,
}

/// Termination rule for sampled runs. The oracle budget is mandatory; runs
/// refuse to start without one.
#[derive(Debug, Clone, Copy)]
pub struct GasTermination {
    pub max_oracles: Option<u64>,
    /// Stop as soon as the best equals the instance optimum.
    pub stop_at_optimum: bool,
}

impl GasTermination {
    /// Default oracle-counting experiment: stop at the optimum, cap the
    /// budget at `50 sqrt(N)`.
    pub fn until_optimum(inst: &ProblemInstance) -> Self {
        Self {
            max_oracles: Some((50.0 * (inst.size() as f64).sqrt()).ceil() as u64),
            stop_at_optimum: true,
        }
    }
}

/// Grover search for an unknown target count: rotation counts drawn from a
/// geometrically growing budget until a measurement verifies as a solution.
/// Each draw costs its rotations plus one query to test the outcome. Returns
/// the found solution and the oracle cost, or `None` on budget exhaustion.
pub fn unknown_count_search(
    inst: &ProblemInstance,
    rng: &mut impl Rng,
    max_oracles: u64,
) -> (Option<usize>, u64) {
    let n = inst.size();
    let solutions = inst.solutions();
    let cap = (n as f64).sqrt();
    let mut budget = 1.0f64;
    let mut oracles = 0u64;
    loop {
        let r = rng.random_range(0..budget.ceil() as u64);
        oracles += r + 1;
        let p = grover_success(n, solutions.len(), r);
        if rng.random::<f64>() < p {
            let pick = solutions[rng.random_range(0..solutions.len())];
            return (Some(pick), oracles);
        }
        if oracles > max_oracles {
            return (None, oracles);
        }
        budget = (budget * 1.2).min(cap);
    }
}

/// Grover adaptive search: holds a classical best and repeatedly Grover-
/// searches for strictly better solutions, growing the rotation budget by
/// `lambda` after every failed attempt.
pub fn run_gas(
    inst: &ProblemInstance,
    lambda: f64,
    seed: u64,
    termination: GasTermination,
) -> Result<GasTrace> {
    if lambda <= 1.0 {
        return Err(Error::InvalidConfig(format!(
            "gas growth factor must exceed 1, got {lambda}"
        )));
    }
    let max_oracles = termination.max_oracles.ok_or(Error::UnboundedRun)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = inst.size();
    let optimum = inst.optimum();
    let by_measure = inst.solutions_by_measure();
    let values: Vec<f64> = by_measure.iter().map(|&x| inst.measure(x)).collect();

    let mut steps = Vec::new();
    let (found, mut oracles) = unknown_count_search(inst, &mut rng, max_oracles);
    let mut best = match found {
        Some(x) => x,
        None => {
            return Ok(GasTrace {
                steps,
                total_oracles: oracles,
                found_optimum: false,
            })
        }
    };
    let mut k = 1.0f64;
    steps.push(GasStep {
        iteration: 0,
        rotations: oracles,
        oracles,
        best,
        best_value: inst.measure(best),
        k,
    });

    let mut iteration = 0u32;
    while !(termination.stop_at_optimum && best == optimum) && oracles <= max_oracles {
        iteration += 1;
        let r = rng.random_range(0..=(k - 1.0).ceil().max(0.0) as u64);
        oracles += r;
        // Targets are the solutions measured strictly below the best.
        let target_count = values.partition_point(|&v| v < inst.measure(best));
        let success = target_count > 0 && {
            let p = grover_success(n, target_count, r);
            rng.random::<f64>() < p
        };
        if success {
            best = by_measure[rng.random_range(0..target_count)];
            k = 1.0;
        } else {
            k *= lambda;
        }
        steps.push(GasStep {
            iteration,
            rotations: r,
            oracles,
            best,
            best_value: inst.measure(best),
            k,
        });
    }

    Ok(GasTrace {
        steps,
        total_oracles: oracles,
        found_optimum: best == optimum,
    })
}

/// Integer parameter sequence for the dueling loop.
#[derive(Debug, Clone)]
pub enum ParamSeq {
    /// Every entry equals the constant; never exhausts.
    Constant(u64),
    /// Explicit finite sequence.
    Table(Vec<u64>),
}

impl ParamSeq {
    pub fn ones() -> Self {
        ParamSeq::Constant(1)
    }

    /// Entry `i` (1-based), or `None` past the end of a finite table.
    pub fn get(&self, i: usize) -> Option<u64> {
        match self {
            ParamSeq::Constant(c) => Some(*c),
            ParamSeq::Table(t) => t.get(i - 1).copied(),
        }
    }
}

/// How the hybrid wrapper draws its rotation count each outer iteration.
#[derive(Debug, Clone, Copy)]
pub enum RotationSchedule {
    /// Draw uniformly from `1..=ceil(lambda^i)`; `lambda` in `(1, 2)`.
    Geometric { lambda: f64 },
    /// Pin the draw to a fixed value (degenerate distribution).
    Fixed(u64),
}

impl Default for RotationSchedule {
    fn default() -> Self {
        RotationSchedule::Geometric { lambda: 1.5 }
    }
}

impl RotationSchedule {
    fn draw(&self, outer: u64, rng: &mut impl Rng) -> u64 {
        match self {
            RotationSchedule::Geometric { lambda } => {
                let r_max = lambda.powi(outer as i32).ceil().max(1.0) as u64;
                rng.random_range(1..=r_max)
            }
            RotationSchedule::Fixed(r) => *r,
        }
    }
}

/// Termination for the hybrid wrapper; at least one bound is required.
#[derive(Debug, Clone, Copy, Default)]
pub struct HybridTermination {
    pub max_outer: Option<u64>,
    pub max_oracles: Option<u64>,
}

/// Outcome of a hybrid dueling run.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridRun {
    /// Best verified solution seen across outer iterations, if any.
    pub best: Option<usize>,
    pub oracle_count: u64,
    pub outer_iterations: u64,
}

fn sample_element(dist: &[f64], rng: &mut impl Rng) -> usize {
    let draw: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in dist.iter().enumerate() {
        acc += p;
        if draw < acc {
            return i + 1;
        }
    }
    dist.len()
}

fn hybrid_outer<E: Engine>(
    engine: &E,
    alpha: &ParamSeq,
    beta: &ParamSeq,
    rotations: u64,
    rng: &mut impl Rng,
) -> Result<(usize, u64)> {
    // Truncate the parameter sequences at the drawn rotation budget.
    let mut gates: Vec<Op> = Vec::new();
    let mut used = 0u64;
    let mut i = 1usize;
    while let (Some(a), Some(b)) = (alpha.get(i), beta.get(i)) {
        if used + a + b > rotations {
            break;
        }
        used += a + b;
        gates.extend(std::iter::repeat_n(Op::G1, a as usize));
        gates.extend(std::iter::repeat_n(Op::G2, b as usize));
        i += 1;
    }
    let mut state = engine.init_state()?;
    for op in gates {
        engine.apply(&mut state, op);
    }
    let measured = sample_element(&engine.output_distribution(&state), rng);
    Ok((measured, used))
}

/// Hybrid dueling: repeatedly runs the dueling loop truncated at a randomly
/// drawn rotation count, measures once, and keeps the best verified solution.
pub fn run_dueling_hybrid(
    inst: &ProblemInstance,
    alpha: &ParamSeq,
    beta: &ParamSeq,
    schedule: RotationSchedule,
    engine: EngineKind,
    seed: u64,
    termination: HybridTermination,
) -> Result<HybridRun> {
    if termination.max_outer.is_none() && termination.max_oracles.is_none() {
        return Err(Error::UnboundedRun);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<usize> = None;
    let mut oracles = 0u64;
    let mut outer = 0u64;
    loop {
        if let Some(limit) = termination.max_outer {
            if outer >= limit {
                break;
            }
        }
        if let Some(limit) = termination.max_oracles {
            if oracles >= limit {
                break;
            }
        }
        outer += 1;
        let rotations = schedule.draw(outer, &mut rng);
        let (measured, used) = match engine.resolve(inst) {
            EngineKind::Dense => {
                hybrid_outer(&DenseEngine::new(inst), alpha, beta, rotations, &mut rng)?
            }
            EngineKind::Cluster => {
                hybrid_outer(&ClusterEngine::new(inst), alpha, beta, rotations, &mut rng)?
            }
            EngineKind::Auto => unreachable!("resolve never returns Auto"),
        };
        oracles += used;
        if inst.is_solution(measured)
            && best.is_none_or(|b| inst.measure(measured) < inst.measure(b))
        {
            best = Some(measured);
        }
    }
    Ok(HybridRun {
        best,
        oracle_count: oracles,
        outer_iterations: outer,
    })
}
