//! Windowed exhaustive search for near-optimal gate sequences.
//!
//! From the current state, every operator string of a fixed window length
//! whose internal transition count stays within `change_limit` is scored by
//! the final combined success probability of the optimum; the best window is
//! committed whole and the search repeats. Long runs of one operator dominate
//! good sequences at large `N`, so transition pruning shrinks the candidate
//! set drastically without hurting the committed result.

use serde::Serialize;

use crate::engine::{ClusterEngine, DenseEngine, Engine, EngineKind, Op};
use crate::problem::ProblemInstance;
use crate::{Error, Result};

/// Which probability the window score maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreMetric {
    /// Combined two-register success probability of the optimum.
    #[default]
    Combined,
    /// First-register marginal, for sensitivity studies.
    FirstRegister,
}

/// Search parameters.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Window length in gates.
    pub depth: usize,
    /// Maximum number of adjacent operator transitions inside one window;
    /// `depth - 1` disables pruning.
    pub change_limit: usize,
    /// Stop once the scored probability reaches this value.
    pub threshold: f64,
    /// Hard bound on total committed gates.
    pub max_gates: usize,
    pub score: ScoreMetric,
}

impl SearchConfig {
    pub fn new(depth: usize, change_limit: usize) -> Self {
        Self {
            depth,
            change_limit,
            threshold: 0.4,
            max_gates: 10_000,
            score: ScoreMetric::Combined,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_max_gates(mut self, max_gates: usize) -> Self {
        self.max_gates = max_gates;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::InvalidConfig("window depth must be >= 1".into()));
        }
        if self.change_limit > self.depth - 1 {
            return Err(Error::InvalidConfig(format!(
                "change_limit {} exceeds depth - 1 = {}",
                self.change_limit,
                self.depth - 1
            )));
        }
        Ok(())
    }
}

/// Per-gate record of a committed search run. Entry `i` (0-based) describes
/// the state after gate `i + 1`; one oracle query per gate.
#[derive(Debug, Clone, Default)]
pub struct GateTrace {
    pub ops: Vec<Op>,
    pub probs_combined: Vec<f64>,
    pub probs_first: Vec<f64>,
    /// Whether the run stopped by reaching the score threshold.
    pub threshold_reached: bool,
}

impl GateTrace {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Cumulative oracle count at entry `i` (0-based): `i + 1`.
    pub fn oracle_count_at(&self, i: usize) -> u64 {
        (i + 1) as u64
    }
}

/// All operator strings of the given length with at most `change_limit`
/// internal transitions, in lexicographic order with `G1 < G2`. The count is
/// `2 * sum_{j=0}^{change_limit} C(depth-1, j)`.
pub fn enumerate_windows(depth: usize, change_limit: usize) -> Vec<Vec<Op>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(depth);
    fn rec(
        out: &mut Vec<Vec<Op>>,
        current: &mut Vec<Op>,
        depth: usize,
        changes_left: usize,
    ) {
        if current.len() == depth {
            out.push(current.clone());
            return;
        }
        for op in [Op::G1, Op::G2] {
            let transition = current.last().map(|&last| last != op).unwrap_or(false);
            if transition && changes_left == 0 {
                continue;
            }
            current.push(op);
            rec(
                out,
                current,
                depth,
                if transition {
                    changes_left - 1
                } else {
                    changes_left
                },
            );
            current.pop();
        }
    }
    rec(&mut out, &mut current, depth, change_limit);
    out
}

/// Number of windows [`enumerate_windows`] yields, without materializing.
pub fn window_count(depth: usize, change_limit: usize) -> u128 {
    let n = (depth - 1) as u128;
    let mut total = 1u128;
    let mut binom = 1u128;
    for j in 1..=(change_limit as u128).min(n) {
        binom = binom * (n - j + 1) / j;
        total += binom;
    }
    2 * total
}

struct WindowSearch<'e, E: Engine> {
    engine: &'e E,
    cfg: &'e SearchConfig,
    /// Prefix states along the DFS path; slot `d` holds the state after `d`
    /// gates of the current prefix. Gates are not involutions, so prefixes
    /// are cached rather than undone.
    layers: Vec<E::State>,
    ops: Vec<Op>,
    best_score: f64,
    best_ops: Vec<Op>,
    best_state: Option<E::State>,
}

impl<'e, E: Engine> WindowSearch<'e, E> {
    fn score(&self, state: &E::State) -> f64 {
        match self.cfg.score {
            ScoreMetric::Combined => self.engine.p_combined_optimum(state),
            ScoreMetric::FirstRegister => self.engine.p_first_optimum(state),
        }
    }

    fn descend(&mut self, level: usize, changes_left: usize) {
        if level == self.cfg.depth {
            let score = self.score(&self.layers[level]);
            // Strict improvement keeps the lexicographically first maximizer.
            if score > self.best_score {
                self.best_score = score;
                self.best_ops = self.ops.clone();
                self.best_state = Some(self.layers[level].clone());
            }
            return;
        }
        for op in [Op::G1, Op::G2] {
            let transition = self.ops.last().map(|&last| last != op).unwrap_or(false);
            if transition && changes_left == 0 {
                continue;
            }
            let (done, rest) = self.layers.split_at_mut(level + 1);
            rest[0].clone_from(&done[level]);
            self.engine.apply(&mut rest[0], op);
            self.ops.push(op);
            self.descend(
                level + 1,
                if transition {
                    changes_left - 1
                } else {
                    changes_left
                },
            );
            self.ops.pop();
        }
    }
}

/// Scores every admissible window from `start` and returns the best
/// `(ops, score, final state)`; ties break lexicographically with `G1` first.
pub fn best_window<E: Engine>(
    engine: &E,
    start: &E::State,
    cfg: &SearchConfig,
) -> (Vec<Op>, f64, E::State) {
    let mut search = WindowSearch {
        engine,
        cfg,
        layers: vec![start.clone(); cfg.depth + 1],
        ops: Vec::with_capacity(cfg.depth),
        best_score: f64::NEG_INFINITY,
        best_ops: Vec::new(),
        best_state: None,
    };
    search.descend(0, cfg.change_limit);
    (
        search.best_ops,
        search.best_score,
        search.best_state.expect("window sets are never empty"),
    )
}

fn search_on<E: Engine>(engine: &E, cfg: &SearchConfig) -> Result<GateTrace> {
    cfg.validate()?;
    let mut state = engine.init_state()?;
    let mut trace = GateTrace::default();
    'outer: while trace.len() < cfg.max_gates {
        let (ops, _, committed) = best_window(engine, &state, cfg);
        // Replay the committed window to record per-gate probabilities.
        let mut replay = state.clone();
        for &op in &ops {
            engine.apply(&mut replay, op);
            trace.ops.push(op);
            trace.probs_combined.push(engine.p_combined_optimum(&replay));
            trace.probs_first.push(engine.p_first_optimum(&replay));
        }
        state = committed;
        let scored = match cfg.score {
            ScoreMetric::Combined => &trace.probs_combined,
            ScoreMetric::FirstRegister => &trace.probs_first,
        };
        if scored.iter().any(|&p| p >= cfg.threshold) {
            trace.threshold_reached = true;
            break 'outer;
        }
    }
    Ok(trace)
}

/// Runs the windowed search on the chosen engine until the threshold is
/// reached or `max_gates` committed gates have been spent.
pub fn heuristic_search(
    inst: &ProblemInstance,
    cfg: &SearchConfig,
    engine: EngineKind,
) -> Result<GateTrace> {
    match engine.resolve(inst) {
        EngineKind::Dense => search_on(&DenseEngine::new(inst), cfg),
        EngineKind::Cluster => search_on(&ClusterEngine::new(inst), cfg),
        EngineKind::Auto => unreachable!("resolve never returns Auto"),
    }
}

/// Smallest 1-based gate index whose combined probability reaches the
/// threshold, or `None` when the trace never does.
pub fn oracles_to_threshold(trace: &GateTrace, threshold: f64) -> Option<usize> {
    trace
        .probs_combined
        .iter()
        .position(|&p| p >= threshold)
        .map(|i| i + 1)
}

/// Run-length encodes an operator sequence into alternating `G1`/`G2`
/// repetition counts `(alpha, beta)`, inserting a leading zero alpha when the
/// sequence opens with `G2` so that replaying `G1^a1 G2^b1 G1^a2 ...`
/// reproduces it exactly.
pub fn run_length_encode(ops: &[Op]) -> (Vec<u64>, Vec<u64>) {
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut expect = Op::G1;
    let mut i = 0;
    while i < ops.len() {
        let run = ops[i..].iter().take_while(|&&op| op == ops[i]).count();
        if ops[i] == expect {
            match expect {
                Op::G1 => alpha.push(run as u64),
                Op::G2 => beta.push(run as u64),
            }
            i += run;
        } else {
            match expect {
                Op::G1 => alpha.push(0),
                Op::G2 => beta.push(0),
            }
        }
        expect = match expect {
            Op::G1 => Op::G2,
            Op::G2 => Op::G1,
        };
    }
    (alpha, beta)
}

/// Inverse of [`run_length_encode`].
pub fn run_length_decode(alpha: &[u64], beta: &[u64]) -> Vec<Op> {
    let mut ops = Vec::new();
    let rounds = alpha.len().max(beta.len());
    for i in 0..rounds {
        for _ in 0..alpha.get(i).copied().unwrap_or(0) {
            ops.push(Op::G1);
        }
        for _ in 0..beta.get(i).copied().unwrap_or(0) {
            ops.push(Op::G2);
        }
    }
    ops
}
