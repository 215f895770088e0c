//! Engine abstraction over the dense and contracted simulators, so that
//! parameter search, baselines, and experiment runners can run on either.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::cluster::{ClusterIndex, ClusterState};
use crate::dense::{DenseState, DENSE_LIMIT_DEFAULT};
use crate::problem::ProblemInstance;
use crate::{Error, Result};

/// One dueling gate: update the first register against the second, or the
/// mirror. Each application consumes one oracle query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Op {
    G1,
    G2,
}

impl Op {
    /// Compact single-character form used in operator strings: `1` or `2`.
    pub fn as_char(self) -> char {
        match self {
            Op::G1 => '1',
            Op::G2 => '2',
        }
    }

    /// Renders an operator sequence as a compact string such as `"112122"`.
    pub fn string_of(ops: &[Op]) -> String {
        ops.iter().map(|op| op.as_char()).collect()
    }

    /// Parses a compact operator string.
    pub fn parse_string(text: &str) -> Result<Vec<Op>> {
        text.chars()
            .map(|c| match c {
                '1' => Ok(Op::G1),
                '2' => Ok(Op::G2),
                other => Err(Error::InvalidConfig(format!(
                    "operator string holds '{other}', expected '1' or '2'"
                ))),
            })
            .collect()
    }
}

impl fmt::Display for Op {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::G1 => write!(out, "G1"),
            Op::G2 => write!(out, "G2"),
        }
    }
}

/// Engine selection: explicit, or dense up to its memory limit and
/// contracted above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    #[default]
    Auto,
    Dense,
    Cluster,
}

impl EngineKind {
    /// Resolves `Auto` against the instance size.
    pub fn resolve(self, inst: &ProblemInstance) -> EngineKind {
        match self {
            EngineKind::Auto => {
                if inst.size() <= DENSE_LIMIT_DEFAULT {
                    EngineKind::Dense
                } else {
                    EngineKind::Cluster
                }
            }
            other => other,
        }
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text {
            "auto" => Ok(EngineKind::Auto),
            "dense" => Ok(EngineKind::Dense),
            "cluster" => Ok(EngineKind::Cluster),
            other => Err(Error::InvalidConfig(format!(
                "unknown engine '{other}', expected auto|dense|cluster"
            ))),
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineKind::Auto => write!(out, "auto"),
            EngineKind::Dense => write!(out, "dense"),
            EngineKind::Cluster => write!(out, "cluster"),
        }
    }
}

/// A simulation backend bound to one problem instance.
pub trait Engine {
    type State: Clone;

    fn init_state(&self) -> Result<Self::State>;
    fn apply(&self, state: &mut Self::State, op: Op);
    /// Combined two-register success probability of the optimum element.
    fn p_combined_optimum(&self, state: &Self::State) -> f64;
    /// First-register success probability of the optimum element.
    fn p_first_optimum(&self, state: &Self::State) -> f64;
    /// Element-level distribution of the combined output.
    fn output_distribution(&self, state: &Self::State) -> Vec<f64>;
    fn oracle_count(state: &Self::State) -> u64;
}

pub struct DenseEngine<'a> {
    inst: &'a ProblemInstance,
    limit: usize,
}

impl<'a> DenseEngine<'a> {
    pub fn new(inst: &'a ProblemInstance) -> Self {
        Self {
            inst,
            limit: DENSE_LIMIT_DEFAULT,
        }
    }

    pub fn with_limit(inst: &'a ProblemInstance, limit: usize) -> Self {
        Self { inst, limit }
    }
}

impl Engine for DenseEngine<'_> {
    type State = DenseState;

    fn init_state(&self) -> Result<DenseState> {
        DenseState::init_with_limit(self.inst, self.limit)
    }

    fn apply(&self, state: &mut DenseState, op: Op) {
        match op {
            Op::G1 => state.apply_g1(self.inst),
            Op::G2 => state.apply_g2(self.inst),
        }
    }

    fn p_combined_optimum(&self, state: &DenseState) -> f64 {
        state.p_combined_optimum(self.inst)
    }

    fn p_first_optimum(&self, state: &DenseState) -> f64 {
        state.p_first_optimum(self.inst)
    }

    fn output_distribution(&self, state: &DenseState) -> Vec<f64> {
        state.output_distribution(self.inst)
    }

    fn oracle_count(state: &DenseState) -> u64 {
        state.oracle_count()
    }
}

pub struct ClusterEngine {
    index: ClusterIndex,
}

impl ClusterEngine {
    pub fn new(inst: &ProblemInstance) -> Self {
        Self {
            index: ClusterIndex::build(inst),
        }
    }

    pub fn index(&self) -> &ClusterIndex {
        &self.index
    }
}

impl Engine for ClusterEngine {
    type State = ClusterState;

    fn init_state(&self) -> Result<ClusterState> {
        Ok(ClusterState::init(&self.index))
    }

    fn apply(&self, state: &mut ClusterState, op: Op) {
        match op {
            Op::G1 => state.apply_g1(&self.index),
            Op::G2 => state.apply_g2(&self.index),
        }
    }

    fn p_combined_optimum(&self, state: &ClusterState) -> f64 {
        state.p_combined_optimum(&self.index)
    }

    fn p_first_optimum(&self, state: &ClusterState) -> f64 {
        state.p_first_optimum(&self.index)
    }

    fn output_distribution(&self, state: &ClusterState) -> Vec<f64> {
        self.index
            .expand_distribution(&state.output_distribution(&self.index))
    }

    fn oracle_count(state: &ClusterState) -> u64 {
        state.oracle_count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{DistributionSpec, MeasureSpec};

    #[test]
    fn op_string_round_trip() {
        let ops = vec![Op::G1, Op::G1, Op::G2, Op::G1];
        let text = Op::string_of(&ops);
        assert_eq!(text, "1121");
        assert_eq!(Op::parse_string(&text).unwrap(), ops);
        assert!(Op::parse_string("10").is_err());
    }

    #[test]
    fn auto_resolves_by_size() {
        let small = ProblemInstance::build(
            8,
            MeasureSpec::identity(),
            &DistributionSpec::ModularUniform { t: 1, s: 16 },
        )
        .unwrap();
        assert_eq!(EngineKind::Auto.resolve(&small), EngineKind::Dense);
        let large = ProblemInstance::build(
            13,
            MeasureSpec::identity(),
            &DistributionSpec::ModularUniform { t: 1, s: 91 },
        )
        .unwrap();
        assert_eq!(EngineKind::Auto.resolve(&large), EngineKind::Cluster);
        assert_eq!(EngineKind::Dense.resolve(&large), EngineKind::Dense);
    }

    #[test]
    fn engines_agree_on_probabilities() {
        let inst = ProblemInstance::build(
            6,
            MeasureSpec::identity(),
            &DistributionSpec::ModularUniform { t: 1, s: 8 },
        )
        .unwrap();
        let dense = DenseEngine::new(&inst);
        let cluster = ClusterEngine::new(&inst);
        let mut ds = dense.init_state().unwrap();
        let mut cs = cluster.init_state().unwrap();
        for op in [Op::G1, Op::G2, Op::G1, Op::G1, Op::G2] {
            dense.apply(&mut ds, op);
            cluster.apply(&mut cs, op);
        }
        assert!((dense.p_combined_optimum(&ds) - cluster.p_combined_optimum(&cs)).abs() < 1e-12);
        assert!((dense.p_first_optimum(&ds) - cluster.p_first_optimum(&cs)).abs() < 1e-12);
        let dd = dense.output_distribution(&ds);
        let cd = cluster.output_distribution(&cs);
        for (a, b) in dd.iter().zip(&cd) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(DenseEngine::oracle_count(&ds), 5);
        assert_eq!(ClusterEngine::oracle_count(&cs), 5);
    }
}
