//! Dense two-register state evolution on the full `N x N` amplitude grid.
//!
//! Both dueling gates are real orthogonal operators, so amplitudes stay real
//! throughout. Each gate costs `O(N^2)`: a per-column (or per-row) oracle-
//! weighted sum followed by a reflection about the column (row) mean.

use crate::problem::ProblemInstance;
use crate::{Error, Result};

/// Default refusal threshold for dense allocation: `N = 4096` already needs
/// a 16.7M-entry grid. Larger spaces belong to the cluster engine.
pub const DENSE_LIMIT_DEFAULT: usize = 4096;

/// Real amplitude grid `psi[k][l]` over both registers, with an oracle tally.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    size: usize,
    amp: Vec<f64>,
    oracle_count: u64,
}

impl DenseState {
    /// Uniform superposition over both registers: every amplitude `1/N`.
    pub fn init(inst: &ProblemInstance) -> Result<Self> {
        Self::init_with_limit(inst, DENSE_LIMIT_DEFAULT)
    }

    /// As [`DenseState::init`] with an explicit memory refusal threshold.
    pub fn init_with_limit(inst: &ProblemInstance, limit: usize) -> Result<Self> {
        let size = inst.size();
        if size > limit {
            return Err(Error::DenseLimit { size, limit });
        }
        Ok(Self {
            size,
            amp: vec![1.0 / size as f64; size * size],
            oracle_count: 0,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Grover iterations applied so far (one oracle query each).
    pub fn oracle_count(&self) -> u64 {
        self.oracle_count
    }

    /// Amplitude `psi[x1][x2]`, both elements 1-based.
    pub fn amplitude(&self, x1: usize, x2: usize) -> f64 {
        self.amp[(x1 - 1) * self.size + (x2 - 1)]
    }

    /// Row-major backing grid, `k * N + l`.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amp
    }

    pub(crate) fn from_parts(size: usize, amp: Vec<f64>, oracle_count: u64) -> Self {
        Self {
            size,
            amp,
            oracle_count,
        }
    }

    /// Builds a state from a raw row-major grid; the length must be `N^2` for
    /// a power-of-two `N` and the grid normalized to unit norm.
    pub fn from_amplitudes(size: usize, amp: Vec<f64>) -> Result<Self> {
        if !size.is_power_of_two() || amp.len() != size * size {
            return Err(Error::InvalidConfig(format!(
                "amplitude grid of length {} does not match size {size}",
                amp.len()
            )));
        }
        let norm_sq: f64 = amp.iter().map(|a| a * a).sum();
        if (norm_sq - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "amplitude grid has squared norm {norm_sq}, expected 1"
            )));
        }
        Ok(Self {
            size,
            amp,
            oracle_count: 0,
        })
    }

    /// Squared norm via compensated summation; the naive sum's own rounding
    /// would mask drifts near 1e-12 on large grids.
    pub fn norm_sq(&self) -> f64 {
        compensated_sum_of_squares(&self.amp)
    }

    /// Updates the first register against the second: for each column `l`,
    /// Grover-amplifies solutions measured better than `l`.
    ///
    /// The oracle-weighted column sums use compensated accumulation; plain
    /// summation drifts the norm past 1e-12 within a few thousand gates.
    pub fn apply_g1(&mut self, inst: &ProblemInstance) {
        assert_eq!(self.size, inst.size(), "state/instance dimension mismatch");
        let n = self.size;
        let v = inst.measure_table();
        let f = inst.indicator_table();
        let mut sums = vec![0.0; n];
        let mut comp = vec![0.0; n];
        for k in 0..n {
            let row = &self.amp[k * n..(k + 1) * n];
            let vk = v[k];
            let fk = f[k];
            for l in 0..n {
                let term = if fk && vk < v[l] { -row[l] } else { row[l] };
                let y = term - comp[l];
                let t = sums[l] + y;
                comp[l] = (t - sums[l]) - y;
                sums[l] = t;
            }
        }
        let scale = 2.0 / n as f64;
        for k in 0..n {
            let row = &mut self.amp[k * n..(k + 1) * n];
            if f[k] {
                let vk = v[k];
                for l in 0..n {
                    let sign = if vk < v[l] { -1.0 } else { 1.0 };
                    row[l] = scale * sums[l] - sign * row[l];
                }
            } else {
                for l in 0..n {
                    row[l] = scale * sums[l] - row[l];
                }
            }
        }
        self.oracle_count += 1;
    }

    /// Mirror of [`DenseState::apply_g1`] with the registers exchanged.
    pub fn apply_g2(&mut self, inst: &ProblemInstance) {
        assert_eq!(self.size, inst.size(), "state/instance dimension mismatch");
        let n = self.size;
        let v = inst.measure_table();
        let f = inst.indicator_table();
        let scale = 2.0 / n as f64;
        for k in 0..n {
            let vk = v[k];
            let row = &mut self.amp[k * n..(k + 1) * n];
            let mut sum = 0.0;
            let mut comp = 0.0;
            for l in 0..n {
                let term = if f[l] && v[l] < vk { -row[l] } else { row[l] };
                let y = term - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
            for l in 0..n {
                let sign = if f[l] && v[l] < vk { -1.0 } else { 1.0 };
                row[l] = scale * sum - sign * row[l];
            }
        }
        self.oracle_count += 1;
    }

    /// Probability that the better of the two measured registers equals each
    /// element: solutions beat non-solutions, smaller measure wins between
    /// solutions, and the first register wins the remaining ties.
    pub fn output_distribution(&self, inst: &ProblemInstance) -> Vec<f64> {
        assert_eq!(self.size, inst.size(), "state/instance dimension mismatch");
        let n = self.size;
        let v = inst.measure_table();
        let f = inst.indicator_table();
        let mut dist = vec![0.0; n];
        for k in 0..n {
            let row = &self.amp[k * n..(k + 1) * n];
            for l in 0..n {
                let p = row[l] * row[l];
                let winner = match (f[k], f[l]) {
                    (true, false) => k,
                    (false, true) => l,
                    (true, true) => {
                        if v[l] < v[k] {
                            l
                        } else {
                            k
                        }
                    }
                    (false, false) => k,
                };
                dist[winner] += p;
            }
        }
        dist
    }

    /// Marginal distribution of the first register alone.
    pub fn first_register_distribution(&self) -> Vec<f64> {
        let n = self.size;
        let mut dist = vec![0.0; n];
        for k in 0..n {
            let row = &self.amp[k * n..(k + 1) * n];
            dist[k] = row.iter().map(|a| a * a).sum();
        }
        dist
    }

    /// Combined success probability of the optimum, in `O(N)`.
    pub fn p_combined_optimum(&self, inst: &ProblemInstance) -> f64 {
        let n = self.size;
        let v = inst.measure_table();
        let f = inst.indicator_table();
        let best = inst.optimum() - 1;
        let vb = v[best];
        let row = &self.amp[best * n..(best + 1) * n];
        let mut p = 0.0;
        for l in 0..n {
            // As first register the optimum loses only to a strictly
            // better-measured solution, which cannot exist.
            if !f[l] || v[l] >= vb {
                p += row[l] * row[l];
            }
        }
        for k in 0..n {
            if k == best {
                continue;
            }
            // As second register it additionally loses measure ties.
            if !f[k] || v[k] > vb {
                let a = self.amp[k * n + best];
                p += a * a;
            }
        }
        p
    }

    /// First-register success probability of the optimum, in `O(N)`.
    pub fn p_first_optimum(&self, inst: &ProblemInstance) -> f64 {
        let n = self.size;
        let best = inst.optimum() - 1;
        self.amp[best * n..(best + 1) * n]
            .iter()
            .map(|a| a * a)
            .sum()
    }
}

/// Kahan-compensated sum of squares.
pub(crate) fn compensated_sum_of_squares(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &a in values {
        let y = a * a - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// First local maximum of a probability series indexed from 1: the smallest
/// `i` with `series[i] >= series[i+1]`, the final entry qualifying when the
/// series ends rising. Plateaus resolve to their earliest sample.
pub fn first_local_max(series: &[f64]) -> Option<(usize, f64)> {
    if series.is_empty() {
        return None;
    }
    for i in 0..series.len() - 1 {
        if series[i] >= series[i + 1] {
            return Some((i + 1, series[i]));
        }
    }
    Some((series.len(), series[series.len() - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{DistributionSpec, MeasureSpec};

    fn fig2() -> ProblemInstance {
        ProblemInstance::build(
            8,
            MeasureSpec::identity(),
            &DistributionSpec::ModularUniform { t: 1, s: 16 },
        )
        .unwrap()
    }

    fn run_rounds(inst: &ProblemInstance, rounds: usize) -> (Vec<f64>, Vec<f64>, DenseState) {
        let mut state = DenseState::init(inst).unwrap();
        let mut combined = Vec::new();
        let mut first = Vec::new();
        for _ in 0..rounds {
            state.apply_g1(inst);
            state.apply_g2(inst);
            combined.push(state.p_combined_optimum(inst));
            first.push(state.p_first_optimum(inst));
        }
        (combined, first, state)
    }

    #[test]
    fn init_is_uniform() {
        let small = ProblemInstance::build(
            1,
            MeasureSpec::identity(),
            &DistributionSpec::Explicit { bits: vec![1, 0] },
        )
        .unwrap();
        let state = DenseState::init(&small).unwrap();
        assert!(state.amplitudes().iter().all(|&a| a == 0.5));
        let state = DenseState::init(&fig2()).unwrap();
        assert!(state.amplitudes().iter().all(|&a| a == 1.0 / 256.0));
        assert_eq!(state.oracle_count(), 0);
    }

    #[test]
    fn init_refuses_above_limit() {
        let inst = ProblemInstance::build(
            13,
            MeasureSpec::identity(),
            &DistributionSpec::ModularUniform { t: 1, s: 91 },
        )
        .unwrap();
        match DenseState::init(&inst) {
            Err(Error::DenseLimit { size, limit }) => {
                assert_eq!(size, 8192);
                assert_eq!(limit, DENSE_LIMIT_DEFAULT);
            }
            other => panic!("expected dense limit refusal, got {other:?}"),
        }
    }

    #[test]
    fn ten_rounds_reach_published_peak() {
        let inst = fig2();
        let (combined, first, _) = run_rounds(&inst, 10);
        assert!((combined[9] - 0.7061).abs() < 5e-4, "P = {}", combined[9]);
        assert!((first[9] - 0.3498).abs() < 5e-4, "P' = {}", first[9]);
    }

    #[test]
    fn no_solution_gate_is_pure_diffusion_fixpoint() {
        // With f identically zero the oracle degenerates to the identity and
        // the gate to the diffusion operator, which fixes the uniform state.
        let inst = ProblemInstance::from_tables_unchecked(
            (1..=8).map(|x| x as f64).collect(),
            vec![false; 8],
        );
        let mut state = DenseState::init(&inst).unwrap();
        let before = state.amplitudes().to_vec();
        state.apply_g1(&inst);
        state.apply_g2(&inst);
        for (a, b) in state.amplitudes().iter().zip(&before) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    /// Brute-force gate application via the O(N^4) component formula
    /// `G1[kl][k'l'] = d(l,l') (2/N - d(k,k')) o(k',l')`, and its mirror.
    fn matrix_oracle_apply(state: &DenseState, inst: &ProblemInstance, first: bool) -> Vec<f64> {
        let n = state.size();
        let amp = state.amplitudes();
        let mut out = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                for kp in 0..n {
                    for lp in 0..n {
                        let element = if first {
                            if l != lp {
                                continue;
                            }
                            let delta = if k == kp { 1.0 } else { 0.0 };
                            (2.0 / n as f64 - delta) * inst.oracle_sign(kp + 1, lp + 1)
                        } else {
                            if k != kp {
                                continue;
                            }
                            let delta = if l == lp { 1.0 } else { 0.0 };
                            (2.0 / n as f64 - delta) * inst.oracle_sign(lp + 1, kp + 1)
                        };
                        acc += element * amp[kp * n + lp];
                    }
                }
                out[k * n + l] = acc;
            }
        }
        out
    }

    /// Intermediate O(N^3) form: one oracle-signed sum per output entry.
    fn cubic_oracle_apply(state: &DenseState, inst: &ProblemInstance, first: bool) -> Vec<f64> {
        let n = state.size();
        let amp = state.amplitudes();
        let mut out = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                if first {
                    for kp in 0..n {
                        let delta = if k == kp { 1.0 } else { 0.0 };
                        acc += (2.0 / n as f64 - delta)
                            * inst.oracle_sign(kp + 1, l + 1)
                            * amp[kp * n + l];
                    }
                } else {
                    for lp in 0..n {
                        let delta = if l == lp { 1.0 } else { 0.0 };
                        acc += (2.0 / n as f64 - delta)
                            * inst.oracle_sign(lp + 1, k + 1)
                            * amp[k * n + lp];
                    }
                }
                out[k * n + l] = acc;
            }
        }
        out
    }

    fn random_state(size: usize, seed: u64) -> DenseState {
        // Small deterministic LCG; normalized to unit norm.
        let mut x = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
        let mut amp = Vec::with_capacity(size * size);
        for _ in 0..size * size {
            x = x.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            amp.push(((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5);
        }
        let norm = amp.iter().map(|a| a * a).sum::<f64>().sqrt();
        for a in &mut amp {
            *a /= norm;
        }
        DenseState::from_parts(size, amp, 0)
    }

    #[test]
    fn gates_match_matrix_and_cubic_oracles() {
        for n in [1u32, 2, 3, 4] {
            let size = 1usize << n;
            let m = crate::problem::uniform_solution_count(size);
            let inst = ProblemInstance::build(
                n,
                MeasureSpec::identity(),
                &DistributionSpec::modular_uniform(size, m, 1).unwrap(),
            )
            .unwrap();
            for seed in 0..3 {
                let start = random_state(size, 7 * seed + 1);
                for first in [true, false] {
                    let mut fast = start.clone();
                    if first {
                        fast.apply_g1(&inst);
                    } else {
                        fast.apply_g2(&inst);
                    }
                    let quartic = matrix_oracle_apply(&start, &inst, first);
                    let cubic = cubic_oracle_apply(&start, &inst, first);
                    for i in 0..size * size {
                        assert!((fast.amplitudes()[i] - quartic[i]).abs() <= 1e-12);
                        assert!((fast.amplitudes()[i] - cubic[i]).abs() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn transpose_symmetry_between_gates() {
        let inst = ProblemInstance::build(
            4,
            MeasureSpec::identity(),
            &DistributionSpec::ModularUniform { t: 1, s: 4 },
        )
        .unwrap();
        let n = inst.size();
        let start = random_state(n, 99);
        let transpose = |s: &DenseState| {
            let mut t = vec![0.0; n * n];
            for k in 0..n {
                for l in 0..n {
                    t[l * n + k] = s.amplitudes()[k * n + l];
                }
            }
            DenseState::from_parts(n, t, 0)
        };
        let mut g2_of_t = transpose(&start);
        g2_of_t.apply_g2(&inst);
        let mut g1 = start.clone();
        g1.apply_g1(&inst);
        let t_of_g1 = transpose(&g1);
        for i in 0..n * n {
            assert!((g2_of_t.amplitudes()[i] - t_of_g1.amplitudes()[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn norm_preserved_over_many_gates() {
        let inst = fig2();
        let mut state = DenseState::init(&inst).unwrap();
        for _ in 0..500 {
            state.apply_g1(&inst);
            state.apply_g2(&inst);
        }
        assert!((state.norm_sq() - 1.0).abs() <= 1e-12);
        assert_eq!(state.oracle_count(), 1000);
    }

    #[test]
    fn output_distribution_initial_closed_form() {
        let inst = fig2();
        let state = DenseState::init(&inst).unwrap();
        let dist = state.output_distribution(&inst);
        let n = inst.size() as f64;
        let expected = 2.0 / n - 1.0 / (n * n);
        assert!((dist[0] - expected).abs() < 1e-15);
        assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((state.p_combined_optimum(&inst) - expected).abs() < 1e-15);
    }

    /// Independent pairwise enumeration of the better() rule, written
    /// directly from its dominance order.
    fn enumerated_distribution(state: &DenseState, inst: &ProblemInstance) -> Vec<f64> {
        let n = state.size();
        let mut dist = vec![0.0; n];
        for x1 in 1..=n {
            for x2 in 1..=n {
                let p = state.amplitude(x1, x2).powi(2);
                let better = match (inst.is_solution(x1), inst.is_solution(x2)) {
                    (true, true) => {
                        if inst.measure(x2) < inst.measure(x1) {
                            x2
                        } else {
                            x1
                        }
                    }
                    (false, true) => x2,
                    _ => x1,
                };
                dist[better - 1] += p;
            }
        }
        dist
    }

    #[test]
    fn second_and_third_solution_masses_after_ten_rounds() {
        let inst = fig2();
        let (_, _, state) = run_rounds(&inst, 10);
        let dist = state.output_distribution(&inst);
        // Values computed independently by exhaustive pair enumeration.
        assert!((dist[0] - 0.705912456343).abs() < 1e-9);
        assert!((dist[16] - 0.119326085819).abs() < 1e-9);
        assert!((dist[32] - 0.034214551678).abs() < 1e-9);
        let oracle = enumerated_distribution(&state, &inst);
        for (a, b) in dist.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn first_register_distribution_examples() {
        let inst = fig2();
        let state = DenseState::init(&inst).unwrap();
        for p in state.first_register_distribution() {
            assert!((p - 1.0 / 256.0).abs() < 1e-15);
        }
        let (_, first, state) = run_rounds(&inst, 12);
        let (at, peak) = first_local_max(&first).unwrap();
        assert_eq!(at, 10);
        assert!((peak - 0.3498).abs() < 5e-4);
        let dist = state.first_register_distribution();
        assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn split_solution_row_peaks() {
        let inst = ProblemInstance::build(
            8,
            MeasureSpec::identity(),
            &DistributionSpec::Union {
                parts: vec![
                    DistributionSpec::Range { lo: 1, hi: 1 },
                    DistributionSpec::Range { lo: 242, hi: 256 },
                ],
            },
        )
        .unwrap();
        let (combined, first, _) = run_rounds(&inst, 15);
        let (at, peak) = first_local_max(&combined).unwrap();
        assert_eq!(at, 8);
        assert!((peak - 0.9919).abs() < 5e-4);
        let (at, peak) = first_local_max(&first).unwrap();
        assert_eq!(at, 8);
        assert!((peak - 0.5035).abs() < 5e-4);
    }

    #[test]
    fn first_local_max_rules() {
        assert_eq!(first_local_max(&[0.1, 0.2, 0.3]), Some((3, 0.3)));
        assert_eq!(first_local_max(&[0.5, 0.5, 0.9]), Some((1, 0.5)));
        assert_eq!(first_local_max(&[0.0112, 0.001]), Some((1, 0.0112)));
        assert_eq!(first_local_max(&[]), None);
    }

    #[test]
    fn tail_range_first_local_max_row() {
        let inst = ProblemInstance::build(
            8,
            MeasureSpec::identity(),
            &DistributionSpec::Range { lo: 241, hi: 256 },
        )
        .unwrap();
        let (combined, _, _) = run_rounds(&inst, 5);
        let (at, peak) = first_local_max(&combined).unwrap();
        assert_eq!(at, 1);
        assert!((peak - 0.0112).abs() < 5e-4);
    }
}
