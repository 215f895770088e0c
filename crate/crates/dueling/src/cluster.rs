//! Contracted state evolution on equivalence classes of elements.
//!
//! Elements that the comparison oracle can never tell apart — solutions
//! sharing one measure value, or maximal runs of non-solutions with no
//! solution measure inside their span — carry identical amplitudes at every
//! stage after initialization. Grouping them into clusters compresses the
//! `N x N` grid to `q x q` exactly, where `q` is the cluster count.

use crate::dense::{DenseState, DENSE_LIMIT_DEFAULT};
use crate::problem::ProblemInstance;
use crate::{Error, Result};

/// One equivalence class: either all solutions with a common measure value
/// or a maximal solution-free run of non-solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// Number of member elements.
    pub size: usize,
    /// Shared indicator value of the members.
    pub is_solution: bool,
    /// Smallest member measure.
    pub v_min: f64,
    /// Largest member measure; equals `v_min` for solution clusters.
    pub v_max: f64,
    /// Member elements, 1-based, ascending.
    pub members: Vec<usize>,
}

/// The ordered partition of a search space into clusters.
///
/// Clusters are sorted by `(measure, indicator)` ascending — the indicator
/// breaking ties so that a non-solution cluster precedes a solution cluster
/// pinned at the same measure point — and indexed `1..=q` in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterIndex {
    clusters: Vec<Cluster>,
    element_cluster: Vec<usize>,
    weights: Vec<f64>,
    total: usize,
}

impl ClusterIndex {
    /// Partitions the instance by a single sweep over elements sorted by
    /// `(measure, indicator)`; `O(N log N)`.
    pub fn build(inst: &ProblemInstance) -> Self {
        let n = inst.size();
        let mut order: Vec<usize> = (1..=n).collect();
        order.sort_by(|&a, &b| {
            inst.measure(a)
                .partial_cmp(&inst.measure(b))
                .expect("measure values are comparable")
                .then(inst.is_solution(a).cmp(&inst.is_solution(b)))
                .then(a.cmp(&b))
        });

        let mut clusters: Vec<Cluster> = Vec::new();
        for x in order {
            let sol = inst.is_solution(x);
            let vx = inst.measure(x);
            let extend = match clusters.last() {
                // In sweep order any solution between two non-solutions has
                // already closed the earlier run, so a non-solution always
                // joins a trailing non-solution cluster, and a solution joins
                // a trailing solution cluster at the same measure point.
                Some(c) if !sol && !c.is_solution => true,
                Some(c) if sol && c.is_solution && c.v_min == vx => true,
                _ => false,
            };
            if extend {
                let c = clusters.last_mut().expect("cluster list is nonempty");
                c.size += 1;
                c.v_max = vx;
                c.members.push(x);
            } else {
                clusters.push(Cluster {
                    size: 1,
                    is_solution: sol,
                    v_min: vx,
                    v_max: vx,
                    members: vec![x],
                });
            }
        }

        let mut element_cluster = vec![0usize; n];
        for (pos, c) in clusters.iter().enumerate() {
            for &x in &c.members {
                element_cluster[x - 1] = pos + 1;
            }
        }
        let weights = clusters
            .iter()
            .map(|c| (c.size as f64 / n as f64).sqrt())
            .collect();
        Self {
            clusters,
            element_cluster,
            weights,
            total: n,
        }
    }

    /// Cluster count `q`.
    pub fn q(&self) -> usize {
        self.clusters.len()
    }

    /// Total element count `N`.
    pub fn total_elements(&self) -> usize {
        self.total
    }

    /// Clusters in index order; position `i` holds index `i + 1`.
    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn cluster(&self, idx: usize) -> &Cluster {
        &self.clusters[idx - 1]
    }

    /// Index of the cluster containing element `x`.
    pub fn cluster_of(&self, x: usize) -> usize {
        self.element_cluster[x - 1]
    }

    /// `sqrt(size(idx) / N)`.
    pub fn weight(&self, idx: usize) -> f64 {
        self.weights[idx - 1]
    }

    /// Contracted oracle sign: `-1` when cluster `eta` is a solution cluster
    /// ordered strictly before `xi`, `+1` otherwise. Agrees with the
    /// element-level sign for any pair of representatives.
    pub fn oracle_sign(&self, eta: usize, xi: usize) -> f64 {
        if self.clusters[eta - 1].is_solution && eta < xi {
            -1.0
        } else {
            1.0
        }
    }

    /// Index of the cluster holding the optimum: the solution cluster with
    /// the smallest measure.
    pub fn optimum_cluster(&self) -> usize {
        self.clusters
            .iter()
            .position(|c| c.is_solution)
            .map(|pos| pos + 1)
            .expect("instance holds at least one solution")
    }

    /// Spreads a per-cluster distribution uniformly over member elements.
    pub fn expand_distribution(&self, cluster_dist: &[f64]) -> Vec<f64> {
        assert_eq!(cluster_dist.len(), self.q());
        let mut out = vec![0.0; self.total];
        for (c, &p) in self.clusters.iter().zip(cluster_dist) {
            let share = p / c.size as f64;
            for &x in &c.members {
                out[x - 1] = share;
            }
        }
        out
    }

    /// CSV dump `idx,size,f,v_min,v_max`, one row per cluster.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("idx,size,f,v_min,v_max\n");
        for (pos, c) in self.clusters.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                pos + 1,
                c.size,
                c.is_solution as u8,
                crate::experiments::io::fmt_float(c.v_min),
                crate::experiments::io::fmt_float(c.v_max),
            ));
        }
        out
    }
}

/// Real amplitude grid over the contracted basis, with an oracle tally.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterState {
    q: usize,
    amp: Vec<f64>,
    oracle_count: u64,
}

impl ClusterState {
    /// Contraction of the uniform superposition:
    /// `psi[k][l] = sqrt(size_k * size_l) / N`.
    pub fn init(index: &ClusterIndex) -> Self {
        let q = index.q();
        let mut amp = vec![0.0; q * q];
        for k in 0..q {
            for l in 0..q {
                amp[k * q + l] = index.weights[k] * index.weights[l];
            }
        }
        Self {
            q,
            amp,
            oracle_count: 0,
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn oracle_count(&self) -> u64 {
        self.oracle_count
    }

    /// Amplitude on cluster pair `(kappa, lambda)`, 1-based.
    pub fn amplitude(&self, kappa: usize, lambda: usize) -> f64 {
        self.amp[(kappa - 1) * self.q + (lambda - 1)]
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amp
    }

    pub fn norm_sq(&self) -> f64 {
        crate::dense::compensated_sum_of_squares(&self.amp)
    }

    /// Contracted first-register update: per column `lambda`, a size-weighted
    /// oracle sum followed by the reflection; `O(q^2)`.
    pub fn apply_g1(&mut self, index: &ClusterIndex) {
        assert_eq!(self.q, index.q(), "state/index dimension mismatch");
        let q = self.q;
        let w = &index.weights;
        let mut sums = vec![0.0; q];
        for k in 0..q {
            let row = &self.amp[k * q..(k + 1) * q];
            let wk = w[k];
            if index.clusters[k].is_solution {
                // o(k, l) = -1 exactly on the tail l > k.
                for l in 0..=k {
                    sums[l] += wk * row[l];
                }
                for l in k + 1..q {
                    sums[l] -= wk * row[l];
                }
            } else {
                for l in 0..q {
                    sums[l] += wk * row[l];
                }
            }
        }
        for k in 0..q {
            let row = &mut self.amp[k * q..(k + 1) * q];
            let two_wk = 2.0 * w[k];
            if index.clusters[k].is_solution {
                for l in 0..=k {
                    row[l] = two_wk * sums[l] - row[l];
                }
                for l in k + 1..q {
                    row[l] += two_wk * sums[l];
                }
            } else {
                for l in 0..q {
                    row[l] = two_wk * sums[l] - row[l];
                }
            }
        }
        self.oracle_count += 1;
    }

    /// Mirror of [`ClusterState::apply_g1`] with the registers exchanged.
    pub fn apply_g2(&mut self, index: &ClusterIndex) {
        assert_eq!(self.q, index.q(), "state/index dimension mismatch");
        let q = self.q;
        let w = &index.weights;
        for k in 0..q {
            let row = &mut self.amp[k * q..(k + 1) * q];
            let mut sum = 0.0;
            for l in 0..q {
                // o(l, k) = -1 iff cluster l is a solution cluster with l < k.
                let signed = if index.clusters[l].is_solution && l < k {
                    -row[l]
                } else {
                    row[l]
                };
                sum += w[l] * signed;
            }
            for l in 0..q {
                let two_wl = 2.0 * w[l];
                if index.clusters[l].is_solution && l < k {
                    row[l] += two_wl * sum;
                } else {
                    row[l] = two_wl * sum - row[l];
                }
            }
        }
        self.oracle_count += 1;
    }

    /// Probability that the combined output lands in each cluster, under the
    /// same dominance rule as the dense output distribution applied
    /// cluster-wise.
    pub fn output_distribution(&self, index: &ClusterIndex) -> Vec<f64> {
        let q = self.q;
        let mut dist = vec![0.0; q];
        for k in 0..q {
            let row = &self.amp[k * q..(k + 1) * q];
            for l in 0..q {
                let p = row[l] * row[l];
                let winner = match (index.clusters[k].is_solution, index.clusters[l].is_solution) {
                    (true, true) => {
                        // Distinct solution clusters never share a measure
                        // value, so smaller index means smaller measure.
                        if l < k {
                            l
                        } else {
                            k
                        }
                    }
                    (false, true) => l,
                    _ => k,
                };
                dist[winner] += p;
            }
        }
        dist
    }

    /// Per-cluster marginal of the first register.
    pub fn first_register_distribution(&self) -> Vec<f64> {
        let q = self.q;
        (0..q)
            .map(|k| self.amp[k * q..(k + 1) * q].iter().map(|a| a * a).sum())
            .collect()
    }

    /// Combined success probability of the optimum element, in `O(q)`.
    pub fn p_combined_optimum(&self, index: &ClusterIndex) -> f64 {
        let q = self.q;
        let best = index.optimum_cluster() - 1;
        let mut p = 0.0;
        let row = &self.amp[best * q..(best + 1) * q];
        for l in 0..q {
            // The optimum cluster loses as first register only to a solution
            // cluster with strictly smaller index, which cannot exist.
            p += row[l] * row[l];
        }
        for k in 0..q {
            if k == best {
                continue;
            }
            // As second register it loses to solution clusters at smaller
            // index (none) and wins everything else except same-cluster ties,
            // and those keep the mass inside the cluster anyway.
            if !index.clusters[k].is_solution || k > best {
                let a = self.amp[k * q + best];
                p += a * a;
            }
        }
        p / index.clusters[best].size as f64
    }

    /// First-register success probability of the optimum element, in `O(q)`.
    pub fn p_first_optimum(&self, index: &ClusterIndex) -> f64 {
        let q = self.q;
        let best = index.optimum_cluster() - 1;
        let mass: f64 = self.amp[best * q..(best + 1) * q]
            .iter()
            .map(|a| a * a)
            .sum();
        mass / index.clusters[best].size as f64
    }

    /// Expands to the dense grid: `psi[x1][x2] = psi[k][l] / sqrt(size_k * size_l)`
    /// for `x1` in cluster `k`, `x2` in cluster `l`.
    pub fn expand_to_dense(&self, index: &ClusterIndex) -> Result<DenseState> {
        self.expand_to_dense_with_limit(index, DENSE_LIMIT_DEFAULT)
    }

    pub fn expand_to_dense_with_limit(
        &self,
        index: &ClusterIndex,
        limit: usize,
    ) -> Result<DenseState> {
        let n = index.total_elements();
        if n > limit {
            return Err(Error::DenseLimit { size: n, limit });
        }
        let q = self.q;
        let mut amp = vec![0.0; n * n];
        for k in 0..q {
            let ck = &index.clusters[k];
            for l in 0..q {
                let cl = &index.clusters[l];
                let share = self.amp[k * q + l]
                    / ((ck.size as f64).sqrt() * (cl.size as f64).sqrt());
                for &x1 in &ck.members {
                    let base = (x1 - 1) * n;
                    for &x2 in &cl.members {
                        amp[base + (x2 - 1)] = share;
                    }
                }
            }
        }
        Ok(DenseState::from_parts(n, amp, self.oracle_count))
    }
}
