//! Influence maximization under the independent cascade model.
//!
//! Every edge is live independently with its probability. The influence of a
//! set is the expected fraction of nodes reachable from it over live edges.
//! For a fixed live-edge graph influence is a coverage function whose
//! universe is the node set, with `P_v` the nodes that reach `v`; averaging
//! over graphs and a uniform target node gives
//! `F̄(x) = E_G E_v [min{1, Σ_{u∈P_v} x_u}]`.

mod generate;
mod graph;

pub use generate::{erdos_renyi, preferential_attachment};
pub use graph::{influence_of_set, DirectedGraph};

use rand::{Rng, RngCore};

use crate::error::{invalid, Result};
use crate::matroid::Matroid;
use crate::optimizer::StochasticObjective;
use crate::point::{check_dim, FractionalPoint, Subgradient};
use crate::wcf::WeightedCoverage;
use graph::{bfs, with_marks};

#[derive(Clone, Debug)]
enum EdgeProbs {
    Uniform(f64),
    /// Parallel to the reverse adjacency lists.
    PerEdge(Vec<Vec<f64>>),
}

/// Independent cascade model over a fixed graph.
#[derive(Clone, Debug)]
pub struct IcModel {
    graph: DirectedGraph,
    probs: EdgeProbs,
}

fn check_prob(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} is outside [0, 1]")));
    }
    Ok(())
}

impl IcModel {
    pub fn uniform(graph: DirectedGraph, p: f64) -> Result<Self> {
        check_prob(p)?;
        Ok(IcModel {
            graph,
            probs: EdgeProbs::Uniform(p),
        })
    }

    /// Per-edge probabilities given by `prob(src, dst)`.
    pub fn per_edge(graph: DirectedGraph, prob: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut probs = Vec::with_capacity(graph.n_nodes());
        for v in 0..graph.n_nodes() {
            let row: Vec<f64> = graph.in_neighbors(v).iter().map(|&u| prob(u, v)).collect();
            for &p in &row {
                check_prob(p)?;
            }
            probs.push(row);
        }
        Ok(IcModel {
            graph,
            probs: EdgeProbs::PerEdge(probs),
        })
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn n_nodes(&self) -> usize {
        self.graph.n_nodes()
    }

    /// Probability of the `j`-th in-edge of `v`.
    fn in_prob(&self, v: usize, j: usize) -> f64 {
        match &self.probs {
            EdgeProbs::Uniform(p) => *p,
            EdgeProbs::PerEdge(rows) => rows[v][j],
        }
    }

    fn flip(&self, v: usize, j: usize, rng: &mut (impl RngCore + ?Sized)) -> bool {
        let p = self.in_prob(v, j);
        p >= 1.0 || (p > 0.0 && rng.gen::<f64>() < p)
    }

    /// Whether every edge is deterministically live or dead.
    pub fn is_deterministic(&self) -> bool {
        match &self.probs {
            EdgeProbs::Uniform(p) => *p == 0.0 || *p == 1.0,
            EdgeProbs::PerEdge(rows) => rows.iter().flatten().all(|&p| p == 0.0 || p == 1.0),
        }
    }

    /// Nodes with a live path to `v`, found by reverse BFS that flips each
    /// in-edge of a visited node at most once. `v` comes first.
    pub fn sample_reverse_reachable<R: RngCore + ?Sized>(
        &self,
        v: usize,
        rng: &mut R,
    ) -> Result<Vec<usize>> {
        self.graph.check_node(v)?;
        let set = self.reverse_sample(v, None, rng);
        Ok(set.expect("uncapped sample always completes"))
    }

    /// Reverse BFS from `v`. With `cap = Some(x)` the search stops as soon as
    /// the visited mass of `x` reaches 1 and returns `None`. Edges into nodes
    /// already visited are not flipped.
    fn reverse_sample<R: RngCore + ?Sized>(
        &self,
        v: usize,
        cap: Option<&[f64]>,
        rng: &mut R,
    ) -> Option<Vec<usize>> {
        with_marks(self.n_nodes(), |marks| {
            marks.mark(v);
            let mut mass = cap.map_or(0.0, |x| x[v]);
            if mass >= 1.0 {
                return None;
            }
            let mut order = vec![v];
            let mut head = 0;
            while head < order.len() {
                let w = order[head];
                head += 1;
                for (j, &u) in self.graph.in_neighbors(w).iter().enumerate() {
                    if marks.is_marked(u) || !self.flip(w, j, rng) {
                        continue;
                    }
                    marks.mark(u);
                    if let Some(x) = cap {
                        mass += x[u];
                        if mass >= 1.0 {
                            return None;
                        }
                    }
                    order.push(u);
                }
            }
            Some(order)
        })
    }

    /// One supergradient sample of `F̄` at `x`: a uniform target `v`, then
    /// `1_{P_v}`, or zero once the visited mass reaches 1.
    pub fn ic_subgradient<R: RngCore + ?Sized>(
        &self,
        x: &FractionalPoint,
        rng: &mut R,
    ) -> Result<Subgradient> {
        check_dim(self.n_nodes(), x.len())?;
        let mut g = vec![0.0; self.n_nodes()];
        self.add_sample(x, rng, 1.0, &mut g);
        Ok(Subgradient(g))
    }

    fn add_sample<R: RngCore + ?Sized>(
        &self,
        x: &FractionalPoint,
        rng: &mut R,
        scale: f64,
        acc: &mut [f64],
    ) {
        if self.n_nodes() == 0 {
            return;
        }
        let v = rng.gen_range(0..self.n_nodes());
        if let Some(set) = self.reverse_sample(v, Some(x), rng) {
            for u in set {
                acc[u] += scale;
            }
        }
    }

    /// Live-edge realization: each edge kept independently.
    pub fn sample_graph<R: RngCore + ?Sized>(&self, rng: &mut R) -> DirectedGraph {
        let mut out = vec![Vec::new(); self.n_nodes()];
        for v in 0..self.n_nodes() {
            for (j, &u) in self.graph.in_neighbors(v).iter().enumerate() {
                if self.flip(v, j, rng) {
                    out[u].push(v);
                }
            }
        }
        DirectedGraph::from_out_lists(out)
    }

    /// Monte Carlo influence of `set` over `samples` independent cascades.
    pub fn estimate_influence<R: RngCore + ?Sized>(
        &self,
        set: &[usize],
        samples: usize,
        rng: &mut R,
    ) -> Result<f64> {
        for &s in set {
            self.graph.check_node(s)?;
        }
        let n = self.n_nodes();
        if n == 0 || samples == 0 {
            return Ok(0.0);
        }
        let g = &self.graph;
        let mut total = 0usize;
        for _ in 0..samples {
            total += with_marks(n, |marks| {
                bfs(set, marks, |u, push| {
                    for &w in g.out_neighbors(u) {
                        // In-edge index of (u, w) within w's reverse list.
                        let j = g.in_neighbors(w).binary_search(&u).unwrap_or(0);
                        if self.flip(w, j, rng) {
                            push(w);
                        }
                    }
                })
                .len()
            });
        }
        Ok(total as f64 / (samples * n) as f64)
    }

    /// Sample-average oracle `f̂` over `samples` frozen cascades, expressed as
    /// a coverage function: universe `(γ, v)` of weight `1/(s·n)` covered by
    /// the nodes reaching `v` in cascade `γ`.
    pub fn sample_average_oracle<R: RngCore + ?Sized>(
        &self,
        samples: usize,
        rng: &mut R,
    ) -> Result<WeightedCoverage> {
        if samples == 0 {
            return Err(invalid("sample-average oracle needs at least one sample"));
        }
        let n = self.n_nodes();
        let w = 1.0 / (samples * n.max(1)) as f64;
        let mut incidence = Vec::with_capacity(samples * n);
        for _ in 0..samples {
            let live = self.sample_graph(rng);
            for v in 0..n {
                incidence.push(live.ancestors(v)?);
            }
        }
        WeightedCoverage::new(n, vec![w; incidence.len()], incidence)
    }
}

/// Influence on a fixed graph as a coverage function over its nodes.
pub fn coverage_of_graph(g: &DirectedGraph) -> Result<WeightedCoverage> {
    let n = g.n_nodes();
    let incidence = (0..n).map(|v| g.ancestors(v)).collect::<Result<Vec<_>>>()?;
    WeightedCoverage::new(n, vec![1.0 / n.max(1) as f64; n], incidence)
}

impl StochasticObjective for IcModel {
    fn dim(&self) -> usize {
        self.n_nodes()
    }

    fn sample_subgradient(
        &self,
        x: &FractionalPoint,
        rng: &mut dyn RngCore,
    ) -> Result<Subgradient> {
        self.ic_subgradient(x, rng)
    }

    fn accumulate_subgradient(
        &self,
        x: &FractionalPoint,
        rng: &mut dyn RngCore,
        scale: f64,
        acc: &mut [f64],
    ) -> Result<()> {
        check_dim(self.n_nodes(), x.len())?;
        self.add_sample(x, rng, scale, acc);
        Ok(())
    }

    fn estimate_value(
        &self,
        x: &FractionalPoint,
        n_samples: usize,
        rng: &mut dyn RngCore,
    ) -> Result<f64> {
        check_dim(self.n_nodes(), x.len())?;
        if self.n_nodes() == 0 {
            return Ok(0.0);
        }
        let n_samples = n_samples.max(1);
        let mut acc = 0.0;
        for _ in 0..n_samples {
            let v = rng.gen_range(0..self.n_nodes());
            acc += match self.reverse_sample(v, Some(x), rng) {
                None => 1.0,
                Some(set) => set.iter().map(|&u| x[u]).sum::<f64>(),
            };
        }
        Ok(acc / n_samples as f64)
    }

    fn estimate_multilinear(
        &self,
        x: &FractionalPoint,
        n_samples: usize,
        rng: &mut dyn RngCore,
    ) -> Result<f64> {
        check_dim(self.n_nodes(), x.len())?;
        if self.n_nodes() == 0 {
            return Ok(0.0);
        }
        let n_samples = n_samples.max(1);
        let mut acc = 0.0;
        for _ in 0..n_samples {
            let v = rng.gen_range(0..self.n_nodes());
            let set = self.sample_reverse_reachable(v, rng)?;
            acc += 1.0 - set.iter().map(|&u| 1.0 - x[u]).product::<f64>();
        }
        Ok(acc / n_samples as f64)
    }

    /// `‖1_{P_v}‖ ≤ √n`.
    fn gradient_bound(&self) -> f64 {
        (self.n_nodes() as f64).sqrt()
    }
}

/// The two-block instance on which greedy is suboptimal.
///
/// Nodes: `0`, `1`, `2`, `3`, then block `A` (`N−1` nodes) and block `B`
/// (`N−1` nodes). Edges `0→a`, `1→a` for `a ∈ A`, `1→3`, and `2→b` for
/// `b ∈ B`, all live with probability 1. The partition is `{0} | rest` with
/// one pick from each block.
pub fn pathological_instance(big_n: usize) -> Result<(IcModel, Matroid)> {
    if big_n < 2 {
        return Err(invalid(format!(
            "pathological instance needs N >= 2, got {big_n}"
        )));
    }
    let n = 2 * big_n + 2;
    let a = 4..4 + (big_n - 1);
    let b = 4 + (big_n - 1)..n;
    let mut edges = vec![(1, 3)];
    for v in a {
        edges.push((0, v));
        edges.push((1, v));
    }
    for v in b {
        edges.push((2, v));
    }
    let graph = DirectedGraph::new(n, edges)?;
    let model = IcModel::uniform(graph, 1.0)?;
    let c = Matroid::partition(n, vec![vec![0], (1..n).collect()], vec![1, 1])?;
    Ok((model, c))
}
