//! The Bradley-Terry-Luce model: preference-score vectors, winning
//! probabilities, gap statistics, and simulation of comparison outcomes
//! over a graph.

use crate::error::{BtlError, Result};
use crate::graph::{ComparisonGraph, IslandParams};
use crate::rng::seeded_rng;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Centering tolerance for preference vectors.
pub const CENTER_TOL: f64 = 1e-9;

/// A centered vector of log-strength scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BtlParameters {
    theta: Vec<f64>,
}

impl BtlParameters {
    /// Wrap a raw vector after re-centering it to satisfy the
    /// identifiability convention `sum(theta) = 0`.
    pub fn centered(mut theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(BtlError::Validation("theta must be nonempty".into()));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(BtlError::Numerical("theta contains non-finite entries".into()));
        }
        let mean = theta.iter().sum::<f64>() / theta.len() as f64;
        theta.iter_mut().for_each(|t| *t -= mean);
        Ok(Self { theta })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Max pairwise gap `max_{i,j} |theta_i - theta_j|`.
    pub fn kappa(&self) -> f64 {
        let max = self.theta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.theta.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// Max gap over the edges of `g` only; always `<= kappa`.
    pub fn kappa_e(&self, g: &ComparisonGraph) -> Result<f64> {
        if g.n() != self.len() {
            return Err(BtlError::Validation("theta length does not match graph".into()));
        }
        Ok(g.edges()
            .iter()
            .map(|&(i, j)| (self.theta[i] - self.theta[j]).abs())
            .fold(0.0, f64::max))
    }
}

/// Numerically stable sigmoid `1 / (1 + e^{-t})`.
pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `P(i beats j)` under the BTL model.
pub fn win_prob(params: &BtlParameters, i: usize, j: usize) -> f64 {
    sigmoid(params.theta()[i] - params.theta()[j])
}

/// Equal-spaced centered scores with total gap exactly `kappa`.
pub fn linear_theta(n: usize, kappa: f64) -> Result<BtlParameters> {
    if n < 2 {
        return Err(BtlError::Validation("linear theta needs n >= 2".into()));
    }
    if kappa < 0.0 {
        return Err(BtlError::Validation("kappa must be >= 0".into()));
    }
    let delta = kappa / (n - 1) as f64;
    BtlParameters::centered((0..n).map(|i| i as f64 * delta).collect())
}

/// Equal-spaced scores with island block `k` shifted by `-(k-1) * s` before
/// re-centering. Overlap nodes take the shift of the later island
/// containing them.
pub fn shifted_island_theta(params: IslandParams, kappa: f64, s: f64) -> Result<BtlParameters> {
    let n = params.n();
    let base = linear_theta(n, kappa)?;
    let mut theta = base.theta().to_vec();
    for k in 0..params.k {
        for i in params.block(k) {
            theta[i] = base.theta()[i] - k as f64 * s;
        }
    }
    BtlParameters::centered(theta)
}

/// Equal-spaced scores with the second half `i >= n/2` shifted by `-s`
/// before re-centering.
pub fn shifted_barbell_theta(n: usize, kappa: f64, s: f64) -> Result<BtlParameters> {
    let base = linear_theta(n, kappa)?;
    let mut theta = base.theta().to_vec();
    for t in theta.iter_mut().skip(n / 2) {
        *t -= s;
    }
    BtlParameters::centered(theta)
}

/// Aggregated comparison outcomes: per canonical edge `(i, j)` with `i < j`,
/// the number of times `i` beat `j` out of `comparisons_per_edge` trials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonData {
    graph: ComparisonGraph,
    comparisons_per_edge: u64,
    wins: Vec<u64>,
}

impl ComparisonData {
    pub fn new(graph: ComparisonGraph, comparisons_per_edge: u64, wins: Vec<u64>) -> Result<Self> {
        if comparisons_per_edge == 0 {
            return Err(BtlError::Validation("comparisons per edge must be >= 1".into()));
        }
        if wins.len() != graph.edge_count() {
            return Err(BtlError::Validation("one win count per edge is required".into()));
        }
        if wins.iter().any(|&w| w > comparisons_per_edge) {
            return Err(BtlError::Validation("win count exceeds comparisons per edge".into()));
        }
        Ok(Self { graph, comparisons_per_edge, wins })
    }

    pub fn graph(&self) -> &ComparisonGraph {
        &self.graph
    }

    pub fn comparisons_per_edge(&self) -> u64 {
        self.comparisons_per_edge
    }

    /// Wins of `i` over `j` per canonical edge, in the graph's edge order.
    pub fn wins(&self) -> &[u64] {
        &self.wins
    }

    /// Sample average `y_ij = wins_ij / L` per canonical edge.
    pub fn win_fraction(&self, edge_index: usize) -> f64 {
        self.wins[edge_index] as f64 / self.comparisons_per_edge as f64
    }

    /// Whether the win digraph (i -> j wherever i beat j at least once) is
    /// strongly connected, i.e. whether the vanilla MLE exists.
    pub fn is_strongly_connected_directed(&self) -> bool {
        let n = self.graph.n();
        let mut fwd = vec![Vec::new(); n];
        let mut rev = vec![Vec::new(); n];
        for (idx, &(i, j)) in self.graph.edges().iter().enumerate() {
            let w = self.wins[idx];
            if w > 0 {
                fwd[i].push(j);
                rev[j].push(i);
            }
            if w < self.comparisons_per_edge {
                fwd[j].push(i);
                rev[i].push(j);
            }
        }
        reaches_all(&fwd) && reaches_all(&rev)
    }

    /// Restrict the data to the subgraph induced by `index_set` (sorted).
    pub fn induced(&self, index_set: &[usize]) -> Result<ComparisonData> {
        let sub = self.graph.induced_subgraph(index_set)?;
        let mut pos = std::collections::HashMap::new();
        for (local, &g) in index_set.iter().enumerate() {
            pos.insert(g, local);
        }
        // Map each subgraph edge back to its win count in the parent.
        let mut wins = Vec::with_capacity(sub.edge_count());
        for &(a, b) in sub.edges() {
            let (gi, gj) = (index_set[a], index_set[b]);
            let parent_idx = self
                .graph
                .edges()
                .binary_search(&(gi.min(gj), gi.max(gj)))
                .map_err(|_| BtlError::Validation("edge missing in parent data".into()))?;
            wins.push(self.wins[parent_idx]);
        }
        let _ = pos;
        ComparisonData::new(sub, self.comparisons_per_edge, wins)
    }

    /// Read the JSON data format
    /// `{"n": int, "L": int, "edges": [{"i":..,"j":..,"wins_i":..},..]}`.
    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: DataFile = serde_json::from_str(text)?;
        let graph =
            ComparisonGraph::new(raw.n, raw.edges.iter().map(|e| (e.i, e.j)))?;
        // The canonical edge order of the rebuilt graph may differ from the
        // file order; re-associate win counts by edge key.
        let mut by_key = std::collections::HashMap::new();
        for e in &raw.edges {
            if e.i >= e.j {
                return Err(BtlError::Validation(format!(
                    "edge ({}, {}) is not in canonical i < j order",
                    e.i, e.j
                )));
            }
            by_key.insert((e.i, e.j), e.wins_i);
        }
        let wins = graph.edges().iter().map(|k| by_key[k]).collect();
        ComparisonData::new(graph, raw.l, wins)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        let raw = DataFile {
            n: self.graph.n(),
            l: self.comparisons_per_edge,
            edges: self
                .graph
                .edges()
                .iter()
                .zip(&self.wins)
                .map(|(&(i, j), &w)| DataEdge { i, j, wins_i: w })
                .collect(),
        };
        serde_json::to_string(&raw).expect("data serialization cannot fail")
    }
}

fn reaches_all(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}

#[derive(Serialize, Deserialize)]
struct DataFile {
    n: usize,
    #[serde(rename = "L")]
    l: u64,
    edges: Vec<DataEdge>,
}

#[derive(Serialize, Deserialize)]
struct DataEdge {
    i: usize,
    j: usize,
    wins_i: u64,
}

/// Simulate comparison outcomes: per canonical edge `(i, j)`, draw
/// `wins_ij ~ Binomial(L, psi(theta_i - theta_j))` with the seeded
/// generator. Deterministic given `(g, theta, L, seed)`.
pub fn simulate(
    g: &ComparisonGraph,
    theta: &BtlParameters,
    comparisons_per_edge: u64,
    seed: u64,
) -> Result<ComparisonData> {
    if theta.len() != g.n() {
        return Err(BtlError::Validation("theta length does not match graph".into()));
    }
    if comparisons_per_edge == 0 {
        return Err(BtlError::Validation("comparisons per edge must be >= 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut wins = Vec::with_capacity(g.edge_count());
    for &(i, j) in g.edges() {
        let p = win_prob(theta, i, j);
        let w = if comparisons_per_edge <= 10_000 {
            (0..comparisons_per_edge).filter(|_| rng.gen::<f64>() < p).count() as u64
        } else {
            Binomial::new(comparisons_per_edge, p)
                .map_err(|e| BtlError::Numerical(format!("binomial sampling: {e}")))?
                .sample(&mut rng)
        };
        wins.push(w);
    }
    ComparisonData::new(g.clone(), comparisons_per_edge, wins)
}
