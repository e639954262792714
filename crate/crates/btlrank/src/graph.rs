//! Comparison graphs and generators for the topologies studied by the
//! bound formulas: complete, path, star, cycle, complete bipartite, banded,
//! Cayley, Erdős–Rényi, island, and barbell graphs.

use crate::error::{BtlError, Result};
use crate::rng::{mix_seed, seeded_rng};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::Path;

/// An undirected simple graph on `n` items, the comparison scheme.
///
/// Edges are stored canonically: each pair `(i, j)` satisfies `i < j` and the
/// list is sorted lexicographically, so serialization is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl ComparisonGraph {
    /// Build a graph from an arbitrary edge list. Endpoints are normalized to
    /// `(min, max)` and the list is sorted; self-loops, duplicates, and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(BtlError::Validation("graph must have at least one node".into()));
        }
        let mut canon: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(BtlError::Validation(format!("self-loop at node {a}")));
            }
            if a >= n || b >= n {
                return Err(BtlError::Validation(format!(
                    "edge ({a},{b}) out of range for n={n}"
                )));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(BtlError::Validation("duplicate edge".into()));
        }
        Ok(Self { n, edges: canon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical `(i, j)` pairs with `i < j`, lexicographically sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    /// Undirected connectivity via traversal.
    pub fn is_connected(&self) -> bool {
        if self.n == 1 {
            return true;
        }
        let adj = self.adjacency_lists();
        let mut seen = vec![false; self.n];
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
        count == self.n
    }

    /// The subgraph induced by `index_set` (sorted, deduplicated by the
    /// caller), with nodes relabeled to `0..index_set.len()` in order.
    pub fn induced_subgraph(&self, index_set: &[usize]) -> Result<ComparisonGraph> {
        let mut pos = vec![usize::MAX; self.n];
        for (local, &g) in index_set.iter().enumerate() {
            if g >= self.n {
                return Err(BtlError::Validation(format!("index {g} out of range")));
            }
            pos[g] = local;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(i, j)| pos[i] != usize::MAX && pos[j] != usize::MAX)
            .map(|&(i, j)| (pos[i], pos[j]));
        ComparisonGraph::new(index_set.len(), edges)
    }

    /// Graph diameter in hop count. Errors on disconnected graphs.
    pub fn diameter(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(BtlError::Disconnected);
        }
        let adj = self.adjacency_lists();
        let mut best = 0;
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        for start in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[start] = 0;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        best = best.max(dist[v]);
                        queue.push_back(v);
                    }
                }
            }
        }
        Ok(best)
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n && self.is_connected()
    }

    /// Read the JSON graph format `{"n": int, "edges": [[i,j],...]}`.
    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: GraphFile = serde_json::from_str(text)?;
        ComparisonGraph::new(raw.n, raw.edges.into_iter().map(|e| (e[0], e[1])))
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        let raw = GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
        };
        serde_json::to_string(&raw).expect("graph serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(BtlError::Validation(msg.into()))
    }
}

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Result<ComparisonGraph> {
    require(n >= 2, "complete graph needs n >= 2")?;
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    ComparisonGraph::new(n, edges)
}

/// Path graph with edges `{(i, i+1)}`.
pub fn path(n: usize) -> Result<ComparisonGraph> {
    require(n >= 2, "path graph needs n >= 2")?;
    ComparisonGraph::new(n, (0..n - 1).map(|i| (i, i + 1)))
}

/// Star graph: node 0 connected to all others.
pub fn star(n: usize) -> Result<ComparisonGraph> {
    require(n >= 2, "star graph needs n >= 2")?;
    ComparisonGraph::new(n, (1..n).map(|i| (0, i)))
}

/// Cycle graph.
pub fn cycle(n: usize) -> Result<ComparisonGraph> {
    require(n >= 3, "cycle graph needs n >= 3")?;
    ComparisonGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Complete bipartite graph `K_{m1,m2}`; the first part is `0..m1`.
pub fn complete_bipartite(m1: usize, m2: usize) -> Result<ComparisonGraph> {
    require(m1 >= 1 && m2 >= 1, "complete bipartite needs m1, m2 >= 1")?;
    let edges = (0..m1).flat_map(|i| (m1..m1 + m2).map(move |j| (i, j)));
    ComparisonGraph::new(m1 + m2, edges)
}

/// k-banded graph with edge set `{(i,j): |i - j| <= k}`.
pub fn banded(n: usize, k: usize) -> Result<ComparisonGraph> {
    require(n >= 2, "banded graph needs n >= 2")?;
    require(k >= 1 && k < n, "banded graph needs 1 <= k < n")?;
    let edges = (0..n).flat_map(|i| (i + 1..n.min(i + k + 1)).map(move |j| (i, j)));
    ComparisonGraph::new(n, edges)
}

/// d-Cayley graph: `(i,j)` is an edge iff the circular distance between `i`
/// and `j` is at most `d`. A 2d-regular graph.
pub fn cayley(n: usize, d: usize) -> Result<ComparisonGraph> {
    require(n >= 3, "cayley graph needs n >= 3")?;
    require(d >= 1 && 2 * d < n, "cayley graph needs 1 <= d < n/2")?;
    let mut edges = Vec::new();
    for i in 0..n {
        for k in 1..=d {
            let j = (i + k) % n;
            edges.push((i, j));
        }
    }
    ComparisonGraph::new(n, edges)
}

/// Erdős–Rényi graph `ER(n, p)`: each unordered pair is included
/// independently with probability `p`, using the seeded generator.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<ComparisonGraph> {
    require(n >= 2, "erdos-renyi graph needs n >= 2")?;
    require((0.0..=1.0).contains(&p), "erdos-renyi needs 0 <= p <= 1")?;
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    ComparisonGraph::new(n, edges)
}

/// Parameters of an island graph: `k` complete sub-graphs of `n_island`
/// nodes, consecutive islands sharing `n_overlap` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IslandParams {
    pub k: usize,
    pub n_island: usize,
    pub n_overlap: usize,
}

impl IslandParams {
    pub fn new(k: usize, n_island: usize, n_overlap: usize) -> Result<Self> {
        require(k >= 2, "island graph needs k >= 2")?;
        require(n_island >= 2, "island graph needs n_island >= 2")?;
        require(n_overlap < n_island, "island graph needs n_overlap < n_island")?;
        Ok(Self { k, n_island, n_overlap })
    }

    /// Total node count `k * n_island - (k-1) * n_overlap`.
    pub fn n(&self) -> usize {
        self.k * self.n_island - (self.k - 1) * self.n_overlap
    }

    /// Global index of the first node of island `j` (0-based).
    pub fn block_start(&self, j: usize) -> usize {
        j * (self.n_island - self.n_overlap)
    }

    /// Global node indices of island `j`: a consecutive block.
    pub fn block(&self, j: usize) -> std::ops::Range<usize> {
        let s = self.block_start(j);
        s..s + self.n_island
    }
}

/// Island graph: each island occupies a consecutive index block and induces
/// a complete sub-graph; there are no other edges.
pub fn island(params: IslandParams) -> Result<ComparisonGraph> {
    let n = params.n();
    let mut set = HashSet::new();
    for j in 0..params.k {
        let block = params.block(j);
        for a in block.clone() {
            for b in a + 1..block.end {
                set.insert((a, b));
            }
        }
    }
    ComparisonGraph::new(n, set)
}

/// How the bridge edges of a barbell graph are specified.
#[derive(Debug, Clone)]
pub enum BridgeSpec {
    /// Explicit cross edges `(i, j)` with `i < n1 <= j`.
    Edges(Vec<(usize, usize)>),
    /// `m` cross edges sampled uniformly without replacement.
    Count(usize),
    /// Density `p` in `(0, 1]`, converted to `m = round(n1 * n2 * p)` with
    /// at least one bridge enforced.
    Density(f64),
}

/// Barbell graph: cliques on `0..n1` and `n1..n1+n2` plus bridge edges.
pub fn barbell(n1: usize, n2: usize, bridge: &BridgeSpec, seed: u64) -> Result<ComparisonGraph> {
    require(n1 >= 2 && n2 >= 2, "barbell graph needs n1, n2 >= 2")?;
    let n = n1 + n2;
    let mut edges = Vec::new();
    for a in 0..n1 {
        for b in a + 1..n1 {
            edges.push((a, b));
        }
    }
    for a in n1..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    match bridge {
        BridgeSpec::Edges(list) => {
            require(!list.is_empty(), "barbell graph needs at least one bridge edge")?;
            for &(i, j) in list {
                require(
                    i < n1 && (n1..n).contains(&j),
                    "bridge edge must cross the two cliques",
                )?;
                edges.push((i, j));
            }
        }
        &BridgeSpec::Count(m) => {
            require(m >= 1, "barbell graph needs at least one bridge edge")?;
            require(m <= n1 * n2, "bridge count exceeds n1 * n2")?;
            edges.extend(sample_bridges(n1, n2, m, seed));
        }
        &BridgeSpec::Density(p) => {
            require(p > 0.0 && p <= 1.0, "bridge density must be in (0, 1]")?;
            let m = ((n1 * n2) as f64 * p).round().max(1.0) as usize;
            require(m <= n1 * n2, "bridge count exceeds n1 * n2")?;
            edges.extend(sample_bridges(n1, n2, m, seed));
        }
    }
    ComparisonGraph::new(n, edges)
}

/// Sample `m` distinct cross pairs uniformly without replacement.
fn sample_bridges(n1: usize, n2: usize, m: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = seeded_rng(mix_seed(seed, 0xBA12));
    let total = n1 * n2;
    // Partial Fisher-Yates over the flattened cross-pair index space.
    let mut pool: Vec<usize> = (0..total).collect();
    let mut out = Vec::with_capacity(m);
    for t in 0..m {
        let pick = rng.gen_range(t..total);
        pool.swap(t, pick);
        let flat = pool[t];
        out.push((flat / n2, n1 + flat % n2));
    }
    out
}

/// Minimum over all unordered pairs `i != j` of the number of common
/// neighbors `|N(i) ∩ N(j)|`.
pub fn min_common_neighbors(g: &ComparisonGraph) -> usize {
    let n = g.n();
    let adj = g.adjacency_lists();
    let mut row = vec![false; n];
    let mut best = usize::MAX;
    for i in 0..n {
        for &v in &adj[i] {
            row[v] = true;
        }
        for nbrs in adj.iter().skip(i + 1) {
            let common = nbrs.iter().filter(|&&v| row[v]).count();
            best = best.min(common);
            if best == 0 {
                break;
            }
        }
        for &v in &adj[i] {
            row[v] = false;
        }
        if best == 0 {
            break;
        }
    }
    if n < 2 {
        0
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_k3() {
        let g = complete(3).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn path_4_edges() {
        let g = path(4).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn star_connects_node_zero() {
        let g = star(5).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(g.edges().iter().all(|&(i, _)| i == 0));
    }

    #[test]
    fn cayley_8_2_is_4_regular() {
        // Oracle: enumerate pairs with circular distance <= 2.
        let g = cayley(8, 2).unwrap();
        let mut expected = Vec::new();
        for i in 0..8usize {
            for j in i + 1..8 {
                let d = (j - i).min(8 - (j - i));
                if d <= 2 {
                    expected.push((i, j));
                }
            }
        }
        assert_eq!(g.edges(), expected.as_slice());
        assert_eq!(g.edge_count(), 16);
        assert!(g.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn banded_edge_rule() {
        let g = banded(6, 2).unwrap();
        for i in 0..6usize {
            for j in i + 1..6 {
                assert_eq!(g.has_edge(i, j), j - i <= 2);
            }
        }
    }

    #[test]
    fn generator_rejects_bad_params() {
        assert!(complete(1).is_err());
        assert!(banded(5, 0).is_err());
        assert!(banded(5, 5).is_err());
        assert!(cayley(8, 4).is_err());
        assert!(erdos_renyi(10, 1.5, 0).is_err());
        assert!(IslandParams::new(1, 50, 5).is_err());
        assert!(IslandParams::new(3, 5, 5).is_err());
    }

    #[test]
    fn erdos_renyi_extremes() {
        assert_eq!(erdos_renyi(10, 0.0, 7).unwrap().edge_count(), 0);
        assert_eq!(erdos_renyi(10, 1.0, 7).unwrap().edge_count(), 45);
    }

    #[test]
    fn erdos_renyi_deterministic_and_binomial() {
        let a = erdos_renyi(200, 0.5, 42).unwrap();
        let b = erdos_renyi(200, 0.5, 42).unwrap();
        assert_eq!(a, b);
        // Edge count within 4 sigma of the binomial mean.
        let mean = 19900.0 * 0.5;
        let sigma = (19900.0f64 * 0.25).sqrt();
        let count = a.edge_count() as f64;
        assert!((count - mean).abs() < 4.0 * sigma, "count = {count}");
    }

    #[test]
    fn island_node_count_and_small_case() {
        let p = IslandParams::new(3, 50, 5).unwrap();
        assert_eq!(p.n(), 140);
        let p2 = IslandParams::new(2, 3, 1).unwrap();
        let g = island(p2).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]);
    }

    #[test]
    fn island_min_common_neighbors_zero() {
        let g = island(IslandParams::new(3, 50, 5).unwrap()).unwrap();
        assert_eq!(min_common_neighbors(&g), 0);
        // Holds for any k >= 3: non-adjacent islands share no neighbor.
        let g = island(IslandParams::new(4, 10, 3).unwrap()).unwrap();
        assert_eq!(min_common_neighbors(&g), 0);
    }

    #[test]
    fn complete_common_neighbors() {
        assert_eq!(min_common_neighbors(&complete(4).unwrap()), 2);
    }

    #[test]
    fn barbell_explicit_and_full() {
        let g = barbell(3, 3, &BridgeSpec::Edges(vec![(0, 3)]), 0).unwrap();
        assert_eq!(g.edge_count(), 7);
        let g = barbell(2, 2, &BridgeSpec::Count(4), 0).unwrap();
        assert_eq!(g.edge_count(), 6); // K4
        assert!(barbell(2, 2, &BridgeSpec::Count(5), 0).is_err());
    }

    #[test]
    fn barbell_density_count() {
        let ns = 50usize;
        let p = 3.0 * (ns as f64).ln() / ns as f64;
        let g = barbell(ns, ns, &BridgeSpec::Density(p), 9).unwrap();
        let clique_edges = 2 * ns * (ns - 1) / 2;
        let m = ((ns * ns) as f64 * p).round() as usize;
        assert_eq!(g.edge_count(), clique_edges + m);
        assert!(g.is_connected());
    }

    #[test]
    fn connectivity_checks() {
        assert!(path(5).unwrap().is_connected());
        let two_triangles =
            ComparisonGraph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!two_triangles.is_connected());
    }

    #[test]
    fn json_round_trip_and_rejects() {
        let g = cycle(5).unwrap();
        let s = g.to_json_string();
        let h = ComparisonGraph::from_json_str(&s).unwrap();
        assert_eq!(g, h);
        assert!(ComparisonGraph::from_json_str(r#"{"n":3,"edges":[[0,0]]}"#).is_err());
        assert!(ComparisonGraph::from_json_str(r#"{"n":3,"edges":[[0,1],[1,0]]}"#).is_err());
        assert!(ComparisonGraph::from_json_str(r#"{"n":3,"edges":[[0,5]]}"#).is_err());
    }

    #[test]
    fn diameter_and_tree() {
        assert_eq!(path(6).unwrap().diameter().unwrap(), 5);
        assert_eq!(star(6).unwrap().diameter().unwrap(), 2);
        assert!(path(6).unwrap().is_tree());
        assert!(star(6).unwrap().is_tree());
        assert!(!cycle(6).unwrap().is_tree());
    }
}
