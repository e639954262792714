//! Divide-and-conquer estimation: assemble MLEs fitted on subgraphs into a
//! global estimate via anchor-node offsets. The sup-norm error of the
//! assembled estimator is at most four times the sum of the subgraph
//! errors, which is what makes the strategy worthwhile on graphs with
//! bottlenecks.

use crate::error::{BtlError, Result};
use crate::graph::IslandParams;
use crate::model::{BtlParameters, ComparisonData};

/// An MLE on a subset of the items.
#[derive(Debug, Clone)]
pub struct SubgraphFit {
    index_set: Vec<usize>,
    theta_hat_local: Vec<f64>,
    comparisons_per_edge: u64,
}

impl SubgraphFit {
    /// `index_set` must be sorted and duplicate-free; the local estimate is
    /// re-centered on its own coordinates.
    pub fn new(
        index_set: Vec<usize>,
        theta_hat_local: Vec<f64>,
        comparisons_per_edge: u64,
    ) -> Result<Self> {
        if index_set.is_empty() {
            return Err(BtlError::Validation("index set must be nonempty".into()));
        }
        if index_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BtlError::Validation("index set must be sorted and unique".into()));
        }
        if index_set.len() != theta_hat_local.len() {
            return Err(BtlError::Validation(
                "local theta length must match index set".into(),
            ));
        }
        let centered = BtlParameters::centered(theta_hat_local)?;
        Ok(Self {
            index_set,
            theta_hat_local: centered.theta().to_vec(),
            comparisons_per_edge,
        })
    }

    pub fn index_set(&self) -> &[usize] {
        &self.index_set
    }

    pub fn theta_hat_local(&self) -> &[f64] {
        &self.theta_hat_local
    }

    pub fn comparisons_per_edge(&self) -> u64 {
        self.comparisons_per_edge
    }

    /// Local estimate at global node `t`, if covered.
    pub fn value_at(&self, t: usize) -> Option<f64> {
        self.index_set
            .binary_search(&t)
            .ok()
            .map(|pos| self.theta_hat_local[pos])
    }

    fn contains(&self, t: usize) -> bool {
        self.index_set.binary_search(&t).is_ok()
    }

    fn is_subset_of(&self, other: &SubgraphFit) -> bool {
        self.index_set.iter().all(|&t| other.contains(t))
    }
}

/// Assemble three subgraph fits covering `[n]` into one centered estimate.
///
/// Anchors default to the smallest-index element of the relevant
/// intersection when `None` is passed.
pub fn add_mle_three(
    fit1: &SubgraphFit,
    fit2: &SubgraphFit,
    fit3: &SubgraphFit,
    t1: Option<usize>,
    t2: Option<usize>,
) -> Result<BtlParameters> {
    let n = 1 + [fit1, fit2, fit3]
        .iter()
        .flat_map(|f| f.index_set().iter().copied())
        .max()
        .unwrap();
    let mut covered = vec![false; n];
    for f in [fit1, fit2, fit3] {
        for &t in f.index_set() {
            covered[t] = true;
        }
    }
    if covered.iter().any(|&c| !c) {
        return Err(BtlError::Validation(
            "the three index sets must cover 0..n".into(),
        ));
    }
    for (a, b) in [(fit1, fit2), (fit1, fit3), (fit2, fit1), (fit2, fit3), (fit3, fit1), (fit3, fit2)]
    {
        if a.is_subset_of(b) {
            return Err(BtlError::Validation(
                "no index set may be contained in another".into(),
            ));
        }
    }
    let pick_anchor = |explicit: Option<usize>, a: &SubgraphFit, b: &SubgraphFit, name: &str| {
        match explicit {
            Some(t) if a.contains(t) && b.contains(t) => Ok(t),
            Some(t) => Err(BtlError::Validation(format!(
                "anchor {name} = {t} is not in the required intersection"
            ))),
            None => a
                .index_set()
                .iter()
                .copied()
                .find(|&t| b.contains(t))
                .ok_or_else(|| {
                    BtlError::Validation(format!("empty intersection for anchor {name}"))
                }),
        }
    };
    let t1 = pick_anchor(t1, fit1, fit3, "t1")?;
    let t2 = pick_anchor(t2, fit2, fit3, "t2")?;

    let delta3 = fit1.value_at(t1).unwrap() - fit3.value_at(t1).unwrap();
    let delta2 = fit3.value_at(t2).unwrap() - fit2.value_at(t2).unwrap();

    let mut theta = vec![0.0; n];
    // S3 = I3 \ (I1 ∪ I2), S2 = I2 \ I1, and I1 keeps its own fit.
    for &t in fit3.index_set() {
        if !fit1.contains(t) && !fit2.contains(t) {
            theta[t] = fit3.value_at(t).unwrap() + delta3;
        }
    }
    for &t in fit2.index_set() {
        if !fit1.contains(t) {
            theta[t] = fit2.value_at(t).unwrap() + delta3 + delta2;
        }
    }
    for &t in fit1.index_set() {
        theta[t] = fit1.value_at(t).unwrap();
    }
    BtlParameters::centered(theta)
}

/// Assemble an ordered chain of island fits. Each fit `k` is shifted by the
/// recursive offset `s_k = s_{k-1} + (fit_{k-1} - fit_k)` evaluated at the
/// first node of the overlap between islands `k-1` and `k`, then everything
/// is centered. Later islands overwrite overlap entries.
pub fn add_mle_island_chain(
    fits: &[SubgraphFit],
    params: IslandParams,
) -> Result<BtlParameters> {
    if fits.len() != params.k {
        return Err(BtlError::Validation(format!(
            "expected {} island fits, got {}",
            params.k,
            fits.len()
        )));
    }
    if params.n_overlap == 0 {
        return Err(BtlError::Validation("island chain assembly needs a nonempty overlap".into()));
    }
    for (k, f) in fits.iter().enumerate() {
        let expect: Vec<usize> = params.block(k).collect();
        if f.index_set() != expect.as_slice() {
            return Err(BtlError::Validation(format!(
                "fit {k} does not cover island block {:?}",
                params.block(k)
            )));
        }
    }
    let n = params.n();
    let mut theta = vec![0.0; n];
    let mut shift = 0.0;
    for (k, f) in fits.iter().enumerate() {
        if k > 0 {
            // First node shared by islands k-1 and k.
            let anchor = params.block_start(k);
            let prev = fits[k - 1].value_at(anchor).unwrap() + shift;
            shift = prev - f.value_at(anchor).unwrap();
        }
        for &t in f.index_set() {
            theta[t] = f.value_at(t).unwrap() + shift;
        }
    }
    BtlParameters::centered(theta)
}

/// Clip bounds for empirical bridge win fractions.
#[derive(Debug, Clone, Copy)]
pub struct ClipBounds {
    pub lower: f64,
    pub upper: f64,
}

impl Default for ClipBounds {
    fn default() -> Self {
        Self { lower: 0.1, upper: 0.9 }
    }
}

/// Assemble two clique fits of a barbell graph using the empirical log-odds
/// over the bridge edges. Each bridge `(i, j)` with `i` in the first clique
/// contributes a shift estimate; the second block is shifted by their mean
/// and the result centered.
pub fn add_mle_barbell(
    fit1: &SubgraphFit,
    fit2: &SubgraphFit,
    data: &ComparisonData,
    bridge_edges: &[(usize, usize)],
    clip: ClipBounds,
) -> Result<BtlParameters> {
    if bridge_edges.is_empty() {
        return Err(BtlError::Validation("bridge edge set must be nonempty".into()));
    }
    if !(0.0 < clip.lower && clip.lower < clip.upper && clip.upper < 1.0) {
        return Err(BtlError::Validation("clip bounds must satisfy 0 < lb < ub < 1".into()));
    }
    let edges = data.graph().edges();
    let mut shift_sum = 0.0;
    for &(a, b) in bridge_edges {
        let (i, j, flip) = if fit1.contains(a) && fit2.contains(b) {
            (a, b, false)
        } else if fit1.contains(b) && fit2.contains(a) {
            (b, a, true)
        } else {
            return Err(BtlError::Validation(format!(
                "bridge edge ({a}, {b}) does not cross the two fits"
            )));
        };
        let key = (a.min(b), a.max(b));
        let idx = edges
            .binary_search(&key)
            .map_err(|_| BtlError::Validation(format!("bridge edge ({a}, {b}) not in data")))?;
        // Win fraction of the first-clique endpoint over the second.
        let mut p = data.win_fraction(idx);
        let canonical_first_is_i = key.0 == i;
        if !canonical_first_is_i {
            p = 1.0 - p;
        }
        let _ = flip;
        let p = p.clamp(clip.lower, clip.upper);
        let d_hat = (p / (1.0 - p)).ln();
        shift_sum += d_hat - (fit1.value_at(i).unwrap() - fit2.value_at(j).unwrap());
    }
    let s_hat = shift_sum / bridge_edges.len() as f64;

    let n = 1 + fit1
        .index_set()
        .iter()
        .chain(fit2.index_set())
        .copied()
        .max()
        .unwrap();
    let mut theta = vec![0.0; n];
    for &t in fit1.index_set() {
        theta[t] = fit1.value_at(t).unwrap();
    }
    for &t in fit2.index_set() {
        theta[t] = fit2.value_at(t).unwrap() - s_hat;
    }
    BtlParameters::centered(theta)
}
