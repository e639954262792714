//! Evaluable forms of every error-bound formula the experiments compare:
//! the sup-norm and Euclidean upper bounds for the regularized MLE, the
//! vanilla-MLE bound, tree and Erdős–Rényi specializations, the minimax
//! lower bound, comparison bounds from the literature, and tabulated sample
//! complexity rates. Leading constants are set to 1 throughout and all
//! logarithms are natural, so only trends and ratios are meaningful, not
//! absolute magnitudes.

use crate::error::{BtlError, Result};
use crate::graph::ComparisonGraph;
use crate::model::BtlParameters;
use crate::spectral::{normalized_spectrum, SpectralSummary, LAMBDA_TOL};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Everything the closed-form bounds consume.
#[derive(Debug, Clone)]
pub struct BoundInputs {
    pub spectral: SpectralSummary,
    /// Comparisons per edge.
    pub l: u64,
    /// Max gap over all pairs.
    pub kappa: f64,
    /// Max gap over edges.
    pub kappa_e: f64,
    /// Regularization weight for the rho-dependent form.
    pub rho: f64,
    /// Box radius for the constrained-MLE bounds; defaults to `kappa / 2`.
    pub b: f64,
}

impl BoundInputs {
    pub fn new(spectral: SpectralSummary, l: u64, kappa: f64, kappa_e: f64) -> Result<Self> {
        if l == 0 {
            return Err(BtlError::Validation("L must be >= 1".into()));
        }
        if kappa_e > kappa + 1e-12 {
            return Err(BtlError::Validation("kappa_E must not exceed kappa".into()));
        }
        Ok(Self {
            spectral,
            l,
            kappa,
            kappa_e,
            rho: 0.0,
            b: kappa / 2.0,
        })
    }

    /// Derive from a graph and true parameters.
    pub fn from_graph(g: &ComparisonGraph, theta: &BtlParameters, l: u64) -> Result<Self> {
        let spectral = crate::spectral::spectral_summary(g);
        let kappa = theta.kappa();
        let kappa_e = theta.kappa_e(g)?;
        Self::new(spectral, l, kappa, kappa_e)
    }

    pub fn with_b(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    fn n(&self) -> f64 {
        self.spectral.degrees.len() as f64
    }

    fn edge_count(&self) -> f64 {
        self.spectral.degrees.iter().map(|&d| d as f64).sum::<f64>() / 2.0
    }

    /// `r = kappa_E + ln kappa`, clamped below at 0 so the formulas stay
    /// real for kappa < 1.
    fn r(&self) -> f64 {
        (self.kappa_e + self.kappa.ln()).max(0.0)
    }

    fn lambda2_checked(&self) -> Result<f64> {
        if self.spectral.lambda2 <= LAMBDA_TOL {
            Err(BtlError::Disconnected)
        } else {
            Ok(self.spectral.lambda2)
        }
    }
}

/// A bound value, or an explicit marker that the bound's assumptions fail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundValue {
    Value(f64),
    NotApplicable,
}

impl BoundValue {
    pub fn value(self) -> Option<f64> {
        match self {
            BoundValue::Value(v) => Some(v),
            BoundValue::NotApplicable => None,
        }
    }
}

impl std::fmt::Display for BoundValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundValue::Value(v) => write!(f, "{v:.17e}"),
            BoundValue::NotApplicable => write!(f, "NA"),
        }
    }
}

/// Named bound values, ordered by identifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub values: BTreeMap<String, BoundValue>,
    /// All leading constants are 1; trends, not magnitudes, are meaningful.
    pub constants_disclaimer: &'static str,
}

/// Sup-norm upper bound for the regularized MLE at the optimal rho:
/// `e^{2k_E}/l2 * (n_max/n_min) sqrt((n+r)/L)
///  + e^{k_E}/l2 * sqrt(n_max (ln n + r)/L)`.
pub fn linf_upper_thm1(inputs: &BoundInputs) -> Result<f64> {
    let l2 = inputs.lambda2_checked()?;
    let n = inputs.n();
    let r = inputs.r();
    let lf = inputs.l as f64;
    let ratio = inputs.spectral.n_max as f64 / inputs.spectral.n_min as f64;
    let first = (2.0 * inputs.kappa_e).exp() / l2 * ratio * ((n + r) / lf).sqrt();
    let second = inputs.kappa_e.exp() / l2
        * (inputs.spectral.n_max as f64 * (n.ln() + r) / lf).sqrt();
    Ok(first + second)
}

/// Euclidean upper bound: `e^{k_E}/l2 * sqrt(n_max (n + r)/L)`.
pub fn l2_upper_thm1(inputs: &BoundInputs) -> Result<f64> {
    let l2 = inputs.lambda2_checked()?;
    let n = inputs.n();
    Ok(inputs.kappa_e.exp() / l2
        * (inputs.spectral.n_max as f64 * (n + inputs.r()) / inputs.l as f64).sqrt())
}

/// Yan et al.'s sup-norm bound
/// `e^kappa / min_{i,j} n_ij * sqrt(n_max ln n / L)`; not applicable when
/// the minimum common-neighbor count is zero.
pub fn yan_linf_bound(inputs: &BoundInputs) -> BoundValue {
    if inputs.spectral.min_common_neighbors == 0 {
        return BoundValue::NotApplicable;
    }
    let n = inputs.n();
    BoundValue::Value(
        inputs.kappa.exp() / inputs.spectral.min_common_neighbors as f64
            * (inputs.spectral.n_max as f64 * n.ln() / inputs.l as f64).sqrt(),
    )
}

/// Shah et al.'s squared-l2 bound `e^{8B} n ln n / (lambda2 L)`.
pub fn shah_l2_bound(inputs: &BoundInputs) -> Result<f64> {
    let l2 = inputs.lambda2_checked()?;
    let n = inputs.n();
    Ok((8.0 * inputs.b).exp() * n * n.ln() / (l2 * inputs.l as f64))
}

/// Hajek et al.'s squared-l2 bound `e^{8B} |E| ln n / (lambda2^2 L)`.
pub fn hajek_l2_bound(inputs: &BoundInputs) -> Result<f64> {
    let l2 = inputs.lambda2_checked()?;
    let n = inputs.n();
    Ok((8.0 * inputs.b).exp() * inputs.edge_count() * n.ln() / (l2 * l2 * inputs.l as f64))
}

/// Minimax lower bound on the sup-norm error: the square root of
/// `e^{-2 kappa}/(n N_comp) * max{n^2, max_{n'} sum_{i=ceil(0.99 n')}^{n'}
/// 1/lambda_i}` over the normalized Laplacian spectrum (1-based ascending
/// indices; the zero eigenvalue is never touched since ceil(0.99*2) = 2).
pub fn minimax_lower_linf(g: &ComparisonGraph, l: u64, kappa: f64) -> Result<f64> {
    let ns = normalized_spectrum(g, l as usize)?;
    let n = g.n();
    let eig = &ns.eigenvalues;
    let mut inner: f64 = (n * n) as f64;
    for n_prime in 2..=n {
        let lo = ((0.99 * n_prime as f64).ceil() as usize).max(2);
        let sum: f64 = (lo..=n_prime).map(|i| 1.0 / eig[i - 1]).sum();
        inner = inner.max(sum);
    }
    let val = (-2.0 * kappa).exp() / (n as f64 * ns.n_comp as f64) * inner;
    Ok(val.sqrt())
}

/// Erdős–Rényi closed forms:
/// `(e^{2k_E} sqrt(ln n / (n p^2 L)), e^{k_E} sqrt(1 / (p L)))`.
pub fn er_corollary_bounds(n: usize, p: f64, l: u64, kappa_e: f64) -> Result<(f64, f64)> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(BtlError::Validation("er bounds need 0 < p <= 1".into()));
    }
    let nf = n as f64;
    let lf = l as f64;
    let linf = (2.0 * kappa_e).exp() * (nf.ln() / (nf * p * p * lf)).sqrt();
    let l2 = kappa_e.exp() * (1.0 / (p * lf)).sqrt();
    Ok((linf, l2))
}

/// Sup-norm bound for the unregularized MLE:
/// `e^{k_E} sqrt(n_max ln n / (L n_min^2))
///  + s sqrt(n_max/L) [1 + e^{k_E} sqrt(ln n)/n_min + s sqrt(n/n_max)]`
/// with `s = e^{2k_E} n_max / (lambda2 n_min)`.
pub fn vanilla_upper_linf(inputs: &BoundInputs) -> Result<f64> {
    let l2 = inputs.lambda2_checked()?;
    let n = inputs.n();
    let lf = inputs.l as f64;
    let n_max = inputs.spectral.n_max as f64;
    let n_min = inputs.spectral.n_min as f64;
    let s = (2.0 * inputs.kappa_e).exp() * n_max / (l2 * n_min);
    let first = inputs.kappa_e.exp() * (n_max * n.ln() / (lf * n_min * n_min)).sqrt();
    let second = s
        * (n_max / lf).sqrt()
        * (1.0 + inputs.kappa_e.exp() * n.ln().sqrt() / n_min + s * (n / n_max).sqrt());
    Ok(first + second)
}

/// Specialized upper bounds on trees.
#[derive(Debug, Clone, Copy)]
pub struct TreeBounds {
    /// `e^{k_E} sqrt(D ln n / L)` with `D` the diameter.
    pub linf_diameter: f64,
    /// `sqrt(max over node pairs of sum over the connecting path of
    /// exp(2 |theta_i - theta_j|) ln n / L)`.
    pub linf_edge_exact: f64,
    /// `e^{k_E} sqrt(D n ln n / L)`.
    pub l2_diameter: f64,
}

pub fn tree_upper_bounds(tree: &ComparisonGraph, l: u64, theta: &BtlParameters) -> Result<TreeBounds> {
    if !tree.is_tree() {
        return Err(BtlError::NotATree("tree bounds need a tree graph".into()));
    }
    let n = tree.n() as f64;
    let lf = l as f64;
    let kappa_e = theta.kappa_e(tree)?;
    let d = tree.diameter()? as f64;
    let linf_diameter = kappa_e.exp() * (d * n.ln() / lf).sqrt();
    let l2_diameter = kappa_e.exp() * (d * n * n.ln() / lf).sqrt();

    // Max over node pairs of the path sum of exp(2 |gap|), computed by a
    // traversal from every node; paths in a tree are unique.
    let adj = tree.adjacency_lists();
    let weight = |a: usize, b: usize| {
        (2.0 * (theta.theta()[a] - theta.theta()[b]).abs()).exp()
    };
    let mut best: f64 = 0.0;
    for start in 0..tree.n() {
        let mut dist = vec![f64::NAN; tree.n()];
        dist[start] = 0.0;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if dist[v].is_nan() {
                    dist[v] = dist[u] + weight(u, v);
                    best = best.max(dist[v]);
                    stack.push(v);
                }
            }
        }
    }
    let linf_edge_exact = (best * n.ln() / lf).sqrt();
    Ok(TreeBounds { linf_diameter, linf_edge_exact, l2_diameter })
}

/// Topologies with tabulated sample-complexity rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyRate {
    Complete,
    Bipartite,
    Path,
    Star,
    Barbell,
}

impl std::str::FromStr for TopologyRate {
    type Err = BtlError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(Self::Complete),
            "bipartite" => Ok(Self::Bipartite),
            "path" => Ok(Self::Path),
            "star" => Ok(Self::Star),
            "barbell" => Ok(Self::Barbell),
            other => Err(BtlError::Validation(format!("unknown topology rate: {other}"))),
        }
    }
}

/// Tabulated `N_comp` rate for consistency, evaluated with constant 1.
/// These are orders, not bounds.
pub fn sample_complexity(topology: TopologyRate, n: usize, kappa_e: f64) -> f64 {
    let nf = n as f64;
    let e2 = (2.0 * kappa_e).exp();
    match topology {
        TopologyRate::Complete | TopologyRate::Bipartite => nf * nf,
        TopologyRate::Path => e2 * nf * nf * nf.ln(),
        TopologyRate::Star => e2 * nf * nf.ln(),
        TopologyRate::Barbell => e2 * nf.powi(5) * nf.ln(),
    }
}

/// Evaluate every applicable bound for one input set.
pub fn full_report(g: &ComparisonGraph, inputs: &BoundInputs) -> BoundReport {
    let mut values = BTreeMap::new();
    let mut put = |key: &str, v: Result<f64>| {
        values.insert(
            key.to_string(),
            match v {
                Ok(x) => BoundValue::Value(x),
                Err(_) => BoundValue::NotApplicable,
            },
        );
    };
    put("linf_upper_thm1", linf_upper_thm1(inputs));
    put("l2_upper_thm1", l2_upper_thm1(inputs));
    put("shah_l2", shah_l2_bound(inputs));
    put("hajek_l2", hajek_l2_bound(inputs));
    put("vanilla_upper_linf", vanilla_upper_linf(inputs));
    put(
        "minimax_lower_linf",
        minimax_lower_linf(g, inputs.l, inputs.kappa),
    );
    values.insert("yan_linf".to_string(), yan_linf_bound(inputs));
    BoundReport {
        values,
        constants_disclaimer: "all leading constants set to 1; compare trends, not magnitudes",
    }
}
