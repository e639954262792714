//! Spectral statistics of comparison graphs: the Laplacian spectrum,
//! algebraic connectivity, degree extremes, and the normalized Laplacian
//! consumed by the minimax lower bound.

use crate::error::{BtlError, Result};
use crate::graph::{min_common_neighbors, ComparisonGraph};
use nalgebra::DMatrix;

/// Connectivity threshold on lambda_2; eigenvalues below it are treated as
/// numerically zero.
pub const LAMBDA_TOL: f64 = 1e-9;

/// Spectral and topological statistics of a comparison graph.
#[derive(Debug, Clone)]
pub struct SpectralSummary {
    /// Algebraic connectivity: the second-smallest Laplacian eigenvalue.
    pub lambda2: f64,
    /// Maximum degree.
    pub n_max: usize,
    /// Minimum degree.
    pub n_min: usize,
    /// Per-node degrees.
    pub degrees: Vec<usize>,
    /// min over unordered pairs i != j of the common-neighbor count.
    pub min_common_neighbors: usize,
    /// Sorted eigenvalues of the unnormalized Laplacian `L = D - A`.
    pub laplacian_spectrum: Vec<f64>,
    pub connected: bool,
}

/// Eigenvalues of the normalized Laplacian: the Laplacian averaged over all
/// individual comparisons, so each eigenvalue is `lambda_i(L) / |E|` under
/// uniform per-edge counts.
#[derive(Debug, Clone)]
pub struct NormalizedLaplacianSpectrum {
    /// Sorted eigenvalues of the normalized Laplacian.
    pub eigenvalues: Vec<f64>,
    /// Total comparison count `|E| * L` used in the normalization.
    pub n_comp: usize,
}

impl NormalizedLaplacianSpectrum {
    /// Trace of the pseudo-inverse: sum of reciprocals of the nonzero
    /// eigenvalues.
    pub fn pseudo_inverse_trace(&self) -> f64 {
        self.eigenvalues
            .iter()
            .filter(|&&l| l > LAMBDA_TOL)
            .map(|l| 1.0 / l)
            .sum()
    }
}

/// Dense Laplacian of the graph.
pub fn laplacian(g: &ComparisonGraph) -> DMatrix<f64> {
    let n = g.n();
    let mut m = DMatrix::zeros(n, n);
    for &(i, j) in g.edges() {
        m[(i, i)] += 1.0;
        m[(j, j)] += 1.0;
        m[(i, j)] -= 1.0;
        m[(j, i)] -= 1.0;
    }
    m
}

/// Sorted eigenvalues of a dense symmetric matrix.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut vals: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Full spectral summary via dense symmetric eigendecomposition.
pub fn spectral_summary(g: &ComparisonGraph) -> SpectralSummary {
    let degrees = g.degrees();
    let spectrum = symmetric_eigenvalues(&laplacian(g));
    let lambda2 = if g.n() >= 2 { spectrum[1] } else { 0.0 };
    SpectralSummary {
        lambda2,
        n_max: degrees.iter().copied().max().unwrap_or(0),
        n_min: degrees.iter().copied().min().unwrap_or(0),
        min_common_neighbors: min_common_neighbors(g),
        degrees,
        laplacian_spectrum: spectrum,
        connected: lambda2 > LAMBDA_TOL,
    }
}

/// Normalized Laplacian spectrum for a connected graph whose every edge is
/// compared `comparisons_per_edge` times.
pub fn normalized_spectrum(
    g: &ComparisonGraph,
    comparisons_per_edge: usize,
) -> Result<NormalizedLaplacianSpectrum> {
    if comparisons_per_edge == 0 {
        return Err(BtlError::Validation("comparisons per edge must be >= 1".into()));
    }
    if !g.is_connected() {
        return Err(BtlError::Disconnected);
    }
    let e = g.edge_count() as f64;
    let eigenvalues = symmetric_eigenvalues(&laplacian(g))
        .into_iter()
        .map(|l| l / e)
        .collect();
    Ok(NormalizedLaplacianSpectrum {
        eigenvalues,
        n_comp: g.edge_count() * comparisons_per_edge,
    })
}
