//! Embeddings of finite metric spaces: Fréchet coordinates in sup-norm
//! space, padding into the diameter-norm quotient, log-coordinates with
//! exponential triangle constraints, the composite pipeline into the
//! space of metrics on `[n]` modulo dilation, and Schoenberg's Euclidean
//! embeddability test with realized coordinates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::metric::{pair_count, pair_index, pairs, FiniteMetric, MetricError};

/// Additive tolerance for the exponential triangle constraints.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbedError {
    #[error("padding needs q > p >= 1, got p = {p}, q = {q}")]
    BadDimensions { p: usize, q: usize },
    #[error("log-coordinate membership fails on triple ({i},{j},{k})")]
    MembershipViolation { i: usize, j: usize, k: usize },
    #[error("{m} points exceed the capacity {max} of the target space")]
    TooManyPoints { m: usize, max: usize },
    #[error("target point count must be at least 3, got {n}")]
    BadTarget { n: usize },
    #[error("base index {base} out of range for {n} points")]
    BadBaseIndex { base: usize, n: usize },
    #[error("log-coordinate vector has length {got}, expected {expected}")]
    BadCoordinateLength { expected: usize, got: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Fréchet embedding: point `j` maps to its distance profile
/// `(d(1, j), …, d(n-1, j))` against every point except the first.
/// Pairwise sup-norm distances reproduce the metric exactly.
pub fn frechet_embed(r: &FiniteMetric) -> Vec<Vec<f64>> {
    let n = r.n();
    (0..n)
        .map(|j| (1..n).map(|l| r.dist(l, j)).collect())
        .collect()
}

/// Sup-norm distance between two coordinate vectors.
pub fn sup_norm_dist(u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Spread (max minus min) of a coordinate vector: the diameter seminorm
/// of its class modulo the all-ones direction.
pub fn vector_diameter(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// Append `q - p` zeros, mapping `R^p` into the diameter-norm quotient
/// `R^q` modulo the all-ones direction.
///
/// The class distance of two padded vectors is `vector_diameter` of their
/// difference, and it brackets the sup-norm distance within a factor of
/// two: `sup <= diam <= 2 sup`. The map is exactly isometric only for
/// `p = 1`; a difference with both signs present, such as `(1, -1)`
/// padded by a zero, has diameter 2 against sup-norm 1.
pub fn pad_to_quotient(v: &[f64], q: usize) -> Result<Vec<f64>, EmbedError> {
    let p = v.len();
    if p < 1 || q <= p {
        return Err(EmbedError::BadDimensions { p, q });
    }
    let mut out = v.to_vec();
    out.resize(q, 0.0);
    Ok(out)
}

/// Log-coordinates of a metric on `[n]`: the vector `ln d(i,j)` over
/// lexicographic pairs. A vector of this shape corresponds to a metric
/// exactly when `exp` of its entries satisfies every triangle inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PsiJson", into = "PsiJson")]
pub struct PsiPoint {
    n: usize,
    psi: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PsiJson {
    n: usize,
    psi: Vec<f64>,
}

impl TryFrom<PsiJson> for PsiPoint {
    type Error = EmbedError;
    fn try_from(j: PsiJson) -> Result<Self, EmbedError> {
        PsiPoint::from_values(j.n, j.psi)
    }
}

impl From<PsiPoint> for PsiJson {
    fn from(p: PsiPoint) -> PsiJson {
        PsiJson { n: p.n, psi: p.psi }
    }
}

impl PsiPoint {
    /// Wrap a raw log-coordinate vector (length `n(n-1)/2`); membership
    /// is checked separately.
    pub fn from_values(n: usize, psi: Vec<f64>) -> Result<Self, EmbedError> {
        let expected = pair_count(n);
        if psi.len() != expected {
            return Err(EmbedError::BadCoordinateLength {
                expected,
                got: psi.len(),
            });
        }
        Ok(PsiPoint { n, psi })
    }

    pub fn from_metric(r: &FiniteMetric) -> PsiPoint {
        PsiPoint {
            n: r.n(),
            psi: r.pair_values().iter().map(|d| d.ln()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.psi
    }

    /// First ordered triple violating
    /// `exp(psi_ij) + exp(psi_jk) >= exp(psi_ik)` beyond the additive
    /// tolerance, if any.
    pub fn membership_violation(&self, tol: f64) -> Option<(usize, usize, usize)> {
        let n = self.n;
        let e = |a: usize, b: usize| {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.psi[pair_index(n, lo, hi)].exp()
        };
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    if e(i, j) + e(j, k) < e(i, k) - tol {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Exponentiate back to a metric; errors on a membership violation.
    pub fn to_metric(&self) -> Result<FiniteMetric, EmbedError> {
        if let Some((i, j, k)) = self.membership_violation(MEMBERSHIP_TOL) {
            return Err(EmbedError::MembershipViolation { i, j, k });
        }
        Ok(FiniteMetric::from_raw(
            self.n,
            self.psi.iter().map(|v| v.exp()).collect(),
        ))
    }

    /// Pointwise difference of two log-coordinate vectors; its
    /// [`vector_diameter`] is exactly the log-distortion of the metrics.
    pub fn diff(&self, other: &PsiPoint) -> Result<Vec<f64>, EmbedError> {
        if self.n != other.n {
            return Err(EmbedError::Metric(MetricError::DimensionMismatch {
                left: self.n,
                right: other.n,
            }));
        }
        Ok(self
            .psi
            .iter()
            .zip(&other.psi)
            .map(|(a, b)| a - b)
            .collect())
    }
}

/// One row of an embedding pair table.
#[derive(Debug, Clone, Serialize)]
pub struct PairComparison {
    pub i: usize,
    pub j: usize,
    /// Distance in the (rescaled) source space.
    pub source: f64,
    /// Dilation-quotient distance between the image metrics.
    pub image: f64,
    pub ratio: f64,
}

/// Outcome of the composite embedding into the space of metrics on `[n]`
/// modulo dilation.
///
/// The image metrics are genuine metrics whenever `membership_ok` holds
/// (always, after the diameter rescale). Ratios compare image distance to
/// source distance and land in `[1, 2]`; the upper end is attained, so the
/// pipeline reports distortion bounds rather than claiming isometry.
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingReport {
    pub images: Vec<FiniteMetric>,
    pub pair_table: Vec<PairComparison>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub membership_ok: bool,
}

/// Embed an `m`-point metric space into the space of metrics on `[n]`
/// modulo dilation, for `m <= n(n-1)/2`:
/// rescale to diameter `ln 2`, take Fréchet coordinates, pad into the
/// diameter-norm quotient, and read each padded vector as log-coordinates
/// of a metric on `[n]`.
pub fn embed_into_sn(x: &FiniteMetric, n: usize) -> Result<EmbeddingReport, EmbedError> {
    if n < 3 {
        return Err(EmbedError::BadTarget { n });
    }
    let m = x.n();
    let cap = pair_count(n);
    if m > cap {
        return Err(EmbedError::TooManyPoints { m, max: cap });
    }
    let rescaled = x.scale(std::f64::consts::LN_2 / x.diam());
    let coords = frechet_embed(&rescaled);
    let psis: Vec<PsiPoint> = coords
        .iter()
        .map(|v| {
            let padded = pad_to_quotient(v, cap)?;
            PsiPoint::from_values(n, padded)
        })
        .collect::<Result<_, _>>()?;
    let membership_ok = psis
        .iter()
        .all(|p| p.membership_violation(MEMBERSHIP_TOL).is_none());
    let images: Vec<FiniteMetric> = psis
        .iter()
        .map(|p| FiniteMetric::from_raw(n, p.values().iter().map(|v| v.exp()).collect()))
        .collect();
    let mut pair_table = Vec::with_capacity(pair_count(m));
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    for (i, j) in pairs(m) {
        let source = rescaled.dist(i, j);
        let image = images[i].log_distortion(&images[j])?;
        let ratio = image / source;
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
        pair_table.push(PairComparison {
            i,
            j,
            source,
            image,
            ratio,
        });
    }
    Ok(EmbeddingReport {
        images,
        pair_table,
        min_ratio,
        max_ratio,
        membership_ok,
    })
}

/// The Schoenberg matrix with base point `x_base`:
/// `A[j][k] = d(base, p_j)^2 + d(base, p_k)^2 - d(p_j, p_k)^2` over the
/// remaining points in index order. `A` is twice the Gram matrix of the
/// difference vectors from the base, so the metric embeds in Euclidean
/// space of dimension `r` (and no lower) exactly when `A` is positive
/// semidefinite of rank `r`.
pub fn schoenberg_matrix(r: &FiniteMetric, base: usize) -> Result<Vec<Vec<f64>>, EmbedError> {
    let n = r.n();
    if base >= n {
        return Err(EmbedError::BadBaseIndex { base, n });
    }
    let others: Vec<usize> = (0..n).filter(|&i| i != base).collect();
    let a = others
        .iter()
        .map(|&pj| {
            others
                .iter()
                .map(|&pk| {
                    let dj = r.dist(base, pj);
                    let dk = r.dist(base, pk);
                    let djk = r.dist(pj, pk);
                    dj * dj + dk * dk - djk * djk
                })
                .collect()
        })
        .collect();
    Ok(a)
}

/// Witness for a non-embeddable verdict.
#[derive(Debug, Clone, Serialize)]
pub struct NegativeWitness {
    pub eigenvalue: f64,
    pub eigenvector: Vec<f64>,
}

/// Euclidean embeddability verdict with realized coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct SchoenbergReport {
    pub matrix: Vec<Vec<f64>>,
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    pub embeddable: bool,
    /// Count of eigenvalues above the (relative) tolerance.
    pub rank: usize,
    /// One point per row in original index order, base point at the
    /// origin, in `R^rank`.
    pub coords: Vec<Vec<f64>>,
    /// Largest absolute error of the realized pairwise distances.
    pub residual: f64,
    pub negative_witness: Option<NegativeWitness>,
}

/// Decide Euclidean embeddability via the spectrum of the Schoenberg
/// matrix and realize coordinates from its Gram factor. `tol` is relative
/// to the largest eigenvalue magnitude (squared distances vary over
/// orders of magnitude).
pub fn euclidean_embed(
    r: &FiniteMetric,
    base: usize,
    tol: f64,
) -> Result<SchoenbergReport, EmbedError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let matrix = schoenberg_matrix(r, base)?;
    let (eigenvalues, vectors) = linalg::jacobi_eigen(&matrix);
    let scale = eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tol_abs = tol * scale;
    let min_eig = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let embeddable = min_eig >= -tol_abs;
    let rank = eigenvalues.iter().filter(|&&v| v > tol_abs).count();
    let negative_witness = if embeddable {
        None
    } else {
        let idx = eigenvalues.len() - 1; // sorted descending
        Some(NegativeWitness {
            eigenvalue: eigenvalues[idx],
            eigenvector: vectors[idx].clone(),
        })
    };

    // coordinates from the Gram factor of A/2: row_j = V sqrt(Lambda/2)
    let n = r.n();
    let others: Vec<usize> = (0..n).filter(|&i| i != base).collect();
    let mut coords = vec![vec![0.0; rank]; n];
    for (row, &p) in others.iter().enumerate() {
        for c in 0..rank {
            coords[p][c] = vectors[c][row] * (eigenvalues[c].max(0.0) / 2.0).sqrt();
        }
    }
    let mut residual = 0.0f64;
    for (i, j) in pairs(n) {
        let realized = coords[i]
            .iter()
            .zip(&coords[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        residual = residual.max((realized - r.dist(i, j)).abs());
    }
    Ok(SchoenbergReport {
        matrix,
        eigenvalues,
        embeddable,
        rank,
        coords,
        residual,
        negative_witness,
    })
}
