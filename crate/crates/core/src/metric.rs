//! Finite metric spaces on `{0, …, n-1}` and the log-distortion
//! pseudometric on the space of such metrics.
//!
//! Pairwise distances are stored once per unordered pair, with pairs
//! `{i, j}`, `i < j`, enumerated lexicographically; the same enumeration
//! is used everywhere in this crate so log-coordinate vectors are
//! interchangeable across modules. Distances quotiented by positive
//! scaling form a metric space of their own, with distance
//!
//! ```text
//! d(r1, r2) = max_{i<j} ln(r2_ij / r1_ij) - min_{i<j} ln(r2_ij / r1_ij)
//! ```
//!
//! which is zero exactly on proportional pairs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::Xoshiro256;

/// Relative tolerance for triangle and proportionality checks. All
/// constructions in this module are exact in double precision at the
/// point counts the crate targets, so the guard only absorbs rounding.
pub const REL_TOL: f64 = 1e-12;

/// Cap on brute-force isometry search (9! permutations is instant).
pub const ISOMETRY_MAX_N: usize = 9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("distance table is not square: row {row} has width {width}, expected {n}")]
    NotSquare { n: usize, row: usize, width: usize },
    #[error("need at least 2 points, got {n}")]
    TooFewPoints { n: usize },
    #[error("diagonal entry at {i} is {value}, expected 0")]
    NonZeroDiagonal { i: usize, value: f64 },
    #[error("table is not symmetric at ({i},{j})")]
    NonSymmetric { i: usize, j: usize },
    #[error("off-diagonal entry at ({i},{j}) is {value}, expected > 0")]
    NonPositiveOffDiagonal { i: usize, j: usize, value: f64 },
    #[error("triangle inequality fails on ({i},{j},{k}): d({i},{k}) > d({i},{j}) + d({j},{k})")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("point counts differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("n = {n} exceeds the brute-force isometry cap {max}")]
    TooLarge { n: usize, max: usize },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("pair list does not cover all {expected} pairs of [{n}] exactly once")]
    IncompletePairs { n: usize, expected: usize },
}

/// Number of unordered pairs of an `n`-point set.
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Lexicographic index of the pair `{i, j}`, `i < j`, in `0..pair_count(n)`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Lexicographic enumeration of unordered pairs of `{0, …, n-1}`.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// A metric on `{0, …, n-1}`: positive, symmetric, triangle-valid
/// pairwise distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MetricJson", into = "MetricJson")]
pub struct FiniteMetric {
    n: usize,
    d: Vec<f64>,
}

/// Wire form: `{"n": …, "d": [[i, j, value], …]}` with `i < j`, 0-based.
#[derive(Serialize, Deserialize)]
struct MetricJson {
    n: usize,
    d: Vec<(usize, usize, f64)>,
}

impl TryFrom<MetricJson> for FiniteMetric {
    type Error = MetricError;
    fn try_from(j: MetricJson) -> Result<Self, MetricError> {
        FiniteMetric::from_pairs(j.n, &j.d)
    }
}

impl From<FiniteMetric> for MetricJson {
    fn from(m: FiniteMetric) -> MetricJson {
        let d = pairs(m.n)
            .map(|(i, j)| (i, j, m.dist(i, j)))
            .collect();
        MetricJson { n: m.n, d }
    }
}

impl FiniteMetric {
    /// Build from a full square table, validating every axiom. The
    /// triangle check allows relative slack [`REL_TOL`].
    pub fn from_matrix(table: &[Vec<f64>]) -> Result<Self, MetricError> {
        let n = table.len();
        if n < 2 {
            return Err(MetricError::TooFewPoints { n });
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::NotSquare {
                    n,
                    row,
                    width: r.len(),
                });
            }
        }
        for (i, r) in table.iter().enumerate() {
            if r[i] != 0.0 {
                return Err(MetricError::NonZeroDiagonal { i, value: r[i] });
            }
        }
        for (i, j) in pairs(n) {
            if table[i][j] != table[j][i] {
                return Err(MetricError::NonSymmetric { i, j });
            }
        }
        let mut d = vec![0.0; pair_count(n)];
        for (i, j) in pairs(n) {
            let v = table[i][j];
            if !v.is_finite() || v <= 0.0 {
                return Err(MetricError::NonPositiveOffDiagonal { i, j, value: v });
            }
            d[pair_index(n, i, j)] = v;
        }
        let m = FiniteMetric { n, d };
        m.check_triangle()?;
        Ok(m)
    }

    /// Build from a pair list covering every pair `{i, j}` exactly once.
    pub fn from_pairs(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self, MetricError> {
        if n < 2 {
            return Err(MetricError::TooFewPoints { n });
        }
        let expected = pair_count(n);
        let mut d = vec![f64::NAN; expected];
        for &(i, j, v) in entries {
            if i >= j || j >= n {
                return Err(MetricError::ParameterOutOfRange(format!(
                    "pair ({i},{j}) is not an ordered pair of [{n}]"
                )));
            }
            let idx = pair_index(n, i, j);
            if !d[idx].is_nan() {
                return Err(MetricError::IncompletePairs { n, expected });
            }
            if !v.is_finite() || v <= 0.0 {
                return Err(MetricError::NonPositiveOffDiagonal { i, j, value: v });
            }
            d[idx] = v;
        }
        if d.iter().any(|v| v.is_nan()) {
            return Err(MetricError::IncompletePairs { n, expected });
        }
        let m = FiniteMetric { n, d };
        m.check_triangle()?;
        Ok(m)
    }

    /// Crate-internal constructor for values already known to satisfy the
    /// axioms (or, for embedding reports, explicitly flagged otherwise).
    pub(crate) fn from_raw(n: usize, d: Vec<f64>) -> Self {
        debug_assert_eq!(d.len(), pair_count(n));
        FiniteMetric { n, d }
    }

    fn check_triangle(&self) -> Result<(), MetricError> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let lhs = self.dist(i, k);
                    let rhs = self.dist(i, j) + self.dist(j, k);
                    if lhs > rhs * (1.0 + REL_TOL) {
                        return Err(MetricError::TriangleViolation { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Distance between two points; zero on the diagonal.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.d[pair_index(self.n, a, b)]
    }

    /// Pair values in lexicographic pair order.
    pub fn pair_values(&self) -> &[f64] {
        &self.d
    }

    pub fn diam(&self) -> f64 {
        self.d.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_dist(&self) -> f64 {
        self.d.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut t = vec![vec![0.0; n]; n];
        for (i, j) in pairs(n) {
            t[i][j] = self.dist(i, j);
            t[j][i] = t[i][j];
        }
        t
    }

    /// Multiply every distance by `alpha > 0`.
    pub fn scale(&self, alpha: f64) -> FiniteMetric {
        assert!(alpha > 0.0 && alpha.is_finite(), "scale must be positive");
        FiniteMetric {
            n: self.n,
            d: self.d.iter().map(|v| v * alpha).collect(),
        }
    }

    /// Log-distortion distance between two metrics on the same point set:
    /// the spread of `ln(other/self)` over pairs. Symmetric, zero exactly
    /// on proportional pairs.
    pub fn log_distortion(&self, other: &FiniteMetric) -> Result<f64, MetricError> {
        if self.n != other.n {
            return Err(MetricError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for (a, b) in self.d.iter().zip(&other.d) {
            let q = b.ln() - a.ln();
            hi = hi.max(q);
            lo = lo.min(q);
        }
        Ok(hi - lo)
    }

    /// Exact proportionality detector: returns `alpha` with
    /// `other = alpha * self` within relative [`REL_TOL`], else `None`.
    pub fn are_proportional(&self, other: &FiniteMetric) -> Result<Option<f64>, MetricError> {
        if self.n != other.n {
            return Err(MetricError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let alpha = other.d[0] / self.d[0];
        for (a, b) in self.d.iter().zip(&other.d) {
            if (b - alpha * a).abs() > REL_TOL * b.abs().max(alpha * a.abs()) {
                return Ok(None);
            }
        }
        Ok(Some(alpha))
    }

    /// Search for a distance-preserving bijection of the point sets.
    /// Depth-first with pruning; capped at [`ISOMETRY_MAX_N`] points.
    pub fn brute_force_isometry(
        &self,
        other: &FiniteMetric,
    ) -> Result<Option<Vec<usize>>, MetricError> {
        if self.n != other.n {
            return Err(MetricError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.n > ISOMETRY_MAX_N {
            return Err(MetricError::TooLarge {
                n: self.n,
                max: ISOMETRY_MAX_N,
            });
        }
        let n = self.n;
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn extend(
            r1: &FiniteMetric,
            r2: &FiniteMetric,
            perm: &mut Vec<usize>,
            used: &mut [bool],
        ) -> bool {
            let t = perm.len();
            if t == r1.n() {
                return true;
            }
            for cand in 0..r1.n() {
                if used[cand] {
                    continue;
                }
                let ok = (0..t).all(|s| {
                    let want = r1.dist(s, t);
                    let got = r2.dist(perm[s], cand);
                    (got - want).abs() <= REL_TOL * want.abs().max(got.abs())
                });
                if ok {
                    used[cand] = true;
                    perm.push(cand);
                    if extend(r1, r2, perm, used) {
                        return true;
                    }
                    perm.pop();
                    used[cand] = false;
                }
            }
            false
        }
        if extend(self, other, &mut perm, &mut used) {
            Ok(Some(perm))
        } else {
            Ok(None)
        }
    }

    /// Adjoin one point at distance `diam` from every existing point.
    /// The triangle inequality holds automatically and log-distortion
    /// between two extended metrics equals the original value exactly.
    pub fn apex_extend(&self) -> FiniteMetric {
        let n = self.n;
        let diam = self.diam();
        let mut d = vec![0.0; pair_count(n + 1)];
        for (i, j) in pairs(n) {
            d[pair_index(n + 1, i, j)] = self.dist(i, j);
        }
        for i in 0..n {
            d[pair_index(n + 1, i, n)] = diam;
        }
        FiniteMetric { n: n + 1, d }
    }

    // ----- named families -----

    /// All off-diagonal distances equal to 1.
    pub fn discrete(n: usize) -> Result<FiniteMetric, MetricError> {
        if n < 2 {
            return Err(MetricError::TooFewPoints { n });
        }
        Ok(FiniteMetric {
            n,
            d: vec![1.0; pair_count(n)],
        })
    }

    /// All distances 1 except the lexicographic `edge`, which is `a`.
    /// A metric precisely for `a` in `(0, 2]`.
    pub fn rho_family(n: usize, edge: usize, a: f64) -> Result<FiniteMetric, MetricError> {
        if n < 3 {
            return Err(MetricError::ParameterOutOfRange(format!(
                "rho family needs n >= 3, got {n}"
            )));
        }
        if edge >= pair_count(n) {
            return Err(MetricError::ParameterOutOfRange(format!(
                "edge {edge} out of range for n = {n}"
            )));
        }
        if !(a > 0.0 && a <= 2.0) {
            return Err(MetricError::ParameterOutOfRange(format!(
                "rho family needs a in (0, 2], got {a}"
            )));
        }
        let mut d = vec![1.0; pair_count(n)];
        d[edge] = a;
        Ok(FiniteMetric { n, d })
    }

    /// Pullback of the line set `{1, …, n-1, n+m+1} ⊂ R` under the
    /// order-preserving relabeling to `{0, …, n-1}`.
    pub fn line_witness(n: usize, m: usize) -> Result<FiniteMetric, MetricError> {
        if n < 3 {
            return Err(MetricError::ParameterOutOfRange(format!(
                "line witness needs n >= 3, got {n}"
            )));
        }
        if m < 1 {
            return Err(MetricError::ParameterOutOfRange(
                "line witness needs m >= 1".into(),
            ));
        }
        let mut coords: Vec<f64> = (1..n).map(|i| i as f64).collect();
        coords.push((n + m + 1) as f64);
        let mut d = vec![0.0; pair_count(n)];
        for (i, j) in pairs(n) {
            d[pair_index(n, i, j)] = (coords[j] - coords[i]).abs();
        }
        Ok(FiniteMetric { n, d })
    }

    /// Two metrics that are isometric but not proportional: each has a
    /// single pair at distance 1/2 (on `e1` resp. `e2`) and all other
    /// distances 1.
    pub fn gh_pair(
        n: usize,
        e1: (usize, usize),
        e2: (usize, usize),
    ) -> Result<(FiniteMetric, FiniteMetric), MetricError> {
        if n < 3 {
            return Err(MetricError::ParameterOutOfRange(format!(
                "gh pair needs n >= 3, got {n}"
            )));
        }
        let norm = |(a, b): (usize, usize)| if a < b { (a, b) } else { (b, a) };
        let (a1, b1) = norm(e1);
        let (a2, b2) = norm(e2);
        if a1 == b1 || a2 == b2 || b1 >= n || b2 >= n {
            return Err(MetricError::ParameterOutOfRange(format!(
                "edges {e1:?}, {e2:?} must be distinct pairs of [{n}]"
            )));
        }
        if (a1, b1) == (a2, b2) {
            return Err(MetricError::ParameterOutOfRange(
                "gh pair needs two distinct edges".into(),
            ));
        }
        let mut first = vec![1.0; pair_count(n)];
        first[pair_index(n, a1, b1)] = 0.5;
        let mut second = vec![1.0; pair_count(n)];
        second[pair_index(n, a2, b2)] = 0.5;
        Ok((
            FiniteMetric { n, d: first },
            FiniteMetric { n, d: second },
        ))
    }
}

/// Parameter form of the named families, mirroring the constructors.
#[derive(Debug, Clone, PartialEq)]
pub enum Special {
    Discrete { n: usize },
    RhoFamily { n: usize, edge: usize, a: f64 },
    LineWitness { n: usize, m: usize },
    GhPair { n: usize, e1: (usize, usize), e2: (usize, usize) },
}

/// Result of [`make_special`]: one metric, or the isometric pair.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecialMetric {
    One(FiniteMetric),
    Pair(FiniteMetric, FiniteMetric),
}

pub fn make_special(kind: Special) -> Result<SpecialMetric, MetricError> {
    match kind {
        Special::Discrete { n } => FiniteMetric::discrete(n).map(SpecialMetric::One),
        Special::RhoFamily { n, edge, a } => {
            FiniteMetric::rho_family(n, edge, a).map(SpecialMetric::One)
        }
        Special::LineWitness { n, m } => FiniteMetric::line_witness(n, m).map(SpecialMetric::One),
        Special::GhPair { n, e1, e2 } => {
            FiniteMetric::gh_pair(n, e1, e2).map(|(a, b)| SpecialMetric::Pair(a, b))
        }
    }
}

/// Closed-form distance between two single-edge metrics `rho_{j,a}` and
/// `rho_{j',a'}`, for `a, a'` in `(0, 2]`:
///
/// * shared edge: `|ln a - ln a'|`;
/// * distinct edges, deviations on the same side of 1: `|ln a| + |ln a'|`;
/// * distinct edges otherwise: `max(|ln a|, |ln a'|)`.
pub fn rho_distance_closed_form(
    j: usize,
    a: f64,
    jp: usize,
    ap: f64,
) -> Result<f64, MetricError> {
    for v in [a, ap] {
        if !(v > 0.0 && v <= 2.0) {
            return Err(MetricError::ParameterOutOfRange(format!(
                "rho family needs a in (0, 2], got {v}"
            )));
        }
    }
    let la = a.ln();
    let lap = ap.ln();
    if j == jp {
        Ok((la - lap).abs())
    } else if (a - 1.0) * (ap - 1.0) >= 0.0 {
        Ok(la.abs() + lap.abs())
    } else {
        Ok(la.abs().max(lap.abs()))
    }
}

/// Canonical dilation representative: distances rescaled so the minimum
/// pairwise distance is exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricClass {
    rep: FiniteMetric,
}

impl MetricClass {
    pub fn new(m: &FiniteMetric) -> MetricClass {
        let min = m.min_dist();
        MetricClass {
            rep: m.scale(1.0 / min),
        }
    }

    pub fn rep(&self) -> &FiniteMetric {
        &self.rep
    }

    /// Same dilation class, up to relative [`REL_TOL`] on the
    /// canonical representatives.
    pub fn same_class(&self, other: &MetricClass) -> bool {
        self.rep.n == other.rep.n
            && self
                .rep
                .d
                .iter()
                .zip(&other.rep.d)
                .all(|(a, b)| (a - b).abs() <= REL_TOL * a.abs().max(b.abs()))
    }
}

/// Size of a greedy `r`-separated subset (first-fit in input order);
/// a lower bound on the packing number.
pub fn packing_count<T>(points: &[T], dist: impl Fn(&T, &T) -> f64, r: f64) -> usize {
    let mut kept: Vec<&T> = Vec::new();
    for p in points {
        if kept.iter().all(|q| dist(p, q) >= r) {
            kept.push(p);
        }
    }
    kept.len()
}

/// Random metric with distances uniform in `[1, 2]`; the triangle
/// inequality holds automatically on that range.
pub fn random_metric(n: usize, rng: &mut Xoshiro256) -> FiniteMetric {
    assert!(n >= 2);
    let d: Vec<f64> = (0..pair_count(n)).map(|_| rng.range(1.0, 2.0)).collect();
    FiniteMetric::from_raw(n, d)
}
