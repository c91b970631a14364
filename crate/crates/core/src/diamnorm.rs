//! Bounded functions on a finite labeled domain with values in an abelian
//! metric semigroup, the cross-difference pseudometric
//!
//! ```text
//! d(f, g) = max_{x, x'} dist(f(x) + g(x'), f(x') + g(x))
//! ```
//!
//! and its quotient by the relation `d(f, g) = 0`. For group carriers the
//! pseudometric is the diameter seminorm of the difference,
//! `d(f, g) = diam(im(f - g))`, and classes have a canonical
//! representative vanishing at a chosen anchor (the Kuratowski section).
//!
//! Domains here are finite label lists, so every supremum is an exact
//! maximum. Two carriers ship built in: `f64` with `|a - b|`, and the
//! integer lattice [`Z3`] with the l1 distance. Carriers are types, so
//! mixing carriers is a compile error; only domain mismatches surface at
//! run time.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

use crate::rng::Xoshiro256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiamError {
    #[error("domains differ (labels must match in order)")]
    DomainMismatch,
    #[error("domain needs at least 2 distinct labels, got {got}")]
    TooFewLabels { got: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("{labels} labels but {values} values")]
    LengthMismatch { labels: usize, values: usize },
    #[error("anchor {0:?} not in domain")]
    AnchorNotInDomain(String),
    #[error("degenerate sample at index {0}: the two elements coincide")]
    DegenerateSample(usize),
}

/// Abelian semigroup carrier with a translation-invariant metric:
/// `dist(a + c, b + c) = dist(a, b)`.
pub trait MetricSemigroup: Clone + PartialEq + std::fmt::Debug {
    fn add(&self, other: &Self) -> Self;
    fn dist(&self, other: &Self) -> f64;
}

/// Carrier with subtraction; enables the diameter-seminorm identity and
/// Kuratowski sections.
pub trait MetricGroup: MetricSemigroup {
    fn sub(&self, other: &Self) -> Self;
}

/// Carrier that can produce random elements for property trials. The
/// built-in carriers draw values whose semigroup arithmetic is exact in
/// f64, so invariance laws can be asserted with zero tolerance.
pub trait SampleCarrier: MetricSemigroup {
    fn sample(rng: &mut Xoshiro256) -> Self;
}

impl MetricSemigroup for f64 {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn dist(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
}

impl MetricGroup for f64 {
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

impl SampleCarrier for f64 {
    fn sample(rng: &mut Xoshiro256) -> Self {
        rng.dyadic()
    }
}

/// Integer lattice point of `Z^3` under the l1 distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Z3(pub [i64; 3]);

impl MetricSemigroup for Z3 {
    fn add(&self, other: &Self) -> Self {
        Z3([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }
    fn dist(&self, other: &Self) -> f64 {
        (0..3).map(|i| (self.0[i] - other.0[i]).abs()).sum::<i64>() as f64
    }
}

impl MetricGroup for Z3 {
    fn sub(&self, other: &Self) -> Self {
        Z3([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }
}

impl SampleCarrier for Z3 {
    fn sample(rng: &mut Xoshiro256) -> Self {
        Z3([
            rng.index(2001) as i64 - 1000,
            rng.index(2001) as i64 - 1000,
            rng.index(2001) as i64 - 1000,
        ])
    }
}

/// Total function from a finite ordered label list into a carrier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedFunction<M> {
    labels: Vec<String>,
    values: Vec<M>,
}

impl<M: MetricSemigroup> BoundedFunction<M> {
    pub fn new(labels: Vec<String>, values: Vec<M>) -> Result<Self, DiamError> {
        if labels.len() < 2 {
            return Err(DiamError::TooFewLabels { got: labels.len() });
        }
        if labels.len() != values.len() {
            return Err(DiamError::LengthMismatch {
                labels: labels.len(),
                values: values.len(),
            });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(DiamError::DuplicateLabel(l.clone()));
            }
        }
        Ok(BoundedFunction { labels, values })
    }

    /// Values on `"0", "1", …` index labels.
    pub fn from_values(values: Vec<M>) -> Result<Self, DiamError> {
        let labels = (0..values.len()).map(|i| i.to_string()).collect();
        BoundedFunction::new(labels, values)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[M] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction demands at least two labels
    }

    pub fn value_at(&self, label: &str) -> Option<&M> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.values[i])
    }

    fn same_domain(&self, other: &Self) -> Result<(), DiamError> {
        if self.labels != other.labels {
            return Err(DiamError::DomainMismatch);
        }
        Ok(())
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self, DiamError> {
        self.same_domain(other)?;
        Ok(BoundedFunction {
            labels: self.labels.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }
}

impl<M: MetricGroup> BoundedFunction<M> {
    /// Pointwise difference (group carriers only).
    pub fn sub(&self, other: &Self) -> Result<Self, DiamError> {
        self.same_domain(other)?;
        Ok(BoundedFunction {
            labels: self.labels.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    /// Class representative vanishing at `anchor`: `x -> f(x) - f(anchor)`.
    pub fn section_at(&self, anchor: &str) -> Result<Self, DiamError> {
        let base = self
            .value_at(anchor)
            .ok_or_else(|| DiamError::AnchorNotInDomain(anchor.to_string()))?
            .clone();
        Ok(BoundedFunction {
            labels: self.labels.clone(),
            values: self.values.iter().map(|v| v.sub(&base)).collect(),
        })
    }
}

/// The cross-difference pseudometric: maximum over ordered label pairs of
/// `dist(f(x) + g(x'), f(x') + g(x))`.
pub fn pair_pseudometric<M: MetricSemigroup>(
    f: &BoundedFunction<M>,
    g: &BoundedFunction<M>,
) -> Result<f64, DiamError> {
    if f.labels != g.labels {
        return Err(DiamError::DomainMismatch);
    }
    let n = f.len();
    let mut best = 0.0f64;
    for x in 0..n {
        for xp in x + 1..n {
            let lhs = f.values[x].add(&g.values[xp]);
            let rhs = f.values[xp].add(&g.values[x]);
            best = best.max(lhs.dist(&rhs));
        }
    }
    Ok(best)
}

/// Sup-metric: maximum over labels of the carrier distance.
pub fn sup_distance<M: MetricSemigroup>(
    f: &BoundedFunction<M>,
    g: &BoundedFunction<M>,
) -> Result<f64, DiamError> {
    if f.labels != g.labels {
        return Err(DiamError::DomainMismatch);
    }
    Ok(f.values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a.dist(b))
        .fold(0.0, f64::max))
}

/// Diameter seminorm of a real-valued function: `max - min` of its values.
/// Equals the cross-difference pseudometric against the zero function.
pub fn diameter_seminorm(f: &BoundedFunction<f64>) -> f64 {
    let hi = f.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = f.values.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// Residual of translation invariance at one triple; zero for a lawful
/// carrier.
pub fn translation_invariance_residual<M: MetricSemigroup>(x: &M, y: &M, z: &M) -> f64 {
    (x.add(z).dist(&y.add(z)) - x.dist(y)).abs()
}

/// Real-valued class representative vanishing at its anchor label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QuotientJson", into = "QuotientJson")]
pub struct QuotientFunction {
    base: BoundedFunction<f64>,
    anchor: String,
}

#[derive(Serialize, Deserialize)]
struct QuotientJson {
    labels: Vec<String>,
    values: Vec<f64>,
    anchor: String,
}

impl TryFrom<QuotientJson> for QuotientFunction {
    type Error = DiamError;
    fn try_from(j: QuotientJson) -> Result<Self, DiamError> {
        let f = BoundedFunction::new(j.labels, j.values)?;
        kuratowski_section(&f, &j.anchor)
    }
}

impl From<QuotientFunction> for QuotientJson {
    fn from(q: QuotientFunction) -> QuotientJson {
        QuotientJson {
            labels: q.base.labels.clone(),
            values: q.base.values.clone(),
            anchor: q.anchor,
        }
    }
}

impl QuotientFunction {
    pub fn base(&self) -> &BoundedFunction<f64> {
        &self.base
    }

    pub fn anchor(&self) -> &str {
        &self.anchor
    }

    /// Diameter seminorm of the representative; well defined on the class.
    pub fn diameter(&self) -> f64 {
        diameter_seminorm(&self.base)
    }
}

/// Kuratowski section: subtract `f(anchor)` pointwise. The result vanishes
/// at the anchor, and the sup-metric of two sections never exceeds the
/// cross-difference pseudometric of the originals.
pub fn kuratowski_section(
    f: &BoundedFunction<f64>,
    anchor: &str,
) -> Result<QuotientFunction, DiamError> {
    let base = f.section_at(anchor)?;
    Ok(QuotientFunction {
        base,
        anchor: anchor.to_string(),
    })
}

/// Sampled lower bound for the operator distance between two carrier maps:
/// maximum over sample pairs of
/// `dist(eta(m) + phi(m'), phi(m) + eta(m')) / dist(m, m')`.
///
/// This is a lower bound only; the underlying supremum ranges over the
/// whole carrier.
pub fn hom_distance_lower_bound<M: MetricSemigroup>(
    eta: impl Fn(&M) -> M,
    phi: impl Fn(&M) -> M,
    samples: &[(M, M)],
) -> Result<f64, DiamError> {
    let mut best = 0.0f64;
    for (idx, (m, mp)) in samples.iter().enumerate() {
        let denom = m.dist(mp);
        if denom <= 0.0 {
            return Err(DiamError::DegenerateSample(idx));
        }
        let lhs = eta(m).add(&phi(mp));
        let rhs = phi(m).add(&eta(mp));
        best = best.max(lhs.dist(&rhs) / denom);
    }
    Ok(best)
}
