//! The norm grammar, validated evaluators, randomized axiom checks, and
//! closed-form distances for the recognized families.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{NormError, SINGULARITY_TOL};
use crate::linalg;
use crate::rng::Xoshiro256;

/// Exponent of a p-norm; `inf` is a first-class value with `1/inf = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PValue(f64);

impl PValue {
    pub const INF: PValue = PValue(f64::INFINITY);
    pub const ONE: PValue = PValue(1.0);
    pub const TWO: PValue = PValue(2.0);

    pub fn new(p: f64) -> Result<Self, NormError> {
        if p.is_nan() || p < 1.0 {
            return Err(NormError::BadExponent(p));
        }
        Ok(PValue(p))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_inf(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/p`, with `1/inf = 0`.
    pub fn recip(self) -> f64 {
        if self.is_inf() {
            0.0
        } else {
            1.0 / self.0
        }
    }
}

impl Serialize for PValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_inf() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for PValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let raw = Raw::deserialize(d)?;
        let p = match raw {
            Raw::Num(x) => x,
            Raw::Text(t) if t == "inf" => f64::INFINITY,
            Raw::Text(t) => return Err(D::Error::custom(format!("bad exponent {t:?}"))),
        };
        PValue::new(p).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// One summand of a weighted-absolute-functional norm: `w * |<a, x>|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedTerm {
    pub w: f64,
    pub a: Vec<f64>,
}

/// One atom of a discrete p-norm mixture: mass `m` at exponent `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureAtom {
    pub p: f64,
    pub m: f64,
}

/// Closed recursive description of a norm on `R^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    /// `(sum |x_i|^p)^(1/p)`, or `max |x_i|` at `p = inf`.
    Pnorm { p: PValue },
    /// `sum w_i |<a_i, x>|`; the functionals must span `R^k`.
    WeightedAbs { terms: Vec<WeightedTerm> },
    /// `|x|_p + q |x_axis|`.
    Perturbed { p: PValue, q: f64, axis: usize },
    /// `sum m_i |x|_{p_i}` over finitely many atoms with `p_i` finite.
    Mixture { atoms: Vec<MixtureAtom> },
    /// `x -> inner(A x)` for invertible `A`.
    Precomposed {
        #[serde(rename = "A")]
        matrix: Vec<Vec<f64>>,
        inner: Box<NormSpec>,
    },
    /// `c * inner` for `c > 0`.
    Scaled { c: f64, inner: Box<NormSpec> },
    /// Pointwise sum of two norms.
    Sum {
        left: Box<NormSpec>,
        right: Box<NormSpec>,
    },
}

impl NormSpec {
    pub fn pnorm(p: f64) -> Result<NormSpec, NormError> {
        Ok(NormSpec::Pnorm { p: PValue::new(p)? })
    }

    pub fn pnorm_inf() -> NormSpec {
        NormSpec::Pnorm { p: PValue::INF }
    }

    pub fn scaled(c: f64, inner: NormSpec) -> NormSpec {
        NormSpec::Scaled {
            c,
            inner: Box::new(inner),
        }
    }

    pub fn precomposed(matrix: Vec<Vec<f64>>, inner: NormSpec) -> NormSpec {
        NormSpec::Precomposed {
            matrix,
            inner: Box::new(inner),
        }
    }

    pub fn sum(left: NormSpec, right: NormSpec) -> NormSpec {
        NormSpec::Sum {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Check parameter ranges, spans, and invertibility for dimension `k`.
    pub fn validate(&self, k: usize) -> Result<(), NormError> {
        if k == 0 {
            return Err(NormError::ParameterOutOfRange(
                "dimension must be at least 1".into(),
            ));
        }
        match self {
            NormSpec::Pnorm { .. } => Ok(()), // PValue construction already guards
            NormSpec::WeightedAbs { terms } => {
                if terms.is_empty() {
                    return Err(NormError::ParameterOutOfRange(
                        "weighted-abs needs at least one term".into(),
                    ));
                }
                for t in terms {
                    if !t.w.is_finite() || t.w <= 0.0 {
                        return Err(NormError::ParameterOutOfRange(format!(
                            "weighted-abs weight {} must be positive",
                            t.w
                        )));
                    }
                    if t.a.len() != k {
                        return Err(NormError::DimensionMismatch {
                            expected: k,
                            got: t.a.len(),
                        });
                    }
                }
                let rows: Vec<Vec<f64>> = terms.iter().map(|t| t.a.clone()).collect();
                if linalg::rank(&rows, SINGULARITY_TOL) < k {
                    return Err(NormError::DegenerateFunctionals { k });
                }
                Ok(())
            }
            NormSpec::Perturbed { q, axis, .. } => {
                if !q.is_finite() || *q < 0.0 {
                    return Err(NormError::ParameterOutOfRange(format!(
                        "perturbation weight {q} must be nonnegative"
                    )));
                }
                if *axis >= k {
                    return Err(NormError::ParameterOutOfRange(format!(
                        "axis {axis} out of range for dimension {k}"
                    )));
                }
                Ok(())
            }
            NormSpec::Mixture { atoms } => {
                if atoms.is_empty() {
                    return Err(NormError::ParameterOutOfRange(
                        "mixture needs at least one atom".into(),
                    ));
                }
                for a in atoms {
                    if !a.p.is_finite() || a.p < 1.0 {
                        return Err(NormError::ParameterOutOfRange(format!(
                            "mixture exponent {} must lie in [1, inf)",
                            a.p
                        )));
                    }
                    if !a.m.is_finite() || a.m <= 0.0 {
                        return Err(NormError::ParameterOutOfRange(format!(
                            "mixture mass {} must be positive",
                            a.m
                        )));
                    }
                }
                Ok(())
            }
            NormSpec::Precomposed { matrix, inner } => {
                if matrix.len() != k || matrix.iter().any(|r| r.len() != k) {
                    return Err(NormError::DimensionMismatch {
                        expected: k,
                        got: matrix.len(),
                    });
                }
                if linalg::is_singular(matrix, SINGULARITY_TOL) {
                    return Err(NormError::SingularMatrix);
                }
                inner.validate(k)
            }
            NormSpec::Scaled { c, inner } => {
                if !c.is_finite() || *c <= 0.0 {
                    return Err(NormError::ParameterOutOfRange(format!(
                        "scale {c} must be positive"
                    )));
                }
                inner.validate(k)
            }
            NormSpec::Sum { left, right } => {
                left.validate(k)?;
                right.validate(k)
            }
        }
    }

    /// Peel top-level `Scaled` wrappers, returning the accumulated factor
    /// and the core description.
    pub fn strip_scaled(&self) -> (f64, &NormSpec) {
        let mut c = 1.0;
        let mut cur = self;
        while let NormSpec::Scaled { c: f, inner } = cur {
            c *= f;
            cur = inner;
        }
        (c, cur)
    }
}

fn pnorm_value(x: &[f64], p: PValue) -> f64 {
    if p.is_inf() {
        return x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    }
    let pv = p.get();
    if pv == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if pv == 2.0 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    } else {
        x.iter()
            .map(|v| v.abs().powf(pv))
            .sum::<f64>()
            .powf(1.0 / pv)
    }
}

pub(crate) fn eval_spec(spec: &NormSpec, x: &[f64]) -> f64 {
    match spec {
        NormSpec::Pnorm { p } => pnorm_value(x, *p),
        NormSpec::WeightedAbs { terms } => terms
            .iter()
            .map(|t| t.w * t.a.iter().zip(x).map(|(a, v)| a * v).sum::<f64>().abs())
            .sum(),
        NormSpec::Perturbed { p, q, axis } => pnorm_value(x, *p) + q * x[*axis].abs(),
        NormSpec::Mixture { atoms } => atoms
            .iter()
            .map(|a| a.m * pnorm_value(x, PValue(a.p)))
            .sum(),
        NormSpec::Precomposed { matrix, inner } => eval_spec(inner, &linalg::mat_vec(matrix, x)),
        NormSpec::Scaled { c, inner } => c * eval_spec(inner, x),
        NormSpec::Sum { left, right } => eval_spec(left, x) + eval_spec(right, x),
    }
}

/// A validated norm on `R^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Norm {
    spec: NormSpec,
    k: usize,
}

impl Norm {
    pub fn new(spec: NormSpec, k: usize) -> Result<Norm, NormError> {
        spec.validate(k)?;
        Ok(Norm { spec, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, NormError> {
        if x.len() != self.k {
            return Err(NormError::DimensionMismatch {
                expected: self.k,
                got: x.len(),
            });
        }
        Ok(eval_spec(&self.spec, x))
    }

    /// Evaluation without the dimension guard; callers check once up front.
    pub(crate) fn eval_raw(&self, x: &[f64]) -> f64 {
        eval_spec(&self.spec, x)
    }
}

/// Closed-form dilation distance for the recognized pairs, with top-level
/// scale factors stripped first:
///
/// * two p-norms: `|1/p - 1/q| ln k`;
/// * two axis perturbations of the same p-norm: `|ln(1+q') - ln(1+q)|` on
///   a shared axis, `ln(1+q) + ln(1+q')` on distinct axes;
/// * a mixture against a p-norm dominating all its atoms:
///   `ln(sum m_i k^(1/p_i)) - ln(k^(1/q) sum m_i)`.
///
/// Returns `None` when no pattern matches (including mismatched
/// dimensions).
pub fn distance_closed_form(a: &Norm, b: &Norm) -> Option<f64> {
    if a.k() != b.k() {
        return None;
    }
    let k = a.k() as f64;
    let (_, sa) = a.spec().strip_scaled();
    let (_, sb) = b.spec().strip_scaled();
    match (sa, sb) {
        (NormSpec::Pnorm { p }, NormSpec::Pnorm { p: q }) => {
            Some((p.recip() - q.recip()).abs() * k.ln())
        }
        (
            NormSpec::Perturbed { p, q, axis },
            NormSpec::Perturbed {
                p: p2,
                q: q2,
                axis: axis2,
            },
        ) if p == p2 => {
            if axis == axis2 {
                Some(((1.0 + q2).ln() - (1.0 + q).ln()).abs())
            } else {
                Some((1.0 + q).ln() + (1.0 + q2).ln())
            }
        }
        (NormSpec::Mixture { atoms }, NormSpec::Pnorm { p: q })
        | (NormSpec::Pnorm { p: q }, NormSpec::Mixture { atoms }) => {
            mixture_vs_pnorm(atoms, *q, k)
        }
        _ => None,
    }
}

fn mixture_vs_pnorm(atoms: &[MixtureAtom], q: PValue, k: f64) -> Option<f64> {
    let qr = q.recip();
    if atoms.iter().any(|a| a.p.recip() <= qr) {
        return None; // an atom at or beyond q: extrema no longer at axes/diagonal
    }
    let weighted: f64 = atoms.iter().map(|a| a.m * k.powf(1.0 / a.p)).sum();
    let mass: f64 = atoms.iter().map(|a| a.m).sum();
    Some(weighted.ln() - (k.powf(qr) * mass).ln())
}

/// Witness of a failed norm-axiom trial.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomWitness {
    pub x: Vec<f64>,
    pub y: Option<Vec<f64>>,
    pub lambda: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of randomized homogeneity and sub-additivity trials.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub trials: usize,
    pub homogeneity_failures: Vec<AxiomWitness>,
    pub subadditivity_failures: Vec<AxiomWitness>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.homogeneity_failures.is_empty() && self.subadditivity_failures.is_empty()
    }
}

/// Randomized verification of positive homogeneity and sub-additivity.
/// Range checks are enforced at construction; this exercises the two
/// axioms that depend on evaluation. Comparisons allow relative 1e-9.
pub fn check_norm_axioms(norm: &Norm, trials: usize, seed: u64) -> AxiomReport {
    const REL: f64 = 1e-9;
    let mut rng = Xoshiro256::new(seed);
    let k = norm.k();
    let mut homogeneity_failures = Vec::new();
    let mut subadditivity_failures = Vec::new();
    for _ in 0..trials {
        let x: Vec<f64> = (0..k).map(|_| rng.normal()).collect();
        let y: Vec<f64> = (0..k).map(|_| rng.normal()).collect();
        let lambda = rng.range(-3.0, 3.0).exp();
        let nx = norm.eval_raw(&x);
        let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        let nsx = norm.eval_raw(&scaled);
        if (nsx - lambda * nx).abs() > REL * nsx.abs().max(lambda * nx.abs()) {
            homogeneity_failures.push(AxiomWitness {
                x: x.clone(),
                y: None,
                lambda: Some(lambda),
                lhs: nsx,
                rhs: lambda * nx,
            });
        }
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let nsum = norm.eval_raw(&sum);
        let bound = nx + norm.eval_raw(&y);
        if nsum > bound * (1.0 + REL) {
            subadditivity_failures.push(AxiomWitness {
                x,
                y: Some(y),
                lambda: None,
                lhs: nsum,
                rhs: bound,
            });
        }
    }
    AxiomReport {
        trials,
        homogeneity_failures,
        subadditivity_failures,
    }
}
