//! Finite sample domains: one representative per sampled ray through the
//! origin, lying on a prescribed sphere.

use serde::{Deserialize, Serialize};

use super::spec::{Norm, NormSpec};
use super::NormError;
use crate::rng::Xoshiro256;

/// Tolerance for the sphere-equation invariant of stored points.
pub(crate) const SPHERE_TOL: f64 = 1e-12;

/// Which sphere the domain lives on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    /// Level set `{ x : reference(x) = radius }`.
    NormSphere { reference: NormSpec, radius: f64 },
    /// `{ x : |x - center|_2^2 = 1 + |center|_2^2 }`; contains the origin
    /// strictly inside, and meets every ray exactly once.
    OffCenterSphere { center: Vec<f64> },
}

/// Finite set of nonzero points on a sphere, one per ray.
///
/// `NormSphere` domains always contain the canonical points: both signs
/// of every standard basis direction plus the all-ones direction, each
/// rescaled onto the sphere. The closed-form extremal witnesses of the
/// recognized norm families all sit there, which turns sampled checks
/// into exact ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDomain {
    k: usize,
    kind: DomainKind,
    points: Vec<Vec<f64>>,
    seed: u64,
    count: usize,
}

enum Projector {
    Sphere { reference: Norm, radius: f64 },
    OffCenter { center: Vec<f64> },
}

impl Projector {
    fn build(kind: &DomainKind, k: usize) -> Result<Projector, NormError> {
        match kind {
            DomainKind::NormSphere { reference, radius } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(NormError::ParameterOutOfRange(format!(
                        "sphere radius {radius} must be positive"
                    )));
                }
                Ok(Projector::Sphere {
                    reference: Norm::new(reference.clone(), k)?,
                    radius: *radius,
                })
            }
            DomainKind::OffCenterSphere { center } => {
                if center.len() != k {
                    return Err(NormError::DimensionMismatch {
                        expected: k,
                        got: center.len(),
                    });
                }
                if center.iter().all(|c| *c == 0.0) {
                    return Err(NormError::ZeroCenter);
                }
                Ok(Projector::OffCenter {
                    center: center.clone(),
                })
            }
        }
    }

    /// Project a nonzero vector along its ray onto the sphere.
    fn project(&self, v: &[f64]) -> Option<Vec<f64>> {
        match self {
            Projector::Sphere { reference, radius } => {
                let nv = reference.eval_raw(v);
                if nv <= 0.0 || !nv.is_finite() {
                    return None;
                }
                Some(v.iter().map(|x| radius * x / nv).collect())
            }
            Projector::OffCenter { center } => {
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm <= 0.0 || !norm.is_finite() {
                    return None;
                }
                let unit: Vec<f64> = v.iter().map(|x| x / norm).collect();
                let dot: f64 = unit.iter().zip(center).map(|(a, b)| a * b).sum();
                // positive root of |a u - y|^2 = 1 + |y|^2
                let alpha = (1.0 + dot * dot).sqrt() + dot;
                Some(unit.iter().map(|x| alpha * x).collect())
            }
        }
    }

    /// Distance of a point from the sphere equation.
    fn residual(&self, x: &[f64]) -> f64 {
        match self {
            Projector::Sphere { reference, radius } => {
                (reference.eval_raw(x) - radius).abs() / radius.abs()
            }
            Projector::OffCenter { center } => {
                let d2: f64 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                let want: f64 = 1.0 + center.iter().map(|c| c * c).sum::<f64>();
                (d2 - want).abs() / want
            }
        }
    }
}

fn ray_key(v: &[f64]) -> Vec<u64> {
    // identify the positive ray by the bit pattern of the l2-normalized
    // direction; random draws collide only on genuinely repeated rays
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| (x / norm).to_bits()).collect()
}

impl SampleDomain {
    /// Draw `count` spherically symmetric directions from the seeded
    /// generator and project each onto the sphere; `NormSphere` domains
    /// get the canonical points first.
    pub fn sample(
        kind: DomainKind,
        count: usize,
        seed: u64,
        k: usize,
    ) -> Result<SampleDomain, NormError> {
        let projector = Projector::build(&kind, k)?;
        let mut domain = SampleDomain {
            k,
            kind,
            points: Vec::new(),
            seed,
            count,
        };
        let mut keys = std::collections::HashSet::new();
        if matches!(domain.kind, DomainKind::NormSphere { .. }) {
            for i in 0..k {
                for sign in [1.0, -1.0] {
                    let mut e = vec![0.0; k];
                    e[i] = sign;
                    domain.push_ray(&projector, &mut keys, &e);
                }
            }
            domain.push_ray(&projector, &mut keys, &vec![1.0; k]);
        }
        let mut rng = Xoshiro256::new(seed);
        for _ in 0..count {
            let v = rng.unit_vector(k);
            domain.push_ray(&projector, &mut keys, &v);
        }
        Ok(domain)
    }

    fn push_ray(
        &mut self,
        projector: &Projector,
        keys: &mut std::collections::HashSet<Vec<u64>>,
        v: &[f64],
    ) -> bool {
        match projector.project(v) {
            Some(p) if keys.insert(ray_key(&p)) => {
                self.points.push(p);
                true
            }
            _ => false,
        }
    }

    /// Project an extra direction onto the sphere and keep it if its ray
    /// is new. Returns whether a point was added.
    pub fn add_direction(&mut self, v: &[f64]) -> Result<bool, NormError> {
        if v.len() != self.k {
            return Err(NormError::DimensionMismatch {
                expected: self.k,
                got: v.len(),
            });
        }
        let projector = Projector::build(&self.kind, self.k)?;
        let mut keys: std::collections::HashSet<Vec<u64>> =
            self.points.iter().map(|p| ray_key(p)).collect();
        Ok(self.push_ray(&projector, &mut keys, v))
    }

    /// Re-check the stored-point invariants (used after deserializing).
    pub fn validate(&self) -> Result<(), NormError> {
        let projector = Projector::build(&self.kind, self.k)?;
        if self.points.is_empty() {
            return Err(NormError::EmptyDomain);
        }
        let mut keys = std::collections::HashSet::new();
        for (index, p) in self.points.iter().enumerate() {
            if p.len() != self.k {
                return Err(NormError::DimensionMismatch {
                    expected: self.k,
                    got: p.len(),
                });
            }
            let residual = projector.residual(p);
            if residual > SPHERE_TOL {
                return Err(NormError::PointOffSphere { index, residual });
            }
            if !keys.insert(ray_key(p)) {
                return Err(NormError::ParameterOutOfRange(format!(
                    "points {index} and an earlier point share a ray"
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn projector(&self) -> Result<ProjectorHandle, NormError> {
        Projector::build(&self.kind, self.k).map(ProjectorHandle)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Opaque projection handle for the estimator's refinement loop.
pub(crate) struct ProjectorHandle(Projector);

impl ProjectorHandle {
    pub(crate) fn project(&self, v: &[f64]) -> Option<Vec<f64>> {
        self.0.project(v)
    }
}
