//! Quotient spaces of norms and finite metrics under dilation.
//!
//! Two positive-valued structures are *dilation-equivalent* when one is a
//! positive constant multiple of the other. This crate computes with two
//! such quotient spaces:
//!
//! * norms on `R^k` modulo positive scaling, metrized by the log of the
//!   ratio of the best Lipschitz-equivalence constants ([`norms`]);
//! * metrics on a finite point set modulo positive scaling, metrized by
//!   the log-distortion ([`metric`]).
//!
//! Both metrics are instances of the diameter seminorm on function spaces
//! quotiented by additive constants ([`diamnorm`]), which is what makes
//! exact cross-checks between the modules possible. The [`embed`] module
//! carries finite metrics into these quotient spaces (Fréchet coordinates,
//! log-coordinates with exponential triangle constraints) and decides
//! Euclidean embeddability via Schoenberg's criterion.
//!
//! All operations are pure and deterministic; randomized sampling is
//! driven by the seeded generator in [`rng`].

pub mod diamnorm;
pub mod embed;
pub mod linalg;
pub mod metric;
pub mod norms;
pub mod rng;
