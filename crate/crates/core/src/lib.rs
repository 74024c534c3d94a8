//! Computation in metric quotients `V//G` of real Hilbert spaces by groups of
//! linear isometries.
//!
//! The crate covers quotient distances and max filtering ([`quotient`]),
//! bilipschitz invariant embeddings built by homogeneous extension and lifting
//! ([`embeddings`]), polynomial invariants ([`poly`]), Euclidean distortion of
//! finite metrics with semidefinite certificates ([`distortion`]), the
//! permutation and translation quotients of sequence spaces ([`sequence`]) and
//! pullback data-science utilities ([`applications`]).

pub mod applications;
pub mod assignment;
pub mod distortion;
pub mod embeddings;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod quotient;
pub mod sequence;

pub use applications::Dataset;
pub use distortion::{DistortionCertificate, DualCertificate, FiniteMetric};
pub use embeddings::InvariantMap;
pub use error::{Error, Result};
pub use poly::{CharacterTable, MultiPoly};
pub use quotient::{ActionKind, GroupAction, GroupSpec, PermutationMode, QuotientPoint};
pub use sequence::SparseSeq;
