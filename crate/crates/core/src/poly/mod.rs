//! Polynomial invariants: sparse multivariate polynomials, gradient
//! interpolation, Reynolds averaging and the explicit invariants of finite
//! abelian groups acting diagonally.

mod abelian;
mod characters;
mod interpolate;
mod multipoly;

pub use abelian::{abelian_exponents, abelian_invariant, acts_freely_on_sphere, AbelianExponents};
pub use characters::CharacterTable;
pub use interpolate::{
    gradient_interpolate, gradient_interpolate_seeded, local_immersion_poly, reynolds_average,
    MAX_GENERIC_DRAWS, NODE_SEPARATION,
};
pub use multipoly::{MultiPoly, MultiPolyFile, TermFile, COEFF_PRUNE_TOL, MAX_DEGREE};
