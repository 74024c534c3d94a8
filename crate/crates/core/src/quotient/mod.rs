//! Group actions by linear isometries, quotient distances and max filtering.

mod action;
mod point;

pub use action::{
    ActionKind, GroupAction, GroupSpec, PermutationMode, MAX_ENUMERATED_PERMUTATION, MEMBERSHIP_TOL,
    ORBIT_DEDUP_TOL,
};
pub use point::{QuotientPoint, POINT_EQ_TOL};
