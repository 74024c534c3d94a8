//! Bilipschitz bounds: empirical estimation by sampling, Euclidean distortion
//! of finite metrics by semidefinite programming with primal and dual
//! certificates, and the closed-form circle family.

mod certificate;
mod circle;
mod empirical;
mod metric;
mod sdp;
mod search;

pub use certificate::{
    cycle_certificate, gram_to_embedding, verify_dual, CertificateFile, CertificateResiduals,
    DistortionCertificate, DualCertificate, DualFile, DualVerification, PSD_TOL, ROW_SUM_TOL,
};
pub use circle::{circle_distortion, circle_g, MONOTONE_GRID};
pub use empirical::{
    empirical_bilipschitz, gaussian_vector, unit_vector, write_ratio_row, EmpiricalBounds, GaussianPairs,
    NearbySpherePairs, PairSampler, RadialPairs, SamplingOptions, SpherePairs, BLOCK_SIZE, DEGENERATE_TOL,
    MAX_DEGENERATE_FRACTION, RATIO_CSV_HEADER,
};
pub use metric::{FiniteMetric, FiniteMetricFile, TRIANGLE_TOL};
pub use sdp::{sdp_distortion, solve_distortion_sdp, SdpOptions, SdpSolution, MAX_SDP_POINTS};
pub use search::{
    lower_bound_search, EuclideanSampler, LowerBoundArchive, LowerBoundResult, MultisetSampler, QuotientSampler,
    ShiftSampler,
};
