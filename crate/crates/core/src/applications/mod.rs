//! Data-analysis tasks solved in the target space of a bilipschitz invariant
//! and pulled back to the quotient, plus probes of where smooth invariants
//! lose lower Lipschitz control.

mod bispectrum;
mod dataset;
mod kmeans;
mod mds;
mod probe;

pub use bispectrum::{bispectrum, bispectrum_map, dft};
pub use dataset::{pullback_ann, quotient_nearest, Dataset, DatasetFile, CACHE_TOL};
pub use kmeans::{kmeans_objective, lloyd, pullback_kmeans, KMeansResult, LLOYD_REL_TOL, MAX_LLOYD_ITERATIONS};
pub use mds::{classical_mds, mds_error_bound, quotient_mds, MdsEmbedding, MdsErrorReport, MdsReport};
pub use probe::{
    log_log_slope, lower_lipschitz_probe, write_probe_csv, ProbeRow, PROBE_CSV_HEADER, PROBE_DIRECTIONS,
};
