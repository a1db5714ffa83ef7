//! Simple random walk on `Z²`: potential kernel, Dirichlet hitting
//! probabilities, and their agreement with kriging under `−a`.

mod dirichlet;
mod domain;
mod occupation;
mod potential;

pub use dirichlet::{
    discrete_laplacian_of_kriged_surface, dynkin_crosscheck, dynkin_crosscheck_all, hitting_probabilities,
    BoundaryKriging, HittingMatrix,
};
pub use domain::{LatticeDomain, Role};
pub use occupation::{occupation_identity_check, OccupationReport, MIN_HORIZON, MIN_WALKS, OCCUPATION_CONSTANT};
pub use potential::{potential_kernel_value, PotentialKernelTable, MAX_TABLE_LAG};

/// Potential-kernel table covering lags up to `max_lag`.
pub fn potential_kernel(max_lag: i64) -> crate::Result<PotentialKernelTable> {
    PotentialKernelTable::new(max_lag)
}
