//! Solving and diagnosing systems of max-T fuzzy relational equations
//! `A □_T^max x = b` for the minimum, product and Łukasiewicz t-norms.
//!
//! - [`algebra`]: t-norm compositions and the greatest-solution consistency test.
//! - [`tnorm`]: the t-norm strategies and their name registry.
//! - [`chebyshev`]: the analytical Chebyshev distance `Δ`, per-row defects,
//!   `N_c`, and the greatest Chebyshev approximation of `b`.
//! - [`subsystems`]: `Δ_R` for subsystems, the canonical maximal consistent
//!   subsystem, and enumeration of all (maximal) consistent subsystems of a
//!   max-min system.
//! - [`oracle`]: brute-force cross-checks and a seeded instance generator.

pub mod algebra;
pub mod chebyshev;
pub mod error;
pub mod oracle;
pub mod subsystems;
pub mod tnorm;

pub use algebra::{
    check_consistency, greatest_potential_solution, max_t_product, min_residuum_product, residuum,
    shifted_bounds, t_apply, ConsistencyCheck, System, UnitMatrix, UnitScalar, DEFAULT_EPSILON,
};
pub use chebyshev::{
    apply_f, chebyshev_report, chebyshev_report_with_witness, delta_ijk, greatest_approximation,
    ApproxResult, ChebyshevReport, Witness,
};
pub use error::{Error, Result};
pub use oracle::{oracle_distance_bisection, oracle_enumerate, random_system, OracleConfig};
pub use subsystems::{
    canonical_mcs, enumerate_consistent_maxmin, incremental_row_delta, maximal_consistent_maxmin,
    maximal_consistent_maxmin_incremental, restrict, subsystem_distance, ConsistentFamily, IndexSet,
    McsCertificate,
};
pub use tnorm::{TNorm, TNormKind, TNormRegistry};
