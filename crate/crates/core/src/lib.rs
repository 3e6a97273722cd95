//! Non-uniform random simplicial complexes: the model 𝒢(n, p) and its
//! birth-time process form, cohomology over F_p / ℤ / ℤ_m, the minimal
//! obstructions M_{j,k} and M̂_{j,k}, the finite-n criticality calculus
//! (λ, μ, ν, q̄, ℰ), and a Monte Carlo harness for hitting-time and
//! Poisson-window experiments.

pub mod cochain;
pub mod cohomology;
pub mod complex;
pub mod dim2;
pub mod error;
pub mod matrix;
pub mod mc;
pub mod obstructions;
pub mod params;
pub mod process;
pub mod ring;
pub mod rng;
pub mod simplex;

pub use cochain::{apply_coboundary, is_cocycle, Cochain};
pub use cohomology::{
    cohomology, is_cohom_connected, meshulam_wallach_check, min_support_in_class,
    shell_certificate, CohomologySummary,
};
pub use complex::{downward_closure, Complex, ComplexFile, UnionFind};
pub use error::{Error, Result};
pub use matrix::{coboundary_matrix, smith_normal_form, CobMatrix, SnfResult};
pub use obstructions::{
    build_f_m_r, find_local_obstacles, find_m_copies, find_mhat_copies, is_k_localised,
    is_traversable, minimal_bad_support, CopyKind, Flower, ObstructionCopy, TraversalWitness,
};
pub use params::{
    critical_window_expectation, e_constant, evaluate_pbar, exact_expected_xjk,
    is_critical_direction, lambda_mu_nu, q_bar, rescale_to_lower_critical, scale_parameters,
    BetaSpec, CriticalityReport, DirectionParams, KParams, ProbabilityVector,
};
pub use process::{
    connectedness_intervals, hitting_time, sample_process, snapshot, HittingReport,
    ProcessTrace,
};
pub use ring::RingSpec;
pub use simplex::{Hypergraph, Simplex};
