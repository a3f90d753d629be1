//! Certification of qubit nonclassicality from a single joint measurement.
//!
//! One four-outcome measurement samples two observables at strength
//! eta. The observed statistics are always a proper probability
//! distribution, but undoing the measurement smearing with a linear
//! inversion kernel retrieves a quasi-joint distribution that turns
//! negative whenever sqrt(3) |s| > eta. Since a strength below
//! sqrt(3) |s| exists for every nonzero Bloch vector, every qubit state
//! except the maximally mixed one is certified nonclassical. An
//! independent linear program confirms the other face of the same fact:
//! the observed statistics of such runs cannot be written as a mixture of
//! per-observable response functions over hidden states in the unit ball.
//!
//! The crate provides:
//!
//! - [`bloch`]: Bloch-ball states, canonical rotations, and embeddings of
//!   higher-dimensional pure states into an effective qubit;
//! - [`povm`]: the tetrahedral joint measurement and its observed
//!   statistics;
//! - [`inversion`]: the marginal-inversion kernel, the retrieved
//!   quasi-distribution, and the negativity witness;
//! - [`separability`]: hidden-variable models and the LP feasibility test
//!   of separability, backed by the dense solver in [`simplex`];
//! - [`shots`]: seeded finite-shot simulation with error propagation and
//!   sigma-level certification;
//! - [`report`]: reproducible run configurations and serializable reports.

pub mod bloch;
pub mod error;
pub mod inversion;
pub mod mat2;
pub mod povm;
pub mod report;
pub mod separability;
pub mod shots;
pub mod simplex;

pub use bloch::{
    canonical_rotation, embed_pure_state, BlochVector, DensityMatrix2, DensityMatrixN,
    PureStateVector, Rotation3, Vec3,
};
pub use error::{Error, Result};
pub use inversion::{
    default_strength, find_witness, negativity, InversionKernel, Negativity, QuasiDistribution,
    WitnessReport, WitnessStatus, NEGATIVITY_TOL,
};
pub use mat2::Mat2;
pub use povm::{
    exact_marginals, observed_joint, outcome_index, EtaVectors, JointDistribution, JointPovm,
    OUTCOMES,
};
pub use report::{
    run_sample, run_separability, run_witness, sweep_cell, sweep_parameters, CommandKind, GridSpec,
    OutputFormat, Report, RunConfig, SamplingBlock, SeparabilityBlock, StateSpec, SweepRow,
    SweepSpec, ToleranceSet,
};
pub use separability::{
    inverted_separable_statistics, max_achievable_correlation, separability_feasibility,
    separable_statistics, CorrelationRegime, DiskGrid, HiddenVariableModel, ResponseFunction,
};
pub use shots::{
    covariance_at, estimate_quasi, negativity_significance, sample_counts, EstimatedQuasi,
    ShotRecord, Significance, DEFAULT_SIGMA_THRESHOLD,
};
