//! Exact moments of injection counts and extension counts, distances to
//! reference laws, and the seeded replication harness.

pub mod distances;
pub mod experiment;
pub mod moments;

pub use distances::{
    poisson_pmf, product_poisson_pmf, standardize, tv_to_pmf, tv_to_poisson, tv_to_product_poisson,
    w1_to_std_normal, W1_MIN_SAMPLES,
};
pub use experiment::{
    limit_experiment, replicate, simulate_counts, simulate_motifs, SampleSummary, SimulationReport,
};
pub use moments::{
    exact_mean_copies, exact_mean_extensions, exact_mean_injections, exact_variance_injections,
    falling_factorial, VARIANCE_MAX_VERTICES,
};
