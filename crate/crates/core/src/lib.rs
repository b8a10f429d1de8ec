//! Containment thresholds, satisfiability regions and limiting distributions
//! for fixed submultiplex counts in the two-layer correlated Erdős–Rényi
//! multiplex model `G(n, p1, p2, p12)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`multiplex`] and [`submultiplex`]: the combinatorial substrate
//!   (validated two-layer multiplexes, edge-class signatures, submultiplex
//!   enumeration, completion, lattice operations, automorphisms).
//! * [`threshold`]: exact-rational evaluation of the exponent forms `ℓ_F`,
//!   `Δ_H`, the float threshold function `Φ_H`, extremal sets, balance
//!   classification and cores.
//! * [`region`]: the satisfiability polyhedron and its `θ1 = θ2` slice.
//! * [`sampler`]: seeded correlated Erdős–Rényi sampling and planting.
//! * [`counting`]: injective multiplex homomorphism counts, copies and
//!   extensions.
//! * [`stats`]: exact moments and the Monte Carlo limit-law harness.
//! * [`cli`]: the `mux` command line front end.

pub mod cli;
pub mod counting;
pub mod error;
pub mod multiplex;
pub mod rational;
pub mod region;
pub mod sampler;
pub mod stats;
pub mod submultiplex;
pub mod threshold;

pub use error::{MuxError, Result};
pub use multiplex::{Edge, Multiplex, Signature};
pub use rational::Rational;
pub use sampler::{ProbTriple, SeedSpec};
pub use submultiplex::Submultiplex;
pub use threshold::{BalanceLabel, ThetaPoint};
