//! Exact maximin guesswork of qubit classical-quantum channels.
//!
//! A classical-quantum channel assigns a qubit state (a Bloch vector) to each
//! symbol of a finite alphabet. One party draws a symbol, the other measures
//! the corresponding state and then queries candidate symbols one at a time,
//! paying `cost(t)` when the `t`-th query is the first correct one. The sender
//! picks the prior adversarially, the receiver picks the measurement; for
//! channels whose states form a transitive constellation the adversarial value
//! is attained at the uniform prior and reduces to a combinatorial
//! optimization over query orders ("numberings").
//!
//! This crate computes that value exactly:
//!
//! * [`model`] — channels, priors, cost functions, numberings, measurements.
//! * [`symmetry`] — detection of the Gram-preserving permutation group of a
//!   channel, transitivity, and central symmetry (antipodal closure).
//! * [`channels`] — generators for the seven highly symmetric qubit
//!   constellations (Platonic solids, cuboctahedron, icosidodecahedron) and
//!   channel file I/O.
//! * [`score`] — the objective: cost normalization, the weighted Bloch sum
//!   whose norm drives the search, and optimal-measurement construction.
//! * [`solver`] — symmetry-pruned branch and bound over numberings with
//!   parallel subtree exploration.
//! * [`oracle`] — independent brute-force enumeration used to validate the
//!   solver, plus seeded random channel generation.
//! * [`sim`] — Monte Carlo guessing-game simulation, prior maximization,
//!   measurement covariantization, and query-order sanity checks.
//! * [`rng`] — the documented pseudo-random generator behind every seeded
//!   operation.
//!
//! The `guesswork` binary wraps the library behind `solve`, `oracle`,
//! `simulate` and `channels` subcommands; the `examples/` directory shows one
//! runnable program per capability.

pub mod channels;
pub mod cli;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod score;
pub mod sim;
pub mod solver;
pub mod symmetry;

pub use model::{
    BlochVector, CostFunction, Effect, ModelError, Numbering, NumberingMeasurement, Prior,
    QubitCqChannel,
};
pub use solver::{solve, Regime, SolveOptions, SolveResult};
