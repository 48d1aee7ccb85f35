//! Exact Bayesian network inference, the forward-sampling decision procedure,
//! topological vertex separation, resource-bounded nondeterministic machines,
//! and the reductions linking inference to clique problems and machine
//! acceptance, each paired with an independent brute-force oracle.

pub mod bayesnet;
pub mod error;
pub mod exec;
pub mod generators;
pub mod graph;
pub mod instances;
pub mod machines;
pub mod oracles;
pub mod rational;
pub mod reductions;
pub mod sampling;
pub mod suites;

pub use error::{Error, Result};
pub use exec::Execution;
pub use rational::Rational;
