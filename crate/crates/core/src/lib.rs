//! Exact feasibility checks for quasisymmetric 2-design parameter sets.
//!
//! All arithmetic is over arbitrary-precision rationals ([`rational::Q`]).

pub mod block_graph;
pub mod cli;
pub mod criteria;
pub mod design;
pub mod equivalence;
pub mod oracle;
pub mod rational;
pub mod scanner;
