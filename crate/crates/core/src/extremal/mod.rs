//! Solution-free sets for zero-sum linear equations, Behrend sets, type
//! estimates and the skew-product constructions built on them.

pub mod behrend;
pub mod counterexample;
pub mod equation;
pub mod search;

pub use behrend::{behrend_set, type_estimate, EstimateMode, TypeEstimate};
pub use counterexample::{orbit_transfer, pattern_density, run_counterexample, Construction, CounterexampleReport};
pub use equation::LinearEquation;
pub use search::{max_solution_free, SearchMode, SolutionFreeSet};
