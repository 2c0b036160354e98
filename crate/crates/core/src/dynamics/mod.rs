//! Unipotent affine maps on tori, exact phase polynomials and the averages
//! built on them.

pub mod averages;
pub mod boxes;
pub mod fixed;
pub mod orbit;
pub mod phase;
pub mod span;
pub mod symbolic;

pub use averages::{analytic_multiple_limit, empirical_multiple_average, weighted_average, Character, StepFunction};
pub use boxes::{box_correlation, restricted_average, AxisBox, BoxSet, Correlation, RestrictedOutcome, SamplingConfig};
pub use orbit::{AffineExpr, OrbitPolynomial, UnipotentAffineMap};
pub use phase::{empirical_phase_average, phase_limit, PhaseStepper, SymPoly};
pub use span::{product_density, span_closure, substitution_invariance, SpanDescriptor, VectorPoly};
pub use symbolic::{Basis, SymbolicReal};
