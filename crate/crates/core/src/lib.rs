//! Weyl complexity, smallest characteristic factors, congruence criteria and
//! numerical experiments for multiple averages along integer polynomials.

pub mod error;
pub mod classification;
pub mod cli;
pub mod config;
pub mod congruence;
pub mod dynamics;
pub mod extremal;
pub mod gallery;
pub mod linalg;
pub mod poly;
pub mod report;

pub use error::{Error, Result};
pub use poly::{IntPolynomial, PolyFamily, RatPolynomial};
