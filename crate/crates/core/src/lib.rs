//! Exact computations for m-Dyck path generating polynomials, branched
//! continued fractions of hypergeometric ratios, their production matrices, and
//! the multiple orthogonal polynomials they generate.

pub mod alpha;
pub mod bcf;
pub mod error;
pub mod exact;
pub mod lattice;
pub mod mop;
pub mod production;
pub mod sampling;
pub mod serial;
pub mod sr;
pub mod suite;
pub mod tp;
pub mod zeros;

pub use alpha::AlphaSequence;
pub use error::{Error, Result};
pub use exact::{PowerSeries, Poly, RatMatrix, Rational};
