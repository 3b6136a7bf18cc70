//! Infinity-harmonic functions on a strip built from C^{1,1} boundary data.
//!
//! Given a quadratic spline `f` on the bottom edge of `{0 < d < delta}` and a
//! cone slope `L > sup |f'|`, the envelope
//!
//! ```text
//! u(x, d) = sup_y [ f(y) - L |(x, d) - (y, 0)| ]
//! ```
//!
//! is evaluated in closed form through a contact-point fixed-point equation
//! ([`construction`]), checked against brute-force maximization and
//! McShane-Whitney envelopes ([`oracle`]), and analysed for how kinks of `f''`
//! turn into points where `u` fails to be twice differentiable ([`analysis`]).

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod boundary;
pub mod cli;
pub mod construction;
pub mod error;
pub mod export;
pub mod oracle;
pub mod par;
pub mod params;
pub mod verify;

pub use boundary::{parse_spline, BoundarySpline, Kink, Quantity};
pub use construction::{ClosedForm, ContactSolution, FieldEvaluator, SolverSettings};
pub use error::{Cap, Error, Result};
pub use oracle::{BruteForce, FieldGrid, GridSpec, Provenance};
pub use par::Execution;
pub use params::{admit, AdmissibleProblem, ProblemParams};
