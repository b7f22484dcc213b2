//! Optimal upper bounds on the left tail `P(S ≤ x)` of a sum `S` of
//! nonnegative random variables whose means add up to at least `m` and whose
//! second moments add up to at most `s`.
//!
//! The bounds are `P_α(η; x) = inf_{w > x} E(w-η)₊^α / (w-x)^α` for three
//! reference laws `η`: the scaled binomial `(s/m)·Bin(n, m²/(ns))`, the
//! scaled Poisson `(s/m)·Poisson(m²/s)`, and the normal `m + Z√s`. They are
//! ordered (binomial ≤ Poisson ≤ normal) and each improves on its
//! exponential counterpart `P_∞`.
//!
//! ```
//! use tailbound::{bounds, laws::ReferenceLaw};
//!
//! let law = ReferenceLaw::binomial(10.0, 10.0, 11).unwrap();
//! let bound = bounds::p_alpha(&law, 3, 2.0).unwrap();
//! assert!(bound.value < bounds::p_infty(&law, 2.0));
//! ```
//!
//! Modules:
//! - [`laws`]: reference laws, lattice pmf, partial and positive-part moments
//! - [`bounds`]: `P_α`, `P_∞`, and the closed-form comparison bounds
//! - [`oracle`]: brute-force infimum, quadrature, Monte-Carlo sums
//! - [`report`]: sweeps and CSV / JSON-lines tables
//! - [`cli`], [`verify`]: the `tailbound` command

pub mod bounds;
pub mod cli;
pub mod error;
pub mod laws;
pub mod oracle;
pub mod report;
pub mod special;
pub mod verify;

pub use bounds::{p_alpha, p_infty, BoundResult, Regime};
pub use error::{BoundError, Result};
pub use laws::{Count, Family, MomentBudget, ReferenceLaw};
