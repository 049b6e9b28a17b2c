//! Product-representable families of number sequences.
//!
//! A family is fixed by a root set `x(n, l)`, and its members are
//! `X(n, m) = prod_{l=1..n} (m + x(n, l))` for `n >= 1` and every integer `m`.
//! Power sequences, Pochhammer sequences and the general Lucas sequences
//! (with the generalized Fibonacci numbers at `q = -1`) are all families
//! of this kind, and all of them satisfy one common set of identities.
//!
//! The crate evaluates families exactly ([`families`]), checks the identity
//! catalog at single points or over whole grids ([`identity`], [`sweep`]),
//! compares the literal cosine products in floating point ([`float_check`]),
//! and matches generated rows and columns against OEIS ([`oeis`]).

pub mod error;
pub mod exact;
pub mod families;
pub mod float_check;
pub mod identity;
pub mod oeis;
pub mod range;
pub mod sweep;

pub use error::{Error, Result};
pub use exact::Scalar;
pub use families::{fibonacci_polynomial, table, ExplicitRoots, Family, SequenceWindow};
pub use float_check::{chebyshev_zero_sum, float_product, FloatCompareResult, FloatReport};
pub use identity::{eval_identity, eval_m_recursion, unroll_m_recursion, IdentityCheck, IdentityId, Params};
pub use oeis::{cross_check, Axis, ClientConfig, CrossCheck, OeisClient, OeisMatch, Source};
pub use range::IntRange;
pub use sweep::{sweep, RelRange, SweepReport, SweepSpec};
