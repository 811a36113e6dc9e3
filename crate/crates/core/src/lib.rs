//! Desk-scale laboratory for the set of `K_r`-copies in the random graph `G(n,p)`.
//!
//! The crate is organised around the clique hypergraph `H_r(G)`: exact closed-form
//! moments and overlap statistics, brute-force enumeration of the small-`n` law,
//! the reweighted-binomial model probability, clique-factor / hypergraph-matching
//! counting, and the random hyperedge-deletion (Shamir) process.
//!
//! All identity-bearing computations are generic over [`scalar::Scalar`], with an
//! exact arbitrary-precision rational backend ([`Rational`]) and an `f64` backend
//! for instances where exact arithmetic is out of reach.

pub mod bits;
pub mod cliques;
pub mod clusters;
pub mod dist;
pub mod error;
pub mod events;
pub mod factors;
pub mod moments;
pub mod scalar;
pub mod verify;

pub use error::Error;
pub use scalar::Scalar;

/// Exact probability / expectation type: arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

/// Moment table on the exact rational backend.
pub type ExactMomentTable = moments::MomentTable<Rational>;
/// Moment table on the float backend.
pub type FloatMomentTable = moments::MomentTable<f64>;
/// Exact small-n distribution of the clique hypergraph.
pub type ExactDistribution = dist::Distribution<Rational>;

/// Environment variable that lifts the built-in enumeration guards.
pub const GUARD_OVERRIDE_ENV: &str = "CLUSTERLAB_GUARD_OVERRIDE";

/// True when `CLUSTERLAB_GUARD_OVERRIDE=1` is set.
pub fn guard_override() -> bool {
    std::env::var(GUARD_OVERRIDE_ENV).map(|v| v == "1").unwrap_or(false)
}
