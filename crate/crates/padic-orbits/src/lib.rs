//! Rational nilpotent orbits of `sl_n` and `sp_2n` over a non-Archimedean
//! local field, computed two ways and matched.
//!
//! The library has three layers:
//!
//! * arithmetic: exact truncated arithmetic in an unramified extension of
//!   `Q_p` ([`padic`]), partition combinatorics ([`partitions`]), and the
//!   classification of nondegenerate quadratic forms over the field
//!   ([`quadforms`]);
//! * geometry: orbit labels and explicit matrix representatives
//!   ([`orbits`]), the standard affine apartment with its Moy-Prasad
//!   lattices ([`building`]), and the explicit matching between the
//!   partition-side labels and (facet, degenerate element) pairs
//!   ([`matching`]);
//! * logic: a parser and bounded evaluator for the three-sorted
//!   valued-field language in which all of the above is definable
//!   ([`denefpas`]).
//!
//! Everything is exact: apartment coordinates are rationals, field elements
//! carry their valuation and unit digits, and no floating point appears
//! anywhere.

pub mod building;
pub mod denefpas;
pub mod linalg;
pub mod matching;
pub mod orbits;
pub mod padic;
pub mod partitions;
pub mod quadforms;
