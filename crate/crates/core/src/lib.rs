//! Exact computation of the sum of element orders ψ(G) for finite abelian
//! groups.
//!
//! ψ(G) is the sum of the orders of all elements of G. For abelian groups it
//! factors over the primary components, and each p-primary component is
//! described by a partition of the exponent of p. This crate evaluates ψ
//! exactly through several independent routes (the piecewise p-group sum,
//! a subtraction form, closed forms for small ranks, an integer polynomial in
//! p, and direct enumeration of elements) and provides sweeps that check the
//! known structural properties of ψ over large ranges of group orders.

pub mod analysis;
pub mod arith;
pub mod cli;
mod error;
pub mod group_spec;
pub mod oracle;
pub mod partitions;
pub mod polynomial;
pub mod psi;

pub use arith::{BigNat, Factorization};
pub use error::{Error, Result};
pub use partitions::{PaddedTuple, Partition};
pub use psi::{AbelianGroupType, PGroupType};
