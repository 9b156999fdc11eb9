//! Weak order intervals of the symmetric group, skew-vexillary shapes,
//! γ-labelings and rowmotion on semidistributive lattices, rook statistics,
//! and exact decision procedures for coincidental down-degree expectations.
//!
//! `no_std` with `alloc`; all probabilities and expectations are exact rationals.

#![no_std]

extern crate alloc;

pub mod cde;
pub mod lattice;
pub mod perm;
pub mod rook;
pub mod shape;
pub mod weakinterval;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
