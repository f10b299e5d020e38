//! Exact calculator for moduli spaces of one-dimensional sheaves on rational
//! surfaces (the projective plane and the Hirzebruch surfaces `F_0`, `F_1`).
//!
//! The crate is `no_std` and only needs `alloc`. It covers
//!
//! - Picard-lattice arithmetic ([`lattice`]),
//! - the splitting invariant `s_L` and its decompositions ([`decomposition`]),
//! - the applicability checks and the codimension constant `rho_L` ([`hypotheses`]),
//! - truncated bivariate power series over big integers ([`series`]),
//! - Betti numbers of Hilbert schemes of points ([`hilb`]),
//! - normalisation of `chi`, the motivic shift and the virtual Betti tables ([`motivic`]),
//! - the explicit dimension bounds for the bad strata ([`bounds`]).
#![no_std]

extern crate alloc;

pub mod arith;
pub mod bounds;
pub mod decomposition;
mod error;
pub mod hilb;
pub mod hypotheses;
pub mod lattice;
pub mod motivic;
pub mod series;

pub use error::{Error, Result};
pub use lattice::{DivisorClass, Surface, SurfaceKind};
