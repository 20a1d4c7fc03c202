//! Exact computation of operadic cohomology and versal deformation bases
//! for finite-dimensional algebras over finitely generated quadratic operads.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere. Ranks, cohomology dimensions and ideal
//! memberships are therefore exact, and every tie-break goes through a
//! reduced-row-echelon normal form so repeated runs produce identical
//! output.
//!
//! The crate is `no_std` (it allocates, but performs no IO); the companion
//! CLI crate carries file formats and the command-line surface.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod scalar;
pub mod matrix;
pub mod perm;
pub mod smodule;
pub mod operad;
pub mod palgebra;
pub mod cohomology;
pub mod localbase;
pub mod deform;
pub mod catalog;

mod error;

pub use error::Error;

pub type Result<T> = core::result::Result<T, Error>;
