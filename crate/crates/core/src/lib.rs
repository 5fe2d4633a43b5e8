//! Exact A∞-categories over the Novikov field.
//!
//! The crate is organised bottom-up: [`novikov`] scalars, graded linear
//! algebra in [`glinalg`], the A∞ formalism in [`ainfty`], twisted complexes
//! in [`twisted`], the line model of the two-torus in [`fukaya_t2`], the
//! mirror rank dictionary in [`mirror_dict`] and face enumeration for the
//! associahedra and multiplihedra in [`polytopes`].
//!
//! Everything is exact: exponents and coefficients are rationals and every
//! truncation is tracked.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ainfty;
pub mod error;
pub mod fukaya_t2;
pub mod glinalg;
pub mod mirror_dict;
pub mod novikov;
pub mod polytopes;
pub mod twisted;

pub use error::{Error, Result};
pub use novikov::{Novikov, Rat, Valuation};
