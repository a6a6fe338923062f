//! Conductors of induced and general tori over complete discretely valued
//! fields of positive characteristic.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod error;
pub mod galois;
pub mod homology;
pub mod rings;
pub mod torus;

pub use error::{Error, Result};
