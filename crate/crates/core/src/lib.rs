//! Exact jet toolkit for frontal map-germs.
//!
//! The crate computes Legendre lifts, density functions, tangent surfaces,
//! Jacobi and ramification modules and Legendre duals of polynomial germs,
//! and recognises the standard frontal singularities (cuspidal edge,
//! swallowtail, folded umbrella, open swallowtail, fold, Whitney cusp).
//! Every germ-level computation runs over exact rationals.

#![allow(clippy::needless_range_loop)]

pub mod classifier;
pub mod cli;
pub mod curve_analysis;
pub mod duality;
pub mod error;
pub mod frontal_core;
pub mod germs;
pub mod jets;
pub mod linalg;
pub mod openings;
pub mod poly;
pub mod scalar;
pub mod tangent_surfaces;

pub use error::{Error, Result};
