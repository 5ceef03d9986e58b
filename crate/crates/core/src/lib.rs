#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN
//! Directions of points of planar affine lattices: finite-radius statistics
//! and their limit laws.

pub mod consts;
pub mod diophantine;
pub mod error;
pub mod escape;
pub mod io;
pub mod lattice;
pub mod limit;
pub mod linalg;
pub mod points;
pub mod stats;

pub use error::{Error, Result};
pub use lattice::{AffineLatticeSpec, DirectionSet, DomainShape};
pub use linalg::Mat2;
