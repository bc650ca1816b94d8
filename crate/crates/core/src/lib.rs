//! Exact and numerical tools for counting k-colorings of the square lattice
//! through the equivalent k-state vertex model.
//!
//! * [`row`] orders row configurations of vertical-edge states.
//! * [`transfer`] builds the row transfer matrices, recursively and by direct sweep.
//! * [`eigen`] finds the dominant eigenvalue matrix-free.
//! * [`trace`] holds the exact three-color trace identities and strip counts.
//! * [`coloring`] converts between edge states and face colorings and brute-forces both.
//! * [`series`] evaluates the compatibility-matrix expansion around the Pauling estimate.
//! * [`extrapolation`] fits finite-width sequences in inverse powers of the width.

pub mod coloring;
pub mod eigen;
pub mod error;
pub mod extrapolation;
pub mod matrix;
pub mod row;
pub mod series;
pub mod trace;
pub mod transfer;

pub use error::{Error, Result};
