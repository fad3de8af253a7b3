//! Exact dynamics of one- and two-dimensional cellular automata.
//!
//! The crate is organized around a few layers:
//!
//! * [`ca`] holds the exact representations: rule tables, periodic
//!   configurations on tori, asymptotic pairs and their evolution.
//! * [`slicing`] turns a 2D CA restricted to a `v`-periodic subspace into a
//!   conjugate 1D CA over a product alphabet.
//! * [`dyn1d`] and [`dyn2d`] contain decision procedures, refuters and
//!   certificates (permutivity, closingness, blocking words, expansivity,
//!   rectangle counting for topological entropy).
//! * [`wang`], [`stretch`] and [`reduction`] implement Wang tilings, the
//!   hierarchical directed pattern, macro-tile stretching along two lattice
//!   directions and the tiling-to-CA reduction used to build non-closing
//!   witnesses.

pub mod ca;
pub mod dyn1d;
pub mod dyn2d;
mod error;
pub mod lattice;
mod limits;
pub mod reduction;
pub mod slicing;
pub mod stretch;
pub mod wang;

pub use error::{CaError, Result};
pub use limits::Limits;

/// A cell state. Alphabets are always `0..size`.
pub type Symbol = u32;

/// A point of the integer lattice `Z²`, `x` growing east and `y` north.
pub type Cell = (i64, i64);
