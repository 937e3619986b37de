//! Discretized study of the trilinear size functional on 1-D grids.

pub mod ascent;
pub mod dilation;
pub mod el;
pub mod functional;
pub mod gaussian;
pub mod grid;
pub mod rearrange;
pub mod scales;

pub use functional::{eval_functional, functional_derivatives, gradient};
pub use grid::{Grid, GridFunction, Triple};
