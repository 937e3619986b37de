//! Hölder–Brascamp–Lieb polytopes, dual-LP parallelepiped certificates, and
//! numerical tools for the trilinear size functional
//! `I_B(f,g,h) = ∬ B(f(y), g(x−y), h(x)) dx dy`.

pub mod bfunc;
pub mod conv;
pub mod error;
pub mod flag_box;
pub mod io;
pub mod lab;
pub mod lp;
pub mod polytope;
pub mod rational;
pub mod subspace;

pub use error::{HblError, Result};
