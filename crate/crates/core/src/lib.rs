//! Lattice-point experiments around rectangle averaging processes on `Z²`:
//! convex geometry and counting, direction sets, generalized Perron trees,
//! discrete maximal operators, and circle-rotation ergodic averages.

pub mod directions;
pub mod discrete_maximal;
pub mod ergodic_torus;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod lattice;
pub mod perron_tree;
pub mod svg;
pub mod triangle_cover;

pub use error::{Error, Result};
