//! Rigorous search for optimal packings of equal circles on the square flat
//! torus.

pub mod atlas;
pub mod certify;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod interval;
pub mod linalg;
pub mod pipeline;
pub mod records;
pub mod solver;
pub mod svg;
pub mod system;
pub mod torus;

pub use error::{Error, Result};
