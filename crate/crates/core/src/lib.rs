//! Domain abstraction for answer-set programs over grids.
//!
//! The crate parses and grounds a small ASP fragment, solves it with a
//! self-contained stable-model solver, builds abstract programs from
//! (multi-dimensional) domain mappings, and runs an abstraction-refinement
//! loop over quad-tree mappings that zooms into the part of a grid that
//! explains why an instance has no solution.

pub mod abstraction;
pub mod bench;
pub mod cegar;
mod error;
pub mod fragment;
pub mod ground;
pub mod mapping;
pub mod normalize;
pub mod quadtree;
pub mod render;
pub mod report;
pub mod solver;
pub mod syntax;

pub use error::{Error, Result};
