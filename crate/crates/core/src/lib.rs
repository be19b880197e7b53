//! Exact computations for the orbifold topological vertex in the one-leg case.

pub mod characters;
pub mod cli;
pub mod dt_vertex;
pub mod error;
pub mod exactnum;
pub mod gw_vertex;
pub mod hurwitz;
pub mod localgw;
pub mod partitions;
pub mod report;
pub mod series;

pub use error::{Error, Result};
