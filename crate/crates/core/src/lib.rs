//! Exact non-archimedean dynamics of rational maps over Q.

pub mod error;
pub mod berkovich;
pub mod cli;
pub mod dynamics;
pub mod exactnum;
pub mod heights;
pub mod newton;
pub mod ratfunc;
pub mod search;

pub use error::{Error, Result};
