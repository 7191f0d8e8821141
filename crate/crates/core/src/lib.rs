//! Arithmetic dynamics on the projective line and split maps of its powers.

pub mod arith;
pub mod cli;
pub mod error;

pub use error::{Error, Result};
pub mod families;
pub mod heights;
pub mod dynamics;
pub mod measures;
