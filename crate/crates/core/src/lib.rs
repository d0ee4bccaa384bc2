pub mod combinatorics;
pub mod constructions;
pub mod counting;
pub mod error;
pub mod geometry;
pub mod numeric;
pub mod selftest;

pub use error::{Error, Result};
