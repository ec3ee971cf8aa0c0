//! Certified computations on Poncelet conic-line arrangements.

pub mod covers;
pub mod error;
pub mod geometry;
pub mod numeric;
pub mod poncelet;
pub mod splitting;

pub use error::{Error, Result};
