pub mod arith;
pub mod closure;
pub mod error;
pub mod field;
pub mod galois;
pub mod ge2;
pub mod intpoly;
pub mod par;
pub mod splitting;

pub use error::{Error, ErrorClass, Result};
