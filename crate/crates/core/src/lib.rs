pub mod arith;
pub mod bethe;
pub mod diffop;
pub mod error;
pub mod json;
pub mod parse;
pub mod poly;
pub mod qpoly;
pub mod random;
pub mod ratfunc;
pub mod reconstruct;
pub mod roundtrip;
pub mod scalars;

pub use error::{Error, Result};
pub use scalars::{Field, FieldConfig, Mode, Scalar};
