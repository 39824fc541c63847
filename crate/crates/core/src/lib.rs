//! Brauer classes of varieties over p-adic fields, studied through the
//! special fibre of a regular model.

pub mod arith;
pub mod bounds;
pub mod error;
pub mod eval;
pub mod model;
pub mod modelfile;
pub mod numbers;
pub mod poly;
pub mod sing;
pub mod torsor;
pub mod verdict;

pub use error::{Error, Result};
