//! Exact decision procedures for semisimple isometries of even unimodular
//! lattices with prescribed characteristic polynomial and index map.

pub mod arith;
pub mod error;
pub mod finitefield;
pub mod intpoly;
pub mod k3salem;
pub mod linalg;
pub mod padic;
pub mod structure;
pub mod obstruction;

pub use error::{Error, Result};
pub use intpoly::IntPoly;
