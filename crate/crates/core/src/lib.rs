pub mod arith;
pub mod enveloping;
pub mod orbitstar;
pub mod error;
pub mod invariants;
pub mod rootsys;
pub mod shapovalov;

pub use error::{Error, Result};
