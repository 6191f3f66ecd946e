//! Functions on the group as polynomials in adjoint matrix coefficients,
//! the star product built from `B`, and identity checks.

mod function;
mod group;
mod star;
mod verify;

pub use function::{momentum_function, Action, OrbitFunction};
pub use star::{composition_rhs, poisson, StarProduct};
pub use group::{evaluate, group_point, GroupPoint};
pub use verify::{module_records, Suite, SuiteConfig, Verifier, VerifyRecord};
