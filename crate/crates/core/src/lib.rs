//! λ-primitive roots: the Carmichael function, unit-group structure,
//! elementary characters, moment sums of `N_a(x)` and the associated
//! Euler-product constants.

pub mod arith;
pub mod characters;
pub mod constants;
pub mod error;
pub mod exact;
pub mod par;
pub mod statistics;
pub mod unit_group;
pub mod verify;

pub use arith::{carmichael_lambda, euler_phi, factorize, multiplicative_order, FactoredInt};
pub use error::{Error, Result};
pub use unit_group::{r_count, r_count_bruteforce, UnitGroupStructure};
