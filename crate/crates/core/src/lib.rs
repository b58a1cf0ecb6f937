//! Exact Frobenius traces on the cohomology of moduli stacks of principal
//! bundles over curves over finite fields.
//!
//! The crate is organised bottom-up: [`scalars`] holds the eigenvalue
//! arithmetic, [`curves`] the Weil polynomial of the base curve, [`groups`]
//! and [`cohomology`] the generator inventory, [`frobenius`] the diagonal
//! actions and [`traces`] the trace series, closed forms and verdicts.

pub mod cohomology;
pub mod curves;
pub mod cyclotomic;
pub mod error;
pub mod expr;
pub mod field;
pub mod frobenius;
pub mod groups;
pub mod oracles;
pub mod roots;
pub mod scalars;
pub mod traces;
pub mod verify;

pub use error::{Error, Result};
