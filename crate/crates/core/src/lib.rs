//! Rank-2 Drinfeld modules over `A = F_q[T]`.
pub mod algebra;
pub mod census;
pub mod criterion;
pub mod diagnostics;
pub mod drinfeld;
pub mod error;
pub mod frobenius;
pub mod golden;
pub mod twisted;

pub use error::{Error, Result};
