pub mod arith;
pub mod catalogue;
pub mod dioph;
pub mod ec;
pub mod error;
pub mod forcing;
pub mod ideal;
pub mod nf;
pub mod plan;
pub mod selftest;

pub use error::{Error, Result};
pub use nf::{Field, NFElement, NumberField};
