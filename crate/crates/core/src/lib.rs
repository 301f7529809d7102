//! Exact quadratic-form and involution calculus over towers of fields.

pub mod error;
pub mod fields;
pub mod forms;
pub mod hermitian;
pub mod scenarios;

pub use error::{Error, Result};
