//! Field towers, exact element arithmetic, square classes and valuations.

pub mod expr;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod squares;
pub mod tower;
pub mod valuation;

pub use expr::{parse_element, parse_tower};
pub use scalar::{Characteristic, Scalar};
pub use squares::{is_square, same_class, sqrt_exact, square_class, SquareClass};
pub use tower::{embed, Element, FieldDesc, Layer, Tower};
pub use valuation::{residue_unit, valuation, ValuationSpec};

use crate::error::Result;

/// Parse and canonicalize an element expression over `f`.
pub fn normalize(expr: &str, f: &Tower) -> Result<Element> {
    parse_element(expr, f)
}
