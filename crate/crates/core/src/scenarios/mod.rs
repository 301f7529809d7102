pub mod cases;
pub mod examples;
pub mod parse;
pub mod report;

pub use cases::{enumerate_cases, CaseResult, Leaf, WittRelation};
pub use examples::{run_example1, run_example1_control, run_example2, K0Choice};
pub use parse::{parse, parse_form, parse_involution, Parsed};
pub use report::{Assumption, Report, Step};
