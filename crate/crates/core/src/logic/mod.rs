//! Action-based branching-time logic and its model checker.

mod check;
mod formula;
mod parser;

pub use check::{check, check_from_aut, CheckError, CheckResult, FixpointStat, Trace, Verdict};
pub use formula::{ActionPattern, ArgsPat, Formula, NamePat, ValuePat};
pub use parser::{parse_formula, parse_props, FormulaError, Property};
