//! Reachable state-space construction and `.aut` interchange.

mod canonical;
mod explore;
mod lts;

pub use canonical::canonicalize;
pub use explore::{explore, ExploreOptions, DEFAULT_MAX_STATES};
pub use lts::{export_aut, import_aut, parse_label, AutError, CanonicalState, Lts, Transition, Truncation};
