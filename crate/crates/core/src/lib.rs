//! Interpreter, explicit-state explorer and action-based CTL checker for a
//! service-orchestration calculus with pattern-matching communication,
//! kill/protection and replication.

pub mod syntax;
pub mod semantics;
pub mod explorer;
pub mod logic;
pub mod scenario;
pub mod cli;
