//! Randomized metatheory checks and the empirical cost audit.

pub mod algebra;
pub mod audit;
pub mod gen;
pub mod roundtrip;
pub mod suites;

pub use audit::{audit, AuditConfig, AuditError, AuditReport, AuditRow};
pub use gen::{GenConfig, Generated, Generator, Goal, Weights};
pub use suites::{run_all, MetatheoryReport, SuiteConfig, SuiteReport};
