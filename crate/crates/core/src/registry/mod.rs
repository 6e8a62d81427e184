//! Catalogue of operator identities and the engine that checks them.

mod cases;
mod check;
mod suite;
pub mod instance;

pub use cases::{all_cases, Check, IdentityCase, Part, Requires, Section};
pub use check::{check_identity, trial_seed, CheckOptions, Counterexample, Field, IdentityReport, Status};
pub use instance::{gamma_matrix, Instance, MetricKind, Realized, TwistKind};
pub use suite::{catalogue_fingerprint, list_identities, run_cases, run_suite, Filter, FilterError, SuiteOptions, SuiteReport};
