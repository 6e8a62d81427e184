//! Exact verification of twisted Hermitian operator identities, together with
//! finite spectral models on nilmanifolds and checks of the analytic hypotheses.

pub mod exterior;
pub mod geometry;
pub mod operators;
pub mod registry;
pub mod scalar;
pub mod spectral;
