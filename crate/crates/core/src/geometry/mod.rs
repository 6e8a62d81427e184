//! Sampled checks of the hypotheses behind the vanishing statements:
//! positivity of γ_η, the constants C_1, C_2, C_3, C(φ), the thresholds and
//! the curvature operator on finite models.

pub mod constants;
pub mod domain;
pub mod hypotheses;
pub mod weight;

use thiserror::Error;

use crate::scalar::{RationalFunction, ScalarRing};
use crate::spectral::SpectralError;

pub use constants::{covector_norm, estimate_constants, form11_norm, pointwise_constants, ConstantsEstimate, RefMetric, Sup};
pub use domain::SampledDomain;
pub use hypotheses::{
    check_curvature_vanishing, check_curvature_vanishing_on_model, check_epsilon_family, check_positivity,
    check_potential_vanishing, check_twisted_vanishing, compare_below, eligible_bidegrees, potential_threshold,
    CheckKind, CurvatureModelCheck, HypothesisCheck, HypothesisReport, PositivityResult, Verdict, DEFAULT_MARGIN,
};
pub use weight::{gamma_at, gamma_from_jet, gamma_from_potential, Jet2, Potential, Weight};

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("invalid domain: {0}")]
    BadDomain(String),
    #[error("domain has no sample points")]
    EmptyDomain,
    #[error("point {0:?} lies outside the domain of the potential")]
    OutsideDomain(Vec<[f64; 2]>),
    #[error("twist function is not positive ({value}) at {point:?}")]
    NonPositiveTwist { value: f64, point: Vec<[f64; 2]> },
    #[error("reference metric is singular at {0:?}")]
    SingularMetric(Vec<[f64; 2]>),
    #[error("bidegree ({p},{q}) is out of range for n = {n}")]
    BadBidegree { p: usize, q: usize, n: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Exact γ_η from the defining formula (2/η²)η_j η_k̄ - η_{jk̄}/η, entry (j,k)
/// multiplying i dz_j∧dz̄_k. Slower than [`crate::registry::gamma_matrix`],
/// which it cross-checks.
pub fn gamma_symbolic(n: usize, eta: &RationalFunction) -> Vec<Vec<RationalFunction>> {
    let inv = eta.inv().expect("twist function is nonzero");
    let two = crate::scalar::GaussRational::from_frac(2, 1);
    (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let first = eta.d_z(j).mul(&eta.d_zbar(k)).mul(&inv).mul(&inv).scale(&two);
                    first.sub(&eta.d_z(j).d_zbar(k).mul(&inv))
                })
                .collect()
        })
        .collect()
}
