//! Finite invariant-form models of tori and nilmanifolds: exact Frölicher
//! pages and numeric Laplacian spectra.
//!
//! The model complex is a subcomplex of the forms of the manifold, preserved
//! by every operator with a constant twist and an invariant metric, so the
//! comparisons made here are model-scale evidence and not instances of the
//! theorems about the full form space.

pub mod complex;
pub mod exact;
pub mod fss;
pub mod laplace;
pub mod model;

pub use complex::InvariantComplex;
pub use exact::ExactMatrix;
pub use fss::{fss_pages, FssError, FssTable};
pub use laplace::{
    assemble_laplacian, dyadic_sweep, eigenpairs, estimate_decay, operator_spectrum, spectrum, spectrum_equality_check,
    sweep_h, verify_degeneration_criterion, AssembledOperator, CriterionReport, DecayReport, Grading, LaplacianKind,
    NumericComplex, SpectralError, Spectrum, SpectrumEquality, SpectrumTable, ZERO_FLOOR,
};
pub use model::{LieAlgebraModel, ModelError, BUILTIN_MODELS};
