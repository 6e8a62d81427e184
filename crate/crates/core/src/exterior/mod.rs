//! Forms on a chart of C^n, Hermitian metrics and the pointwise and formal
//! adjoints built from them.

mod adjoint;
mod form;
mod metric;
pub mod random;

pub use adjoint::{del_star, del_star_via_hodge, delbar_star, delbar_star_via_hodge, FiberInner, TwistedInner};
pub use form::{basis, basis_of_degree, bits, merge_sign, subsets, wedge_sign, Form, FormError, MultiIndexPair};
pub use metric::{contract, volume_constant, HermitianMetric};
