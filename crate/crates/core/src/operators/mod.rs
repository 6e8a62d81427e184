//! Operator expressions over forms and their evaluation.

mod eval;
mod expr;
pub mod library;

pub use eval::{EvalContext, EvalError, Mutation};
pub use expr::{Affine, ByBidegree, DegreeScalar, ExprError, FormExpr, OperatorExpr, Prim, TwistMap};
