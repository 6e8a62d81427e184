//! Coefficient rings for forms on a chart of C^n.
//!
//! Every ring carries the Wirtinger derivations d/dz_j, d/dzbar_j and the
//! complex conjugation that swaps z_j with zbar_j.

mod gauss;
mod jet;
mod modp;
mod poly;
mod ratfunc;

use num_complex::Complex64;
use thiserror::Error;

pub use gauss::GaussRational;
pub use jet::{CoeffField, Jet, JetCtx, JetShape};
pub use modp::ModPrime;
pub use poly::{gcd, Poly};
pub use ratfunc::RationalFunction;

pub type ExactJet = Jet<GaussRational>;
pub type FloatJet = Jet<Complex64>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar literal `{0}`")]
    Parse(String),
    #[error("operation not supported in this ring: {0}")]
    Unsupported(&'static str),
}

pub trait ScalarRing: Clone + std::fmt::Debug + Send + Sync + 'static {
    type Ctx: Clone + std::fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn constant(ctx: &Self::Ctx, c: &GaussRational) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, RingError>;
    fn conj(&self) -> Self;
    fn d_z(&self, j: usize) -> Self;
    fn d_zbar(&self, j: usize) -> Self;
    fn is_zero(&self) -> bool;

    /// False when a truncated representation no longer determines the value.
    fn is_determined(&self) -> bool {
        true
    }

    /// Complex value at the ring's reference point, when one exists.
    fn value(&self) -> Option<Complex64>;

    fn one(ctx: &Self::Ctx) -> Self {
        Self::constant(ctx, &GaussRational::one())
    }

    fn scale(&self, c: &GaussRational) -> Self {
        if c.is_one() {
            return self.clone();
        }
        self.mul(&Self::constant(&self.ctx(), c))
    }

    fn pow(&self, e: i32) -> Result<Self, RingError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(&self.ctx());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

impl ScalarRing for GaussRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        GaussRational::zero()
    }
    fn constant(_: &(), c: &GaussRational) -> Self {
        c.clone()
    }
    fn add(&self, o: &Self) -> Self {
        GaussRational::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        GaussRational::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        GaussRational::mul(self, o)
    }
    fn neg(&self) -> Self {
        GaussRational::neg(self)
    }
    fn inv(&self) -> Result<Self, RingError> {
        GaussRational::inv(self)
    }
    fn conj(&self) -> Self {
        GaussRational::conj(self)
    }
    fn d_z(&self, _: usize) -> Self {
        GaussRational::zero()
    }
    fn d_zbar(&self, _: usize) -> Self {
        GaussRational::zero()
    }
    fn is_zero(&self) -> bool {
        GaussRational::is_zero(self)
    }
    fn value(&self) -> Option<Complex64> {
        let (a, b) = self.to_f64_pair();
        Some(Complex64::new(a, b))
    }
}
