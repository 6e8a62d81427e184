use std::fmt;

use num_complex::Complex64;

use super::gauss::GaussRational;
use super::poly::{gcd, Poly};
use super::{RingError, ScalarRing};

/// Quotient of polynomials in z, zbar over Q(i).
///
/// Invariant: `gcd(num, den) = 1` and `den` is monic, so equal functions
/// have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    n: usize,
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn from_parts(n: usize, num: Poly, den: Poly) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(Self::reduce(n, num, den))
    }

    pub fn from_poly(n: usize, p: Poly) -> Self {
        RationalFunction { n, num: p, den: Poly::one(2 * n) }
    }

    /// z_j (for `conj = false`) or zbar_j.
    pub fn coordinate(n: usize, j: usize, conj: bool) -> Self {
        Self::from_poly(n, Poly::var(2 * n, if conj { n + j } else { j }))
    }

    fn reduce(n: usize, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalFunction { n, num, den: Poly::one(2 * n) };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        let inv = lc.inv().expect("nonzero");
        RationalFunction { n, num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn chart_dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64, RingError> {
        let d = self.den.eval_complex(point);
        if d.norm() == 0.0 {
            return Err(RingError::DivisionByZero);
        }
        Ok(self.num.eval_complex(point) / d)
    }

    /// Exact value at a point given as (z, zbar) coordinates.
    pub fn eval_exact(&self, point: &[GaussRational]) -> Result<GaussRational, RingError> {
        let d = self.den.eval_exact(point);
        self.num.eval_exact(point).div(&d)
    }

    /// Image under the ring map sending the coordinate variables to `vars`.
    pub fn map_into<R: ScalarRing>(&self, ctx: &R::Ctx, vars: &[R]) -> Result<R, RingError> {
        let eval = |p: &Poly| -> R {
            let mut acc = R::zero(ctx);
            for (e, c) in &p.terms {
                let mut t = R::constant(ctx, c);
                for (v, &k) in e.iter().enumerate() {
                    for _ in 0..k {
                        t = t.mul(&vars[v]);
                    }
                }
                acc = acc.add(&t);
            }
            acc
        };
        let num = eval(&self.num);
        if self.den.is_constant() {
            let c = self.den.constant_value().unwrap();
            return Ok(num.scale(&c.inv()?));
        }
        Ok(num.mul(&eval(&self.den).inv()?))
    }

    pub fn is_real(&self) -> bool {
        self.conj_impl() == *self
    }

    fn conj_impl(&self) -> Self {
        Self::reduce(self.n, self.num.conj_swap(self.n), self.den.conj_swap(self.n))
    }

    fn derive(&self, v: usize) -> Self {
        if self.den.is_constant() {
            return RationalFunction { n: self.n, num: self.num.derivative(v), den: self.den.clone() };
        }
        let num = self.num.derivative(v).mul(&self.den).sub(&self.num.mul(&self.den.derivative(v)));
        Self::reduce(self.n, num, self.den.mul(&self.den))
    }
}

impl ScalarRing for RationalFunction {
    type Ctx = usize;

    fn ctx(&self) -> usize {
        self.n
    }
    fn zero(n: &usize) -> Self {
        RationalFunction { n: *n, num: Poly::zero(2 * n), den: Poly::one(2 * n) }
    }
    fn constant(n: &usize, c: &GaussRational) -> Self {
        RationalFunction { n: *n, num: Poly::constant(2 * n, c.clone()), den: Poly::one(2 * n) }
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::reduce(self.n, self.num.add(&o.num), self.den.clone());
        }
        Self::reduce(self.n, self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        Self::reduce(self.n, self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        RationalFunction { n: self.n, num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Result<Self, RingError> {
        if self.num.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(Self::reduce(self.n, self.den.clone(), self.num.clone()))
    }
    fn conj(&self) -> Self {
        self.conj_impl()
    }
    fn d_z(&self, j: usize) -> Self {
        self.derive(j)
    }
    fn d_zbar(&self, j: usize) -> Self {
        self.derive(self.n + j)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn value(&self) -> Option<Complex64> {
        None
    }
    fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.n);
        }
        RationalFunction { n: self.n, num: self.num.scale(c), den: self.den.clone() }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?}) / ({:?})", self.num, self.den)
        }
    }
}
