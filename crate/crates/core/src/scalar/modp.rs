use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::gauss::GaussRational;
use super::jet::CoeffField;
use super::RingError;

/// p = 2^61 - 1; p ≡ 3 mod 4, so x² + 1 is irreducible and F_p[i] is a field
/// on which a ↦ conj(a) (i ↦ -i) is an automorphism.
pub const P: u64 = (1u64 << 61) - 1;

/// Element a + b i of F_{p²}. Rationals map in whenever their denominator is
/// prime to p, which holds for all data the samplers produce.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ModPrime {
    pub a: u64,
    pub b: u64,
}

#[inline]
fn add(x: u64, y: u64) -> u64 {
    let s = x + y;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
fn sub(x: u64, y: u64) -> u64 {
    if x >= y {
        x - y
    } else {
        x + P - y
    }
}

#[inline]
fn mul(x: u64, y: u64) -> u64 {
    let t = x as u128 * y as u128;
    let lo = (t as u64) & P;
    let hi = (t >> 61) as u64;
    add(lo, hi)
}

fn pow(mut x: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, x);
        }
        x = mul(x, x);
        e >>= 1;
    }
    r
}

fn reduce_int(v: &BigInt) -> u64 {
    let m = BigInt::from(P);
    let mut r = v % &m;
    if r.is_negative() {
        r += &m;
    }
    r.to_u64().expect("reduced below p")
}

fn reduce_rat(r: &BigRational) -> u64 {
    let n = reduce_int(r.numer());
    let d = reduce_int(r.denom());
    mul(n, pow(d, P - 2))
}

impl ModPrime {
    fn centered(x: u64) -> f64 {
        if x > P / 2 {
            -((P - x) as f64)
        } else {
            x as f64
        }
    }
}

impl CoeffField for ModPrime {
    fn zero() -> Self {
        ModPrime { a: 0, b: 0 }
    }
    fn from_gauss(c: &GaussRational) -> Self {
        ModPrime { a: reduce_rat(&c.re), b: reduce_rat(&c.im) }
    }
    fn from_int(k: i64) -> Self {
        let a = if k >= 0 { (k as u64) % P } else { sub(0, (k.unsigned_abs()) % P) };
        ModPrime { a, b: 0 }
    }
    fn add(&self, o: &Self) -> Self {
        ModPrime { a: add(self.a, o.a), b: add(self.b, o.b) }
    }
    fn sub(&self, o: &Self) -> Self {
        ModPrime { a: sub(self.a, o.a), b: sub(self.b, o.b) }
    }
    fn mul(&self, o: &Self) -> Self {
        ModPrime {
            a: sub(mul(self.a, o.a), mul(self.b, o.b)),
            b: add(mul(self.a, o.b), mul(self.b, o.a)),
        }
    }
    fn neg(&self) -> Self {
        ModPrime { a: sub(0, self.a), b: sub(0, self.b) }
    }
    fn inv(&self) -> Result<Self, RingError> {
        let nrm = add(mul(self.a, self.a), mul(self.b, self.b));
        if nrm == 0 {
            return Err(RingError::DivisionByZero);
        }
        let t = pow(nrm, P - 2);
        Ok(ModPrime { a: mul(self.a, t), b: mul(sub(0, self.b), t) })
    }
    fn conj(&self) -> Self {
        ModPrime { a: self.a, b: sub(0, self.b) }
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
    /// Centered representatives; only meaningful as a fingerprint.
    fn to_c64(&self) -> Complex64 {
        Complex64::new(Self::centered(self.a), Self::centered(self.b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_laws() {
        let x = ModPrime::from_gauss(&GaussRational::from_parts((3, 7), (-2, 5)));
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), ModPrime::one());
        let i = ModPrime::from_gauss(&GaussRational::i());
        assert_eq!(i.mul(&i), ModPrime::from_int(-1));
        assert_eq!(x.conj().conj(), x);
    }
}
