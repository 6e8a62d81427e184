use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RingError;

/// Element of Q(i), stored as a pair of reduced rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn zero() -> Self {
        GaussRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(v: i64) -> Self {
        GaussRational { re: BigRational::from_integer(BigInt::from(v)), im: BigRational::zero() }
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        GaussRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussRational {
            re: BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        GaussRational { re: r, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn neg(&self) -> Self {
        GaussRational { re: -&self.re, im: -&self.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational { re: &self.re * &o.re, im: BigRational::zero() };
        }
        GaussRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn conj(&self) -> Self {
        GaussRational { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, RingError> {
        if self.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(GaussRational { re: self.re.recip(), im: BigRational::zero() });
        }
        let n = self.norm_sqr();
        Ok(GaussRational { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn div(&self, o: &Self) -> Result<Self, RingError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self, RingError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Size proxy used to keep random data small.
    pub fn bits(&self) -> u64 {
        self.re.numer().bits() + self.re.denom().bits() + self.im.numer().bits() + self.im.denom().bits()
    }

    /// Canonical text form, e.g. `3/4`, `-1/2+2i`, `i`.
    pub fn to_text(&self) -> String {
        fn rat(r: &BigRational) -> String {
            if r.is_integer() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => rat(&self.re),
            (true, false) => {
                if self.im.is_one() {
                    "i".to_string()
                } else if (-&self.im).is_one() {
                    "-i".to_string()
                } else {
                    format!("{}i", rat(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                let a = self.im.abs();
                if a.is_one() {
                    format!("{}{}i", rat(&self.re), sign)
                } else {
                    format!("{}{}{}i", rat(&self.re), sign, rat(&a))
                }
            }
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, RingError> {
    let s = s.trim();
    let bad = || RingError::Parse(s.to_string());
    if let Some((a, b)) = s.split_once('/') {
        let n = BigInt::from_str(a.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(b.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
    }
}

impl FromStr for GaussRational {
    type Err = RingError;

    /// Accepts `p/q`, `p/q+r/si`, `r/si`, `i`, `-i`.
    fn from_str(s: &str) -> Result<Self, RingError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(RingError::Parse(s.to_string()));
        }
        if !t.ends_with('i') {
            return Ok(GaussRational::from_rational(parse_rational(&t)?));
        }
        let body = &t[..t.len() - 1];
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .last();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            x => parse_rational(x.trim_start_matches('+'))?,
        };
        let re = if re_part.is_empty() { BigRational::zero() } else { parse_rational(re_part)? };
        Ok(GaussRational { re, im })
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl From<i64> for GaussRational {
    fn from(v: i64) -> Self {
        GaussRational::from_int(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in ["3/4", "-1/2+2i", "i", "-i", "5-3/7i", "0", "2/3i"] {
            let g: GaussRational = s.parse().unwrap();
            let back: GaussRational = g.to_text().parse().unwrap();
            assert_eq!(g, back, "{s}");
        }
        let g: GaussRational = "-1/2+2i".parse().unwrap();
        assert_eq!(g, GaussRational::from_parts((-1, 2), (2, 1)));
    }

    #[test]
    fn inverse() {
        let g = GaussRational::from_parts((1, 2), (-3, 5));
        assert!(g.mul(&g.inv().unwrap()).is_one());
        assert!(GaussRational::zero().inv().is_err());
    }
}

impl std::ops::Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::neg(&self)
    }
}
