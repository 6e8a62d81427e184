use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::gauss::GaussRational;

/// Sparse polynomial over Q(i) in `nvars` commuting variables.
/// For a chart of dimension n the variables are z_1..z_n followed by zbar_1..zbar_n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u16>, GaussRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, GaussRational::one())
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(e, GaussRational::one());
        p
    }

    pub fn monomial(exps: Vec<u16>, c: GaussRational) -> Self {
        let nvars = exps.len();
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Option<GaussRational> {
        if self.is_zero() {
            return Some(GaussRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Vec<u16>, &GaussRational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, e: Vec<u16>, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.neg());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, s: &GaussRational) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.mul(s))).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                r.add_term(e, ca.mul(cb));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut f = e.clone();
                f[v] -= 1;
                r.add_term(f, c.mul(&GaussRational::from_int(e[v] as i64)));
            }
        }
        r
    }

    /// Applies a permutation of variables and conjugates the coefficients.
    pub fn conj_swap(&self, half: usize) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            for j in 0..half {
                f.swap(j, j + half);
            }
            r.add_term(f, c.conj());
        }
        r
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let (re, im) = c.to_f64_pair();
            let mut t = Complex64::new(re, im);
            for (v, &k) in e.iter().enumerate() {
                t *= point[v].powu(k as u32);
            }
            acc += t;
        }
        acc
    }

    pub fn eval_exact(&self, point: &[GaussRational]) -> GaussRational {
        let mut acc = GaussRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&point[v]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        let (ld_e, ld_c) = d.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let ld_inv = ld_c.inv().ok()?;
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((le, lc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if le.iter().zip(&ld_e).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u16> = le.iter().zip(&ld_e).map(|(a, b)| a - b).collect();
            let t = Poly::monomial(e, lc.mul(&ld_inv));
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    fn max_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.degree_in(v) > 0)
    }

    fn coeffs_in(&self, v: usize) -> BTreeMap<u16, Poly> {
        let mut out: BTreeMap<u16, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[v];
            f[v] = 0;
            out.entry(k).or_insert_with(|| Poly::zero(self.nvars)).add_term(f, c.clone());
        }
        out
    }

    fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero(self.nvars);
        for c in self.coeffs_in(v).values() {
            g = gcd(&g, c);
            if g.is_constant() && !g.is_zero() {
                return Poly::one(self.nvars);
            }
        }
        g
    }

    fn lead_coeff_in(&self, v: usize) -> (u16, Poly) {
        let cs = self.coeffs_in(v);
        let (k, c) = cs.into_iter().next_back().expect("nonzero polynomial");
        (k, c)
    }

    fn times_var_pow(&self, v: usize, k: u16) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = e.clone();
                    f[v] += k;
                    (f, c.clone())
                })
                .collect(),
        }
    }

    fn prem(&self, b: &Poly, v: usize) -> Poly {
        let (db, lb) = b.lead_coeff_in(v);
        let mut r = self.clone();
        loop {
            if r.is_zero() {
                return r;
            }
            let dr = r.degree_in(v);
            if dr < db {
                return r;
            }
            let (_, lr) = r.lead_coeff_in(v);
            r = r.mul(&lb).sub(&b.mul(&lr).times_var_pow(v, dr - db));
        }
    }
}

/// Greatest common divisor, normalized to be monic (leading coefficient 1 in lex order).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars);
    }
    let va = a.max_var().unwrap();
    let vb = b.max_var().unwrap();
    let v = va.max(vb);
    if a.degree_in(v) == 0 {
        return gcd(a, &b.content_in(v));
    }
    if b.degree_in(v) == 0 {
        return gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = p.prem(&q, v);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(v) == 0 {
            break Poly::one(a.nvars);
        }
        let cr = r.content_in(v);
        p = q;
        q = r.div_exact(&cr).expect("content divides");
    };
    let gp = g.div_exact(&g.content_in(v)).expect("content divides");
    c.mul(&gp).monic()
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let half = self.nvars / 2;
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let name = if half > 0 && v >= half { format!("zb{}", v - half + 1) } else { format!("z{}", v + 1) };
                if k == 1 {
                    write!(f, "*{}", name)?;
                } else {
                    write!(f, "*{}^{}", name, k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64) -> GaussRational {
        GaussRational::from_int(a)
    }

    #[test]
    fn gcd_of_products() {
        let n = 4;
        let x = Poly::var(n, 0);
        let y = Poly::var(n, 2);
        let f = x.add(&y.scale(&g(2))).add(&Poly::one(n)); // x + 2y + 1
        let h = x.mul(&y).sub(&Poly::constant(n, GaussRational::i())); // xy - i
        let k = y.add(&Poly::constant(n, g(3))); // y + 3
        let a = f.mul(&h).mul(&h);
        let b = f.mul(&k).mul(&h);
        let d = gcd(&a, &b);
        assert_eq!(d, f.mul(&h).monic());
    }

    #[test]
    fn division() {
        let n = 2;
        let x = Poly::var(n, 0);
        let y = Poly::var(n, 1);
        let p = x.add(&y).pow(3);
        assert_eq!(p.div_exact(&x.add(&y)).unwrap(), x.add(&y).pow(2));
        assert!(p.div_exact(&x.sub(&y)).is_none());
    }
}
