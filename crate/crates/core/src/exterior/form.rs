use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{GaussRational, RingError, ScalarRing};

/// Basis element dz_I ∧ dzbar_J, with I and J stored as bitmasks (bit j = index j).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndexPair {
    pub i: u16,
    pub j: u16,
}

impl MultiIndexPair {
    pub const EMPTY: MultiIndexPair = MultiIndexPair { i: 0, j: 0 };

    pub fn new(i: u16, j: u16) -> Self {
        MultiIndexPair { i, j }
    }

    /// Builds from strictly increasing 0-based index lists.
    pub fn from_lists(n: usize, i: &[usize], j: &[usize]) -> Result<Self, FormError> {
        fn mask(n: usize, xs: &[usize]) -> Result<u16, FormError> {
            let mut m = 0u16;
            for (k, &x) in xs.iter().enumerate() {
                if x >= n || (k > 0 && xs[k - 1] >= x) {
                    return Err(FormError::BadMultiIndex(xs.to_vec()));
                }
                m |= 1 << x;
            }
            Ok(m)
        }
        Ok(MultiIndexPair { i: mask(n, i)?, j: mask(n, j)? })
    }

    pub fn p(&self) -> usize {
        self.i.count_ones() as usize
    }

    pub fn q(&self) -> usize {
        self.j.count_ones() as usize
    }

    pub fn degree(&self) -> usize {
        self.p() + self.q()
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p(), self.q())
    }

    pub fn i_list(&self) -> Vec<usize> {
        bits(self.i)
    }

    pub fn j_list(&self) -> Vec<usize> {
        bits(self.j)
    }
}

impl fmt::Debug for MultiIndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for a in bits(self.i) {
            parts.push(format!("dz{}", a + 1));
        }
        for b in bits(self.j) {
            parts.push(format!("dzb{}", b + 1));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("^"))
        }
    }
}

pub fn bits(m: u16) -> Vec<usize> {
    (0..16).filter(|k| m & (1 << k) != 0).collect()
}

/// All masks on n bits with exactly k ones, in increasing order.
pub fn subsets(n: usize, k: usize) -> Vec<u16> {
    (0u16..(1 << n)).filter(|m| m.count_ones() as usize == k).collect()
}

/// All basis pairs of bidegree (p, q).
pub fn basis(n: usize, p: usize, q: usize) -> Vec<MultiIndexPair> {
    let mut out = Vec::new();
    for i in subsets(n, p) {
        for j in subsets(n, q) {
            out.push(MultiIndexPair { i, j });
        }
    }
    out
}

/// All basis pairs of total degree k, grouped by increasing p.
pub fn basis_of_degree(n: usize, k: usize) -> Vec<MultiIndexPair> {
    let mut out = Vec::new();
    for p in (0..=k.min(n)).rev() {
        let q = k - p;
        if q <= n {
            out.extend(basis(n, p, q));
        }
    }
    out
}

/// Sign of merging two sorted index sets, or 0 if they overlap.
pub fn merge_sign(a: u16, b: u16) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut inv = 0u32;
    for x in bits(b) {
        // elements of a greater than x must move past x
        inv += (a >> (x + 1)).count_ones();
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// e_a ∧ e_b = sign * e_{a∪b}.
pub fn wedge_sign(a: MultiIndexPair, b: MultiIndexPair) -> i32 {
    let s1 = merge_sign(a.i, b.i);
    let s2 = merge_sign(a.j, b.j);
    if s1 == 0 || s2 == 0 {
        return 0;
    }
    let cross = if (a.q() * b.p()) % 2 == 0 { 1 } else { -1 };
    s1 * s2 * cross
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormError {
    #[error("multi-index {0:?} is not strictly increasing or out of range")]
    BadMultiIndex(Vec<usize>),
    #[error("chart dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("ring error: {0}")]
    Ring(#[from] RingError),
    #[error("{0}")]
    Other(String),
}

/// Mixed-degree differential form with coefficients in `R`.
#[derive(Clone)]
pub struct Form<R: ScalarRing> {
    pub n: usize,
    pub ctx: R::Ctx,
    pub comps: BTreeMap<MultiIndexPair, R>,
}

impl<R: ScalarRing> Form<R> {
    pub fn zero(n: usize, ctx: &R::Ctx) -> Self {
        Form { n, ctx: ctx.clone(), comps: BTreeMap::new() }
    }

    pub fn scalar(n: usize, f: R) -> Self {
        let mut out = Form::zero(n, &f.ctx());
        out.set(MultiIndexPair::EMPTY, f);
        out
    }

    pub fn one(n: usize, ctx: &R::Ctx) -> Self {
        Form::scalar(n, R::one(ctx))
    }

    pub fn monomial(n: usize, key: MultiIndexPair, f: R) -> Self {
        let mut out = Form::zero(n, &f.ctx());
        out.set(key, f);
        out
    }

    /// dz_j (conj = false) or dzbar_j.
    pub fn dz(n: usize, ctx: &R::Ctx, j: usize, conj: bool) -> Self {
        let key = if conj { MultiIndexPair::new(0, 1 << j) } else { MultiIndexPair::new(1 << j, 0) };
        Form::monomial(n, key, R::one(ctx))
    }

    pub fn set(&mut self, key: MultiIndexPair, f: R) {
        self.comps.insert(key, f);
    }

    pub fn get(&self, key: &MultiIndexPair) -> Option<&R> {
        self.comps.get(key)
    }

    pub fn coeff(&self, key: &MultiIndexPair) -> R {
        self.comps.get(key).cloned().unwrap_or_else(|| R::zero(&self.ctx))
    }

    pub fn add_to(&mut self, key: MultiIndexPair, f: R) {
        match self.comps.get_mut(&key) {
            Some(c) => *c = c.add(&f),
            None => {
                self.comps.insert(key, f);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, v) in &o.comps {
            r.add_to(*k, v.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, v) in &o.comps {
            r.add_to(*k, v.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        Form { n: self.n, ctx: self.ctx.clone(), comps: self.comps.iter().map(|(k, v)| (*k, f(v))).collect() }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return Form::zero(self.n, &self.ctx);
        }
        self.map(|v| v.scale(c))
    }

    /// Multiplication by a function.
    pub fn mul_fn(&self, f: &R) -> Self {
        self.map(|v| v.mul(f))
    }

    pub fn conj(&self) -> Self {
        let mut r = Form::zero(self.n, &self.ctx);
        for (k, v) in &self.comps {
            // conj(dz_I ∧ dzbar_J) = dzbar_I ∧ dz_J = (-1)^{|I||J|} dz_J ∧ dzbar_I
            let s = if (k.p() * k.q()) % 2 == 0 { 1 } else { -1 };
            let c = v.conj();
            r.add_to(MultiIndexPair::new(k.j, k.i), if s == 1 { c } else { c.neg() });
        }
        r
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut r = Form::zero(self.n, &self.ctx);
        for (ka, va) in &self.comps {
            for (kb, vb) in &o.comps {
                let s = wedge_sign(*ka, *kb);
                if s == 0 {
                    continue;
                }
                let key = MultiIndexPair::new(ka.i | kb.i, ka.j | kb.j);
                let prod = va.mul(vb);
                r.add_to(key, if s == 1 { prod } else { prod.neg() });
            }
        }
        r
    }

    /// The (1,0) exterior derivative.
    pub fn del(&self) -> Self {
        let mut r = Form::zero(self.n, &self.ctx);
        for (k, v) in &self.comps {
            for a in 0..self.n {
                if k.i & (1 << a) != 0 {
                    continue;
                }
                let e = MultiIndexPair::new(1 << a, 0);
                let s = wedge_sign(e, *k);
                let dv = v.d_z(a);
                r.add_to(MultiIndexPair::new(k.i | e.i, k.j), if s == 1 { dv } else { dv.neg() });
            }
        }
        r
    }

    /// The (0,1) exterior derivative.
    pub fn delbar(&self) -> Self {
        let mut r = Form::zero(self.n, &self.ctx);
        for (k, v) in &self.comps {
            for a in 0..self.n {
                if k.j & (1 << a) != 0 {
                    continue;
                }
                let e = MultiIndexPair::new(0, 1 << a);
                let s = wedge_sign(e, *k);
                let dv = v.d_zbar(a);
                r.add_to(MultiIndexPair::new(k.i, k.j | e.j), if s == 1 { dv } else { dv.neg() });
            }
        }
        r
    }

    pub fn d(&self) -> Self {
        self.del().add(&self.delbar())
    }

    pub fn project(&self, p: usize, q: usize) -> Self {
        Form {
            n: self.n,
            ctx: self.ctx.clone(),
            comps: self.comps.iter().filter(|(k, _)| k.bidegree() == (p, q)).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    pub fn project_degree(&self, deg: usize) -> Self {
        Form {
            n: self.n,
            ctx: self.ctx.clone(),
            comps: self.comps.iter().filter(|(k, _)| k.degree() == deg).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// Bidegrees carrying at least one stored component.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self.comps.keys().map(|k| k.bidegree()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|v| v.is_zero())
    }

    pub fn is_determined(&self) -> bool {
        self.comps.values().all(|v| v.is_determined())
    }

    /// Components whose coefficient does not vanish.
    pub fn nonzero_components(&self) -> Vec<(MultiIndexPair, R)> {
        self.comps.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v.clone())).collect()
    }

    pub fn pruned(&self) -> Self {
        Form {
            n: self.n,
            ctx: self.ctx.clone(),
            comps: self.comps.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// Scalar coefficient of a 0-form.
    pub fn as_function(&self) -> R {
        self.coeff(&MultiIndexPair::EMPTY)
    }

    pub fn try_map<E>(&self, f: impl Fn(&R) -> Result<R, E>) -> Result<Self, E> {
        let mut comps = BTreeMap::new();
        for (k, v) in &self.comps {
            comps.insert(*k, f(v)?);
        }
        Ok(Form { n: self.n, ctx: self.ctx.clone(), comps })
    }
}

impl<R: ScalarRing> fmt::Debug for Form<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz = self.nonzero_components();
        if nz.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, v)) in nz.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{:?}] {:?}", v, k)?;
        }
        Ok(())
    }
}
