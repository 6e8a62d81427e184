use std::cell::RefCell;
use std::collections::HashMap;

use super::form::{basis, bits, subsets, wedge_sign, Form, FormError, MultiIndexPair};
use crate::scalar::{GaussRational, ScalarRing};

/// Hermitian metric with fundamental form ω = i Σ g_{jk} dz_j ∧ dzbar_k.
///
/// The induced pointwise product on forms is linear in the first slot and
/// gives |dz_j|^2 = 1 when g is the identity.
pub struct HermitianMetric<R: ScalarRing> {
    pub n: usize,
    pub ctx: R::Ctx,
    pub g: Vec<Vec<R>>,
    det: R,
    det_inv: R,
    minors_g: HashMap<(u16, u16), R>,
    minors_ginv: HashMap<(u16, u16), R>,
    gram_cache: RefCell<HashMap<(MultiIndexPair, MultiIndexPair), R>>,
    gram_inv_cache: RefCell<HashMap<(MultiIndexPair, MultiIndexPair), R>>,
}

fn all_minors<R: ScalarRing>(n: usize, ctx: &R::Ctx, m: &[Vec<R>]) -> HashMap<(u16, u16), R> {
    let mut out: HashMap<(u16, u16), R> = HashMap::new();
    out.insert((0, 0), R::one(ctx));
    for k in 1..=n {
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                // expand along the first row
                let rb = bits(rows);
                let r0 = rb[0];
                let rest = rows & !(1 << r0);
                let mut acc = R::zero(ctx);
                for (pos, &c) in bits(cols).iter().enumerate() {
                    let sub = &out[&(rest, cols & !(1 << c))];
                    let t = m[r0][c].mul(sub);
                    acc = if pos % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
                }
                out.insert((rows, cols), acc);
            }
        }
    }
    out
}

impl<R: ScalarRing> HermitianMetric<R> {
    pub fn new(g: Vec<Vec<R>>) -> Result<Self, FormError> {
        let n = g.len();
        if n == 0 || g.iter().any(|r| r.len() != n) {
            return Err(FormError::Other("metric must be a square n x n matrix".into()));
        }
        let ctx = g[0][0].ctx();
        let minors_g = all_minors::<R>(n, &ctx, &g);
        let full = ((1u32 << n) - 1) as u16;
        let det = minors_g[&(full, full)].clone();
        let det_inv = det.inv()?;
        let mut ginv = vec![vec![R::zero(&ctx); n]; n];
        for (a, row) in ginv.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                let cof = &minors_g[&(full & !(1 << b), full & !(1 << a))];
                let v = cof.mul(&det_inv);
                *slot = if (a + b) % 2 == 0 { v } else { v.neg() };
            }
        }
        let minors_ginv = all_minors::<R>(n, &ctx, &ginv);
        Ok(HermitianMetric {
            n,
            ctx,
            g,
            det,
            det_inv,
            minors_g,
            minors_ginv,
            gram_cache: RefCell::new(HashMap::new()),
            gram_inv_cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn flat(n: usize, ctx: &R::Ctx) -> Self {
        let g = (0..n)
            .map(|a| (0..n).map(|b| if a == b { R::one(ctx) } else { R::zero(ctx) }).collect())
            .collect();
        Self::new(g).expect("identity is invertible")
    }

    /// Same metric multiplied by a positive function.
    pub fn conformal(&self, f: &R) -> Result<Self, FormError> {
        Self::new(self.g.iter().map(|r| r.iter().map(|x| x.mul(f)).collect()).collect())
    }

    pub fn det(&self) -> &R {
        &self.det
    }

    pub fn inverse_entry(&self, a: usize, b: usize) -> R {
        self.minors_ginv[&(1 << a, 1 << b)].clone()
    }

    /// ω = i Σ g_{jk} dz_j ∧ dzbar_k.
    pub fn omega(&self) -> Form<R> {
        let mut w = Form::zero(self.n, &self.ctx);
        let i = GaussRational::i();
        for a in 0..self.n {
            for b in 0..self.n {
                w.set(MultiIndexPair::new(1 << a, 1 << b), self.g[a][b].scale(&i));
            }
        }
        w
    }

    /// dV = ω^n / n! expressed in the basis dz_1..dz_n ∧ dzbar_1..dzbar_n.
    pub fn volume_form(&self) -> Form<R> {
        let full = ((1u32 << self.n) - 1) as u16;
        Form::monomial(self.n, MultiIndexPair::new(full, full), self.det.scale(&volume_constant(self.n)))
    }

    /// ⟨e_a, e_b⟩ for basis pairs of equal bidegree.
    pub fn gram_entry(&self, b: MultiIndexPair, a: MultiIndexPair) -> R {
        if a.bidegree() != b.bidegree() {
            return R::zero(&self.ctx);
        }
        if let Some(v) = self.gram_cache.borrow().get(&(b, a)) {
            return v.clone();
        }
        let v = self.minors_ginv[&(b.i, a.i)].mul(&self.minors_ginv[&(a.j, b.j)]);
        self.gram_cache.borrow_mut().insert((b, a), v.clone());
        v
    }

    fn gram_inv_entry(&self, b: MultiIndexPair, a: MultiIndexPair) -> R {
        if let Some(v) = self.gram_inv_cache.borrow().get(&(b, a)) {
            return v.clone();
        }
        let v = self.minors_g[&(b.i, a.i)].mul(&self.minors_g[&(a.j, b.j)]);
        self.gram_inv_cache.borrow_mut().insert((b, a), v.clone());
        v
    }

    fn apply_blocks(&self, v: &Form<R>, entry: impl Fn(MultiIndexPair, MultiIndexPair) -> R) -> Form<R> {
        let mut out = Form::zero(self.n, &self.ctx);
        for (p, q) in v.bidegrees() {
            let block = basis(self.n, p, q);
            for &b in &block {
                let mut acc: Option<R> = None;
                for &a in &block {
                    if let Some(c) = v.get(&a) {
                        let t = entry(b, a).mul(c);
                        acc = Some(match acc {
                            None => t,
                            Some(s) => s.add(&t),
                        });
                    }
                }
                if let Some(s) = acc {
                    out.set(b, s);
                }
            }
        }
        out
    }

    /// Coefficient vector of the functional ⟨·, v⟩ (i.e. G v).
    pub fn gram(&self, v: &Form<R>) -> Form<R> {
        self.apply_blocks(v, |b, a| self.gram_entry(b, a))
    }

    pub fn gram_inv(&self, v: &Form<R>) -> Form<R> {
        self.apply_blocks(v, |b, a| self.gram_inv_entry(b, a))
    }

    /// Pointwise ⟨u, v⟩, linear in u.
    pub fn inner(&self, u: &Form<R>, v: &Form<R>) -> R {
        let gu = self.gram(u);
        let mut acc = R::zero(&self.ctx);
        for (k, c) in &gu.comps {
            if let Some(w) = v.get(k) {
                acc = acc.add(&c.mul(&w.conj()));
            }
        }
        acc
    }

    pub fn norm_sq(&self, u: &Form<R>) -> R {
        self.inner(u, u)
    }

    /// Conjugate-linear Hodge star: v ∧ star(u) = ⟨v, u⟩ dV, mapping (p,q) to (n-p, n-q).
    pub fn hodge_star(&self, u: &Form<R>) -> Form<R> {
        let full = ((1u32 << self.n) - 1) as u16;
        let kappa = volume_constant(self.n);
        let gu = self.gram(u);
        let mut out = Form::zero(self.n, &self.ctx);
        for (a, c) in &gu.comps {
            let comp = MultiIndexPair::new(full & !a.i, full & !a.j);
            let s = wedge_sign(*a, comp);
            let coef = if s == 1 { kappa.clone() } else { kappa.neg() };
            out.add_to(comp, c.conj().mul(&self.det).scale(&coef));
        }
        out
    }

    /// Complex-linear star, conj ∘ hodge_star, mapping (p,q) to (n-q, n-p).
    pub fn hodge_star_linear(&self, u: &Form<R>) -> Form<R> {
        self.hodge_star(u).conj()
    }

    pub fn lefschetz(&self, u: &Form<R>) -> Form<R> {
        self.omega().wedge(u)
    }

    pub fn lambda(&self, u: &Form<R>) -> Form<R> {
        self.wedge_adjoint(&self.omega(), u)
    }

    /// Pointwise adjoint of u ↦ α ∧ u.
    pub fn wedge_adjoint(&self, alpha: &Form<R>, v: &Form<R>) -> Form<R> {
        let w = self.gram(v);
        self.gram_inv(&contract(alpha, &w))
    }
}

/// y_A = Σ conj(α_a) sign(a, A) w_{a∪A}: the conjugate transpose of wedging by α.
pub fn contract<R: ScalarRing>(alpha: &Form<R>, w: &Form<R>) -> Form<R> {
    let mut out = Form::zero(w.n, &w.ctx);
    let ca: Vec<(MultiIndexPair, R)> = alpha.comps.iter().map(|(k, v)| (*k, v.conj())).collect();
    for (b, wb) in &w.comps {
        for (a, c) in &ca {
            if a.i & !b.i != 0 || a.j & !b.j != 0 {
                continue;
            }
            let rest = MultiIndexPair::new(b.i & !a.i, b.j & !a.j);
            let s = wedge_sign(*a, rest);
            let t = c.mul(wb);
            out.add_to(rest, if s == 1 { t } else { t.neg() });
        }
    }
    out
}

/// Constant κ_n with ω^n/n! = κ_n det(g) dz_1..dz_n ∧ dzbar_1..dzbar_n.
pub fn volume_constant(n: usize) -> GaussRational {
    // i^n (-1)^{n(n-1)/2}
    let mut c = GaussRational::one();
    for _ in 0..n {
        c = c.mul(&GaussRational::i());
    }
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        c = c.neg();
    }
    c
}

impl<R: ScalarRing> HermitianMetric<R> {
    pub fn det_inv(&self) -> &R {
        &self.det_inv
    }
}
