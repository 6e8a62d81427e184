use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use super::gauss::GaussRational;
use super::{RingError, ScalarRing};

/// Field of Taylor coefficients.
pub trait CoeffField: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn from_gauss(c: &GaussRational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, RingError>;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_c64(&self) -> Complex64;
    fn from_int(k: i64) -> Self {
        Self::from_gauss(&GaussRational::from_int(k))
    }
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl CoeffField for GaussRational {
    fn zero() -> Self {
        GaussRational::zero()
    }
    fn from_gauss(c: &GaussRational) -> Self {
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
    fn is_zero(&self) -> bool {
        GaussRational::is_zero(self)
    }
    fn to_c64(&self) -> Complex64 {
        let (a, b) = self.to_f64_pair();
        Complex64::new(a, b)
    }
}

impl CoeffField for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_gauss(c: &GaussRational) -> Self {
        let (a, b) = c.to_f64_pair();
        Complex64::new(a, b)
    }
    fn from_int(k: i64) -> Self {
        Complex64::new(k as f64, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, RingError> {
        if *self == Complex64::new(0.0, 0.0) {
            return Err(RingError::DivisionByZero);
        }
        Ok(1.0 / self)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Monomial bookkeeping for truncated Taylor series in `nvars` variables up to `order`.
pub struct JetShape {
    pub nvars: usize,
    pub order: usize,
    pub monos: Vec<Vec<u8>>,
    pub deg: Vec<usize>,
    upto: Vec<usize>,
    mul_idx: Vec<u32>,
    // per variable: (target, source, factor)
    deriv: Vec<Vec<(usize, usize, i64)>>,
    conj_perm: Vec<usize>,
}

impl fmt::Debug for JetShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetShape(vars={}, order={})", self.nvars, self.order)
    }
}

fn build_shape(nvars: usize, order: usize) -> JetShape {
    let mut monos: Vec<Vec<u8>> = Vec::new();
    for d in 0..=order {
        let mut cur = vec![0u8; nvars];
        fn rec(v: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if v + 1 == cur.len() {
                cur[v] = left as u8;
                out.push(cur.clone());
                return;
            }
            for k in (0..=left).rev() {
                cur[v] = k as u8;
                rec(v + 1, left - k, cur, out);
            }
        }
        if nvars == 0 {
            if d == 0 {
                monos.push(vec![]);
            }
            continue;
        }
        rec(0, d, &mut cur, &mut monos);
    }
    let deg: Vec<usize> = monos.iter().map(|m| m.iter().map(|&x| x as usize).sum()).collect();
    let index: HashMap<Vec<u8>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let upto: Vec<usize> = (0..=order).map(|d| deg.iter().filter(|&&x| x <= d).count()).collect();
    let nm = monos.len();
    let mut mul_idx = vec![u32::MAX; nm * nm];
    for i in 0..nm {
        for j in 0..nm {
            if deg[i] + deg[j] <= order {
                let s: Vec<u8> = monos[i].iter().zip(&monos[j]).map(|(a, b)| a + b).collect();
                mul_idx[i * nm + j] = index[&s] as u32;
            }
        }
    }
    let mut deriv = vec![Vec::new(); nvars];
    for (v, dv) in deriv.iter_mut().enumerate() {
        for (t, m) in monos.iter().enumerate() {
            if deg[t] + 1 > order {
                continue;
            }
            let mut s = m.clone();
            s[v] += 1;
            dv.push((t, index[&s], s[v] as i64));
        }
    }
    let half = nvars / 2;
    let conj_perm = monos
        .iter()
        .map(|m| {
            let mut s = m.clone();
            for j in 0..half {
                s.swap(j, j + half);
            }
            index[&s]
        })
        .collect();
    JetShape { nvars, order, monos, deg, upto, mul_idx, deriv, conj_perm }
}

impl JetShape {
    pub fn get(nvars: usize, order: usize) -> Arc<JetShape> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<JetShape>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("shape cache");
        guard.entry((nvars, order)).or_insert_with(|| Arc::new(build_shape(nvars, order))).clone()
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    fn count_upto(&self, d: i32) -> usize {
        if d < 0 {
            0
        } else {
            self.upto[(d as usize).min(self.order)]
        }
    }
}

/// Chart dimension, truncation order and base point (z_0, conj z_0).
#[derive(Clone)]
pub struct JetCtx<F: CoeffField> {
    pub n: usize,
    pub shape: Arc<JetShape>,
    pub base: Arc<Vec<F>>,
}

impl<F: CoeffField> fmt::Debug for JetCtx<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetCtx(n={}, order={}, base={:?})", self.n, self.shape.order, self.base)
    }
}

impl<F: CoeffField> JetCtx<F> {
    /// `z0` holds the holomorphic coordinates of the base point.
    pub fn new(z0: &[F], order: usize) -> Self {
        let n = z0.len();
        let mut base: Vec<F> = z0.to_vec();
        base.extend(z0.iter().map(|z| z.conj()));
        JetCtx { n, shape: JetShape::get(2 * n, order), base: Arc::new(base) }
    }

    pub fn order(&self) -> usize {
        self.shape.order
    }
}

/// Truncated Taylor expansion at the base point. Coefficients of total degree
/// above `prec` are not meaningful; `prec < 0` means nothing is known.
#[derive(Clone)]
pub struct Jet<F: CoeffField> {
    ctx: JetCtx<F>,
    prec: i32,
    c: Vec<F>,
}

impl<F: CoeffField> Jet<F> {
    /// z_j or zbar_j as a jet.
    pub fn coordinate(ctx: &JetCtx<F>, j: usize, conj: bool) -> Self {
        let v = if conj { ctx.n + j } else { j };
        let mut out = Self::constant_f(ctx, ctx.base[v].clone());
        if ctx.shape.order >= 1 {
            let mut m = vec![0u8; 2 * ctx.n];
            m[v] = 1;
            let idx = ctx.shape.monos.iter().position(|x| *x == m).expect("linear monomial");
            out.c[idx] = F::one();
        }
        out
    }

    pub fn constant_f(ctx: &JetCtx<F>, v: F) -> Self {
        let mut c = vec![F::zero(); ctx.shape.len()];
        c[0] = v;
        Jet { ctx: ctx.clone(), prec: ctx.shape.order as i32, c }
    }

    pub fn precision(&self) -> i32 {
        self.prec
    }

    pub fn with_precision(mut self, p: i32) -> Self {
        self.prec = self.prec.min(p);
        self
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn coefficient(&self, mono: &[u8]) -> Option<&F> {
        let i = self.ctx.shape.monos.iter().position(|m| m.as_slice() == mono)?;
        if self.ctx.shape.deg[i] as i32 > self.prec {
            return None;
        }
        Some(&self.c[i])
    }

    pub fn constant_term(&self) -> &F {
        &self.c[0]
    }

    fn nonconstant(&self) -> Self {
        let mut r = self.clone();
        r.c[0] = F::zero();
        r
    }

    fn scale_f(&self, s: &F) -> Self {
        let k = self.ctx.shape.count_upto(self.prec);
        let mut c = vec![F::zero(); self.c.len()];
        for i in 0..k {
            c[i] = self.c[i].mul(s);
        }
        Jet { ctx: self.ctx.clone(), prec: self.prec, c }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        let sh = &self.ctx.shape;
        let prec = self.prec.min(o.prec);
        let nm = sh.len();
        let mut c = vec![F::zero(); nm];
        if prec >= 0 {
            for i in 0..sh.count_upto(prec) {
                let a = &self.c[i];
                if a.is_zero() {
                    continue;
                }
                let lim = sh.count_upto(prec - sh.deg[i] as i32);
                for j in 0..lim {
                    let b = &o.c[j];
                    if b.is_zero() {
                        continue;
                    }
                    let k = sh.mul_idx[i * nm + j] as usize;
                    c[k] = c[k].add(&a.mul(b));
                }
            }
        }
        Jet { ctx: self.ctx.clone(), prec, c }
    }

    fn derive(&self, v: usize) -> Self {
        let sh = &self.ctx.shape;
        let mut c = vec![F::zero(); sh.len()];
        for &(t, s, f) in &sh.deriv[v] {
            c[t] = self.c[s].mul(&F::from_int(f));
        }
        Jet { ctx: self.ctx.clone(), prec: self.prec - 1, c }
    }

    /// Value of the truncated Taylor polynomial at a displacement from the base point.
    pub fn eval_displaced(&self, dz: &[Complex64]) -> Complex64 {
        let sh = &self.ctx.shape;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..sh.count_upto(self.prec) {
            let mut t = self.c[i].to_c64();
            for (v, &k) in sh.monos[i].iter().enumerate() {
                t *= dz[v].powu(k as u32);
            }
            acc += t;
        }
        acc
    }
}

impl Jet<Complex64> {
    pub fn exp(&self) -> Self {
        let x = self.nonconstant();
        let e0 = self.c[0].exp();
        let mut term = Self::constant_f(&self.ctx, Complex64::new(1.0, 0.0)).with_precision(self.prec);
        let mut acc = term.clone();
        for k in 1..=self.ctx.shape.order.max(1) {
            term = term.mul_impl(&x).scale_f(&Complex64::new(1.0 / k as f64, 0.0));
            acc = acc.add(&term);
        }
        acc.scale_f(&e0)
    }

    pub fn ln(&self) -> Result<Self, RingError> {
        let a0 = self.c[0];
        if a0 == Complex64::new(0.0, 0.0) {
            return Err(RingError::DivisionByZero);
        }
        let x = self.nonconstant().scale_f(&(1.0 / a0));
        let mut pw = x.clone();
        let mut acc = Self::constant_f(&self.ctx, a0.ln()).with_precision(self.prec);
        for k in 1..=self.ctx.shape.order.max(1) {
            let s = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            acc = acc.add(&pw.scale_f(&Complex64::new(s, 0.0)));
            pw = pw.mul_impl(&x);
        }
        Ok(acc)
    }

    pub fn powf(&self, e: f64) -> Result<Self, RingError> {
        Ok(self.ln()?.scale_f(&Complex64::new(e, 0.0)).exp())
    }
}

impl<F: CoeffField> ScalarRing for Jet<F> {
    type Ctx = JetCtx<F>;

    fn ctx(&self) -> JetCtx<F> {
        self.ctx.clone()
    }
    fn zero(ctx: &JetCtx<F>) -> Self {
        Self::constant_f(ctx, F::zero())
    }
    fn constant(ctx: &JetCtx<F>, c: &GaussRational) -> Self {
        Self::constant_f(ctx, F::from_gauss(c))
    }
    fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let k = self.ctx.shape.count_upto(prec);
        let mut c = vec![F::zero(); self.c.len()];
        for i in 0..k {
            c[i] = self.c[i].add(&o.c[i]);
        }
        Jet { ctx: self.ctx.clone(), prec, c }
    }
    fn sub(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let k = self.ctx.shape.count_upto(prec);
        let mut c = vec![F::zero(); self.c.len()];
        for i in 0..k {
            c[i] = self.c[i].sub(&o.c[i]);
        }
        Jet { ctx: self.ctx.clone(), prec, c }
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_impl(o)
    }
    fn neg(&self) -> Self {
        let k = self.ctx.shape.count_upto(self.prec);
        let mut c = vec![F::zero(); self.c.len()];
        for i in 0..k {
            c[i] = self.c[i].neg();
        }
        Jet { ctx: self.ctx.clone(), prec: self.prec, c }
    }
    fn inv(&self) -> Result<Self, RingError> {
        if self.prec < 0 {
            return Err(RingError::Unsupported("inverse of an undetermined jet"));
        }
        let b0 = self.c[0].inv()?;
        let x = self.nonconstant().scale_f(&b0);
        // 1/(1+x) = 1 - x(1 - x(1 - ...))
        let one = Self::constant_f(&self.ctx, F::one());
        let mut s = one.clone();
        for _ in 0..self.prec.max(0) {
            s = one.sub(&x.mul_impl(&s));
        }
        Ok(s.with_precision(self.prec).scale_f(&b0))
    }
    fn conj(&self) -> Self {
        let sh = &self.ctx.shape;
        let mut c = vec![F::zero(); self.c.len()];
        for (i, &j) in sh.conj_perm.iter().enumerate() {
            c[j] = self.c[i].conj();
        }
        Jet { ctx: self.ctx.clone(), prec: self.prec, c }
    }
    fn d_z(&self, j: usize) -> Self {
        self.derive(j)
    }
    fn d_zbar(&self, j: usize) -> Self {
        self.derive(self.ctx.n + j)
    }
    fn is_zero(&self) -> bool {
        let k = self.ctx.shape.count_upto(self.prec);
        self.c[..k].iter().all(|x| x.is_zero())
    }
    fn is_determined(&self) -> bool {
        self.prec >= 0
    }
    fn value(&self) -> Option<Complex64> {
        if self.prec < 0 {
            None
        } else {
            Some(self.c[0].to_c64())
        }
    }
    fn scale(&self, c: &GaussRational) -> Self {
        self.scale_f(&F::from_gauss(c))
    }
}

impl<F: CoeffField> fmt::Debug for Jet<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet[prec={}](", self.prec)?;
        let sh = &self.ctx.shape;
        let mut first = true;
        for i in 0..sh.count_upto(self.prec) {
            if self.c[i].is_zero() {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{:?}:{:?}", sh.monos[i], self.c[i])?;
        }
        write!(f, ")")
    }
}

impl<F: CoeffField> PartialEq for Jet<F> {
    fn eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}
