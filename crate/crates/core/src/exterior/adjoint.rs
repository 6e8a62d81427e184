use super::form::{Form, MultiIndexPair};
use super::metric::{contract, HermitianMetric};
use crate::scalar::{RingError, ScalarRing};

/// Fibrewise Hermitian structure plus a volume density, enough to build
/// formal adjoints of first-order operators by integration by parts.
pub trait FiberInner<R: ScalarRing> {
    fn n(&self) -> usize;
    fn gram(&self, v: &Form<R>) -> Form<R>;
    fn gram_inv(&self, v: &Form<R>) -> Form<R>;
    fn density(&self) -> R;
}

impl<R: ScalarRing> FiberInner<R> for HermitianMetric<R> {
    fn n(&self) -> usize {
        self.n
    }
    fn gram(&self, v: &Form<R>) -> Form<R> {
        HermitianMetric::gram(self, v)
    }
    fn gram_inv(&self, v: &Form<R>) -> Form<R> {
        HermitianMetric::gram_inv(self, v)
    }
    fn density(&self) -> R {
        self.det().clone()
    }
}

/// The product η^{2p}⟨u,v⟩_ω on (p,q)-forms with volume η^{-2n} dV_ω.
pub struct TwistedInner<'a, R: ScalarRing> {
    pub metric: &'a HermitianMetric<R>,
    eta_sq: R,
    eta_sq_inv: R,
    density: R,
}

impl<'a, R: ScalarRing> TwistedInner<'a, R> {
    pub fn new(metric: &'a HermitianMetric<R>, eta: &R) -> Result<Self, RingError> {
        let eta_sq = eta.mul(eta);
        let eta_sq_inv = eta_sq.inv()?;
        let density = metric.det().mul(&eta_sq_inv.pow(metric.n as i32)?);
        Ok(TwistedInner { metric, eta_sq, eta_sq_inv, density })
    }

    fn weigh(&self, v: &Form<R>, w: &R) -> Form<R> {
        let mut out = v.clone();
        for (k, c) in out.comps.iter_mut() {
            for _ in 0..k.p() {
                *c = c.mul(w);
            }
        }
        out
    }

    pub fn inner(&self, u: &Form<R>, v: &Form<R>) -> R {
        self.metric.inner(&self.weigh(u, &self.eta_sq), v)
    }
}

impl<'a, R: ScalarRing> FiberInner<R> for TwistedInner<'a, R> {
    fn n(&self) -> usize {
        self.metric.n
    }
    fn gram(&self, v: &Form<R>) -> Form<R> {
        self.weigh(&self.metric.gram(v), &self.eta_sq)
    }
    fn gram_inv(&self, v: &Form<R>) -> Form<R> {
        self.metric.gram_inv(&self.weigh(v, &self.eta_sq_inv))
    }
    fn density(&self) -> R {
        self.density.clone()
    }
}

fn ibp_adjoint<R: ScalarRing>(fi: &dyn FiberInner<R>, v: &Form<R>, holo: bool) -> Result<Form<R>, RingError> {
    let n = fi.n();
    let rho = fi.density();
    let w = fi.gram(v);
    let mut acc = Form::zero(n, &v.ctx);
    for j in 0..n {
        let e = if holo {
            Form::monomial(n, MultiIndexPair::new(1 << j, 0), R::one(&v.ctx))
        } else {
            Form::monomial(n, MultiIndexPair::new(0, 1 << j), R::one(&v.ctx))
        };
        let y = contract(&e, &w).mul_fn(&rho);
        let dy = y.map(|c| if holo { c.d_zbar(j) } else { c.d_z(j) });
        acc = acc.add(&dy);
    }
    let scale = rho.inv()?.neg();
    Ok(fi.gram_inv(&acc.mul_fn(&scale)))
}

/// Formal adjoint of ∂ with respect to the given fibre product and density.
pub fn del_star<R: ScalarRing>(fi: &dyn FiberInner<R>, v: &Form<R>) -> Result<Form<R>, RingError> {
    ibp_adjoint(fi, v, true)
}

/// Formal adjoint of ∂̄.
pub fn delbar_star<R: ScalarRing>(fi: &dyn FiberInner<R>, v: &Form<R>) -> Result<Form<R>, RingError> {
    ibp_adjoint(fi, v, false)
}

/// ∂* computed as -star ∂ star with the conjugate-linear star.
pub fn del_star_via_hodge<R: ScalarRing>(m: &HermitianMetric<R>, v: &Form<R>) -> Form<R> {
    m.hodge_star(&m.hodge_star(v).del()).neg()
}

pub fn delbar_star_via_hodge<R: ScalarRing>(m: &HermitianMetric<R>, v: &Form<R>) -> Form<R> {
    m.hodge_star(&m.hodge_star(v).delbar()).neg()
}
