//! Random problem instances (metric, twist function, auxiliary functions, base
//! point) and their realisation as Taylor jets.

use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::exterior::random::{map_form, Sampler};
use crate::exterior::{Form, HermitianMetric};
use crate::operators::{EvalContext, EvalError, Mutation};
use crate::scalar::{CoeffField, GaussRational, Jet, JetCtx, Poly, RationalFunction, ScalarRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Flat,
    Generic,
    /// The metric γ_η built from the twist function itself.
    GammaEta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistKind {
    None,
    Constant,
    Generic,
}

/// One random test situation, stored with rational-function data so that it
/// can be realised at any jet order.
#[derive(Clone, Debug)]
pub struct Instance {
    pub n: usize,
    pub metric_kind: MetricKind,
    pub metric: Vec<Vec<RationalFunction>>,
    pub eta: Option<RationalFunction>,
    pub aux: Vec<RationalFunction>,
    pub base: Vec<GaussRational>,
}

const CONSTANT_TWISTS: [(i64, i64); 6] = [(1, 3), (1, 2), (2, 1), (3, 1), (3, 2), (2, 3)];

impl Instance {
    /// Draws an instance. Auxiliary functions are real.
    pub fn sample(n: usize, metric: MetricKind, twist: TwistKind, n_aux: usize, s: &mut Sampler) -> Instance {
        let eta = match (metric, twist) {
            (MetricKind::GammaEta, _) => Some(psh_twist(n, s)),
            (_, TwistKind::None) => None,
            (_, TwistKind::Constant) => {
                let (a, b) = CONSTANT_TWISTS[(s.next_u64() % CONSTANT_TWISTS.len() as u64) as usize];
                Some(RationalFunction::from_poly(n, Poly::constant(2 * n, GaussRational::from_frac(a, b))))
            }
            (_, TwistKind::Generic) => Some(s.real_function(2)),
        };
        let g = match metric {
            MetricKind::Flat => identity(n),
            MetricKind::Generic => s.metric_matrix(),
            MetricKind::GammaEta => gamma_matrix(n, eta.as_ref().expect("twist drawn above")),
        };
        let aux = (0..n_aux).map(|_| s.real_function(1)).collect();
        let base = s.base_point();
        Instance { n, metric_kind: metric, metric: g, eta, aux, base }
    }

    /// Jet context and coordinate jets (z_1..z_n, zbar_1..zbar_n).
    pub fn jet_vars<F: CoeffField>(&self, order: usize) -> (JetCtx<F>, Vec<Jet<F>>) {
        let z0: Vec<F> = self.base.iter().map(F::from_gauss).collect();
        let ctx = JetCtx::new(&z0, order);
        let mut vars: Vec<Jet<F>> = (0..self.n).map(|j| Jet::coordinate(&ctx, j, false)).collect();
        vars.extend((0..self.n).map(|j| Jet::coordinate(&ctx, j, true)));
        (ctx, vars)
    }

    pub fn realize<F: CoeffField>(
        &self,
        order: usize,
        mutation: Option<Mutation>,
    ) -> Result<Realized<F>, EvalError> {
        let (ctx, vars) = self.jet_vars::<F>(order);
        let map = |f: &RationalFunction| f.map_into(&ctx, &vars);
        let g = self
            .metric
            .iter()
            .map(|r| r.iter().map(map).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let metric = Rc::new(HermitianMetric::new(g)?);
        let eta = self.eta.as_ref().map(map).transpose()?;
        let aux = self.aux.iter().map(map).collect::<Result<Vec<_>, _>>()?;
        let ectx = EvalContext::new(metric, eta, aux).with_mutation(mutation);
        Ok(Realized { ctx, vars, eval: ectx })
    }
}

pub struct Realized<F: CoeffField> {
    pub ctx: JetCtx<F>,
    pub vars: Vec<Jet<F>>,
    pub eval: EvalContext<Jet<F>>,
}

impl<F: CoeffField> Realized<F> {
    pub fn form(&self, u: &Form<RationalFunction>) -> Result<Form<Jet<F>>, EvalError> {
        Ok(map_form(u, &self.ctx, &self.vars)?)
    }
}

fn identity(n: usize) -> Vec<Vec<RationalFunction>> {
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let c = if a == b { GaussRational::one() } else { GaussRational::zero() };
                    RationalFunction::from_poly(n, Poly::constant(2 * n, c))
                })
                .collect()
        })
        .collect()
}

/// η = 1/(1 + |z|^2 + small real perturbation); then -log η is strictly
/// plurisubharmonic near the origin and γ_η is positive there.
fn psh_twist(n: usize, s: &mut Sampler) -> RationalFunction {
    let mut den = Poly::one(2 * n);
    for j in 0..n {
        let mut e = vec![0u16; 2 * n];
        e[j] = 1;
        e[n + j] = 1;
        den = den.add(&Poly::monomial(e, GaussRational::one()));
    }
    // cubic, so the quadratic part stays |z|^2
    let h = s.poly_mixed_homogeneous(3, 2 + n).scale(&GaussRational::from_frac(1, 16));
    let pert = h.add(&h.conj_swap(n));
    den = den.add(&pert);
    RationalFunction::from_parts(n, Poly::one(2 * n), den).expect("denominator is 1 at the origin")
}

/// g_{jk} = (2/η²) η_j η_kbar - (1/η) η_{jkbar}. With f = 1/η the first-order
/// terms cancel and g_{jk} = f_{jkbar} / f, which keeps the gcd work small.
pub fn gamma_matrix(n: usize, eta: &RationalFunction) -> Vec<Vec<RationalFunction>> {
    let f = eta.inv().expect("twist function is nonzero");
    let inv_f = eta;
    (0..n)
        .map(|j| (0..n).map(|k| f.d_z(j).d_zbar(k).mul(inv_f)).collect())
        .collect()
}
