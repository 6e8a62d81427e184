use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

use super::expr::{ExprError, FormExpr, OperatorExpr, Prim, TwistMap};
use crate::exterior::{del_star, delbar_star, Form, FormError, HermitianMetric, MultiIndexPair, TwistedInner};
use crate::scalar::{GaussRational, RingError, ScalarRing};

/// Deliberate single-sign defects, used to show that the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    FlipDelStar,
    FlipDelbarStar,
    FlipDelbar,
    FlipLambda,
    FlipLefschetz,
    FlipOmega,
    FlipWedgeAdjoint,
    FlipThetaExponent,
    FlipConjugationSign,
    FlipGradedBracket,
    FlipTwistNegation,
    FlipTag(&'static str),
}

impl Mutation {
    pub fn name(&self) -> String {
        match self {
            Mutation::FlipTag(t) => format!("FlipTag({t})"),
            m => format!("{m:?}"),
        }
    }

    /// Looks a catalogue entry up by its [`Mutation::name`].
    pub fn parse(name: &str) -> Option<Mutation> {
        Self::catalogue().into_iter().find(|m| m.name() == name)
    }

    pub fn catalogue() -> Vec<Mutation> {
        vec![
            Mutation::FlipDelStar,
            Mutation::FlipDelbarStar,
            Mutation::FlipDelbar,
            Mutation::FlipLambda,
            Mutation::FlipLefschetz,
            Mutation::FlipOmega,
            Mutation::FlipWedgeAdjoint,
            Mutation::FlipThetaExponent,
            Mutation::FlipConjugationSign,
            Mutation::FlipGradedBracket,
            Mutation::FlipTwistNegation,
            Mutation::FlipTag("tau_eta.closed.dbar_eta"),
            Mutation::FlipTag("D_eta.p_term"),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("expression needs a twist function but none was supplied")]
    MissingTwist,
    #[error("auxiliary function {0} was not supplied")]
    MissingAux(usize),
}

/// Everything an expression can refer to: metric, twist function, auxiliary functions.
pub struct EvalContext<R: ScalarRing> {
    pub n: usize,
    pub ctx: R::Ctx,
    pub metric: Rc<HermitianMetric<R>>,
    pub eta: Option<R>,
    pub aux: Vec<R>,
    pub mutation: Option<Mutation>,
    form_cache: RefCell<HashMap<String, Form<R>>>,
    eta_pows: RefCell<HashMap<i32, R>>,
    negated: OnceCell<Rc<EvalContext<R>>>,
    reciprocal: OnceCell<Rc<EvalContext<R>>>,
}

impl<R: ScalarRing> EvalContext<R> {
    pub fn new(metric: Rc<HermitianMetric<R>>, eta: Option<R>, aux: Vec<R>) -> Self {
        EvalContext {
            n: metric.n,
            ctx: metric.ctx.clone(),
            metric,
            eta,
            aux,
            mutation: None,
            form_cache: RefCell::new(HashMap::new()),
            eta_pows: RefCell::new(HashMap::new()),
            negated: OnceCell::new(),
            reciprocal: OnceCell::new(),
        }
    }

    pub fn with_mutation(mut self, m: Option<Mutation>) -> Self {
        self.mutation = m;
        self
    }

    fn mutated(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }

    fn eta(&self) -> Result<&R, EvalError> {
        self.eta.as_ref().ok_or(EvalError::MissingTwist)
    }

    pub fn eta_pow(&self, k: i32) -> Result<R, EvalError> {
        if let Some(v) = self.eta_pows.borrow().get(&k) {
            return Ok(v.clone());
        }
        let v = self.eta()?.pow(k)?;
        self.eta_pows.borrow_mut().insert(k, v.clone());
        Ok(v)
    }

    fn child(&self, t: TwistMap) -> Result<Rc<EvalContext<R>>, EvalError> {
        let cell = match t {
            TwistMap::Negate => &self.negated,
            TwistMap::Reciprocal => &self.reciprocal,
        };
        if let Some(c) = cell.get() {
            return Ok(c.clone());
        }
        let eta = self.eta()?;
        let new_eta = match t {
            TwistMap::Negate if self.mutated(Mutation::FlipTwistNegation) => eta.clone(),
            TwistMap::Negate => eta.neg(),
            TwistMap::Reciprocal => eta.inv()?,
        };
        let c = Rc::new(
            EvalContext::new(self.metric.clone(), Some(new_eta), self.aux.clone()).with_mutation(self.mutation),
        );
        let _ = cell.set(c.clone());
        Ok(c)
    }

    pub fn eval_form(&self, f: &FormExpr) -> Result<Form<R>, EvalError> {
        let key = format!("{f:?}");
        if let Some(v) = self.form_cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let n = self.n;
        let v = match f {
            FormExpr::One => Form::one(n, &self.ctx),
            FormExpr::Eta => Form::scalar(n, self.eta()?.clone()),
            FormExpr::EtaPow(k) => Form::scalar(n, self.eta_pow(*k)?),
            FormExpr::Omega => {
                let w = self.metric.omega();
                if self.mutated(Mutation::FlipOmega) {
                    w.neg()
                } else {
                    w
                }
            }
            FormExpr::Aux(k) => Form::scalar(n, self.aux.get(*k).cloned().ok_or(EvalError::MissingAux(*k))?),
            FormExpr::Const(c) => Form::scalar(n, R::constant(&self.ctx, c)),
            FormExpr::Apply(op, a) => {
                let x = self.eval_form(a)?;
                self.apply(op, &x)?
            }
            FormExpr::Wedge(a, b) => self.eval_form(a)?.wedge(&self.eval_form(b)?),
            FormExpr::Sum(ts) => {
                let mut acc = Form::zero(n, &self.ctx);
                for (c, t) in ts {
                    acc = acc.add(&self.eval_form(t)?.scale(c));
                }
                acc
            }
            FormExpr::Conj(a) => self.conj_form(&self.eval_form(a)?),
            FormExpr::Inv(a) => {
                let x = self.eval_form(a)?;
                Form::scalar(n, x.as_function().inv()?)
            }
        };
        self.form_cache.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    fn conj_form(&self, u: &Form<R>) -> Form<R> {
        if self.mutated(Mutation::FlipConjugationSign) {
            let mut r = Form::zero(u.n, &u.ctx);
            for (k, v) in &u.comps {
                r.add_to(MultiIndexPair::new(k.j, k.i), v.conj());
            }
            r
        } else {
            u.conj()
        }
    }

    fn by_bidegree(
        &self,
        u: &Form<R>,
        f: impl Fn(usize, usize, &Form<R>) -> Result<Form<R>, EvalError>,
    ) -> Result<Form<R>, EvalError> {
        let mut acc = Form::zero(self.n, &self.ctx);
        for (p, q) in u.bidegrees() {
            acc = acc.add(&f(p, q, &u.project(p, q))?);
        }
        Ok(acc)
    }

    /// Applies an operator expression to a form.
    pub fn apply(&self, e: &OperatorExpr, u: &Form<R>) -> Result<Form<R>, EvalError> {
        use OperatorExpr as E;
        let n = self.n;
        Ok(match e {
            E::Zero => Form::zero(n, &self.ctx),
            E::Identity => u.clone(),
            E::Prim(p) => self.apply_prim(*p, u)?,
            E::Wedge(a) => self.eval_form(a)?.wedge(u),
            E::WedgeAdjoint(a) => {
                let r = self.metric.wedge_adjoint(&self.eval_form(a)?, u);
                if self.mutated(Mutation::FlipWedgeAdjoint) {
                    r.neg()
                } else {
                    r
                }
            }
            E::Scalar(c) => u.scale(c),
            E::Deg(s) => {
                let mut r = u.clone();
                for (k, v) in r.comps.iter_mut() {
                    *v = v.scale(&s.eval(k.p(), k.q(), n));
                }
                r
            }
            E::EtaPow { a, b } => {
                let flip = if self.mutated(Mutation::FlipThetaExponent) { -1 } else { 1 };
                let mut r = u.clone();
                for (k, v) in r.comps.iter_mut() {
                    let e = flip * (a * k.p() as i32 + b * k.q() as i32);
                    if e != 0 {
                        *v = v.mul(&self.eta_pow(e)?);
                    }
                }
                r
            }
            E::Compose(v) => {
                let mut x = u.clone();
                for op in v.iter().rev() {
                    x = self.apply(op, &x)?;
                }
                x
            }
            E::Sum(ts) => {
                let mut acc = Form::zero(n, &self.ctx);
                for (c, t) in ts {
                    acc = acc.add(&self.apply(t, u)?.scale(c));
                }
                acc
            }
            E::Bracket(a, b) => {
                let da = a.degree()?;
                let db = b.degree()?;
                let odd = matches!((da, db), (Some(x), Some(y)) if (x * y).rem_euclid(2) == 1);
                let ab = self.apply(a, &self.apply(b, u)?)?;
                let ba = self.apply(b, &self.apply(a, u)?)?;
                if odd && !self.mutated(Mutation::FlipGradedBracket) {
                    ab.add(&ba)
                } else {
                    ab.sub(&ba)
                }
            }
            E::Conj(a) => self.conj_form(&self.apply(a, &self.conj_form(u))?),
            E::Adjoint(a) => self.apply(&a.adjoint()?, u)?,
            E::Twist(t, a) => self.child(*t)?.apply(a, u)?,
            E::ByBidegree(b) => self.by_bidegree(u, |p, q, part| self.apply(&(b.f)(p, q, n), part))?,
            E::ByBidegreeAdjoint(b) => {
                let mut acc = Form::zero(n, &self.ctx);
                for p in 0..=n {
                    for q in 0..=n {
                        let op = (b.f)(p, q, n).adjoint()?;
                        acc = acc.add(&self.apply(&op, u)?.project(p, q));
                    }
                }
                acc
            }
            E::Project(p, q) => u.project(*p, *q),
            E::Tag(name, a) => {
                let r = self.apply(a, u)?;
                if self.mutation == Some(Mutation::FlipTag(name)) {
                    r.neg()
                } else {
                    r
                }
            }
        })
    }

    fn apply_prim(&self, p: Prim, u: &Form<R>) -> Result<Form<R>, EvalError> {
        let m = &*self.metric;
        let flip = |f: Form<R>, mu: Mutation| if self.mutated(mu) { f.neg() } else { f };
        Ok(match p {
            Prim::Del => u.del(),
            Prim::Delbar => flip(u.delbar(), Mutation::FlipDelbar),
            Prim::DelStar => flip(del_star(m, u)?, Mutation::FlipDelStar),
            Prim::DelbarStar => flip(delbar_star(m, u)?, Mutation::FlipDelbarStar),
            Prim::DelStarTwisted => {
                let t = TwistedInner::new(m, self.eta()?)?;
                flip(del_star(&t, u)?, Mutation::FlipDelStar)
            }
            Prim::DelbarStarTwisted => {
                let t = TwistedInner::new(m, self.eta()?)?;
                flip(delbar_star(&t, u)?, Mutation::FlipDelbarStar)
            }
            Prim::Lefschetz => flip(m.lefschetz(u), Mutation::FlipLefschetz),
            Prim::Lambda => flip(m.lambda(u), Mutation::FlipLambda),
        })
    }

    pub fn constant(&self, c: &GaussRational) -> R {
        R::constant(&self.ctx, c)
    }
}
