use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::scalar::GaussRational;

/// Affine form a·p + b·q + c·n + d in the bidegree (p, q) and chart dimension n.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Affine {
    pub p: i64,
    pub q: i64,
    pub n: i64,
    pub c: i64,
}

impl Affine {
    pub fn eval(&self, p: usize, q: usize, n: usize) -> i64 {
        self.p * p as i64 + self.q * q as i64 + self.n * n as i64 + self.c
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (k, name) in [(self.p, "p"), (self.q, "q"), (self.n, "n")] {
            if k == 0 {
                continue;
            }
            let sign = if k < 0 { "-" } else if s.is_empty() { "" } else { "+" };
            let mag = k.abs();
            if mag == 1 {
                s.push_str(&format!("{sign}{name}"));
            } else {
                s.push_str(&format!("{sign}{mag}{name}"));
            }
        }
        if self.c != 0 || s.is_empty() {
            if self.c >= 0 && !s.is_empty() {
                s.push('+');
            }
            s.push_str(&self.c.to_string());
        }
        write!(f, "{s}")
    }
}

/// Degree-dependent scalar: a rational constant times a product of affine forms,
/// evaluated on the bidegree of each component it acts on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DegreeScalar {
    pub num: i64,
    pub den: i64,
    pub factors: Vec<Affine>,
}

impl DegreeScalar {
    pub fn affine(p: i64, q: i64, n: i64, c: i64) -> Self {
        DegreeScalar { num: 1, den: 1, factors: vec![Affine { p, q, n, c }] }
    }
    pub fn p() -> Self {
        Self::affine(1, 0, 0, 0)
    }
    pub fn q() -> Self {
        Self::affine(0, 1, 0, 0)
    }
    /// Total degree p + q.
    pub fn k() -> Self {
        Self::affine(1, 1, 0, 0)
    }
    pub fn times(mut self, o: DegreeScalar) -> Self {
        self.num *= o.num;
        self.den *= o.den;
        self.factors.extend(o.factors);
        self
    }
    pub fn scaled(mut self, num: i64, den: i64) -> Self {
        self.num *= num;
        self.den *= den;
        self
    }
    pub fn eval(&self, p: usize, q: usize, n: usize) -> GaussRational {
        let mut v = self.num;
        for a in &self.factors {
            v *= a.eval(p, q, n);
        }
        GaussRational::from_frac(v, self.den)
    }
}

impl fmt::Display for DegreeScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.num != 1 || self.den != 1 || self.factors.is_empty() {
            if self.den == 1 {
                parts.push(self.num.to_string());
            } else {
                parts.push(format!("{}/{}", self.num, self.den));
            }
        }
        for a in &self.factors {
            parts.push(format!("({a})"));
        }
        write!(f, "{}", parts.join(""))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prim {
    Del,
    Delbar,
    DelStar,
    DelbarStar,
    /// Adjoints for the twisted product η^{2p}⟨·,·⟩ with volume η^{-2n}dV.
    DelStarTwisted,
    DelbarStarTwisted,
    Lefschetz,
    Lambda,
}

impl Prim {
    pub fn degree(&self) -> i32 {
        match self {
            Prim::Del | Prim::Delbar => 1,
            Prim::DelStar | Prim::DelbarStar | Prim::DelStarTwisted | Prim::DelbarStarTwisted => -1,
            Prim::Lefschetz => 2,
            Prim::Lambda => -2,
        }
    }
    fn name(&self) -> &'static str {
        match self {
            Prim::Del => "∂",
            Prim::Delbar => "∂̄",
            Prim::DelStar => "∂*",
            Prim::DelbarStar => "∂̄*",
            Prim::DelStarTwisted => "∂*_{ω_η}",
            Prim::DelbarStarTwisted => "∂̄*_{ω_η}",
            Prim::Lefschetz => "L",
            Prim::Lambda => "Λ",
        }
    }
}

/// Substitution applied to the twist function inside a subexpression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwistMap {
    Negate,
    Reciprocal,
}

/// Family of operators indexed by the bidegree of the input.
#[derive(Clone)]
pub struct ByBidegree {
    pub label: String,
    pub degree: i32,
    pub f: Arc<dyn Fn(usize, usize, usize) -> OperatorExpr + Send + Sync>,
}

#[derive(Clone)]
pub enum OperatorExpr {
    Zero,
    Identity,
    Prim(Prim),
    Wedge(FormExpr),
    WedgeAdjoint(FormExpr),
    Scalar(GaussRational),
    Deg(DegreeScalar),
    /// Multiplication of (p,q)-components by η^{a p + b q}.
    EtaPow { a: i32, b: i32 },
    Compose(Vec<OperatorExpr>),
    Sum(Vec<(GaussRational, OperatorExpr)>),
    Bracket(Box<OperatorExpr>, Box<OperatorExpr>),
    Conj(Box<OperatorExpr>),
    Adjoint(Box<OperatorExpr>),
    Twist(TwistMap, Box<OperatorExpr>),
    ByBidegree(ByBidegree),
    ByBidegreeAdjoint(ByBidegree),
    Project(usize, usize),
    Tag(&'static str, Box<OperatorExpr>),
}

#[derive(Clone)]
pub enum FormExpr {
    One,
    Eta,
    Omega,
    Aux(usize),
    Const(GaussRational),
    EtaPow(i32),
    Apply(Box<OperatorExpr>, Box<FormExpr>),
    Wedge(Box<FormExpr>, Box<FormExpr>),
    Sum(Vec<(GaussRational, FormExpr)>),
    Conj(Box<FormExpr>),
    /// Reciprocal of a function.
    Inv(Box<FormExpr>),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("unsupported expression node: {0}")]
    Unsupported(String),
    #[error("inconsistent degrees in {0}")]
    Degree(String),
}

impl FormExpr {
    pub fn degree(&self) -> Result<i32, ExprError> {
        Ok(match self {
            FormExpr::One | FormExpr::Eta | FormExpr::Aux(_) | FormExpr::Const(_) | FormExpr::EtaPow(_) => 0,
            FormExpr::Omega => 2,
            FormExpr::Apply(op, f) => op.degree()?.unwrap_or(0) + f.degree()?,
            FormExpr::Wedge(a, b) => a.degree()? + b.degree()?,
            FormExpr::Sum(ts) => {
                let mut d = None;
                for (_, t) in ts {
                    let e = t.degree()?;
                    if d.is_some() && d != Some(e) {
                        return Err(ExprError::Degree(format!("{self}")));
                    }
                    d = Some(e);
                }
                d.unwrap_or(0)
            }
            FormExpr::Conj(a) | FormExpr::Inv(a) => a.degree()?,
        })
    }
}

impl OperatorExpr {
    /// Total-degree shift; `None` for the zero operator, which has every degree.
    pub fn degree(&self) -> Result<Option<i32>, ExprError> {
        use OperatorExpr::*;
        Ok(match self {
            Zero => None,
            Identity | Scalar(_) | Deg(_) | EtaPow { .. } | Project(..) => Some(0),
            Prim(p) => Some(p.degree()),
            Wedge(f) => Some(f.degree()?),
            WedgeAdjoint(f) => Some(-f.degree()?),
            Compose(v) => {
                let mut t = 0;
                for e in v {
                    match e.degree()? {
                        None => return Ok(None),
                        Some(d) => t += d,
                    }
                }
                Some(t)
            }
            Sum(v) => {
                let mut d = None;
                for (_, e) in v {
                    if let Some(x) = e.degree()? {
                        if d.is_some() && d != Some(x) {
                            return Err(ExprError::Degree(format!("{self}")));
                        }
                        d = Some(x);
                    }
                }
                d
            }
            Bracket(a, b) => match (a.degree()?, b.degree()?) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            },
            Conj(a) | Twist(_, a) | Tag(_, a) => a.degree()?,
            Adjoint(a) => a.degree()?.map(|d| -d),
            ByBidegree(b) => Some(b.degree),
            ByBidegreeAdjoint(b) => Some(-b.degree),
        })
    }

    /// Formal adjoint for the untwisted L^2 product of the metric.
    pub fn adjoint(&self) -> Result<OperatorExpr, ExprError> {
        use OperatorExpr::*;
        Ok(match self {
            Zero => Zero,
            Identity => Identity,
            Prim(p) => match p {
                self::Prim::Del => Prim(self::Prim::DelStar),
                self::Prim::Delbar => Prim(self::Prim::DelbarStar),
                self::Prim::DelStar => Prim(self::Prim::Del),
                self::Prim::DelbarStar => Prim(self::Prim::Delbar),
                self::Prim::Lefschetz => Prim(self::Prim::Lambda),
                self::Prim::Lambda => Prim(self::Prim::Lefschetz),
                self::Prim::DelStarTwisted | self::Prim::DelbarStarTwisted => {
                    return Err(ExprError::Unsupported(format!(
                        "adjoint of {} for the untwisted product",
                        p.name()
                    )))
                }
            },
            Wedge(f) => WedgeAdjoint(f.clone()),
            WedgeAdjoint(f) => Wedge(f.clone()),
            Scalar(c) => Scalar(c.conj()),
            Deg(s) => Deg(s.clone()),
            EtaPow { a, b } => EtaPow { a: *a, b: *b },
            Compose(v) => Compose(v.iter().rev().map(|e| e.adjoint()).collect::<Result<_, _>>()?),
            Sum(v) => Sum(v.iter().map(|(c, e)| Ok((c.conj(), e.adjoint()?))).collect::<Result<_, ExprError>>()?),
            Bracket(a, b) => Bracket(Box::new(b.adjoint()?), Box::new(a.adjoint()?)),
            Conj(a) => Conj(Box::new(a.adjoint()?)),
            Adjoint(a) => (**a).clone(),
            Twist(t, a) => Twist(*t, Box::new(a.adjoint()?)),
            ByBidegree(b) => ByBidegreeAdjoint(b.clone()),
            ByBidegreeAdjoint(b) => ByBidegree(b.clone()),
            Project(p, q) => Project(*p, *q),
            Tag(n, a) => Tag(n, Box::new(a.adjoint()?)),
        })
    }

    pub fn bracket(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr {
        OperatorExpr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn conj_of(self) -> OperatorExpr {
        OperatorExpr::Conj(Box::new(self))
    }

    pub fn adjoint_of(self) -> OperatorExpr {
        OperatorExpr::Adjoint(Box::new(self))
    }

    pub fn twisted(self, t: TwistMap) -> OperatorExpr {
        OperatorExpr::Twist(t, Box::new(self))
    }

    pub fn tagged(self, name: &'static str) -> OperatorExpr {
        OperatorExpr::Tag(name, Box::new(self))
    }

    pub fn scaled(self, c: GaussRational) -> OperatorExpr {
        OperatorExpr::Sum(vec![(c, self)])
    }

    pub fn by_bidegree(
        label: &str,
        degree: i32,
        f: impl Fn(usize, usize, usize) -> OperatorExpr + Send + Sync + 'static,
    ) -> OperatorExpr {
        OperatorExpr::ByBidegree(ByBidegree { label: label.to_string(), degree, f: Arc::new(f) })
    }

    /// Number of nodes, used in reports.
    pub fn size(&self) -> usize {
        use OperatorExpr::*;
        1 + match self {
            Compose(v) => v.iter().map(|e| e.size()).sum(),
            Sum(v) => v.iter().map(|(_, e)| e.size()).sum(),
            Bracket(a, b) => a.size() + b.size(),
            Conj(a) | Adjoint(a) | Twist(_, a) | Tag(_, a) => a.size(),
            _ => 0,
        }
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, o: OperatorExpr) -> OperatorExpr {
        let one = GaussRational::one();
        let mut terms = match self {
            OperatorExpr::Sum(v) => v,
            e => vec![(one.clone(), e)],
        };
        match o {
            OperatorExpr::Sum(v) => terms.extend(v),
            e => terms.push((one, e)),
        }
        OperatorExpr::Sum(terms)
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        match self {
            OperatorExpr::Sum(v) => OperatorExpr::Sum(v.into_iter().map(|(c, e)| (c.neg(), e)).collect()),
            e => OperatorExpr::Sum(vec![(GaussRational::from_int(-1), e)]),
        }
    }
}

impl Sub for OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, o: OperatorExpr) -> OperatorExpr {
        self + (-o)
    }
}

/// Composition: `(a * b)(u) = a(b(u))`.
impl Mul for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, o: OperatorExpr) -> OperatorExpr {
        let mut v = match self {
            OperatorExpr::Compose(v) => v,
            e => vec![e],
        };
        match o {
            OperatorExpr::Compose(w) => v.extend(w),
            e => v.push(e),
        }
        OperatorExpr::Compose(v)
    }
}

impl Mul<OperatorExpr> for GaussRational {
    type Output = OperatorExpr;
    fn mul(self, o: OperatorExpr) -> OperatorExpr {
        o.scaled(self)
    }
}

impl Add for FormExpr {
    type Output = FormExpr;
    fn add(self, o: FormExpr) -> FormExpr {
        let one = GaussRational::one();
        let mut terms = match self {
            FormExpr::Sum(v) => v,
            e => vec![(one.clone(), e)],
        };
        match o {
            FormExpr::Sum(v) => terms.extend(v),
            e => terms.push((one, e)),
        }
        FormExpr::Sum(terms)
    }
}

impl Neg for FormExpr {
    type Output = FormExpr;
    fn neg(self) -> FormExpr {
        FormExpr::Sum(vec![(GaussRational::from_int(-1), self)])
    }
}

impl Sub for FormExpr {
    type Output = FormExpr;
    fn sub(self, o: FormExpr) -> FormExpr {
        self + (-o)
    }
}

/// Wedge product of form expressions.
impl Mul for FormExpr {
    type Output = FormExpr;
    fn mul(self, o: FormExpr) -> FormExpr {
        FormExpr::Wedge(Box::new(self), Box::new(o))
    }
}

impl Mul<FormExpr> for GaussRational {
    type Output = FormExpr;
    fn mul(self, o: FormExpr) -> FormExpr {
        FormExpr::Sum(vec![(self, o)])
    }
}

fn coef_prefix(c: &GaussRational) -> String {
    if c.is_one() {
        String::new()
    } else if c.neg().is_one() {
        "-".to_string()
    } else {
        format!("({c})·")
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormExpr::One => write!(f, "1"),
            FormExpr::Eta => write!(f, "η"),
            FormExpr::Omega => write!(f, "ω"),
            FormExpr::Aux(k) => write!(f, "ρ{k}"),
            FormExpr::Const(c) => write!(f, "{c}"),
            FormExpr::EtaPow(k) => write!(f, "η^{k}"),
            FormExpr::Apply(op, a) => write!(f, "{op}({a})"),
            FormExpr::Wedge(a, b) => write!(f, "{a}∧{b}"),
            FormExpr::Sum(ts) => {
                write!(f, "(")?;
                for (i, (c, t)) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{}{}", coef_prefix(c), t)?;
                }
                write!(f, ")")
            }
            FormExpr::Conj(a) => write!(f, "conj({a})"),
            FormExpr::Inv(a) => write!(f, "1/({a})"),
        }
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use OperatorExpr::*;
        match self {
            Zero => write!(f, "0"),
            Identity => write!(f, "Id"),
            Prim(p) => write!(f, "{}", p.name()),
            Wedge(a) => write!(f, "{a}∧·"),
            WedgeAdjoint(a) => write!(f, "({a}∧·)*"),
            Scalar(c) => write!(f, "{c}"),
            Deg(s) => write!(f, "{s}"),
            EtaPow { a, b } => match (a, b) {
                (1, 0) => write!(f, "θ_η"),
                (-1, 0) => write!(f, "θ_η^{{-1}}"),
                (0, 1) => write!(f, "θ̄_η"),
                _ => write!(f, "η^({a}p+{b}q)"),
            },
            Compose(v) => {
                let parts: Vec<String> = v.iter().map(|e| format!("{e}")).collect();
                write!(f, "{}", parts.join("∘"))
            }
            Sum(ts) => {
                write!(f, "(")?;
                for (i, (c, t)) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{}{}", coef_prefix(c), t)?;
                }
                write!(f, ")")
            }
            Bracket(a, b) => write!(f, "[{a}, {b}]"),
            Conj(a) => write!(f, "conj({a})"),
            Adjoint(a) => write!(f, "({a})*"),
            Twist(TwistMap::Negate, a) => write!(f, "{{η→-η}}{a}"),
            Twist(TwistMap::Reciprocal, a) => write!(f, "{{η→1/η}}{a}"),
            ByBidegree(b) => write!(f, "{}", b.label),
            ByBidegreeAdjoint(b) => write!(f, "({})*", b.label),
            Project(p, q) => write!(f, "π^{{{p},{q}}}"),
            Tag(n, a) => write!(f, "{a}⟨{n}⟩"),
        }
    }
}

impl fmt::Debug for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Debug for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
