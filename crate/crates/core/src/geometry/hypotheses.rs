//! Hypothesis reports for the vanishing statements: sampled verdicts with
//! witnesses, thresholds and eligible bidegrees.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::constants::{estimate_constants, smallest_eigenvalue, RefMetric};
use super::domain::{point_pairs, SampledDomain};
use super::weight::{gamma_at, Potential, Weight};
use super::GeometryError;
use crate::spectral::{assemble_laplacian, operator_spectrum, Grading, InvariantComplex, LaplacianKind, NumericComplex};

type C = Complex64;

/// Default width of the inconclusive band, relative to the threshold.
pub const DEFAULT_MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
    /// Asserted by the user, not checked.
    Declared,
    NotChecked,
}

/// Which vanishing statement a report is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Positive γ_η, complete γ_η, small C_1(η) against a threshold involving C(φ).
    TwistedVanishing,
    /// η = e^{-φ} with the threshold 1/(10n + 12n√n).
    PotentialVanishing,
    /// The family η_ε = e^{-εφ} for small ε.
    EpsilonFamily,
    /// Small C_3 and positive curvature operator F_η.
    CurvatureVanishing,
}

impl CheckKind {
    pub const ALL: [CheckKind; 4] =
        [CheckKind::TwistedVanishing, CheckKind::PotentialVanishing, CheckKind::EpsilonFamily, CheckKind::CurvatureVanishing];

    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::TwistedVanishing => "twisted-vanishing",
            CheckKind::PotentialVanishing => "potential-vanishing",
            CheckKind::EpsilonFamily => "epsilon-family",
            CheckKind::CurvatureVanishing => "curvature-vanishing",
        }
    }

    pub fn parse(s: &str) -> Option<CheckKind> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub statement: String,
    pub verdict: Verdict,
    pub estimate: Option<f64>,
    pub threshold: Option<f64>,
    pub witness: Option<Vec<[f64; 2]>>,
    pub note: Option<String>,
}

impl HypothesisCheck {
    fn new(name: &str, statement: &str, verdict: Verdict) -> HypothesisCheck {
        HypothesisCheck {
            name: name.into(),
            statement: statement.into(),
            verdict,
            estimate: None,
            threshold: None,
            witness: None,
            note: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureModelCheck {
    pub model: String,
    pub eta: f64,
    pub p: usize,
    pub q: usize,
    pub dim: usize,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: Option<f64>,
    /// 2(C_3 + n√n C_1).
    pub threshold: f64,
    pub dbar_omega_norm: f64,
    /// (p-q)(p+q-n).
    pub scalar_reference: f64,
    /// max |F_η - (p-q)(p+q-n) Id| over matrix entries.
    pub max_deviation_from_scalar: f64,
    pub matches_scalar: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub check: CheckKind,
    pub n: usize,
    pub weight: Option<String>,
    pub domain: Option<SampledDomain>,
    pub margin: f64,
    pub constants: Option<super::constants::ConstantsEstimate>,
    pub hypotheses: Vec<HypothesisCheck>,
    pub eligible_bidegrees: Vec<(usize, usize)>,
    /// (0, ε_max]: values of ε for which the threshold holds on the samples.
    pub epsilon_interval: Option<[f64; 2]>,
    pub model_check: Option<CurvatureModelCheck>,
    pub conclusion: String,
}

impl HypothesisReport {
    /// Every hypothesis holds or is declared.
    pub fn all_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| matches!(h.verdict, Verdict::Holds | Verdict::Declared))
    }
}

/// Compares a sampled estimate with an upper threshold.
pub fn compare_below(estimate: f64, threshold: f64, margin: f64) -> Verdict {
    if (estimate - threshold).abs() <= margin * threshold.abs() {
        Verdict::Inconclusive
    } else if estimate < threshold {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

/// (p,q) with 0 ≤ p,q ≤ n and either p > q, p+q ≥ n+1 or p < q, p+q ≤ n-1.
pub fn eligible_bidegrees(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for p in 0..=n {
        // p > q and q ≥ n+1-p
        for q in (n + 1).saturating_sub(p)..p {
            out.push((p, q));
        }
        // q > p and q ≤ n-1-p
        if p + 1 <= n {
            for q in p + 1..=(n - 1).saturating_sub(p) {
                if p + q < n {
                    out.push((p, q));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityResult {
    pub holds: bool,
    pub min_eigenvalue: f64,
    pub index: usize,
    pub margin: f64,
}

/// Smallest eigenvalue over a field of Hermitian matrices; holds iff it exceeds `margin`.
pub fn check_positivity(field: &[DMatrix<C>], margin: f64) -> PositivityResult {
    let (index, min_eigenvalue) = field
        .iter()
        .map(smallest_eigenvalue)
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best });
    PositivityResult { holds: min_eigenvalue > margin, min_eigenvalue, index, margin }
}

fn positivity_check(weight: &Weight, domain: &SampledDomain) -> Result<HypothesisCheck, GeometryError> {
    let field: Vec<_> = domain.points().iter().map(|z| gamma_at(weight, z)).collect::<Result<_, _>>()?;
    let res = check_positivity(&field, 0.0);
    let mut h = HypothesisCheck::new(
        "gamma_positive",
        "γ_η is positive definite at every point",
        if res.holds { Verdict::Holds } else { Verdict::Fails },
    );
    h.estimate = Some(res.min_eigenvalue);
    h.threshold = Some(0.0);
    h.witness = domain.points().get(res.index).map(|z| point_pairs(z));
    h.note = Some("smallest eigenvalue of γ_η over the samples".into());
    Ok(h)
}

fn completeness_check(declared: bool) -> HypothesisCheck {
    let mut h = HypothesisCheck::new(
        "gamma_complete",
        "γ_η is a complete metric",
        if declared { Verdict::Declared } else { Verdict::NotChecked },
    );
    h.note = Some(if declared {
        "declared by the user; completeness is not decidable from samples".into()
    } else {
        "not declared; completeness is not decidable from samples".into()
    });
    h
}

fn threshold_check(name: &str, statement: &str, estimate: f64, threshold: f64, witness: Vec<[f64; 2]>, margin: f64) -> HypothesisCheck {
    let mut h = HypothesisCheck::new(name, statement, compare_below(estimate, threshold, margin));
    h.estimate = Some(estimate);
    h.threshold = Some(threshold);
    h.witness = Some(witness);
    h
}

fn conditional_conclusion(eligible: &[(usize, usize)]) -> String {
    let list: Vec<String> = eligible.iter().map(|(p, q)| format!("({p},{q})")).collect();
    format!(
        "conditional: if every hypothesis holds, L² harmonic forms vanish in bidegrees {}; this report certifies hypotheses only",
        list.join(", ")
    )
}

/// Positivity and completeness of γ_η and C_1(η) < 1/(10n + 4n√n + 8nC(φ)),
/// all norms in γ_η.
pub fn check_twisted_vanishing(weight: &Weight, domain: &SampledDomain, complete: bool, margin: f64) -> Result<HypothesisReport, GeometryError> {
    let n = domain.n;
    let mut hyps = vec![positivity_check(weight, domain)?, completeness_check(complete)];
    let constants = if hyps[0].verdict == Verdict::Holds {
        Some(estimate_constants(weight, RefMetric::Gamma, domain)?)
    } else {
        None
    };
    match &constants {
        Some(c) => {
            let nf = n as f64;
            let t = 1.0 / (10.0 * nf + 4.0 * nf * nf.sqrt() + 8.0 * nf * c.c_phi.value);
            hyps.push(threshold_check(
                "c1_threshold",
                "C_1(η) < 1/(10n + 4n√n + 8nC(φ))",
                c.c1.value,
                t,
                c.c1.point.clone(),
                margin,
            ));
        }
        None => {
            let mut h = HypothesisCheck::new("c1_threshold", "C_1(η) < 1/(10n + 4n√n + 8nC(φ))", Verdict::NotChecked);
            h.note = Some("γ_η is not a metric on the samples, so its norms are undefined".into());
            hyps.push(h);
        }
    }
    let eligible = eligible_bidegrees(n);
    Ok(HypothesisReport {
        check: CheckKind::TwistedVanishing,
        n,
        weight: Some(weight.describe()),
        domain: Some(domain.clone()),
        margin,
        constants,
        hypotheses: hyps,
        conclusion: conditional_conclusion(&eligible),
        eligible_bidegrees: eligible,
        epsilon_interval: None,
        model_check: None,
    })
}

/// Threshold 1/(10n + 12n√n) on sup |∂φ|_{γ} for η = e^{-φ}.
pub fn potential_threshold(n: usize) -> f64 {
    let nf = n as f64;
    1.0 / (10.0 * nf + 12.0 * nf * nf.sqrt())
}

/// η = e^{-εφ} checked against the fixed threshold 1/(10n + 12n√n).
pub fn check_potential_vanishing(
    potential: Potential,
    epsilon: f64,
    domain: &SampledDomain,
    complete: bool,
    margin: f64,
) -> Result<HypothesisReport, GeometryError> {
    let weight = Weight::exp_potential(potential, epsilon);
    let n = domain.n;
    let mut hyps = vec![positivity_check(&weight, domain)?, completeness_check(complete)];
    let constants = if hyps[0].verdict == Verdict::Holds {
        Some(estimate_constants(&weight, RefMetric::Gamma, domain)?)
    } else {
        None
    };
    let statement = "sup |∂φ|_γ < 1/(10n + 12n√n)";
    match &constants {
        Some(c) => hyps.push(threshold_check("c1_threshold", statement, c.c1.value, potential_threshold(n), c.c1.point.clone(), margin)),
        None => hyps.push(HypothesisCheck::new("c1_threshold", statement, Verdict::NotChecked)),
    }
    let eligible = eligible_bidegrees(n);
    Ok(HypothesisReport {
        check: CheckKind::PotentialVanishing,
        n,
        weight: Some(weight.describe()),
        domain: Some(domain.clone()),
        margin,
        constants,
        hypotheses: hyps,
        conclusion: conditional_conclusion(&eligible),
        eligible_bidegrees: eligible,
        epsilon_interval: None,
        model_check: None,
    })
}

/// Largest ε in [1e-12, 1] (by bisection in log ε) for which the sampled
/// C_1(e^{-εφ}) stays below the potential threshold outside the margin band;
/// the interval (0, ε_max] is then spot-checked.
pub fn check_epsilon_family(potential: Potential, domain: &SampledDomain, complete: bool, margin: f64) -> Result<HypothesisReport, GeometryError> {
    let n = domain.n;
    let t = potential_threshold(n);
    let ok = |eps: f64| -> Result<bool, GeometryError> {
        let w = Weight::exp_potential(potential, eps);
        if !positivity_check(&w, domain)?.verdict.eq(&Verdict::Holds) {
            return Ok(false);
        }
        let c = estimate_constants(&w, RefMetric::Gamma, domain)?;
        Ok(compare_below(c.c1.value, t, margin) == Verdict::Holds)
    };
    let (lo, hi) = (1e-12f64, 1.0f64);
    let mut hyps = vec![completeness_check(complete)];
    let epsilon_interval = if !ok(lo)? {
        None
    } else if ok(hi)? {
        Some([0.0, hi])
    } else {
        let (mut a, mut b) = (lo.ln(), hi.ln());
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            if ok(mid.exp())? {
                a = mid;
            } else {
                b = mid;
            }
        }
        Some([0.0, a.exp()])
    };
    let mut h = HypothesisCheck::new(
        "epsilon_interval",
        "C_1(e^{-εφ}) < 1/(10n + 12n√n) for every small ε > 0",
        if epsilon_interval.is_some() { Verdict::Holds } else { Verdict::Fails },
    );
    h.threshold = Some(t);
    if let Some([_, e_max]) = epsilon_interval {
        // spot checks inside the interval
        let mut worst: f64 = 0.0;
        let mut failed = None;
        for k in 0..8 {
            let eps = e_max * 0.5f64.powi(k);
            let w = Weight::exp_potential(potential, eps);
            let c = estimate_constants(&w, RefMetric::Gamma, domain)?;
            worst = worst.max(c.c1.value);
            if compare_below(c.c1.value, t, margin) != Verdict::Holds {
                failed = Some((eps, c.c1.point.clone()));
            }
        }
        h.estimate = Some(worst);
        if let Some((eps, point)) = failed {
            h.verdict = Verdict::Inconclusive;
            h.witness = Some(point);
            h.note = Some(format!("spot check failed at ε = {eps:e}"));
        } else {
            h.note = Some(format!("ε_max = {e_max:e}; spot-checked at ε_max·2^-k, k = 0..7"));
        }
    }
    hyps.push(h);
    let eligible = eligible_bidegrees(n);
    Ok(HypothesisReport {
        check: CheckKind::EpsilonFamily,
        n,
        weight: Some(format!("exp(-ε·φ), φ = {}", potential.name())),
        domain: Some(domain.clone()),
        margin,
        constants: None,
        hypotheses: hyps,
        conclusion: conditional_conclusion(&eligible),
        eligible_bidegrees: eligible,
        epsilon_interval,
        model_check: None,
    })
}

fn c3_check(c3: f64, n: usize, c1: f64, margin: f64, witness: Option<Vec<[f64; 2]>>) -> HypothesisCheck {
    let nf = n as f64;
    let mut h = threshold_check(
        "c3_threshold",
        "C_3(η) + n√n C_1(η) < 2",
        c3 + nf * nf.sqrt() * c1,
        2.0,
        witness.unwrap_or_default(),
        margin,
    );
    if h.witness.as_ref().is_some_and(|w| w.is_empty()) {
        h.witness = None;
    }
    h
}

/// Hypotheses of the curvature statement on a sampled flat chart. The
/// operator inequality for F_η is not a pointwise condition and is left
/// unchecked here; use [`check_curvature_vanishing_on_model`] for constant η.
pub fn check_curvature_vanishing(weight: &Weight, domain: &SampledDomain, p: usize, q: usize, margin: f64) -> Result<HypothesisReport, GeometryError> {
    let n = domain.n;
    if p > n || q > n {
        return Err(GeometryError::BadBidegree { p, q, n });
    }
    let c = estimate_constants(weight, RefMetric::Flat, domain)?;
    let c3 = c.c3.expect("flat metric has C_3");
    let mut hyps = vec![c3_check(c3, n, c.c1.value, margin, Some(c.c1.point.clone()))];
    let mut h = HypothesisCheck::new("curvature_positive", "F_η > 2(C_3(η) + n√n C_1(η)) Id", Verdict::NotChecked);
    h.threshold = Some(2.0 * (c3 + (n as f64).powf(1.5) * c.c1.value));
    h.note = Some("operator inequality for a non-constant twist is not decided by sampling".into());
    hyps.push(h);
    Ok(HypothesisReport {
        check: CheckKind::CurvatureVanishing,
        n,
        weight: Some(weight.describe()),
        domain: Some(domain.clone()),
        margin,
        constants: Some(c),
        hypotheses: hyps,
        eligible_bidegrees: vec![(p, q)],
        epsilon_interval: None,
        model_check: None,
        conclusion: format!("conditional: if both hypotheses hold on a compact manifold, Dolbeault cohomology in bidegree ({p},{q}) vanishes"),
    })
}

/// The curvature statement on an invariant model with constant η: C_1 = 0,
/// C_3 = 2√n|∂̄ω|, and F_η is assembled as a matrix in bidegree (p,q).
pub fn check_curvature_vanishing_on_model(
    cx: &InvariantComplex,
    eta: f64,
    p: usize,
    q: usize,
    margin: f64,
) -> Result<HypothesisReport, GeometryError> {
    let n = cx.n;
    if p > n || q > n {
        return Err(GeometryError::BadBidegree { p, q, n });
    }
    let nc = NumericComplex::new(cx);
    // ω as a vector: L applied to the constant 1
    let one = cx.index_of(0);
    let omega = nc.lefschetz.column(one).into_owned();
    let dbar_omega = &nc.delbar * &omega;
    let dbar_omega_norm = (dbar_omega.adjoint() * &nc.gram * &dbar_omega)[(0, 0)].re.max(0.0).sqrt();
    let c3 = 2.0 * (n as f64).sqrt() * dbar_omega_norm;
    let threshold = 2.0 * c3;

    let op = assemble_laplacian(&nc, LaplacianKind::Curvature(eta), Grading::Bidegree(p, q))?;
    let spec = operator_spectrum(&op)?;
    let scalar = (p as f64 - q as f64) * ((p + q) as f64 - n as f64);
    let dim = op.matrix.nrows();
    let deviation = (&op.matrix - DMatrix::<C>::identity(dim, dim) * C::new(scalar, 0.0))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let min_eigenvalue = spec.raw.first().copied();

    let mut hyps = vec![c3_check(c3, n, 0.0, margin, None)];
    let mut h = HypothesisCheck::new(
        "curvature_positive",
        "F_η > 2(C_3(η) + n√n C_1(η)) Id",
        match min_eigenvalue {
            // strict inequality above the threshold, with the margin band
            Some(m) if (m - threshold).abs() <= margin * threshold.abs().max(1e-12) => Verdict::Inconclusive,
            Some(m) if m > threshold => Verdict::Holds,
            Some(_) => Verdict::Fails,
            None => Verdict::NotChecked,
        },
    );
    h.estimate = min_eigenvalue;
    h.threshold = Some(threshold);
    h.note = Some("smallest eigenvalue of the F_η matrix on the model".into());
    hyps.push(h);
    Ok(HypothesisReport {
        check: CheckKind::CurvatureVanishing,
        n,
        weight: Some(Weight::Constant { value: eta }.describe()),
        domain: None,
        margin,
        constants: None,
        hypotheses: hyps,
        eligible_bidegrees: vec![(p, q)],
        epsilon_interval: None,
        model_check: Some(CurvatureModelCheck {
            model: cx.model.name.clone(),
            eta,
            p,
            q,
            dim,
            eigenvalues: spec.clamped,
            min_eigenvalue,
            threshold,
            dbar_omega_norm,
            scalar_reference: scalar,
            max_deviation_from_scalar: deviation,
            matches_scalar: deviation <= 1e-12,
        }),
        conclusion: format!("conditional: if both hypotheses hold, Dolbeault cohomology in bidegree ({p},{q}) vanishes"),
    })
}
