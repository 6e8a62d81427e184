//! Sample suprema of the constants entering the vanishing hypotheses.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::domain::{point_pairs, SampledDomain};
use super::weight::{gamma_from_jet, Weight};
use super::GeometryError;

type C = Complex64;

/// Metric used to measure ∂η, ∂∂̄η and i∂∂̄φ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefMetric {
    /// γ_η itself.
    Gamma,
    /// The flat metric i Σ dz_j∧dz̄_j of the chart.
    Flat,
    /// i∂∂̄(-log η).
    PotentialHessian,
}

impl RefMetric {
    pub fn parse(s: &str) -> Option<RefMetric> {
        match s {
            "gamma" => Some(RefMetric::Gamma),
            "flat" => Some(RefMetric::Flat),
            "potential-hessian" => Some(RefMetric::PotentialHessian),
            _ => None,
        }
    }

    pub fn matrix(&self, weight: &Weight, z: &[C]) -> Result<DMatrix<C>, GeometryError> {
        Ok(match self {
            RefMetric::Gamma => gamma_from_jet(&weight.jet(z)?),
            RefMetric::Flat => DMatrix::identity(z.len(), z.len()),
            RefMetric::PotentialHessian => weight.log_jet(z)?.hess,
        })
    }
}

/// Inverse of a Hermitian positive definite matrix, or an error naming the point.
fn metric_inverse(g: &DMatrix<C>, z: &[C]) -> Result<DMatrix<C>, GeometryError> {
    let scale = g.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let min_eig = smallest_eigenvalue(g);
    if !(min_eig > 1e-12 * scale.max(1.0)) {
        return Err(GeometryError::SingularMetric(point_pairs(z)));
    }
    nalgebra::Cholesky::new(g.clone()).map(|c| c.inverse()).ok_or_else(|| GeometryError::SingularMetric(point_pairs(z)))
}

pub(crate) fn smallest_eigenvalue(g: &DMatrix<C>) -> f64 {
    if g.nrows() == 0 {
        return f64::INFINITY;
    }
    let h = (g + g.adjoint()) * C::new(0.5, 0.0);
    nalgebra::SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// |a| for a (1,0)-form with coefficients a_j, metric matrix g: (ā^T g^{-1} a)^{1/2}.
pub fn covector_norm(a: &nalgebra::DVector<C>, g_inv: &DMatrix<C>) -> f64 {
    (a.adjoint() * g_inv * a)[(0, 0)].re.max(0.0).sqrt()
}

/// |B| for a (1,1)-form Σ B_jk dz_j∧dz̄_k: (tr g^{-1} B g^{-1} B^H)^{1/2}.
/// With g = I this gives |dz_j|² = 1 and |ω|² = n.
pub fn form11_norm(b: &DMatrix<C>, g_inv: &DMatrix<C>) -> f64 {
    (g_inv * b * g_inv * b.adjoint()).trace().re.max(0.0).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sup {
    pub value: f64,
    pub index: usize,
    pub point: Vec<[f64; 2]>,
}

impl Sup {
    fn over(values: &[f64], domain: &SampledDomain) -> Sup {
        let (index, value) = values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        Sup { value, index, point: point_pairs(&domain.points()[index]) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsEstimate {
    pub n: usize,
    pub metric: RefMetric,
    pub samples: usize,
    /// sup |∂η|/η.
    pub c1: Sup,
    /// sup |∂∂̄η|/η.
    pub c2: Sup,
    /// sup |i∂∂̄φ| with φ = -log η.
    pub c_phi: Sup,
    /// 2√n(|∂̄ω| + C_1√n); only for the flat chart metric, where ∂̄ω = 0.
    pub c3: Option<f64>,
}

impl ConstantsEstimate {
    /// 4(1 + (p+q)C_1 + 4√n C_1 C_2).
    pub fn c12(&self, p: usize, q: usize) -> f64 {
        let rn = (self.n as f64).sqrt();
        4.0 * (1.0 + (p + q) as f64 * self.c1.value + 4.0 * rn * self.c1.value * self.c2.value)
    }
}

/// Pointwise (|∂η|/η, |∂∂̄η|/η, |i∂∂̄φ|) at one point.
pub fn pointwise_constants(weight: &Weight, metric: RefMetric, z: &[C]) -> Result<[f64; 3], GeometryError> {
    let j = weight.jet(z)?;
    let g = metric.matrix(weight, z)?;
    let g_inv = metric_inverse(&g, z)?;
    let phi = weight.log_jet(z)?;
    Ok([covector_norm(&j.grad, &g_inv) / j.value, form11_norm(&j.hess, &g_inv) / j.value, form11_norm(&phi.hess, &g_inv)])
}

pub fn estimate_constants(weight: &Weight, metric: RefMetric, domain: &SampledDomain) -> Result<ConstantsEstimate, GeometryError> {
    if domain.is_empty() {
        return Err(GeometryError::EmptyDomain);
    }
    let mut cols = [Vec::new(), Vec::new(), Vec::new()];
    for z in domain.points() {
        let v = pointwise_constants(weight, metric, z)?;
        for (c, x) in cols.iter_mut().zip(v) {
            c.push(x);
        }
    }
    let n = domain.n;
    let c1 = Sup::over(&cols[0], domain);
    let c3 = (metric == RefMetric::Flat).then(|| 2.0 * (n as f64).sqrt() * (c1.value * (n as f64).sqrt()));
    Ok(ConstantsEstimate {
        n,
        metric,
        samples: domain.len(),
        c1,
        c2: Sup::over(&cols[1], domain),
        c_phi: Sup::over(&cols[2], domain),
        c3,
    })
}
