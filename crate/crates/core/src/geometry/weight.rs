//! Twist functions η on a chart, with closed-form first and mixed second
//! derivatives, and the form γ_η built from them.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::GeometryError;

type C = Complex64;

/// Real potentials φ on a chart of C^n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Potential {
    /// φ = -log(1 - |z|²), defined on the unit ball.
    BallLog,
    /// φ = |z|².
    Quadratic,
}

impl Potential {
    pub fn parse(s: &str) -> Option<Potential> {
        match s {
            "ball-log" => Some(Potential::BallLog),
            "quadratic" => Some(Potential::Quadratic),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Potential::BallLog => "ball-log",
            Potential::Quadratic => "quadratic",
        }
    }

    pub fn jet(&self, z: &[C]) -> Result<Jet2, GeometryError> {
        let n = z.len();
        let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        match self {
            Potential::BallLog => {
                if r2 >= 1.0 {
                    return Err(GeometryError::OutsideDomain(super::domain::point_pairs(z)));
                }
                let s = 1.0 - r2;
                Ok(Jet2 {
                    value: -s.ln(),
                    grad: DVector::from_fn(n, |j, _| z[j].conj() / s),
                    hess: DMatrix::from_fn(n, n, |j, k| {
                        let delta = if j == k { 1.0 / s } else { 0.0 };
                        C::new(delta, 0.0) + z[j].conj() * z[k] / (s * s)
                    }),
                })
            }
            Potential::Quadratic => Ok(Jet2 {
                value: r2,
                grad: DVector::from_fn(n, |j, _| z[j].conj()),
                hess: DMatrix::identity(n, n),
            }),
        }
    }
}

/// Value, ∂f/∂z_j and ∂²f/∂z_j∂z̄_k of a real function at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: DVector<C>,
    pub hess: DMatrix<C>,
}

/// η = scale · e^{-ε φ}, or a positive constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Weight {
    Constant { value: f64 },
    ExpPotential { potential: Potential, epsilon: f64, scale: f64 },
}

impl Weight {
    pub fn exp_potential(potential: Potential, epsilon: f64) -> Weight {
        Weight::ExpPotential { potential, epsilon, scale: 1.0 }
    }

    /// λη for a constant λ.
    pub fn rescaled(&self, lambda: f64) -> Weight {
        match *self {
            Weight::Constant { value } => Weight::Constant { value: value * lambda },
            Weight::ExpPotential { potential, epsilon, scale } => {
                Weight::ExpPotential { potential, epsilon, scale: scale * lambda }
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Weight::Constant { .. }) || matches!(self, Weight::ExpPotential { epsilon, .. } if *epsilon == 0.0)
    }

    pub fn describe(&self) -> String {
        match self {
            Weight::Constant { value } => format!("constant {value}"),
            Weight::ExpPotential { potential, epsilon, scale } => {
                format!("{scale}·exp(-{epsilon}·φ), φ = {}", potential.name())
            }
        }
    }

    /// Jet of η itself, from closed forms (not through φ).
    pub fn jet(&self, z: &[C]) -> Result<Jet2, GeometryError> {
        let n = z.len();
        let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        let jet = match *self {
            Weight::Constant { value } => {
                Jet2 { value, grad: DVector::zeros(n), hess: DMatrix::zeros(n, n) }
            }
            Weight::ExpPotential { potential: Potential::BallLog, epsilon: e, scale } => {
                if r2 >= 1.0 {
                    return Err(GeometryError::OutsideDomain(super::domain::point_pairs(z)));
                }
                // η = scale (1 - |z|²)^ε
                let s = 1.0 - r2;
                Jet2 {
                    value: scale * s.powf(e),
                    grad: DVector::from_fn(n, |j, _| z[j].conj() * (-scale * e * s.powf(e - 1.0))),
                    hess: DMatrix::from_fn(n, n, |j, k| {
                        let delta = if j == k { scale * e * s.powf(e - 1.0) } else { 0.0 };
                        z[j].conj() * z[k] * (scale * e * (e - 1.0) * s.powf(e - 2.0)) - delta
                    }),
                }
            }
            Weight::ExpPotential { potential: Potential::Quadratic, epsilon: e, scale } => {
                let eta = scale * (-e * r2).exp();
                Jet2 {
                    value: eta,
                    grad: DVector::from_fn(n, |j, _| z[j].conj() * (-e * eta)),
                    hess: DMatrix::from_fn(n, n, |j, k| {
                        let delta = if j == k { e } else { 0.0 };
                        (z[j].conj() * z[k] * (e * e) - delta) * eta
                    }),
                }
            }
        };
        if !(jet.value > 0.0) {
            return Err(GeometryError::NonPositiveTwist { value: jet.value, point: super::domain::point_pairs(z) });
        }
        Ok(jet)
    }

    /// Jet of ψ = -log η, computed from the jet of η.
    pub fn log_jet(&self, z: &[C]) -> Result<Jet2, GeometryError> {
        let j = self.jet(z)?;
        let eta = j.value;
        let n = z.len();
        Ok(Jet2 {
            value: -eta.ln(),
            grad: &j.grad * C::new(-1.0 / eta, 0.0),
            hess: DMatrix::from_fn(n, n, |a, b| -j.hess[(a, b)] / eta + j.grad[a] * j.grad[b].conj() / (eta * eta)),
        })
    }
}

/// Coefficient matrix of γ_η = (2/η²) i∂η∧∂̄η - (1/η) i∂∂̄η, entry (j,k)
/// multiplying i dz_j∧dz̄_k.
pub fn gamma_from_jet(j: &Jet2) -> DMatrix<C> {
    let eta = j.value;
    let n = j.grad.len();
    DMatrix::from_fn(n, n, |a, b| j.grad[a] * j.grad[b].conj() * (2.0 / (eta * eta)) - j.hess[(a, b)] / eta)
}

/// i∂φ∧∂̄φ + i∂∂̄φ from a potential jet; equals γ_η for η = e^{-φ}.
pub fn gamma_from_potential(phi: &Jet2) -> DMatrix<C> {
    let n = phi.grad.len();
    DMatrix::from_fn(n, n, |a, b| phi.grad[a] * phi.grad[b].conj() + phi.hess[(a, b)])
}

/// γ_η at a point.
pub fn gamma_at(weight: &Weight, z: &[C]) -> Result<DMatrix<C>, GeometryError> {
    Ok(gamma_from_jet(&weight.jet(z)?))
}
