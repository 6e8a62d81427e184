//! Laplacians of the invariant complex as matrices, their spectra, h-sweeps
//! and the eigenvalue decay classification.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::complex::InvariantComplex;
use super::exact::ExactMatrix;
use super::fss::FssTable;

type C = Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("an h sweep needs at least 4 strictly decreasing positive values")]
    BadSweep,
    #[error("twist must be a nonzero constant")]
    BadTwist,
    #[error("degree {k} is out of range for n = {n}")]
    BadDegree { k: usize, n: usize },
    #[error("Gram matrix is not positive definite")]
    BadGram,
}

/// Eigenvalues below this are treated as exact zeros.
pub const ZERO_FLOOR: f64 = 1e-12;

fn to_complex(m: &ExactMatrix) -> DMatrix<C> {
    DMatrix::from_fn(m.rows, m.cols, |i, j| {
        let (re, im) = m.get(i, j).to_f64_pair();
        C::new(re, im)
    })
}

/// Numeric operators of a model on the whole exterior algebra.
#[derive(Clone, Debug)]
pub struct NumericComplex {
    pub n: usize,
    /// (p, q) of each basis element.
    pub bidegree: Vec<(usize, usize)>,
    pub del: DMatrix<C>,
    pub delbar: DMatrix<C>,
    /// G[a][b] = ⟨e_b, e_a⟩, so that ⟨u, v⟩ = v^H G u.
    pub gram: DMatrix<C>,
    pub lefschetz: DMatrix<C>,
}

fn det(m: &DMatrix<C>) -> C {
    if m.nrows() == 0 {
        C::new(1.0, 0.0)
    } else {
        m.clone().determinant()
    }
}

impl NumericComplex {
    pub fn new(cx: &InvariantComplex) -> NumericComplex {
        let n = cx.n;
        let dim = cx.dim();
        let h: Vec<Vec<C>> = cx
            .model
            .metric
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| {
                        let (a, b) = v.to_f64_pair();
                        C::new(a, b)
                    })
                    .collect()
            })
            .collect();
        // pairing of generators: ⟨ζ_a, ζ_b⟩ = H_ab, ⟨ζ̄_a, ζ̄_b⟩ = conj(H_ab)
        let gen_inner = |a: usize, b: usize| -> C {
            match (a < n, b < n) {
                (true, true) => h[a][b],
                (false, false) => h[a - n][b - n].conj(),
                _ => C::new(0.0, 0.0),
            }
        };
        let bits = |m: u32| -> Vec<usize> { (0..2 * n).filter(|&g| m & (1 << g) != 0).collect() };
        let mut gram = DMatrix::<C>::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                let (ma, mb) = (cx.basis[a], cx.basis[b]);
                if cx.bidegree_of(ma) != cx.bidegree_of(mb) {
                    continue;
                }
                let (ia, ib) = (bits(ma), bits(mb));
                let k = ia.len();
                let m = DMatrix::from_fn(k, k, |i, j| gen_inner(ib[i], ia[j]));
                gram[(a, b)] = det(&m);
            }
        }
        // ω = i Σ H_{jk} ζ_j ∧ ζ̄_k  (H is the identity in the standard case)
        let mut lefschetz = DMatrix::<C>::zeros(dim, dim);
        for j in 0..n {
            for k in 0..n {
                let c = C::new(0.0, 1.0) * h[j][k];
                if c.norm() == 0.0 {
                    continue;
                }
                let w = (1u32 << j) | (1u32 << (n + k));
                for (col, &m) in cx.basis.iter().enumerate() {
                    let Some(s) = super::complex::wedge_sign(1u32 << j, 1u32 << (n + k)) else { continue };
                    let Some(s2) = super::complex::wedge_sign(w, m) else { continue };
                    let row = cx.index_of(w | m);
                    lefschetz[(row, col)] += c * (s * s2) as f64;
                }
            }
        }
        NumericComplex {
            n,
            bidegree: cx.basis.iter().map(|&m| cx.bidegree_of(m)).collect(),
            del: to_complex(&cx.del),
            delbar: to_complex(&cx.delbar),
            gram,
            lefschetz,
        }
    }

    /// θ_η: multiplies (p,q)-components by η^p.
    pub fn theta(&self, eta: f64) -> DMatrix<C> {
        DMatrix::from_fn(self.bidegree.len(), self.bidegree.len(), |i, j| {
            if i == j {
                C::new(eta.powi(self.bidegree[i].0 as i32), 0.0)
            } else {
                C::new(0.0, 0.0)
            }
        })
    }

    /// Gram matrix of the twisted product ⟨u,v⟩_{ω_η} = η^{2p}⟨u,v⟩_ω.
    pub fn twisted_gram(&self, eta: f64) -> DMatrix<C> {
        let t = self.theta(eta);
        &t * &self.gram * &t
    }

    /// Adjoint of `a` with respect to the Gram matrix `g`: g^{-1} a^H g.
    pub fn adjoint_with(&self, a: &DMatrix<C>, g: &DMatrix<C>) -> DMatrix<C> {
        let inv = g.clone().try_inverse().expect("Gram matrix is invertible");
        inv * a.adjoint() * g
    }

    pub fn adjoint(&self, a: &DMatrix<C>) -> DMatrix<C> {
        self.adjoint_with(a, &self.gram)
    }

    pub fn lambda(&self) -> DMatrix<C> {
        self.adjoint(&self.lefschetz)
    }

    /// d_h = h∂ + ∂̄, which is also D_η for a constant twist η = h.
    pub fn d_h(&self, h: f64) -> DMatrix<C> {
        &self.del * C::new(h, 0.0) + &self.delbar
    }

    /// [A, A*] for an odd operator A, adjoint taken in the Gram matrix `g`.
    pub fn laplacian_with(&self, a: &DMatrix<C>, g: &DMatrix<C>) -> DMatrix<C> {
        let s = self.adjoint_with(a, g);
        a * &s + &s * a
    }

    pub fn indices_of_degree(&self, k: usize) -> Vec<usize> {
        (0..self.bidegree.len()).filter(|&i| self.bidegree[i].0 + self.bidegree[i].1 == k).collect()
    }

    pub fn indices_of_bidegree(&self, p: usize, q: usize) -> Vec<usize> {
        (0..self.bidegree.len()).filter(|&i| self.bidegree[i] == (p, q)).collect()
    }

    /// Block of an operator preserving the given index set.
    pub fn block(m: &DMatrix<C>, idx: &[usize]) -> DMatrix<C> {
        DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum LaplacianKind {
    /// Δ_h = [d_h, d_h*].
    DeltaH(f64),
    /// Δ_η for a constant twist.
    DeltaEta(f64),
    /// Δ_{ω_η} = [d, d*_{ω_η}] for a constant twist.
    DeltaOmegaEta(f64),
    /// Δ''_η = [D^{0,1}_η, (D^{0,1}_η)*]; for a constant twist this is Δ''.
    DeltaDoublePrime(f64),
    /// Δ'_η = [conj D^{0,1}_η, (conj D^{0,1}_η)*]; for a constant twist this is Δ'.
    DeltaPrime(f64),
    /// F_η = i[[D^{0,1}_η, conj D^{0,1}_η], Λ].
    Curvature(f64),
}

impl LaplacianKind {
    fn twist(&self) -> f64 {
        match *self {
            LaplacianKind::DeltaH(h)
            | LaplacianKind::DeltaEta(h)
            | LaplacianKind::DeltaOmegaEta(h)
            | LaplacianKind::DeltaDoublePrime(h)
            | LaplacianKind::DeltaPrime(h)
            | LaplacianKind::Curvature(h) => h,
        }
    }
}

/// An operator block together with the Gram matrix it is self-adjoint for.
#[derive(Clone, Debug)]
pub struct AssembledOperator {
    pub matrix: DMatrix<C>,
    pub gram: DMatrix<C>,
}

impl AssembledOperator {
    /// Hermitian matrix L^H M L^{-H} similar to `matrix`, where gram = L L^H.
    pub fn hermitian_form(&self) -> Result<DMatrix<C>, SpectralError> {
        let l = nalgebra::Cholesky::new(self.gram.clone()).ok_or(SpectralError::BadGram)?.l();
        let lh = l.adjoint();
        let lh_inv = lh.clone().try_inverse().ok_or(SpectralError::BadGram)?;
        Ok(lh * &self.matrix * lh_inv)
    }
}

/// Degree selector for [`assemble_laplacian`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Grading {
    Degree(usize),
    Bidegree(usize, usize),
}

/// Assembles the operator on the given degree or bidegree.
pub fn assemble_laplacian(nc: &NumericComplex, kind: LaplacianKind, grading: Grading) -> Result<AssembledOperator, SpectralError> {
    let eta = kind.twist();
    if !eta.is_finite() || eta == 0.0 {
        return Err(SpectralError::BadTwist);
    }
    let n = nc.n;
    let idx = match grading {
        Grading::Degree(k) if k <= 2 * n => nc.indices_of_degree(k),
        Grading::Bidegree(p, q) if p <= n && q <= n => nc.indices_of_bidegree(p, q),
        Grading::Degree(k) => return Err(SpectralError::BadDegree { k, n }),
        Grading::Bidegree(p, q) => return Err(SpectralError::BadDegree { k: p + q, n }),
    };
    let g = &nc.gram;
    let (full, gram) = match kind {
        LaplacianKind::DeltaH(h) | LaplacianKind::DeltaEta(h) => (nc.laplacian_with(&nc.d_h(h), g), g.clone()),
        LaplacianKind::DeltaOmegaEta(e) => {
            let ge = nc.twisted_gram(e);
            (nc.laplacian_with(&(&nc.del + &nc.delbar), &ge), ge)
        }
        // for constant η the (0,1) part of D_η is ∂̄ and its conjugate is ∂
        LaplacianKind::DeltaDoublePrime(_) => (nc.laplacian_with(&nc.delbar, g), g.clone()),
        LaplacianKind::DeltaPrime(_) => (nc.laplacian_with(&nc.del, g), g.clone()),
        LaplacianKind::Curvature(_) => {
            let inner = &nc.delbar * &nc.del + &nc.del * &nc.delbar;
            let lam = nc.lambda();
            ((&inner * &lam - &lam * &inner) * C::new(0.0, 1.0), g.clone())
        }
    };
    Ok(AssembledOperator { matrix: NumericComplex::block(&full, &idx), gram: NumericComplex::block(&gram, &idx) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Eigenvalues in increasing order, as computed.
    pub raw: Vec<f64>,
    /// Eigenvalues with values in [-ZERO_FLOOR, 0) replaced by 0.
    pub clamped: Vec<f64>,
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn spectrum(m: &DMatrix<C>) -> Result<Spectrum, SpectralError> {
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let defect = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > 1e-9 * scale {
        return Err(SpectralError::NotHermitian(defect));
    }
    if m.nrows() == 0 {
        return Ok(Spectrum { raw: vec![], clamped: vec![] });
    }
    let herm = (m + m.adjoint()) * C::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(herm);
    let mut raw: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    raw.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let clamped = raw.iter().map(|&x| if (-ZERO_FLOOR..0.0).contains(&x) { 0.0 } else { x }).collect();
    Ok(Spectrum { raw, clamped })
}

/// Spectrum of an assembled operator (via its Hermitian form).
pub fn operator_spectrum(op: &AssembledOperator) -> Result<Spectrum, SpectralError> {
    spectrum(&op.hermitian_form()?)
}

/// Eigenpairs of an operator, eigenvectors expressed in the original basis.
pub fn eigenpairs(op: &AssembledOperator) -> Result<Vec<(f64, DVector<C>)>, SpectralError> {
    let l = nalgebra::Cholesky::new(op.gram.clone()).ok_or(SpectralError::BadGram)?.l();
    let lh_inv = l.adjoint().try_inverse().ok_or(SpectralError::BadGram)?;
    let herm = op.hermitian_form()?;
    let herm = (&herm + herm.adjoint()) * C::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(herm);
    let mut out: Vec<(f64, DVector<C>)> = (0..eig.eigenvalues.len())
        .map(|i| (eig.eigenvalues[i], &lh_inv * eig.eigenvectors.column(i)))
        .collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub model: String,
    pub k: usize,
    pub h_values: Vec<f64>,
    /// eigenvalues[j] = sorted spectrum of Δ_h at h_values[j] (clamped).
    pub eigenvalues: Vec<Vec<f64>>,
    pub raw: Vec<Vec<f64>>,
    /// Smallest eigenvalue above ZERO_FLOOR at each h.
    pub delta: Vec<Option<f64>>,
    /// Number of eigenvalues within ZERO_FLOOR of 0 at each h.
    pub zero_count: Vec<usize>,
}

/// Dyadic sweep h = 2^-1 .. 2^-steps.
pub fn dyadic_sweep(steps: usize) -> Vec<f64> {
    (1..=steps as i32).map(|e| 2f64.powi(-e)).collect()
}

pub fn sweep_h(cx: &InvariantComplex, k: usize, h_values: &[f64]) -> Result<SpectrumTable, SpectralError> {
    if h_values.len() < 4 || h_values.windows(2).any(|w| w[1] >= w[0]) || h_values.iter().any(|&h| h <= 0.0) {
        return Err(SpectralError::BadSweep);
    }
    let nc = NumericComplex::new(cx);
    let mut eigenvalues = Vec::new();
    let mut raw = Vec::new();
    let mut delta = Vec::new();
    let mut zero_count = Vec::new();
    for &h in h_values {
        let s = operator_spectrum(&assemble_laplacian(&nc, LaplacianKind::DeltaH(h), Grading::Degree(k))?)?;
        delta.push(s.clamped.iter().copied().find(|&x| x > ZERO_FLOOR));
        zero_count.push(s.clamped.iter().filter(|x| x.abs() <= ZERO_FLOOR).count());
        eigenvalues.push(s.clamped);
        raw.push(s.raw);
    }
    Ok(SpectrumTable { model: cx.model.name.clone(), k, h_values: h_values.to_vec(), eigenvalues, raw, delta, zero_count })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub k: usize,
    pub slope_tol: f64,
    /// Fitted log-log slope per eigenvalue index; `None` for an eigenvalue
    /// that is identically zero on the fitted tail (decays at every rate).
    pub slopes: Vec<Option<f64>>,
    /// counts[r-1] = #{i : λ_i ∈ O(h^{2r})}.
    pub counts: Vec<usize>,
}

impl DecayReport {
    pub fn count(&self, r: usize) -> usize {
        self.counts[r - 1]
    }

    /// Whether eigenvalue i is classified O(h^{2r}).
    pub fn decays(&self, i: usize, r: usize) -> bool {
        match self.slopes[i] {
            None => true,
            Some(s) => s >= 2.0 * r as f64 - self.slope_tol,
        }
    }
}

/// Least-squares slopes of log λ_i against log h over the last half of the sweep.
pub fn estimate_decay(table: &SpectrumTable, r_max: usize, slope_tol: f64) -> Result<DecayReport, SpectralError> {
    let m = table.h_values.len();
    if m < 4 {
        return Err(SpectralError::BadSweep);
    }
    let tail: Vec<usize> = (m / 2..m).collect();
    let count = table.eigenvalues.first().map_or(0, |v| v.len());
    let xs: Vec<f64> = tail.iter().map(|&j| table.h_values[j].ln()).collect();
    let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let slopes: Vec<Option<f64>> = (0..count)
        .map(|i| {
            let vals: Vec<f64> = tail.iter().map(|&j| table.eigenvalues[j][i]).collect();
            if vals.iter().all(|v| v.abs() <= ZERO_FLOOR) {
                return None;
            }
            let ys: Vec<f64> = vals.iter().map(|v| v.abs().max(f64::MIN_POSITIVE).ln()).collect();
            let ybar = ys.iter().sum::<f64>() / ys.len() as f64;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
            Some(sxy / sxx)
        })
        .collect();
    let mut report = DecayReport { k: table.k, slope_tol, slopes, counts: Vec::new() };
    report.counts = (1..=r_max).map(|r| (0..count).filter(|&i| report.decays(i, r)).count()).collect();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub model: String,
    pub r: usize,
    pub k: usize,
    pub decay_count: usize,
    pub page_dimension: usize,
    pub betti: usize,
    pub slopes: Vec<Option<f64>>,
    /// decay_count == dim E_r^k.
    pub pass: bool,
}

/// Compares #{i : λ_i^k(h) ∈ O(h^{2r})} with dim E_r^k.
pub fn verify_degeneration_criterion(
    cx: &InvariantComplex,
    fss: &FssTable,
    r: usize,
    k: usize,
    h_values: &[f64],
    slope_tol: f64,
) -> Result<CriterionReport, SpectralError> {
    if k > 2 * cx.n {
        return Err(SpectralError::BadDegree { k, n: cx.n });
    }
    let table = sweep_h(cx, k, h_values)?;
    let decay = estimate_decay(&table, r, slope_tol)?;
    let page_dimension = if r <= fss.r_max { fss.total(r, k) } else { fss.e_infinity.iter().enumerate().filter(|(p, _)| *p <= k).map(|(p, row)| if k - p <= cx.n { row[k - p] } else { 0 }).sum() };
    let decay_count = decay.count(r);
    Ok(CriterionReport {
        model: cx.model.name.clone(),
        r,
        k,
        decay_count,
        page_dimension,
        betti: fss.betti[k],
        slopes: decay.slopes,
        pass: decay_count == page_dimension,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEquality {
    pub model: String,
    pub eta: f64,
    pub k: usize,
    pub spectrum_eta: Vec<f64>,
    pub spectrum_omega_eta: Vec<f64>,
    /// max_i |λ_i - μ_i| / max(1, max |λ|).
    pub max_relative_difference: f64,
    /// max over eigenpairs of |Δ_{ω_η}(θ^{-1}u) - λθ^{-1}u| / |θ^{-1}u|.
    pub max_transport_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Spectra of Δ_η and Δ_{ω_η} and the transport u ↦ θ_η^{-1}u of eigenvectors.
pub fn spectrum_equality_check(cx: &InvariantComplex, eta: f64, k: usize, tol: f64) -> Result<SpectrumEquality, SpectralError> {
    let nc = NumericComplex::new(cx);
    let a = assemble_laplacian(&nc, LaplacianKind::DeltaEta(eta), Grading::Degree(k))?;
    let b = assemble_laplacian(&nc, LaplacianKind::DeltaOmegaEta(eta), Grading::Degree(k))?;
    let sa = operator_spectrum(&a)?;
    let sb = operator_spectrum(&b)?;
    let scale = sa.raw.iter().chain(&sb.raw).map(|x| x.abs()).fold(1.0, f64::max);
    let max_relative_difference =
        sa.raw.iter().zip(&sb.raw).map(|(x, y)| (x - y).abs() / scale).fold(0.0, f64::max);
    let idx = nc.indices_of_degree(k);
    let theta_inv = NumericComplex::block(&nc.theta(1.0 / eta), &idx);
    let mut max_transport_residual = 0.0f64;
    for (lambda, u) in eigenpairs(&a)? {
        let v = &theta_inv * u;
        let r = &b.matrix * &v - &v * C::new(lambda, 0.0);
        max_transport_residual = max_transport_residual.max(r.norm() / v.norm());
    }
    let pass = sa.raw.len() == sb.raw.len() && max_relative_difference <= tol && max_transport_residual <= 1e-8;
    Ok(SpectrumEquality {
        model: cx.model.name.clone(),
        eta,
        k,
        spectrum_eta: sa.clamped,
        spectrum_omega_eta: sb.clamped,
        max_relative_difference,
        max_transport_residual,
        tol,
        pass,
    })
}
