//! Frölicher spectral sequence pages by exact rank arithmetic.
//!
//! With the filtration F^p = ⊕_{p' ≥ p} A^{p',·} of the total complex and
//! Z_r^p = {x ∈ F^p : dx ∈ F^{p+r}}, the pages are
//! E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}); the denominator lies
//! inside Z_r^p, so each dimension is a difference of two ranks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::complex::InvariantComplex;
use super::exact::{span_dim, ExactMatrix};
use crate::scalar::GaussRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FssError {
    #[error("r_max must be at least 1")]
    BadPage,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FssTable {
    pub model: String,
    pub n: usize,
    pub r_max: usize,
    /// `pages[r-1][p][q]` = dim E_r^{p,q}.
    pub pages: Vec<Vec<Vec<usize>>>,
    /// dim E_∞^{p,q}.
    pub e_infinity: Vec<Vec<usize>>,
    /// Betti numbers b_0..b_2n of the total complex.
    pub betti: Vec<usize>,
    /// Smallest r with dim E_r^k = b_k, per degree k.
    pub degeneration_by_degree: Vec<usize>,
    /// Smallest r at which the sequence degenerates in every degree.
    pub degeneration_page: usize,
}

impl FssTable {
    /// dim E_r^k = Σ_{p+q=k} dim E_r^{p,q}.
    pub fn total(&self, r: usize, k: usize) -> usize {
        let page = &self.pages[r - 1];
        (0..=self.n).filter(|&p| k >= p && k - p <= self.n).map(|p| page[p][k - p]).sum()
    }

    pub fn dim(&self, r: usize, p: usize, q: usize) -> usize {
        self.pages[r - 1][p][q]
    }

    /// Page dimensions are nonincreasing in r and E_∞ sums to the Betti numbers.
    pub fn axioms_hold(&self) -> bool {
        let n = self.n;
        let monotone = self.pages.windows(2).all(|w| (0..=n).all(|p| (0..=n).all(|q| w[1][p][q] <= w[0][p][q])));
        let above = (0..=n).all(|p| (0..=n).all(|q| self.pages.last().map_or(true, |l| l[p][q] >= self.e_infinity[p][q])));
        let sums = (0..=2 * n).all(|k| {
            let s: usize = (0..=n).filter(|&p| k >= p && k - p <= n).map(|p| self.e_infinity[p][k - p]).sum();
            s == self.betti[k]
        });
        monotone && above && sums
    }
}

struct Degree {
    /// Basis indices of A^k in the complex.
    idx: Vec<usize>,
    /// p of each basis element.
    p: Vec<usize>,
}

fn degree(cx: &InvariantComplex, k: usize) -> Degree {
    let idx = cx.degree_indices(k);
    let p = idx.iter().map(|&i| cx.bidegree_of(cx.basis[i]).0).collect();
    Degree { idx, p }
}

/// Basis (as vectors of A^k coordinates) of Z_r^p in degree k.
fn z(cx: &InvariantComplex, d: &ExactMatrix, k: usize, p: i64, r: i64) -> Vec<Vec<GaussRational>> {
    if k > 2 * cx.n {
        return Vec::new();
    }
    let src = degree(cx, k);
    let cols: Vec<usize> = (0..src.idx.len()).filter(|&j| src.p[j] as i64 >= p).collect();
    if cols.is_empty() {
        return Vec::new();
    }
    let embed = |v: &[GaussRational]| {
        let mut out = vec![GaussRational::zero(); src.idx.len()];
        for (c, x) in cols.iter().zip(v) {
            out[*c] = x.clone();
        }
        out
    };
    let tgt = degree(cx, k + 1);
    let rows: Vec<usize> = (0..tgt.idx.len()).filter(|&i| (tgt.p[i] as i64) < p + r).map(|i| tgt.idx[i]).collect();
    if rows.is_empty() {
        return cols.iter().map(|&c| {
            let mut v = vec![GaussRational::zero(); src.idx.len()];
            v[c] = GaussRational::one();
            v
        }).collect();
    }
    let sub = d.submatrix(&rows, &cols.iter().map(|&c| src.idx[c]).collect::<Vec<_>>());
    sub.kernel().iter().map(|v| embed(v)).collect()
}

/// d applied to vectors of A^{k-1}, giving vectors of A^k.
fn d_image(cx: &InvariantComplex, d: &ExactMatrix, k: usize, vs: &[Vec<GaussRational>]) -> Vec<Vec<GaussRational>> {
    let src = degree(cx, k - 1);
    let tgt = degree(cx, k);
    let sub = d.submatrix(&tgt.idx, &src.idx);
    vs.iter().map(|v| sub.apply(v)).collect()
}

fn page_dim(cx: &InvariantComplex, d: &ExactMatrix, p: usize, q: usize, r: usize) -> usize {
    let k = p + q;
    let (pi, ri) = (p as i64, r as i64);
    let dim_k = cx.degree_indices(k).len();
    let num = z(cx, d, k, pi, ri).len();
    let mut den = z(cx, d, k, pi + 1, ri - 1);
    if k >= 1 {
        den.extend(d_image(cx, d, k, &z(cx, d, k - 1, pi - ri + 1, ri - 1)));
    }
    num - span_dim(dim_k, &den)
}

/// Pages E_1..E_{r_max}, E_∞ and the Betti numbers of the model.
pub fn fss_pages(cx: &InvariantComplex, r_max: usize) -> Result<FssTable, FssError> {
    if r_max < 1 {
        return Err(FssError::BadPage);
    }
    let n = cx.n;
    let d = cx.d();
    let page = |r: usize| -> Vec<Vec<usize>> {
        (0..=n).map(|p| (0..=n).map(|q| page_dim(cx, &d, p, q, r)).collect()).collect()
    };
    // d_r vanishes once r exceeds the filtration length, so E_{n+2} = E_∞
    let stable = n + 2;
    let all: Vec<_> = (1..=r_max.max(stable)).map(page).collect();
    let pages = all[..r_max].to_vec();
    let e_infinity = all[stable - 1].clone();
    let betti: Vec<usize> = (0..=2 * n)
        .map(|k| {
            let here = degree(cx, k).idx;
            let kernel = if k == 2 * n {
                here.len()
            } else {
                here.len() - d.submatrix(&degree(cx, k + 1).idx, &here).rank()
            };
            let image = if k == 0 { 0 } else { d.submatrix(&here, &degree(cx, k - 1).idx).rank() };
            kernel - image
        })
        .collect();
    let total = |pg: &Vec<Vec<usize>>, k: usize| -> usize {
        (0..=n).filter(|&p| k >= p && k - p <= n).map(|p| pg[p][k - p]).sum()
    };
    let degeneration_by_degree: Vec<usize> = (0..=2 * n)
        .map(|k| (1..=stable).find(|&r| total(&all[r - 1], k) == betti[k]).unwrap_or(stable))
        .collect();
    let degeneration_page = degeneration_by_degree.iter().copied().max().unwrap_or(1);
    Ok(FssTable { model: cx.model.name.clone(), n, r_max, pages, e_infinity, betti, degeneration_by_degree, degeneration_page })
}
