//! The complex of invariant forms of a model, with exact ∂ and ∂̄ matrices on
//! the whole exterior algebra.
//!
//! Basis elements are monomials stored as bit masks over the 2n generators
//! ζ_1..ζ_n, ζ̄_1..ζ̄_n, wedged in increasing bit order.

use std::collections::{BTreeMap, HashMap};

use super::exact::ExactMatrix;
use super::model::LieAlgebraModel;
use crate::scalar::GaussRational;

type Sparse = BTreeMap<u32, GaussRational>;

#[derive(Clone, Debug)]
pub struct InvariantComplex {
    pub model: LieAlgebraModel,
    pub n: usize,
    /// All monomials, ordered by (degree, p, mask).
    pub basis: Vec<u32>,
    index: HashMap<u32, usize>,
    pub del: ExactMatrix,
    pub delbar: ExactMatrix,
}

/// Sign of a∧b for disjoint monomials, `None` if they share a generator.
pub fn wedge_sign(a: u32, b: u32) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        // generators of a above y must move past it
        inversions += (a >> (y + 1)).count_ones();
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

fn add_term(f: &mut Sparse, m: u32, c: GaussRational) {
    let e = f.entry(m).or_insert_with(GaussRational::zero);
    *e = e.add(&c);
    if e.is_zero() {
        f.remove(&m);
    }
}

impl InvariantComplex {
    pub fn bidegree_of(&self, mask: u32) -> (usize, usize) {
        let low = (1u32 << self.n) - 1;
        ((mask & low).count_ones() as usize, (mask >> self.n).count_ones() as usize)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, mask: u32) -> usize {
        self.index[&mask]
    }

    /// Indices of the basis elements of total degree k.
    pub fn degree_indices(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].count_ones() as usize == k).collect()
    }

    /// Indices of the basis elements of bidegree (p, q).
    pub fn bidegree_indices(&self, p: usize, q: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.bidegree_of(self.basis[i]) == (p, q)).collect()
    }

    /// Builds and validates the complex (d² = 0).
    pub fn build(model: &LieAlgebraModel) -> Result<InvariantComplex, super::model::ModelError> {
        model.validate()?;
        Ok(Self::build_unchecked(model))
    }

    pub(crate) fn build_unchecked(model: &LieAlgebraModel) -> InvariantComplex {
        let n = model.n;
        let total = 2 * n;
        let low = (1u32 << n) - 1;
        let mut basis: Vec<u32> = (0..(1u32 << total)).collect();
        basis.sort_by_key(|&m| (m.count_ones(), (m & low).count_ones(), m));
        let index: HashMap<u32, usize> = basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();

        // d on generators
        let mut dgen: Vec<Sparse> = vec![Sparse::new(); total];
        for (l, terms) in model.structure.iter().enumerate() {
            for t in terms {
                let (a, b) = (1u32 << t.left, 1u32 << t.right);
                if let Some(s) = wedge_sign(a, b) {
                    add_term(&mut dgen[l], a | b, if s > 0 { t.coeff.clone() } else { t.coeff.neg() });
                }
                // conjugate equation for ζ̄_l
                let cl = if t.left < n { t.left + n } else { t.left - n };
                let cr = if t.right < n { t.right + n } else { t.right - n };
                let (a, b) = (1u32 << cl, 1u32 << cr);
                if let Some(s) = wedge_sign(a, b) {
                    let c = t.coeff.conj();
                    add_term(&mut dgen[n + l], a | b, if s > 0 { c } else { c.neg() });
                }
            }
        }

        let dim = basis.len();
        let mut del = ExactMatrix::zeros(dim, dim);
        let mut delbar = ExactMatrix::zeros(dim, dim);
        for (col, &m) in basis.iter().enumerate() {
            let p = (m & low).count_ones();
            let mut image = Sparse::new();
            let mut rest = m;
            while rest != 0 {
                let g = rest.trailing_zeros();
                rest &= rest - 1;
                let prefix = m & ((1u32 << g) - 1);
                let suffix = m & !((1u32 << (g + 1)) - 1);
                let lead = if prefix.count_ones() % 2 == 0 { 1 } else { -1 };
                for (dm, c) in &dgen[g as usize] {
                    let (Some(s1), Some(s2)) = (wedge_sign(prefix, *dm), wedge_sign(prefix | dm, suffix)) else {
                        continue;
                    };
                    let s = lead * s1 * s2;
                    add_term(&mut image, prefix | dm | suffix, if s > 0 { c.clone() } else { c.neg() });
                }
            }
            for (target, c) in image {
                let row = index[&target];
                if (target & low).count_ones() > p {
                    del.set(row, col, c);
                } else {
                    delbar.set(row, col, c);
                }
            }
        }
        InvariantComplex { model: model.clone(), n, basis, index, del, delbar }
    }

    pub fn d(&self) -> ExactMatrix {
        self.del.add(&self.delbar)
    }

    pub fn d_squared_vanishes(&self) -> bool {
        let d = self.d();
        d.mul(&d).is_zero()
    }

    /// ∂² = 0, ∂̄² = 0 and ∂∂̄ + ∂̄∂ = 0.
    pub fn double_complex_identities(&self) -> (bool, bool, bool) {
        (
            self.del.mul(&self.del).is_zero(),
            self.delbar.mul(&self.delbar).is_zero(),
            self.del.mul(&self.delbar).add(&self.delbar.mul(&self.del)).is_zero(),
        )
    }

    /// Image of a basis monomial under ∂ (resp. ∂̄), as (mask, coefficient) pairs.
    pub fn apply_to_monomial(&self, mask: u32, holomorphic: bool) -> Vec<(u32, GaussRational)> {
        let m = if holomorphic { &self.del } else { &self.delbar };
        let col = self.index_of(mask);
        (0..self.dim()).filter(|&r| !m.get(r, col).is_zero()).map(|r| (self.basis[r], m.get(r, col).clone())).collect()
    }

    /// Monomial for ζ_{j} (1-based) or ζ̄_{j}.
    pub fn generator(&self, j: usize, conj: bool) -> u32 {
        1u32 << (if conj { self.n + j - 1 } else { j - 1 })
    }
}
