//! Seeded generators for test data: rational functions, metrics, twist functions, forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::form::{basis, Form};
use crate::scalar::{GaussRational, Poly, RationalFunction, RingError, ScalarRing};

pub struct Sampler {
    rng: ChaCha8Rng,
    pub n: usize,
    pub degree_bound: usize,
}

impl Sampler {
    pub fn new(n: usize, seed: u64, degree_bound: usize) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), n, degree_bound }
    }

    fn small(&mut self, lim: i64) -> GaussRational {
        let re = self.rng.gen_range(-lim..=lim);
        let im = self.rng.gen_range(-lim..=lim);
        let den = if self.rng.gen_bool(0.5) { 1 } else { 2 };
        GaussRational::from_parts((re, den), (im, den))
    }

    /// Random polynomial of total degree in 1..=bound with a few terms; no constant term.
    pub fn poly_no_constant(&mut self, bound: usize) -> Poly {
        let nv = 2 * self.n;
        let mut p = Poly::zero(nv);
        if bound == 0 {
            return p;
        }
        let terms = 2 + self.rng.gen_range(0..=nv);
        for _ in 0..terms {
            let d = self.rng.gen_range(1..=bound);
            let mut e = vec![0u16; nv];
            for _ in 0..d {
                e[self.rng.gen_range(0..nv)] += 1;
            }
            let c = self.small(2);
            p = p.add(&Poly::monomial(e, c));
        }
        p
    }

    /// Homogeneous polynomial of the given degree, each monomial containing
    /// at least one z and one zbar variable.
    pub fn poly_mixed_homogeneous(&mut self, degree: usize, terms: usize) -> Poly {
        let n = self.n;
        let mut p = Poly::zero(2 * n);
        for _ in 0..terms {
            let mut e = vec![0u16; 2 * n];
            e[self.rng.gen_range(0..n)] += 1;
            e[n + self.rng.gen_range(0..n)] += 1;
            for _ in 2..degree {
                e[self.rng.gen_range(0..2 * n)] += 1;
            }
            let c = self.small(2);
            p = p.add(&Poly::monomial(e, c));
        }
        p
    }

    /// 1 + Σ m_j |z_j|^2 with m_j in {0, 1}; positive everywhere.
    fn denominator(&mut self) -> Poly {
        let n = self.n;
        let mut d = Poly::one(2 * n);
        for j in 0..n {
            if self.rng.gen_bool(0.5) {
                let mut e = vec![0u16; 2 * n];
                e[j] = 1;
                e[n + j] = 1;
                d = d.add(&Poly::monomial(e, GaussRational::one()));
            }
        }
        d
    }

    /// Complex-valued rational function.
    pub fn function(&mut self) -> RationalFunction {
        let c = self.small(3);
        let num = self.poly_no_constant(self.degree_bound).add(&Poly::constant(2 * self.n, c));
        let den = self.denominator();
        RationalFunction::from_parts(self.n, num, den).expect("positive denominator")
    }

    /// Real rational function close to `offset` near the origin.
    pub fn real_function(&mut self, offset: i64) -> RationalFunction {
        let h = self.poly_no_constant(self.degree_bound).scale(&GaussRational::from_frac(1, 4));
        let num = h.add(&h.conj_swap(self.n)).add(&Poly::constant(2 * self.n, GaussRational::from_int(offset)));
        let den = self.denominator();
        RationalFunction::from_parts(self.n, num, den).expect("positive denominator")
    }

    /// Identity plus a small Hermitian perturbation with polynomial entries.
    pub fn metric_matrix(&mut self) -> Vec<Vec<RationalFunction>> {
        let n = self.n;
        let quarter = GaussRational::from_frac(1, 4);
        let mut g = vec![vec![RationalFunction::zero(&n); n]; n];
        for a in 0..n {
            for b in a..n {
                let h = self.poly_no_constant(self.degree_bound.max(1)).scale(&quarter);
                if a == b {
                    let re = h.add(&h.conj_swap(n)).add(&Poly::one(2 * n));
                    g[a][a] = RationalFunction::from_poly(n, re);
                } else {
                    let c = self.small(1).mul(&quarter);
                    let h = h.add(&Poly::constant(2 * n, c));
                    g[b][a] = RationalFunction::from_poly(n, h.conj_swap(n));
                    g[a][b] = RationalFunction::from_poly(n, h);
                }
            }
        }
        g
    }

    /// Form with random coefficients in every listed bidegree.
    pub fn form(&mut self, bidegrees: &[(usize, usize)]) -> Form<RationalFunction> {
        let mut u = Form::zero(self.n, &self.n);
        for &(p, q) in bidegrees {
            for key in basis(self.n, p, q) {
                u.set(key, self.function());
            }
        }
        u
    }

    /// Base point with small Gaussian-rational coordinates.
    pub fn base_point(&mut self) -> Vec<GaussRational> {
        (0..self.n)
            .map(|_| {
                let a = self.rng.gen_range(-3..=3);
                let b = self.rng.gen_range(-3..=3);
                GaussRational::from_parts((a, 8), (b, 8))
            })
            .collect()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }
}

/// All bidegrees (p, q) with p, q ≤ n.
pub fn all_bidegrees(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            v.push((p, q));
        }
    }
    v
}

/// Random form of one bidegree: the spec-level entry point.
pub fn random_form(n: usize, bidegree: (usize, usize), seed: u64, degree_bound: usize) -> Form<RationalFunction> {
    Sampler::new(n, seed, degree_bound).form(&[bidegree])
}

/// Pushes a form with rational-function coefficients into another ring.
pub fn map_form<R: ScalarRing>(u: &Form<RationalFunction>, ctx: &R::Ctx, vars: &[R]) -> Result<Form<R>, RingError> {
    let mut out = Form::zero(u.n, ctx);
    for (k, v) in &u.comps {
        out.set(*k, v.map_into(ctx, vars)?);
    }
    Ok(out)
}
