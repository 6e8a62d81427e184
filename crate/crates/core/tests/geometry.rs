use etwist_core::geometry::*;
use etwist_core::registry::gamma_matrix;
use etwist_core::scalar::{GaussRational, Poly, RationalFunction};
use etwist_core::spectral::{InvariantComplex, LieAlgebraModel};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn ball(n: usize, fill: usize) -> SampledDomain {
    SampledDomain::ball(n, 0.5, 0, fill, 11).unwrap()
}

fn rel_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let scale = a.iter().chain(b.iter()).map(|z| z.norm()).fold(1.0, f64::max);
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}

#[test]
fn domain_points_inside_and_reproducible() {
    let d = SampledDomain::ball(2, 0.7, 4, 100, 3).unwrap();
    assert!(d.len() > 100);
    for z in d.points() {
        assert!(z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() <= 0.7 + 1e-15);
    }
    assert_eq!(d, SampledDomain::ball(2, 0.7, 4, 100, 3).unwrap());
    assert_eq!(d.points(), SampledDomain::ball(2, 0.7, 4, 100, 3).unwrap().points());
    assert!(SampledDomain::ball(2, -1.0, 0, 5, 0).is_err());
    assert!(SampledDomain::ball(7, 0.5, 0, 5, 0).is_err());
}

#[test]
fn refinement_extends_the_sample_set() {
    let small = ball(2, 50);
    let big = ball(2, 200);
    assert_eq!(&big.points()[..50], small.points());
}

#[test]
fn constant_twist_has_zero_gamma_and_constants() {
    let w = Weight::Constant { value: 3.0 };
    let d = ball(2, 20);
    for z in d.points() {
        assert!(gamma_at(&w, z).unwrap().iter().all(|c| c.norm() == 0.0));
    }
    let c = estimate_constants(&w, RefMetric::Flat, &d).unwrap();
    assert_eq!((c.c1.value, c.c2.value), (0.0, 0.0));
    let rep = check_twisted_vanishing(&w, &d, true, DEFAULT_MARGIN).unwrap();
    assert_eq!(rep.hypotheses[0].verdict, Verdict::Fails);
    assert!(!rep.all_hold());
    assert!(matches!(estimate_constants(&w, RefMetric::Gamma, &d), Err(GeometryError::SingularMetric(_))));
}

#[test]
fn gamma_of_exponential_weight_matches_potential_formula() {
    for potential in [Potential::BallLog, Potential::Quadratic] {
        let d = ball(2, 200);
        assert_eq!(d.len(), 200);
        let w = Weight::exp_potential(potential, 1.0);
        for z in d.points() {
            let lhs = gamma_at(&w, z).unwrap();
            let rhs = gamma_from_potential(&potential.jet(z).unwrap());
            assert!(rel_diff(&lhs, &rhs) <= 1e-10);
        }
    }
}

#[test]
fn ball_gamma_is_positive() {
    let d = SampledDomain::ball(2, 0.9, 5, 200, 1).unwrap();
    let w = Weight::exp_potential(Potential::BallLog, 1.0);
    let field: Vec<_> = d.points().iter().map(|z| gamma_at(&w, z).unwrap()).collect();
    let res = check_positivity(&field, 0.0);
    assert!(res.holds && res.min_eigenvalue > 0.0);
}

#[test]
fn positivity_reports_indefinite_witness() {
    let id = DMatrix::<Complex64>::identity(2, 2);
    assert!(check_positivity(&[id.clone(), id.clone()], 0.0).holds);
    let mut bad = id.clone();
    bad[(1, 1)] = Complex64::new(-0.5, 0.0);
    let res = check_positivity(&[id.clone(), bad, id], 0.0);
    assert!(!res.holds);
    assert_eq!(res.index, 1);
    assert!((res.min_eigenvalue + 0.5).abs() < 1e-14);
}

#[test]
fn ball_c1_closed_form() {
    // with γ = H + a a^H and |a|²_H = r², |∂φ|²_γ = r²/(1+r²)
    let d = ball(2, 100);
    let w = Weight::exp_potential(Potential::BallLog, 1.0);
    for z in d.points() {
        let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        let [c1, _, _] = pointwise_constants(&w, RefMetric::Gamma, z).unwrap();
        assert!((c1 - (r2 / (1.0 + r2)).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn flat_norm_conventions() {
    let id = DMatrix::<Complex64>::identity(3, 3);
    // |ω|² = n and |dz_j| = 1 for the flat metric
    assert!((form11_norm(&id, &id).powi(2) - 3.0).abs() < 1e-14);
    let dz = nalgebra::DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]);
    assert!((covector_norm(&dz, &id) - 1.0).abs() < 1e-15);
}

#[test]
fn c1_scales_like_root_epsilon_in_potential_hessian() {
    let d = ball(2, 60);
    let base = estimate_constants(&Weight::exp_potential(Potential::BallLog, 1.0), RefMetric::PotentialHessian, &d).unwrap();
    for eps in [0.5, 0.1, 0.01] {
        let c = estimate_constants(&Weight::exp_potential(Potential::BallLog, eps), RefMetric::PotentialHessian, &d).unwrap();
        assert!((c.c1.value - eps.sqrt() * base.c1.value).abs() < 1e-12 * base.c1.value.max(1.0));
    }
}

#[test]
fn rescaling_invariance_numeric() {
    let d = ball(2, 40);
    for w in [Weight::exp_potential(Potential::BallLog, 0.7), Weight::exp_potential(Potential::Quadratic, 2.0)] {
        let scaled = w.rescaled(5.0);
        for z in d.points() {
            assert!(rel_diff(&gamma_at(&w, z).unwrap(), &gamma_at(&scaled, z).unwrap()) < 1e-12);
        }
        let a = estimate_constants(&w, RefMetric::Gamma, &d).unwrap();
        let b = estimate_constants(&scaled, RefMetric::Gamma, &d).unwrap();
        assert!((a.c1.value - b.c1.value).abs() < 1e-12);
    }
}

fn sample_eta(n: usize) -> RationalFunction {
    // η = 1/(1 + Σ|z_j|² + z_1 z̄_1² + z̄_1 z_1²)
    let mut den = Poly::one(2 * n);
    for j in 0..n {
        den = den.add(&Poly::var(2 * n, j).mul(&Poly::var(2 * n, n + j)));
    }
    let mut e = vec![0u16; 2 * n];
    e[0] = 1;
    e[n] = 2;
    den = den.add(&Poly::monomial(e.clone(), GaussRational::from_frac(1, 4)));
    e[0] = 2;
    e[n] = 1;
    den = den.add(&Poly::monomial(e, GaussRational::from_frac(1, 4)));
    RationalFunction::from_parts(n, Poly::one(2 * n), den).unwrap()
}

#[test]
fn gamma_symbolic_forms_agree_and_rescale_exactly() {
    use etwist_core::scalar::ScalarRing;
    let n = 2;
    let eta = sample_eta(n);
    let direct = gamma_symbolic(n, &eta);
    let fast = gamma_matrix(n, &eta);
    assert_eq!(direct, fast);
    let scaled = eta.scale(&GaussRational::from_frac(7, 3));
    assert_eq!(gamma_matrix(n, &scaled), fast);
}

#[test]
fn eligible_bidegrees_small_cases() {
    assert_eq!(eligible_bidegrees(2), vec![(0, 1), (2, 1)]);
    assert_eq!(eligible_bidegrees(3), vec![(0, 1), (0, 2), (3, 1), (3, 2)]);
}

#[test]
fn eligible_bidegrees_match_brute_force() {
    for n in 1..=4 {
        let brute: Vec<(usize, usize)> = (0..=n)
            .flat_map(|p| (0..=n).map(move |q| (p, q)))
            .filter(|&(p, q)| (p > q && p + q >= n + 1) || (p < q && p + q + 1 <= n))
            .collect();
        assert_eq!(eligible_bidegrees(n), brute, "n = {n}");
    }
}

#[test]
fn verdict_margin_band() {
    assert_eq!(compare_below(0.5, 1.0, 0.05), Verdict::Holds);
    assert_eq!(compare_below(0.97, 1.0, 0.05), Verdict::Inconclusive);
    assert_eq!(compare_below(1.03, 1.0, 0.05), Verdict::Inconclusive);
    assert_eq!(compare_below(1.2, 1.0, 0.05), Verdict::Fails);
}

#[test]
fn ball_example_threshold_report() {
    let d = ball(2, 200);
    let rep = check_twisted_vanishing(&Weight::exp_potential(Potential::BallLog, 1.0), &d, true, DEFAULT_MARGIN).unwrap();
    assert_eq!(rep.eligible_bidegrees, vec![(0, 1), (2, 1)]);
    assert_eq!(rep.hypotheses[0].verdict, Verdict::Holds);
    assert_eq!(rep.hypotheses[1].verdict, Verdict::Declared);
    // C_1 ≈ 0.5/√1.25 is far above any threshold of size ~1/50
    assert_eq!(rep.hypotheses[2].verdict, Verdict::Fails);
    let c = rep.constants.unwrap();
    assert!(c.c1.value <= 0.5 / 1.25f64.sqrt() + 1e-12);
    assert!(c.c12(2, 1) >= 4.0);
}

#[test]
fn epsilon_family_interval() {
    let d = ball(2, 200);
    let rep = check_epsilon_family(Potential::BallLog, &d, true, DEFAULT_MARGIN).unwrap();
    let [lo, hi] = rep.epsilon_interval.expect("nonempty interval");
    assert_eq!(lo, 0.0);
    // C_1(ε)² = εS/(1+εS) with S = max r² ≤ 1/4 gives ε_max ≥ t²/(S(1-t²)) for t = 0.95·threshold
    let t = 0.95 * potential_threshold(2);
    let bound = t * t / (0.25 * (1.0 - t * t));
    assert!(hi >= bound * (1.0 - 1e-6), "{hi} vs {bound}");
    assert_eq!(rep.hypotheses[1].verdict, Verdict::Holds);
    let inside = check_potential_vanishing(Potential::BallLog, hi * 0.5, &d, true, DEFAULT_MARGIN).unwrap();
    assert!(inside.all_hold());
}

#[test]
fn constant_twist_curvature_on_flat_torus_is_zero() {
    // on the model ∂∂̄ + ∂̄∂ = 0, so F_η vanishes in every bidegree; it equals
    // (p-q)(p+q-n) Id only where that scalar is 0
    for n in 2..=3 {
        let cx = InvariantComplex::build(&LieAlgebraModel::torus(n)).unwrap();
        for p in 0..=n {
            for q in 0..=n {
                let rep = check_curvature_vanishing_on_model(&cx, 1.0, p, q, DEFAULT_MARGIN).unwrap();
                let m = rep.model_check.unwrap();
                assert!(m.eigenvalues.iter().all(|&x| x == 0.0));
                assert_eq!(m.dbar_omega_norm, 0.0);
                assert_eq!(m.matches_scalar, m.scalar_reference == 0.0);
            }
        }
    }
}

#[test]
fn iwasawa_curvature_report() {
    let cx = InvariantComplex::build(&LieAlgebraModel::iwasawa()).unwrap();
    let rep = check_curvature_vanishing_on_model(&cx, 1.0, 3, 0, DEFAULT_MARGIN).unwrap();
    let m = rep.model_check.as_ref().unwrap();
    // ∂̄ω = i ζ_3∧ζ̄_1∧ζ̄_2 has unit norm, so C_3 = 2√3
    assert!((m.dbar_omega_norm - 1.0).abs() < 1e-12);
    assert!((m.threshold - 4.0 * 3f64.sqrt()).abs() < 1e-12);
    assert_eq!(m.dim, 1);
    assert_eq!(rep.hypotheses[0].verdict, Verdict::Fails);
    assert_eq!(rep.hypotheses[1].verdict, Verdict::Fails);
}

#[test]
fn curvature_hypothesis_on_chart() {
    let d = ball(2, 50);
    let small = Weight::exp_potential(Potential::Quadratic, 1e-3);
    let rep = check_curvature_vanishing(&small, &d, 2, 1, DEFAULT_MARGIN).unwrap();
    assert_eq!(rep.hypotheses[0].verdict, Verdict::Holds);
    assert_eq!(rep.hypotheses[1].verdict, Verdict::NotChecked);
    let steep = Weight::exp_potential(Potential::Quadratic, 50.0);
    let rep = check_curvature_vanishing(&steep, &d, 2, 1, DEFAULT_MARGIN).unwrap();
    assert_eq!(rep.hypotheses[0].verdict, Verdict::Fails);
    assert!(check_curvature_vanishing(&small, &d, 3, 0, DEFAULT_MARGIN).is_err());
}

#[test]
fn nonpositive_twist_rejected() {
    let d = ball(2, 5);
    let w = Weight::Constant { value: -1.0 };
    assert!(matches!(estimate_constants(&w, RefMetric::Flat, &d), Err(GeometryError::NonPositiveTwist { .. })));
}

#[test]
fn check_kind_names_round_trip() {
    for k in CheckKind::ALL {
        assert_eq!(CheckKind::parse(k.name()), Some(k));
    }
    assert_eq!(CheckKind::parse("5.2"), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn constants_monotone_under_refinement(seed in 0u64..1000, extra in 1usize..60) {
        let w = Weight::exp_potential(Potential::BallLog, 0.3);
        let small = SampledDomain::ball(2, 0.6, 0, 20, seed).unwrap();
        let big = SampledDomain::ball(2, 0.6, 0, 20 + extra, seed).unwrap();
        let a = estimate_constants(&w, RefMetric::Gamma, &small).unwrap();
        let b = estimate_constants(&w, RefMetric::Gamma, &big).unwrap();
        prop_assert!(b.c1.value >= a.c1.value && b.c2.value >= a.c2.value && b.c_phi.value >= a.c_phi.value);
        prop_assert!(a.c1.value >= 0.0 && a.c2.value >= 0.0 && a.c_phi.value >= 0.0);
    }

    #[test]
    fn rescaled_constants_agree(lambda in 0.01f64..100.0, eps in 0.05f64..3.0) {
        let d = SampledDomain::ball(2, 0.5, 0, 10, 5).unwrap();
        let w = Weight::exp_potential(Potential::Quadratic, eps);
        let a = estimate_constants(&w, RefMetric::Gamma, &d).unwrap();
        let b = estimate_constants(&w.rescaled(lambda), RefMetric::Gamma, &d).unwrap();
        prop_assert!((a.c1.value - b.c1.value).abs() < 1e-10);
        prop_assert!((a.c2.value - b.c2.value).abs() < 1e-9 * a.c2.value.max(1.0));
    }
}
