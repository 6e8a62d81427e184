use etwist_core::scalar::GaussRational;
use etwist_core::spectral::complex::wedge_sign;
use etwist_core::spectral::*;
use proptest::prelude::*;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn iwasawa() -> InvariantComplex {
    InvariantComplex::build(&LieAlgebraModel::iwasawa()).unwrap()
}

#[test]
fn iwasawa_structure_equations() {
    let cx = iwasawa();
    let z3 = cx.generator(3, false);
    let image = cx.apply_to_monomial(z3, true);
    let target = cx.generator(1, false) | cx.generator(2, false);
    assert_eq!(image, vec![(target, GaussRational::one().neg())]);
    assert!(cx.apply_to_monomial(z3, false).is_empty());
    for j in 1..=2 {
        assert!(cx.apply_to_monomial(cx.generator(j, false), true).is_empty());
        assert!(cx.apply_to_monomial(cx.generator(j, true), false).is_empty());
    }
    assert_eq!(cx.double_complex_identities(), (true, true, true));
    // ∂ : A^{1,0} → A^{2,0} has rank 1
    let rows = cx.bidegree_indices(2, 0);
    let cols = cx.bidegree_indices(1, 0);
    assert_eq!(cx.del.submatrix(&rows, &cols).rank(), 1);
}

#[test]
fn iwasawa_frolicher_pages() {
    let cx = iwasawa();
    let t = fss_pages(&cx, 3).unwrap();
    assert_eq!(t.total(1, 1), 5);
    assert_eq!(t.dim(1, 1, 0), 3);
    assert_eq!(t.dim(1, 0, 1), 2);
    assert_eq!(t.betti, vec![1, 4, 8, 10, 8, 4, 1]);
    assert_eq!(t.total(2, 1), 4);
    assert_eq!(t.degeneration_page, 2);
    assert!(t.axioms_hold());
}

#[test]
fn torus_pages_are_binomial() {
    for n in 2..=3 {
        let cx = InvariantComplex::build(&LieAlgebraModel::torus(n)).unwrap();
        let t = fss_pages(&cx, 2).unwrap();
        for p in 0..=n {
            for q in 0..=n {
                assert_eq!(t.dim(1, p, q), binom(n, p) * binom(n, q));
            }
        }
        for k in 0..=2 * n {
            assert_eq!(t.betti[k], binom(2 * n, k));
        }
        assert_eq!(t.degeneration_page, 1);
    }
}

#[test]
fn builtin_files_match_constructors() {
    assert_eq!(LieAlgebraModel::builtin("torus2").unwrap().structure, LieAlgebraModel::torus(2).structure);
    assert!(matches!(LieAlgebraModel::builtin("nope"), Err(ModelError::UnknownBuiltin(_))));
}

#[test]
fn non_integrable_structure_rejected() {
    let src = r#"
n = 2
[[structure]]
target = 1
terms = [{ coeff = "1", left = "zb1", right = "zb2" }]
"#;
    assert!(matches!(LieAlgebraModel::from_toml(src), Err(ModelError::NotIntegrable(1))));
}

#[test]
fn model_file_errors() {
    assert!(matches!(LieAlgebraModel::from_toml("n = 2\nbogus = 1"), Err(ModelError::Parse(_))));
    assert!(matches!(LieAlgebraModel::from_toml("n = 9"), Err(ModelError::BadDimension(9))));
    let bad_metric = "n = 2\nmetric = [[\"1\", \"0\"], [\"0\", \"-1\"]]";
    assert!(matches!(LieAlgebraModel::from_toml(bad_metric), Err(ModelError::BadMetric(_))));
    let bad_gen = "n = 2\n[[structure]]\ntarget = 1\nterms = [{ coeff = \"1\", left = \"z1\", right = \"w2\" }]";
    assert!(matches!(LieAlgebraModel::from_toml(bad_gen), Err(ModelError::BadGenerator(_))));
}

#[test]
fn non_closed_structure_rejected() {
    // dζ2 = ζ1∧ζ̄1 with dζ1 = ζ1∧ζ̄1 is integrable but d² ≠ 0
    let src = r#"
n = 2
[[structure]]
target = 1
terms = [{ coeff = "1", left = "z2", right = "zb2" }]
[[structure]]
target = 2
terms = [{ coeff = "1", left = "z1", right = "zb2" }]
"#;
    assert!(matches!(LieAlgebraModel::from_toml(src), Err(ModelError::NotClosed)));
}

#[test]
fn iwasawa_degree_one_spectrum_at_half() {
    // on A^1 only ζ3 and ζ̄3 fail to be closed: d_h ζ3 = -h ζ1∧ζ2, d_h ζ̄3 = -ζ̄1∧ζ̄2
    let nc = NumericComplex::new(&iwasawa());
    let op = assemble_laplacian(&nc, LaplacianKind::DeltaH(0.5), Grading::Degree(1)).unwrap();
    let s = operator_spectrum(&op).unwrap();
    let expected = [0.0, 0.0, 0.0, 0.0, 0.25, 1.0];
    for (a, b) in s.clamped.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12, "{:?}", s.clamped);
    }
}

#[test]
fn torus_laplacians_vanish() {
    let cx = InvariantComplex::build(&LieAlgebraModel::torus(2)).unwrap();
    let table = sweep_h(&cx, 2, &dyadic_sweep(5)).unwrap();
    assert!(table.zero_count.iter().all(|&z| z == 6));
    assert!(table.delta.iter().all(|d| d.is_none()));
}

#[test]
fn iwasawa_degeneration_criterion() {
    let cx = iwasawa();
    let fss = fss_pages(&cx, 3).unwrap();
    for r in 1..=3 {
        for k in 0..=6 {
            let rep = verify_degeneration_criterion(&cx, &fss, r, k, &dyadic_sweep(8), 0.2).unwrap();
            assert!(rep.pass, "r={r} k={k}: {} vs {}", rep.decay_count, rep.page_dimension);
        }
    }
    let table = sweep_h(&cx, 1, &dyadic_sweep(8)).unwrap();
    assert!(table.zero_count.iter().all(|&z| z == 4));
}

#[test]
fn sweep_validation() {
    let cx = iwasawa();
    assert_eq!(sweep_h(&cx, 1, &[0.5, 0.25, 0.125]).unwrap_err(), SpectralError::BadSweep);
    assert_eq!(sweep_h(&cx, 1, &[0.5, 0.25, 0.25, 0.1]).unwrap_err(), SpectralError::BadSweep);
    let nc = NumericComplex::new(&cx);
    assert!(assemble_laplacian(&nc, LaplacianKind::DeltaH(0.0), Grading::Degree(1)).is_err());
    assert!(assemble_laplacian(&nc, LaplacianKind::DeltaH(1.0), Grading::Degree(7)).is_err());
}

#[test]
fn twisted_spectra_agree() {
    let cx = iwasawa();
    for eta in [0.3, 2.0, 7.5] {
        for k in 0..=6 {
            let rep = spectrum_equality_check(&cx, eta, k, 1e-9).unwrap();
            assert!(rep.pass, "eta={eta} k={k}: {rep:?}");
        }
    }
}

#[test]
fn constant_twist_curvature_vanishes() {
    // ∂∂̄ + ∂̄∂ = 0 on the model, so F_η is zero in every bidegree
    let cx = iwasawa();
    let nc = NumericComplex::new(&cx);
    for p in 0..=3 {
        for q in 0..=3 {
            let op = assemble_laplacian(&nc, LaplacianKind::Curvature(2.0), Grading::Bidegree(p, q)).unwrap();
            assert!(op.matrix.iter().all(|z| z.norm() < 1e-12));
        }
    }
}

#[test]
fn lefschetz_commutator_on_model() {
    let cx = InvariantComplex::build(&LieAlgebraModel::torus(3)).unwrap();
    let nc = NumericComplex::new(&cx);
    let l = &nc.lefschetz;
    let lam = nc.lambda();
    let comm = l * &lam - &lam * l;
    for i in 0..nc.bidegree.len() {
        let (p, q) = nc.bidegree[i];
        for j in 0..nc.bidegree.len() {
            let want = if i == j { (p + q) as f64 - 3.0 } else { 0.0 };
            assert!((comm[(i, j)].re - want).abs() < 1e-10 && comm[(i, j)].im.abs() < 1e-10);
        }
    }
}

proptest! {
    #[test]
    fn wedge_sign_antisymmetric(a in 0u32..64, b in 0u32..64) {
        match (wedge_sign(a, b), wedge_sign(b, a)) {
            (Some(x), Some(y)) => {
                let parity = (a.count_ones() * b.count_ones()) % 2;
                prop_assert_eq!(x * y, if parity == 0 { 1 } else { -1 });
            }
            (None, None) => prop_assert!(a & b != 0),
            _ => prop_assert!(false),
        }
    }

    #[test]
    fn delta_h_nonnegative(h in 0.01f64..4.0, k in 0usize..=6) {
        let nc = NumericComplex::new(&iwasawa());
        let s = operator_spectrum(&assemble_laplacian(&nc, LaplacianKind::DeltaH(h), Grading::Degree(k)).unwrap()).unwrap();
        prop_assert!(s.raw.iter().all(|&x| x > -1e-10));
    }
}

#[test]
fn spectrum_of_simple_matrices() {
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    let z = DMatrix::<Complex64>::zeros(3, 3);
    assert_eq!(spectrum(&z).unwrap().clamped, vec![0.0; 3]);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![4.0, 0.0, 1.0]).map(|x| Complex64::new(x, 0.0)));
    let s = spectrum(&d).unwrap();
    for (a, b) in s.clamped.iter().zip([0.0, 1.0, 4.0]) {
        assert!((a - b).abs() < 1e-14);
    }
    let mut nh = DMatrix::<Complex64>::zeros(2, 2);
    nh[(0, 1)] = Complex64::new(1.0, 0.0);
    assert!(matches!(spectrum(&nh), Err(SpectralError::NotHermitian(_))));
}

#[test]
fn harmonic_forms_count_betti_numbers() {
    for model in [LieAlgebraModel::torus(2), LieAlgebraModel::torus(3), LieAlgebraModel::iwasawa()] {
        let cx = InvariantComplex::build(&model).unwrap();
        let fss = fss_pages(&cx, 1).unwrap();
        let nc = NumericComplex::new(&cx);
        for k in 0..=2 * cx.n {
            let s = operator_spectrum(&assemble_laplacian(&nc, LaplacianKind::DeltaH(1.0), Grading::Degree(k)).unwrap()).unwrap();
            let zeros = s.clamped.iter().filter(|x| x.abs() < 1e-9).count();
            assert_eq!(zeros, fss.betti[k], "{} k={k}", model.name);
        }
    }
}

#[test]
fn flat_torus_delta_h_is_scaled_delta() {
    let cx = InvariantComplex::build(&LieAlgebraModel::torus(3)).unwrap();
    let nc = NumericComplex::new(&cx);
    for k in 0..=6 {
        let full = assemble_laplacian(&nc, LaplacianKind::DeltaH(1.0), Grading::Degree(k)).unwrap().matrix;
        for h in [0.5, 0.125] {
            let dh = assemble_laplacian(&nc, LaplacianKind::DeltaH(h), Grading::Degree(k)).unwrap().matrix;
            let diff = dh - full.clone() * num_complex::Complex64::new((1.0 + h * h) / 2.0, 0.0);
            assert!(diff.iter().all(|z| z.norm() < 1e-14));
        }
    }
}

#[test]
fn iwasawa_degree_one_kernel_at_unit_h() {
    let nc = NumericComplex::new(&iwasawa());
    let op = assemble_laplacian(&nc, LaplacianKind::DeltaH(1.0), Grading::Degree(1)).unwrap();
    assert_eq!(op.matrix.nrows(), 6);
    let s = operator_spectrum(&op).unwrap();
    assert_eq!(s.clamped.iter().filter(|&&x| x == 0.0).count(), 4);
}

#[test]
fn iwasawa_decay_counts() {
    let cx = iwasawa();
    let table = sweep_h(&cx, 1, &dyadic_sweep(8)).unwrap();
    let rep = estimate_decay(&table, 3, 0.2).unwrap();
    assert_eq!(rep.counts, vec![5, 4, 4]);
    // exact zeros decay at every rate, even with no tolerance
    let strict = estimate_decay(&table, 3, 0.0).unwrap();
    assert!(strict.counts[2] >= 4);
    for k in 0..=6 {
        let t = sweep_h(&cx, k, &dyadic_sweep(8)).unwrap();
        let r = estimate_decay(&t, 4, 0.2).unwrap();
        assert!(r.counts.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn unit_twist_operators_coincide() {
    let cx = iwasawa();
    let nc = NumericComplex::new(&cx);
    for k in 0..=6 {
        let a = assemble_laplacian(&nc, LaplacianKind::DeltaEta(1.0), Grading::Degree(k)).unwrap().matrix;
        let b = assemble_laplacian(&nc, LaplacianKind::DeltaOmegaEta(1.0), Grading::Degree(k)).unwrap().matrix;
        assert!((a - b).iter().all(|z| z.norm() < 1e-14));
    }
    let rep = spectrum_equality_check(&cx, 1.0 / 3.0, 2, 1e-9).unwrap();
    assert!(rep.pass && rep.max_transport_residual <= 1e-8);
}
