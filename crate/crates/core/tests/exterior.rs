use std::time::Instant;

use etwist_core::exterior::random::{all_bidegrees, Sampler};
use etwist_core::exterior::{del_star_via_hodge, delbar_star_via_hodge, Form, MultiIndexPair};
use etwist_core::operators::library::*;
use etwist_core::operators::DegreeScalar;
use etwist_core::registry::{Instance, MetricKind, TwistKind};
use etwist_core::scalar::{GaussRational, ScalarRing};

fn instance(n: usize, kind: MetricKind, seed: u64) -> Instance {
    let mut s = Sampler::new(n, seed, 2);
    Instance::sample(n, kind, TwistKind::Generic, 1, &mut s)
}

fn random_u(n: usize, seed: u64) -> Form<etwist_core::scalar::RationalFunction> {
    Sampler::new(n, seed ^ 0x55, 2).form(&all_bidegrees(n))
}

#[test]
fn lefschetz_lambda_commutator_is_counting_operator() {
    for n in 1..=3 {
        let inst = instance(n, MetricKind::Generic, 11 + n as u64);
        let r = inst.realize::<GaussRational>(1, None).unwrap();
        let u = r.form(&random_u(n, 3)).unwrap();
        let lhs = r.eval.apply(&br(lefschetz(), lambda()), &u).unwrap();
        // [L, Λ] = (k - n) on k-forms
        let rhs = r.eval.apply(&deg(DegreeScalar::affine(1, 1, -1, 0)), &u).unwrap();
        assert!(lhs.sub(&rhs).is_zero(), "n = {n}");
    }
}

#[test]
fn normalisation_anchors() {
    let n = 3;
    let inst = instance(n, MetricKind::Flat, 1);
    let r = inst.realize::<GaussRational>(0, None).unwrap();
    let m = &r.eval.metric;
    let dz = Form::dz(n, &r.ctx, 0, false);
    assert_eq!(m.inner(&dz, &dz).constant_term().clone(), GaussRational::one());
    let w = m.omega();
    let lw = m.lambda(&w);
    assert_eq!(lw.coeff(&MultiIndexPair::new(0, 0)).constant_term().clone(), GaussRational::from_int(n as i64));
    assert_eq!(m.inner(&w, &w).constant_term().clone(), GaussRational::from_int(n as i64));
}

#[test]
fn star_squares_to_sign() {
    for n in 1..=3 {
        let inst = instance(n, MetricKind::Generic, 7 + n as u64);
        let r = inst.realize::<GaussRational>(0, None).unwrap();
        let u = r.form(&random_u(n, 5)).unwrap();
        let m = &r.eval.metric;
        let ss = m.hodge_star(&m.hodge_star(&u));
        let mut expect = Form::zero(n, &r.ctx);
        for (k, v) in &u.comps {
            let c = if k.degree() % 2 == 0 { v.clone() } else { v.neg() };
            expect.set(*k, c);
        }
        assert!(ss.sub(&expect).is_zero(), "n = {n}");
    }
}

#[test]
fn integration_by_parts_adjoints_agree_with_hodge_adjoints() {
    for n in 1..=3 {
        let inst = instance(n, MetricKind::Generic, 21 + n as u64);
        let t = Instant::now();
        let r = inst.realize::<GaussRational>(1, None).unwrap();
        let u = r.form(&random_u(n, 9)).unwrap();
        let m = &r.eval.metric;
        let a = r.eval.apply(&del_star(), &u).unwrap();
        let b = del_star_via_hodge(m, &u);
        assert!(a.sub(&b).is_determined());
        assert!(a.sub(&b).is_zero(), "del star, n = {n}");
        let a = r.eval.apply(&delbar_star(), &u).unwrap();
        let b = delbar_star_via_hodge(m, &u);
        assert!(a.sub(&b).is_zero(), "delbar star, n = {n}");
        eprintln!("adjoints n={n}: {:?}", t.elapsed());
    }
}

#[test]
fn flat_kahler_identities() {
    let n = 2;
    let inst = instance(n, MetricKind::Flat, 2);
    let r = inst.realize::<GaussRational>(1, None).unwrap();
    let u = r.form(&random_u(n, 4)).unwrap();
    let lhs = r.eval.apply(&del_star(), &u).unwrap();
    let rhs = r.eval.apply(&(scal(i()) * br(lambda(), delbar())), &u).unwrap();
    assert!(lhs.sub(&rhs).is_zero());
    let lhs = r.eval.apply(&delbar_star(), &u).unwrap();
    let rhs = r.eval.apply(&(scal(-i()) * br(lambda(), del())), &u).unwrap();
    assert!(lhs.sub(&rhs).is_zero());
}

#[test]
fn timing_of_twisted_laplacian() {
    for n in [2usize, 3] {
        let inst = instance(n, MetricKind::Generic, 40 + n as u64);
        let t = Instant::now();
        let r = inst.realize::<GaussRational>(2, None).unwrap();
        let u = r.form(&Sampler::new(n, 1, 2).form(&[(1, 1)])).unwrap();
        let a = r.eval.apply(&delta_eta(), &u).unwrap();
        eprintln!("n={n} delta_eta on (1,1): {:?} determined={}", t.elapsed(), a.is_determined());
    }
}
