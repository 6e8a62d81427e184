use std::collections::HashSet;

use etwist_core::operators::library::*;
use etwist_core::operators::{Mutation, OperatorExpr};
use etwist_core::registry::*;
use proptest::prelude::*;

fn ids(f: &str) -> Vec<&'static str> {
    list_identities(&Filter::parse(f).unwrap()).iter().map(|c| c.id).collect()
}

#[test]
fn catalogue_shape() {
    let cases = all_cases();
    assert_eq!(cases.len(), 41);
    let unique: HashSet<_> = cases.iter().map(|c| c.id).collect();
    assert_eq!(unique.len(), cases.len());
    assert!(cases.iter().all(|c| !c.parts.is_empty()));
}

#[test]
fn filters_select_expected_cases() {
    assert_eq!(ids("section=appendix"), vec!["F1", "F2", "F3", "F4", "F5", "F6", "F7"]);
    assert_eq!(ids("special_metric=gamma_eta"), vec!["D2", "D3"]);
    assert_eq!(ids("id=A4"), vec!["A4"]);
    assert_eq!(ids("id=a4|B3"), vec!["A4", "B3"]);
    assert_eq!(ids("").len(), 41);
    assert_eq!(ids("section=twist,id=B3"), Vec::<&str>::new());
}

#[test]
fn filter_errors() {
    assert_eq!(Filter::parse("colour=red"), Err(FilterError::UnknownKey("colour".into())));
    assert!(matches!(Filter::parse("section"), Err(FilterError::Malformed(_))));
    assert!(matches!(Filter::parse("metric=round"), Err(FilterError::BadValue { .. })));
}

#[test]
fn empty_selection_succeeds() {
    let r = run_suite(&Filter::parse("id=Z9").unwrap(), &SuiteOptions::new(1, 0, vec![2]));
    assert!(r.reports.is_empty());
    assert!(r.all_passed());
}

#[test]
fn single_case_exact() {
    let r = run_suite(&Filter::parse("id=A1").unwrap(), &SuiteOptions::new(2, 3, vec![2]));
    assert_eq!(r.reports.len(), 1);
    assert!(r.all_passed(), "{:?}", r.reports[0].counterexample);
}

fn modular(trials: usize, seed: u64) -> SuiteOptions {
    let mut o = SuiteOptions::new(trials, seed, vec![2]);
    o.field = Field::Modular;
    o
}

#[test]
fn suite_reports_are_deterministic() {
    let f = Filter::parse("id=A2|C1|F1").unwrap();
    let a = serde_json::to_string(&run_suite(&f, &modular(2, 9))).unwrap();
    let b = serde_json::to_string(&run_suite(&f, &modular(2, 9))).unwrap();
    assert_eq!(a, b);
}

#[test]
fn rough_identity_with_constant_twist_and_flat_metric() {
    let case = all_cases().into_iter().find(|c| c.id == "B5").unwrap();
    let mut o = CheckOptions::new(2, 2, 5);
    o.field = Field::Modular;
    o.metric = Some(MetricKind::Flat);
    o.twist = Some(TwistKind::Constant);
    let r = check_identity(&case, &o);
    assert_eq!(r.status, Status::Pass, "{:?} {:?}", r.counterexample, r.error);

    // the torsion terms vanish identically in that configuration
    let zero_part = |label: &'static str, e: OperatorExpr| Part { label, statement: label, check: Check::Op { lhs: e, rhs: zero() } };
    let torsion = IdentityCase {
        id: "B5t",
        section: Section::Commutation,
        title: "torsion terms with constant twist and flat metric",
        requires: Requires { metric: MetricKind::Flat, twist: TwistKind::Constant, aux: 0 },
        parts: vec![
            zero_part("tau_eta", tau_eta()),
            zero_part("tau_m", tau_bar_m()),
            zero_part("[Dm,τm*]", br(big_dbar_m(), adj(tau_bar_m()))),
            zero_part("[D,τη*]", br(big_d(), adj(tau_eta()))),
        ],
        degree_bound: 2,
    };
    let r = check_identity(&torsion, &o);
    assert_eq!(r.status, Status::Pass, "{:?} {:?}", r.counterexample, r.error);
}

#[test]
fn generic_metric_has_torsion() {
    let nonzero = IdentityCase {
        id: "T0",
        section: Section::Twist,
        title: "τ_η vanishes (expected to fail for a generic metric)",
        requires: Requires { metric: MetricKind::Generic, twist: TwistKind::Generic, aux: 0 },
        parts: vec![Part { label: "tau", statement: "τ_η = 0", check: Check::Op { lhs: tau_eta(), rhs: zero() } }],
        degree_bound: 2,
    };
    let mut o = CheckOptions::new(2, 1, 1);
    o.field = Field::Modular;
    let r = check_identity(&nonzero, &o);
    assert_eq!(r.status, Status::Fail);
    let cx = r.counterexample.unwrap();
    assert_eq!(cx.statement, "τ_η = 0");
    assert!(!cx.residual.is_empty());
}

#[test]
fn mutations_are_detected() {
    let catalogue = Mutation::catalogue();
    assert!(catalogue.len() >= 10);
    // a cheap subset here; the acceptance target sweeps the whole catalogue
    let f = Filter::parse("section=twist").unwrap();
    let mut detected = 0;
    for m in catalogue.iter().take(4) {
        let mut o = modular(1, 7);
        o.mutation = Some(*m);
        let r = run_suite(&f, &o);
        if !r.all_passed() {
            detected += 1;
            assert!(r.failures().any(|x| x.counterexample.is_some() || x.error.is_some()));
        }
    }
    assert!(detected >= 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn standard_relations_hold_for_any_seed(seed in any::<u64>()) {
        let r = run_suite(&Filter::parse("id=F1|F2").unwrap(), &modular(1, seed));
        prop_assert!(r.all_passed());
    }

    #[test]
    fn id_filters_select_exactly_their_ids(mask in 1u64..(1 << 12)) {
        let all: Vec<&str> = all_cases().iter().map(|c| c.id).take(12).collect();
        let chosen: Vec<&str> = all.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, s)| *s).collect();
        let spec = format!("id={}", chosen.join("|"));
        let got: Vec<&str> = list_identities(&Filter::parse(&spec).unwrap()).iter().map(|c| c.id).collect();
        prop_assert_eq!(got, chosen);
    }
}
