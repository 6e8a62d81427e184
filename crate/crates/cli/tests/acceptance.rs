//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the log. A
//! criterion that cannot hold as written fails faithfully; it does not fail
//! the target as long as the failure is exactly the known defect.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use etwist_core::geometry::{
    check_curvature_vanishing_on_model, check_epsilon_family, eligible_bidegrees, gamma_at, gamma_from_potential, gamma_symbolic,
    Potential, SampledDomain, Weight, DEFAULT_MARGIN,
};
use etwist_core::operators::library::*;
use etwist_core::operators::Mutation;
use etwist_core::registry::{
    all_cases, check_identity, gamma_matrix, list_identities, run_cases, CheckOptions, Field, Filter, IdentityCase, MetricKind, Part,
    Requires, Section, Status, SuiteOptions, TwistKind, Check,
};
use etwist_core::scalar::{GaussRational, Poly, RationalFunction, ScalarRing};
use etwist_core::spectral::{
    dyadic_sweep, estimate_decay, fss_pages, spectrum_equality_check, sweep_h, verify_degeneration_criterion, InvariantComplex,
    LieAlgebraModel,
};
use serde_json::Value;

// tolerances as pinned by the criteria
const SEEDS: usize = 5;
const SLOPE_TOL: f64 = 0.2;
const H_STEPS: usize = 8;
const SPECTRUM_REL_TOL: f64 = 1e-9;
const TRANSPORT_TOL: f64 = 1e-8;
const GAMMA_TOL: f64 = 1e-10;
const GAMMA_POINTS: usize = 200;
const MIN_MUTATIONS: usize = 10;

/// Case whose statement as catalogued does not hold; the corrected form is B10.
const DEFECTIVE_CASE: &str = "B8";

enum Finding {
    Pass,
    Fail,
    /// Fails, and the failure is exactly the documented defect.
    KnownDefect(&'static str),
}

struct Outcome {
    id: &'static str,
    result: Finding,
}

fn criterion(id: &'static str, f: impl FnOnce() -> (Finding, String)) -> Outcome {
    let t = Instant::now();
    let (result, detail) = f();
    let secs = t.elapsed().as_secs_f64();
    match &result {
        Finding::Pass => println!("PASS criterion {id} ({secs:.1}s): {detail}"),
        Finding::Fail => println!("FAIL criterion {id} ({secs:.1}s): {detail}"),
        Finding::KnownDefect(why) => println!("FAIL criterion {id} ({secs:.1}s): {detail} [known defect: {why}]"),
    }
    Outcome { id, result }
}

fn verdict(pass: bool) -> Finding {
    if pass {
        Finding::Pass
    } else {
        Finding::Fail
    }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn complex(model: LieAlgebraModel) -> InvariantComplex {
    InvariantComplex::build(&model).expect("built-in model")
}

fn identity_suite() -> (Finding, String) {
    let cases = list_identities(&Filter::all());
    let mut notes = Vec::new();
    let mut pass = true;
    let mut only_defect = true;
    // n = 3 runs over F_{p²}; the exact ring at n = 3 is available through
    // `etwist verify --n 3` but does not fit a test run
    for (n, field) in [(2, Field::Exact), (3, Field::Modular)] {
        let mut opts = SuiteOptions::new(SEEDS, 7, vec![n]);
        opts.field = field;
        let r = run_cases(&cases, &opts, |_| {});
        let failing: Vec<&str> = r.failures().map(|x| x.id.as_str()).collect();
        pass &= failing.is_empty();
        only_defect &= failing == [DEFECTIVE_CASE];
        notes.push(format!("n={n} {field:?}: {}/{} pass{}", r.passed, r.reports.len(), if failing.is_empty() { String::new() } else { format!(", failing {failing:?}") }));
    }
    let result = match (pass, only_defect) {
        (true, _) => Finding::Pass,
        (false, true) => Finding::KnownDefect("B8 does not hold as stated; B10 is the corrected identity and passes"),
        (false, false) => Finding::Fail,
    };
    (result, notes.join("; "))
}

fn kahler_case() -> IdentityCase {
    let op = |label: &'static str, statement: &'static str, lhs, rhs| Part { label, statement, check: Check::Op { lhs, rhs } };
    let ii = || scal(i());
    IdentityCase {
        id: "K",
        section: Section::Standard,
        title: "Kähler identities on flat space",
        requires: Requires { metric: MetricKind::Flat, twist: TwistKind::None, aux: 0 },
        parts: vec![
            op("tau", "τ = 0", tau(), zero()),
            op("i", "∂* = i[Λ,∂̄]", del_star(), ii() * br(lambda(), delbar())),
            op("ii", "∂̄* = -i[Λ,∂]", delbar_star(), -(ii() * br(lambda(), del()))),
            op("iii", "∂ = -i[∂̄*,L]", del(), -(ii() * br(delbar_star(), lefschetz()))),
            op("iv", "∂̄ = i[∂*,L]", delbar(), ii() * br(del_star(), lefschetz())),
            op("bkn", "Δ'' = Δ'", laplacian(delbar()), laplacian(del())),
            op("anti_i", "[∂,∂̄*] = 0", br(del(), delbar_star()), zero()),
            op("anti_ii", "[∂̄,∂*] = 0", br(delbar(), del_star()), zero()),
        ],
        degree_bound: 2,
    }
}

fn convention_anchor() -> (Finding, String) {
    let mut cases: Vec<IdentityCase> = all_cases().into_iter().filter(|c| ["F1", "F2", "F3", "F4", "F5"].contains(&c.id)).collect();
    cases.push(kahler_case());
    let mut failing = Vec::new();
    for c in &cases {
        let mut o = CheckOptions::new(2, SEEDS, 7);
        o.metric = Some(MetricKind::Flat);
        o.twist = Some(TwistKind::None);
        let r = check_identity(c, &o);
        if r.status != Status::Pass {
            failing.push(format!("{} {:?}", c.id, r.counterexample.map(|x| x.statement)));
        }
    }
    (verdict(failing.is_empty()), format!("F1-F5 and the Kähler identities, flat metric, exact: {} cases, failing {failing:?}", cases.len()))
}

fn mutation_sensitivity() -> (Finding, String) {
    let catalogue = Mutation::catalogue();
    let cases = all_cases();
    let mut undetected = Vec::new();
    for m in &catalogue {
        let detected = cases.iter().any(|c| {
            let mut o = CheckOptions::new(2, 1, 7);
            o.field = Field::Modular;
            o.mutation = Some(*m);
            check_identity(c, &o).status != Status::Pass
        });
        if !detected {
            undetected.push(m.name());
        }
    }
    (
        verdict(catalogue.len() >= MIN_MUTATIONS && undetected.is_empty()),
        format!("{} mutations, undetected {undetected:?}", catalogue.len()),
    )
}

fn torus_spectra() -> (Finding, String) {
    let h = dyadic_sweep(H_STEPS);
    let mut bad = Vec::new();
    for n in [2, 3] {
        let cx = complex(LieAlgebraModel::torus(n));
        let fss = fss_pages(&cx, 3).unwrap();
        for k in 0..=2 * n {
            let table = sweep_h(&cx, k, &h).unwrap();
            let decay = estimate_decay(&table, 3, SLOPE_TOL).unwrap();
            let dim = binom(2 * n, k);
            // every eigenvalue is identically zero, hence classified as decaying at every rate
            let exact = table.zero_count.iter().all(|&z| z == dim) && decay.slopes.iter().all(Option::is_none);
            for r in 1..=3 {
                if decay.count(r) != dim || fss.total(r, k) != dim || !exact {
                    bad.push((n, k, r));
                }
            }
        }
    }
    (verdict(bad.is_empty()), format!("n∈{{2,3}}, all k, r∈{{1,2,3}}: count = C(2n,k); mismatches {bad:?}"))
}

fn iwasawa_experiment() -> (Finding, String) {
    let cx = complex(LieAlgebraModel::iwasawa());
    let fss = fss_pages(&cx, 3).unwrap();
    let h = dyadic_sweep(H_STEPS);
    let pages_ok = fss.total(1, 1) == 5 && fss.betti[1] == 4 && fss.degeneration_page == 2;
    let failing: Vec<usize> =
        (0..=6).filter(|&k| !verify_degeneration_criterion(&cx, &fss, 2, k, &h, SLOPE_TOL).unwrap().pass).collect();
    let r1 = verify_degeneration_criterion(&cx, &fss, 1, 1, &h, SLOPE_TOL).unwrap();
    let witness = r1.decay_count != fss.betti[1];
    (
        verdict(pages_ok && failing.is_empty() && witness),
        format!(
            "dim E_1^1 = {}, b_1 = {}, degenerates at E_{}; r=2 fails in degrees {failing:?}; r=1,k=1 count {} vs b_1 {}",
            fss.total(1, 1),
            fss.betti[1],
            fss.degeneration_page,
            r1.decay_count,
            fss.betti[1]
        ),
    )
}

fn spectrum_conjugation() -> (Finding, String) {
    let mut worst = (0.0f64, 0.0f64);
    let mut pass = true;
    for model in [LieAlgebraModel::torus(2), LieAlgebraModel::torus(3), LieAlgebraModel::iwasawa()] {
        let cx = complex(model);
        for eta in [1.0 / 3.0, 0.5, 2.0] {
            for k in [1, 2] {
                let r = spectrum_equality_check(&cx, eta, k, SPECTRUM_REL_TOL).unwrap();
                worst.0 = worst.0.max(r.max_relative_difference);
                worst.1 = worst.1.max(r.max_transport_residual);
                pass &= r.max_relative_difference <= SPECTRUM_REL_TOL && r.max_transport_residual <= TRANSPORT_TOL;
            }
        }
    }
    (verdict(pass), format!("max relative difference {:.1e}, max transport residual {:.1e}", worst.0, worst.1))
}

fn sample_eta(n: usize) -> RationalFunction {
    // η = 1/(1 + Σ|z_j|² + (z_1 z̄_1² + z_1² z̄_1)/4)
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

fn gamma_laws() -> (Finding, String) {
    let d = SampledDomain::ball(2, 0.5, 0, GAMMA_POINTS, 11).unwrap();
    let mut worst = 0.0f64;
    for potential in [Potential::BallLog, Potential::Quadratic] {
        let w = Weight::exp_potential(potential, 1.0);
        for z in d.points() {
            let lhs = gamma_at(&w, z).unwrap();
            let rhs = gamma_from_potential(&potential.jet(z).unwrap());
            worst = worst.max((&lhs - &rhs).norm() / rhs.norm().max(1.0));
        }
    }
    let numeric = d.len() == GAMMA_POINTS && worst <= GAMMA_TOL;
    let eta = sample_eta(2);
    let g = gamma_matrix(2, &eta);
    let symbolic = gamma_symbolic(2, &eta) == g && gamma_matrix(2, &eta.scale(&GaussRational::from_frac(7, 3))) == g;
    let d1 = all_cases().into_iter().find(|c| c.id == "D1").unwrap();
    let d1_pass = check_identity(&d1, &CheckOptions::new(2, SEEDS, 7)).status == Status::Pass;
    (
        verdict(numeric && symbolic && d1_pass),
        format!("{} points, max relative error {worst:.1e}; rescaling exact: {symbolic}; D1 exact: {d1_pass}", d.len()),
    )
}

fn eligible_enumeration() -> (Finding, String) {
    let mismatched: Vec<usize> = (1..=4)
        .filter(|&n| {
            let brute: Vec<(usize, usize)> = (0..=n)
                .flat_map(|p| (0..=n).map(move |q| (p, q)))
                .filter(|&(p, q)| (p > q && p + q > n) || (p < q && p + q < n))
                .collect();
            eligible_bidegrees(n) != brute
        })
        .collect();
    (verdict(mismatched.is_empty()), format!("eligible bidegrees match brute force for n = 1..4; mismatches at n = {mismatched:?}"))
}

fn epsilon_interval() -> (Finding, String) {
    let d = SampledDomain::ball(2, 0.5, 0, GAMMA_POINTS, 11).unwrap();
    let interval = check_epsilon_family(Potential::BallLog, &d, true, DEFAULT_MARGIN).unwrap().epsilon_interval;
    (verdict(interval.is_some_and(|[lo, hi]| hi > lo)), format!("ball example, ε interval {interval:?}"))
}

fn flat_torus_curvature() -> (Finding, String) {
    let mut mismatched = Vec::new();
    let mut nonzero = 0;
    let mut total = 0;
    for n in [2, 3] {
        let cx = complex(LieAlgebraModel::torus(n));
        for p in 0..=n {
            for q in 0..=n {
                let m = check_curvature_vanishing_on_model(&cx, 1.0, p, q, DEFAULT_MARGIN).unwrap().model_check.unwrap();
                total += 1;
                nonzero += m.eigenvalues.iter().any(|&x| x != 0.0) as usize;
                if !m.matches_scalar {
                    mismatched.push((n, p, q));
                }
            }
        }
    }
    let detail = format!(
        "F_η = (p-q)(p+q-n) Id fails at {} of {total} (n,p,q), first {:?}; F_η is nonzero at {nonzero}",
        mismatched.len(),
        mismatched.first()
    );
    // on the flat torus ∂∂̄ + ∂̄∂ = 0, so F_η vanishes identically; the
    // scalar can only be matched where it is itself 0
    let result = if mismatched.is_empty() {
        Finding::Pass
    } else if nonzero == 0 && mismatched.iter().all(|&(n, p, q)| (p as i64 - q as i64) * (p as i64 + q as i64 - n as i64) != 0) {
        Finding::KnownDefect("F_η vanishes on the flat torus, so it equals the scalar only where (p-q)(p+q-n) = 0")
    } else {
        Finding::Fail
    };
    (result, detail)
}

fn etwist(dir: &Path, args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_etwist"))
        .current_dir(dir)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .args(args)
        .arg("--quiet")
        .status()
        .expect("spawn etwist")
        .code()
        .unwrap_or(-1)
}

fn cli_determinism() -> (Finding, String) {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let runs: [&[&str]; 4] = [
        &["verify", "--section", "appendix", "--n", "2", "--trials", "5", "--seed", "7"],
        &["spectrum", "--model", "iwasawa", "--verify-criterion", "r=2", "--eta", "0.5"],
        &["fss", "--model", "iwasawa"],
        &["hypotheses", "--check", "twisted-vanishing", "--phi", "ball-log", "--n", "2"],
    ];
    let mut problems = Vec::new();
    for args in runs {
        let cmd = args[0];
        for (out, cache) in [("cold", "--no-cache"), ("again", "--no-cache"), ("warm", "--cache-dir"), ("hit", "--cache-dir")] {
            let mut a: Vec<&str> = args.to_vec();
            a.extend(["--out", out, cache]);
            if cache == "--cache-dir" {
                a.push("cache");
            }
            if etwist(dir, &a) != 0 {
                problems.push(format!("{cmd} {out}: nonzero exit"));
            }
        }
        let read = |out: &str| std::fs::read(dir.join(out).join(format!("{cmd}.json"))).unwrap_or_default();
        let cold = read("cold");
        if cold != read("again") || cold != read("warm") || cold != read("hit") {
            problems.push(format!("{cmd}: reports differ"));
        }
    }
    if etwist(dir, &["report", "--out", "cold"]) != 0 {
        problems.push("report: nonzero exit".into());
    }
    let schemas = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas");
    for cmd in ["verify", "spectrum", "fss", "hypotheses", "report"] {
        let schema: Value = serde_json::from_str(&std::fs::read_to_string(schemas.join(format!("{cmd}.schema.json"))).unwrap()).unwrap();
        let doc: Value = match std::fs::read_to_string(dir.join("cold").join(format!("{cmd}.json"))) {
            Ok(s) => serde_json::from_str(&s).unwrap(),
            Err(_) => {
                problems.push(format!("{cmd}: no report"));
                continue;
            }
        };
        if !jsonschema::is_valid(&schema, &doc) {
            problems.push(format!("{cmd}: schema violation"));
        }
    }
    (verdict(problems.is_empty()), if problems.is_empty() { "byte-identical repeat and cached runs; 5 schemas valid".into() } else { problems.join("; ") })
}

fn main() {
    let outcomes = [
        criterion("1", identity_suite),
        criterion("2", convention_anchor),
        criterion("3", mutation_sensitivity),
        criterion("4", torus_spectra),
        criterion("5", iwasawa_experiment),
        criterion("6", spectrum_conjugation),
        criterion("7", gamma_laws),
        criterion("8a", eligible_enumeration),
        criterion("8b", epsilon_interval),
        criterion("8c", flat_torus_curvature),
        criterion("9", cli_determinism),
    ];
    let passed = outcomes.iter().filter(|o| matches!(o.result, Finding::Pass)).count();
    let known: Vec<&str> = outcomes.iter().filter(|o| matches!(o.result, Finding::KnownDefect(_))).map(|o| o.id).collect();
    let unexpected: Vec<&str> = outcomes.iter().filter(|o| matches!(o.result, Finding::Fail)).map(|o| o.id).collect();
    println!("acceptance: {passed}/{} criteria pass; failing as documented defects: {known:?}", outcomes.len());
    if !unexpected.is_empty() {
        println!("acceptance: unexpected failures in criteria {unexpected:?}");
        std::process::exit(1);
    }
}
