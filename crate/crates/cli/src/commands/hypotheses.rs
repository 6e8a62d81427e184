use std::fmt::Write as _;

use clap::Args;
use etwist_core::geometry::{
    check_curvature_vanishing, check_curvature_vanishing_on_model, check_epsilon_family, check_potential_vanishing,
    check_twisted_vanishing, CheckKind, HypothesisReport, Potential, SampledDomain, Verdict, Weight, DEFAULT_MARGIN,
};
use etwist_core::spectral::InvariantComplex;

use super::{cached, finish, load_model, Ctx};
use crate::config::{ensure, parse_pair, HypothesesConfig};
use crate::CliError;

#[derive(Args, Debug)]
pub struct HypothesesArgs {
    /// twisted-vanishing, potential-vanishing, epsilon-family or curvature-vanishing.
    #[arg(long)]
    check: Option<String>,
    /// Potential φ: ball-log (-log(1-|z|²)) or quadratic (|z|²).
    #[arg(long)]
    phi: Option<String>,
    #[arg(long = "n")]
    n: Option<usize>,
    /// Radius of the sampled ball.
    #[arg(long)]
    radius: Option<f64>,
    /// Tensor grid points per real axis (0 for none).
    #[arg(long)]
    grid: Option<usize>,
    /// Seeded random points added after the grid.
    #[arg(long)]
    fill: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// η = scale·exp(-ε φ).
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    scale: Option<f64>,
    /// Use the constant twist η = value instead of a potential.
    #[arg(long)]
    eta_constant: Option<f64>,
    /// Declare γ_η complete (not decidable from samples).
    #[arg(long)]
    complete: bool,
    /// Relative width of the inconclusive band around each threshold.
    #[arg(long)]
    margin: Option<f64>,
    /// Bidegree `p,q` for curvature-vanishing.
    #[arg(long)]
    bidegree: Option<String>,
    /// Invariant model for curvature-vanishing with a constant twist.
    #[arg(long)]
    model: Option<String>,
    /// Exit with status 1 unless every hypothesis holds.
    #[arg(long)]
    strict: bool,
}

fn resolve(args: &HypothesesArgs, ctx: &Ctx) -> Result<HypothesesConfig, CliError> {
    let sec = ctx.file.hypotheses.as_ref();
    let names: Vec<&str> = CheckKind::ALL.iter().map(|k| k.name()).collect();
    let check = args
        .check
        .clone()
        .or_else(|| sec.and_then(|s| s.check.clone()))
        .ok_or_else(|| CliError::Config(format!("hypotheses needs --check ({})", names.join(", "))))?;
    ensure(CheckKind::parse(&check).is_some(), || format!("unknown check `{check}` (expected one of {})", names.join(", ")))?;
    let phi = args.phi.clone().or_else(|| sec.and_then(|s| s.phi.clone())).unwrap_or_else(|| "ball-log".into());
    ensure(Potential::parse(&phi).is_some(), || format!("unknown potential `{phi}` (expected ball-log or quadratic)"))?;
    let n = args.n.or_else(|| sec.and_then(|s| s.n)).unwrap_or(2);
    ensure((1..=4).contains(&n), || format!("n must be in 1..=4, got {n}"))?;
    let radius = args.radius.or_else(|| sec.and_then(|s| s.radius)).unwrap_or(0.5);
    ensure(radius > 0.0 && (phi != "ball-log" || radius < 1.0), || format!("radius {radius} is outside the domain of {phi}"))?;
    let grid = args.grid.or_else(|| sec.and_then(|s| s.grid)).unwrap_or(4);
    ensure(grid <= 12 && (grid as f64).powi(2 * n as i32) <= 1e6, || "tensor grid exceeds 10^6 points".into())?;
    let fill = args.fill.or_else(|| sec.and_then(|s| s.fill)).unwrap_or(200);
    ensure(fill <= 1_000_000, || "fill must be at most 10^6".into())?;
    let epsilon = args.epsilon.or_else(|| sec.and_then(|s| s.epsilon)).unwrap_or(1.0);
    ensure(epsilon >= 0.0 && epsilon.is_finite(), || "epsilon must be nonnegative".into())?;
    let scale = args.scale.or_else(|| sec.and_then(|s| s.scale)).unwrap_or(1.0);
    ensure(scale > 0.0 && scale.is_finite(), || "scale must be positive".into())?;
    let eta_constant = args.eta_constant.or_else(|| sec.and_then(|s| s.eta_constant));
    let margin = args.margin.or_else(|| sec.and_then(|s| s.margin)).unwrap_or(DEFAULT_MARGIN);
    ensure((0.0..=0.5).contains(&margin), || format!("margin must be in [0, 0.5], got {margin}"))?;
    let bidegree = match &args.bidegree {
        Some(s) => Some(parse_pair(s)?),
        None => sec.and_then(|s| s.bidegree),
    };
    Ok(HypothesesConfig {
        check,
        phi,
        n,
        radius,
        grid,
        fill,
        seed: args.seed.or(ctx.file.seed).unwrap_or(7),
        epsilon,
        scale,
        eta_constant,
        complete: args.complete || sec.and_then(|s| s.complete).unwrap_or(false),
        margin,
        bidegree,
        model: args.model.clone().or_else(|| sec.and_then(|s| s.model.clone())),
    })
}

fn compute(cfg: &HypothesesConfig) -> Result<HypothesisReport, CliError> {
    let geo = |e: etwist_core::geometry::GeometryError| CliError::Config(e.to_string());
    let kind = CheckKind::parse(&cfg.check).expect("validated");
    let potential = Potential::parse(&cfg.phi).expect("validated");
    if kind == CheckKind::CurvatureVanishing {
        let [p, q] = cfg.bidegree.ok_or_else(|| CliError::Config("curvature-vanishing needs --bidegree p,q".into()))?;
        if let Some(m) = &cfg.model {
            let cx = InvariantComplex::build(&load_model(m)?).map_err(|e| CliError::Config(e.to_string()))?;
            let eta = cfg.eta_constant.unwrap_or(1.0);
            ensure(eta > 0.0, || "eta_constant must be positive".into())?;
            return check_curvature_vanishing_on_model(&cx, eta, p, q, cfg.margin).map_err(geo);
        }
    }
    let domain = SampledDomain::ball(cfg.n, cfg.radius, cfg.grid, cfg.fill, cfg.seed).map_err(geo)?;
    ensure(!domain.is_empty(), || "the sample set is empty; raise grid or fill".into())?;
    let weight = match cfg.eta_constant {
        Some(value) => Weight::Constant { value },
        None => Weight::ExpPotential { potential, epsilon: cfg.epsilon, scale: cfg.scale },
    };
    match kind {
        CheckKind::TwistedVanishing => check_twisted_vanishing(&weight, &domain, cfg.complete, cfg.margin),
        CheckKind::PotentialVanishing => check_potential_vanishing(potential, cfg.epsilon, &domain, cfg.complete, cfg.margin),
        CheckKind::EpsilonFamily => check_epsilon_family(potential, &domain, cfg.complete, cfg.margin),
        CheckKind::CurvatureVanishing => {
            let [p, q] = cfg.bidegree.expect("checked above");
            check_curvature_vanishing(&weight, &domain, p, q, cfg.margin)
        }
    }
    .map_err(geo)
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "FAILS",
        Verdict::Inconclusive => "inconclusive",
        Verdict::Declared => "declared",
        Verdict::NotChecked => "not checked",
    }
}

fn render(r: &HypothesisReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "hypotheses  check={} n={} margin={}", r.check.name(), r.n, r.margin);
    if let Some(w) = &r.weight {
        let _ = writeln!(t, "  twist: η = {w}");
    }
    if let Some(d) = &r.domain {
        let _ = writeln!(t, "  domain: ball radius {} in C^{}, grid {}/axis + {} random (seed {})", d.radius, d.n, d.grid_per_axis, d.fill, d.seed);
    }
    if let Some(c) = &r.constants {
        let _ = writeln!(t, "  constants ({:?} metric, {} samples):", c.metric, c.samples);
        let _ = writeln!(t, "    C_1 = {:.6e} at {:?}", c.c1.value, c.c1.point);
        let _ = writeln!(t, "    C_2 = {:.6e}", c.c2.value);
        let _ = writeln!(t, "    C(φ) = {:.6e}", c.c_phi.value);
        if let Some(c3) = c.c3 {
            let _ = writeln!(t, "    C_3 = {c3:.6e}");
        }
    }
    let _ = writeln!(t, "  {:<18} {:<13} {:>14} {:>14}  statement", "hypothesis", "verdict", "estimate", "threshold");
    for h in &r.hypotheses {
        let est = h.estimate.map_or_else(|| "-".into(), |v| format!("{v:.6e}"));
        let thr = h.threshold.map_or_else(|| "-".into(), |v| format!("{v:.6e}"));
        let _ = writeln!(t, "  {:<18} {:<13} {:>14} {:>14}  {}", h.name, verdict(h.verdict), est, thr, h.statement);
        if let Some(w) = &h.witness {
            let _ = writeln!(t, "      witness {w:?}");
        }
        if let Some(note) = &h.note {
            let _ = writeln!(t, "      {note}");
        }
    }
    let bi: Vec<String> = r.eligible_bidegrees.iter().map(|(p, q)| format!("({p},{q})")).collect();
    let _ = writeln!(t, "  eligible bidegrees: {}", bi.join(", "));
    if let Some([lo, hi]) = r.epsilon_interval {
        let _ = writeln!(t, "  ε interval: ({lo}, {hi:.6e}]");
    }
    if let Some(m) = &r.model_check {
        let _ = writeln!(t, "  model {} bidegree ({},{}), dim {}: F_η eigenvalues {:?}", m.model, m.p, m.q, m.dim, m.eigenvalues);
        let _ = writeln!(
            t,
            "    |∂̄ω| = {:.6e}, threshold 2(C_3 + n√n C_1) = {:.6e}, (p-q)(p+q-n) = {}, F_η equals that multiple of Id: {}",
            m.dbar_omega_norm, m.threshold, m.scalar_reference, m.matches_scalar
        );
    }
    let _ = writeln!(t, "  {}", r.conclusion);
    t
}

pub fn run(args: &HypothesesArgs, ctx: &Ctx) -> Result<bool, CliError> {
    let cfg = resolve(args, ctx)?;
    let content = match &cfg.model {
        Some(m) => format!("{:?}", load_model(m)?),
        None => String::new(),
    };
    let produced = cached(ctx, "hypotheses", &cfg, &content, || compute(&cfg))?;
    let r = &produced.result;
    let holding = r.hypotheses.iter().filter(|h| matches!(h.verdict, Verdict::Holds | Verdict::Declared)).count();
    let summary = format!("{}: {}/{} hypotheses hold or are declared", r.check.name(), holding, r.hypotheses.len());
    let passed = !args.strict || r.all_hold();
    finish(ctx, "hypotheses", &cfg, &produced, passed, summary, render(r))
}
