use std::fmt::Write as _;

use clap::Args;
use etwist_core::spectral::{
    dyadic_sweep, estimate_decay, fss_pages, spectrum_equality_check, sweep_h, verify_degeneration_criterion, DecayReport,
    InvariantComplex, SpectrumEquality, SpectrumTable,
};
use serde::{Deserialize, Serialize};

use super::{cached, finish, load_model, Ctx};
use crate::config::{ensure, parse_criterion, SpectrumConfig};
use crate::output::fmt_opt;
use crate::CliError;

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Built-in model (torus2, torus3, iwasawa) or a model file.
    #[arg(long)]
    model: Option<String>,
    /// Form degrees to sweep (default: all).
    #[arg(long = "degree", value_delimiter = ',')]
    degrees: Vec<usize>,
    /// Explicit strictly decreasing h values.
    #[arg(long = "h", value_delimiter = ',')]
    h_values: Vec<f64>,
    /// Dyadic sweep h = 2^-1 .. 2^-steps (default 8).
    #[arg(long)]
    h_steps: Option<usize>,
    #[arg(long)]
    slope_tol: Option<f64>,
    #[arg(long)]
    r_max: Option<usize>,
    /// Check the decay count against dim E_r^k in every swept degree, e.g. `r=2`.
    #[arg(long)]
    verify_criterion: Option<String>,
    /// Constant twists for the Δ_η / Δ_{ω_η} spectrum comparison.
    #[arg(long = "eta", value_delimiter = ',')]
    eta: Vec<f64>,
    #[arg(long)]
    eq_tol: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub k: usize,
    pub r: usize,
    pub decay_count: usize,
    pub page_dimension: usize,
    pub betti: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub r: usize,
    pub pass: bool,
    pub failing_degrees: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub model: String,
    pub n: usize,
    pub betti: Vec<usize>,
    pub tables: Vec<SpectrumTable>,
    pub decay: Vec<DecayReport>,
    pub comparison: Vec<ComparisonRow>,
    pub criterion: Option<CriterionVerdict>,
    pub equality: Vec<SpectrumEquality>,
}

impl SpectrumResult {
    pub fn passed(&self) -> bool {
        self.criterion.as_ref().map_or(true, |c| c.pass) && self.equality.iter().all(|e| e.pass)
    }
}

fn resolve(args: &SpectrumArgs, ctx: &Ctx) -> Result<SpectrumConfig, CliError> {
    let sec = ctx.file.spectrum.as_ref();
    let model = args.model.clone().or_else(|| sec.and_then(|s| s.model.clone())).ok_or_else(|| CliError::Config("spectrum needs --model".into()))?;
    let h_values = if !args.h_values.is_empty() {
        args.h_values.clone()
    } else if let Some(h) = sec.and_then(|s| s.h_values.clone()).filter(|_| args.h_steps.is_none()) {
        h
    } else {
        let steps = args.h_steps.or_else(|| sec.and_then(|s| s.h_steps)).unwrap_or(8);
        ensure((4..=30).contains(&steps), || format!("h_steps must be in 4..=30, got {steps}"))?;
        dyadic_sweep(steps)
    };
    ensure(
        h_values.len() >= 4 && h_values.iter().all(|h| *h > 0.0 && h.is_finite()) && h_values.windows(2).all(|w| w[1] < w[0]),
        || "h values must be at least 4 strictly decreasing positive numbers".into(),
    )?;
    let slope_tol = args.slope_tol.or_else(|| sec.and_then(|s| s.slope_tol)).unwrap_or(0.2);
    ensure((0.0..=2.0).contains(&slope_tol), || format!("slope_tol must be in [0, 2], got {slope_tol}"))?;
    let r_max = args.r_max.or_else(|| sec.and_then(|s| s.r_max)).unwrap_or(3);
    ensure((1..=10).contains(&r_max), || format!("r_max must be in 1..=10, got {r_max}"))?;
    let verify_criterion = match &args.verify_criterion {
        Some(s) => Some(parse_criterion(s)?),
        None => sec.and_then(|s| s.verify_criterion),
    };
    if let Some(r) = verify_criterion {
        ensure((1..=10).contains(&r), || format!("criterion page must be in 1..=10, got {r}"))?;
    }
    let eta = if args.eta.is_empty() { sec.and_then(|s| s.eta.clone()).unwrap_or_default() } else { args.eta.clone() };
    ensure(eta.iter().all(|e| *e > 0.0 && e.is_finite()), || "eta values must be positive".into())?;
    let eq_tol = args.eq_tol.or_else(|| sec.and_then(|s| s.eq_tol)).unwrap_or(1e-9);
    ensure(eq_tol > 0.0, || "eq_tol must be positive".into())?;
    let degrees = if args.degrees.is_empty() { sec.and_then(|s| s.degrees.clone()).unwrap_or_default() } else { args.degrees.clone() };
    Ok(SpectrumConfig { model, degrees, h_values, slope_tol, r_max, verify_criterion, eta, eq_tol })
}

fn compute(cfg: &SpectrumConfig, cx: &InvariantComplex) -> Result<SpectrumResult, CliError> {
    let n = cx.n;
    let degrees: Vec<usize> = if cfg.degrees.is_empty() { (0..=2 * n).collect() } else { cfg.degrees.clone() };
    ensure(degrees.iter().all(|&k| k <= 2 * n), || format!("degrees must be at most {}", 2 * n))?;
    let r_top = cfg.r_max.max(cfg.verify_criterion.unwrap_or(1));
    let fss = fss_pages(cx, r_top).map_err(|e| CliError::Config(e.to_string()))?;
    let spectral = |e: etwist_core::spectral::SpectralError| CliError::Config(e.to_string());
    let mut tables = Vec::new();
    let mut decay = Vec::new();
    let mut comparison = Vec::new();
    for &k in &degrees {
        let table = sweep_h(cx, k, &cfg.h_values).map_err(spectral)?;
        let d = estimate_decay(&table, cfg.r_max, cfg.slope_tol).map_err(spectral)?;
        for r in 1..=cfg.r_max {
            comparison.push(ComparisonRow { k, r, decay_count: d.count(r), page_dimension: fss.total(r, k), betti: fss.betti[k] });
        }
        tables.push(table);
        decay.push(d);
    }
    let criterion = match cfg.verify_criterion {
        Some(r) => {
            let mut failing = Vec::new();
            for &k in &degrees {
                let rep = verify_degeneration_criterion(cx, &fss, r, k, &cfg.h_values, cfg.slope_tol).map_err(spectral)?;
                if !rep.pass {
                    failing.push(k);
                }
            }
            Some(CriterionVerdict { r, pass: failing.is_empty(), failing_degrees: failing })
        }
        None => None,
    };
    let mut equality = Vec::new();
    for &eta in &cfg.eta {
        for &k in &degrees {
            equality.push(spectrum_equality_check(cx, eta, k, cfg.eq_tol).map_err(spectral)?);
        }
    }
    Ok(SpectrumResult { model: cx.model.name.clone(), n, betti: fss.betti.clone(), tables, decay, comparison, criterion, equality })
}

fn render(cfg: &SpectrumConfig, r: &SpectrumResult) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "spectrum  model={} n={} slope_tol={} h={:?}", r.model, r.n, cfg.slope_tol, cfg.h_values);
    let _ = writeln!(t, "  betti {:?}", r.betti);
    for (table, d) in r.tables.iter().zip(&r.decay) {
        let _ = writeln!(t, "  k={}  dim={}  zeros={:?}", table.k, table.eigenvalues.first().map_or(0, |v| v.len()), table.zero_count);
        let deltas: Vec<String> = table.h_values.iter().zip(&table.delta).map(|(h, x)| format!("{h}:{}", fmt_opt(*x))).collect();
        let _ = writeln!(t, "    smallest positive eigenvalue by h: {}", deltas.join("  "));
        let slopes: Vec<String> = d.slopes.iter().map(|s| s.map_or_else(|| "zero".into(), |v| format!("{v:.3}"))).collect();
        let _ = writeln!(t, "    slopes [{}]", slopes.join(", "));
        for row in r.comparison.iter().filter(|c| c.k == table.k) {
            let mark = if row.decay_count == row.page_dimension { "=" } else { "≠" };
            let _ = writeln!(
                t,
                "    r={}: #{{λ ∈ O(h^{})}} = {} {mark} dim E_{}^{} = {}   (b_{} = {})",
                row.r,
                2 * row.r,
                row.decay_count,
                row.r,
                row.k,
                row.page_dimension,
                row.k,
                row.betti
            );
        }
    }
    if let Some(c) = &r.criterion {
        let _ = writeln!(
            t,
            "  criterion r={}: {}{}",
            c.r,
            if c.pass { "PASS" } else { "FAIL" },
            if c.failing_degrees.is_empty() { String::new() } else { format!(" (degrees {:?})", c.failing_degrees) }
        );
    }
    for e in &r.equality {
        let _ = writeln!(
            t,
            "  eta={} k={}: spectra {} (rel diff {:.2e}, transport residual {:.2e})",
            e.eta,
            e.k,
            if e.pass { "agree" } else { "DIFFER" },
            e.max_relative_difference,
            e.max_transport_residual
        );
    }
    t
}

fn csv_rows(r: &SpectrumResult) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(["k", "h", "i", "lambda"]).map_err(err)?;
    for table in &r.tables {
        for (h, eig) in table.h_values.iter().zip(&table.eigenvalues) {
            for (i, lambda) in eig.iter().enumerate() {
                w.write_record([table.k.to_string(), h.to_string(), i.to_string(), format!("{lambda:e}")]).map_err(err)?;
            }
        }
    }
    String::from_utf8(w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn run(args: &SpectrumArgs, ctx: &Ctx) -> Result<bool, CliError> {
    let cfg = resolve(args, ctx)?;
    let model = load_model(&cfg.model)?;
    let produced = cached(ctx, "spectrum", &cfg, &format!("{model:?}"), || {
        let cx = InvariantComplex::build(&model).map_err(|e| CliError::Config(e.to_string()))?;
        compute(&cfg, &cx)
    })?;
    let r = &produced.result;
    if ctx.sink.formats.csv {
        ctx.sink.write("spectrum.csv", &csv_rows(r)?)?;
    }
    let passed = r.passed();
    let summary = match &r.criterion {
        Some(c) => format!("{}: criterion r={} {}", r.model, c.r, if c.pass { "pass" } else { "fail" }),
        None => format!("{}: {} degrees swept", r.model, r.tables.len()),
    };
    finish(ctx, "spectrum", &cfg, &produced, passed, summary, render(&cfg, r))
}
