use std::fmt::Write as _;

use clap::Args;
use etwist_core::operators::Mutation;
use etwist_core::registry::{catalogue_fingerprint, list_identities, run_cases, Field, Filter, SuiteOptions, SuiteReport};

use super::{cached, finish, Ctx};
use crate::config::{ensure, VerifyConfig};
use crate::CliError;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Catalogue section: twist, commutation, bidegree, gamma, standard (alias appendix) or a letter.
    #[arg(long)]
    section: Option<String>,
    /// Filter terms `key=value,...` over section, metric, twist, special_metric, id (id=A4|B3).
    #[arg(long)]
    filter: Option<String>,
    /// Complex dimensions to check, e.g. `--n 2 --n 3` or `--n 2,3`.
    #[arg(long = "n", value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// exact (Gaussian rationals) or modular (finite field with p² elements, p = 2^61 - 1).
    #[arg(long)]
    field: Option<String>,
    /// Degree bound for random coefficients (overrides the per-case bound).
    #[arg(long)]
    degree_bound: Option<usize>,
    /// Run with a deliberately broken operator convention; see `--list-mutations`.
    #[arg(long)]
    mutation: Option<String>,
    /// Print the matching identities and exit.
    #[arg(long)]
    list: bool,
    /// Print the available mutations and exit.
    #[arg(long)]
    list_mutations: bool,
    /// Keep checking the remaining parts of a case after a failure.
    #[arg(long)]
    no_fail_fast: bool,
}

fn resolve(args: &VerifyArgs, ctx: &Ctx) -> Result<VerifyConfig, CliError> {
    let sec = ctx.file.verify.as_ref();
    let section = args.section.clone().or_else(|| sec.and_then(|s| s.section.clone()));
    let mut terms = Vec::new();
    if let Some(s) = section {
        terms.push(format!("section={s}"));
    }
    if let Some(f) = args.filter.clone().or_else(|| sec.and_then(|s| s.filter.clone())) {
        if !f.trim().is_empty() {
            terms.push(f);
        }
    }
    let filter = terms.join(",");
    Filter::parse(&filter).map_err(|e| CliError::Config(e.to_string()))?;
    let n_set = if args.n.is_empty() { sec.and_then(|s| s.n.clone()).unwrap_or_else(|| vec![2]) } else { args.n.clone() };
    ensure(!n_set.is_empty() && n_set.iter().all(|n| (2..=3).contains(n)), || format!("n must be 2 or 3, got {n_set:?}"))?;
    let trials = args.trials.or_else(|| sec.and_then(|s| s.trials)).unwrap_or(5);
    ensure((1..=1000).contains(&trials), || format!("trials must be in 1..=1000, got {trials}"))?;
    let field = args.field.clone().or_else(|| sec.and_then(|s| s.field.clone())).unwrap_or_else(|| "exact".into());
    ensure(field == "exact" || field == "modular", || format!("field must be exact or modular, got `{field}`"))?;
    let degree_bound = args.degree_bound.or_else(|| sec.and_then(|s| s.degree_bound));
    if let Some(d) = degree_bound {
        ensure((1..=4).contains(&d), || format!("degree_bound must be in 1..=4, got {d}"))?;
    }
    if let Some(m) = &args.mutation {
        ensure(Mutation::parse(m).is_some(), || format!("unknown mutation `{m}`; see --list-mutations"))?;
    }
    Ok(VerifyConfig {
        filter,
        n_set,
        trials,
        seed: args.seed.or(ctx.file.seed).unwrap_or(7),
        field,
        degree_bound,
        mutation: args.mutation.clone(),
        fail_fast: !args.no_fail_fast && sec.and_then(|s| s.fail_fast).unwrap_or(true),
    })
}

fn render(cfg: &VerifyConfig, r: &SuiteReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "verify  filter=[{}] n={:?} trials={} seed={} field={}", cfg.filter, cfg.n_set, cfg.trials, cfg.seed, cfg.field);
    if let Some(m) = &cfg.mutation {
        let _ = writeln!(t, "mutation: {m}");
    }
    for rep in &r.reports {
        let status = match rep.status {
            etwist_core::registry::Status::Pass => "PASS",
            etwist_core::registry::Status::Fail => "FAIL",
            etwist_core::registry::Status::Error => "ERROR",
        };
        let _ = writeln!(t, "{status:5} {:4} n={} checks={:5} {}", rep.id, rep.n, rep.checks, rep.title);
        if let Some(c) = &rep.counterexample {
            let _ = writeln!(t, "      part {}: {}", c.part, c.statement);
            let _ = writeln!(
                t,
                "      trial {} (seed {}), bidegree {:?}, component {}, jet order {}",
                c.trial, c.trial_seed, c.bidegree, c.component, c.jet_order
            );
            let _ = writeln!(t, "      residual {}", c.residual);
        }
        if let Some(e) = &rep.error {
            let _ = writeln!(t, "      error: {e}");
        }
    }
    let _ = writeln!(t, "{} passed, {} failed, {} errors", r.passed, r.failed, r.errors);
    t
}

pub fn run(args: &VerifyArgs, ctx: &Ctx) -> Result<bool, CliError> {
    if args.list_mutations {
        for m in Mutation::catalogue() {
            println!("{}", m.name());
        }
        return Ok(true);
    }
    let cfg = resolve(args, ctx)?;
    let filter = Filter::parse(&cfg.filter).map_err(|e| CliError::Config(e.to_string()))?;
    let cases = list_identities(&filter);
    if args.list {
        for c in &cases {
            println!("{:4} {:12} {:?} {}", c.id, c.section.name(), c.requires, c.title);
        }
        return Ok(true);
    }
    let produced = cached(ctx, "verify", &cfg, &catalogue_fingerprint(), || {
        let mut opts = SuiteOptions::new(cfg.trials, cfg.seed, cfg.n_set.clone());
        opts.field = if cfg.field == "modular" { Field::Modular } else { Field::Exact };
        opts.degree_bound = cfg.degree_bound;
        opts.mutation = cfg.mutation.as_deref().and_then(Mutation::parse);
        opts.fail_fast = cfg.fail_fast;
        Ok(run_cases(&cases, &opts, |r| {
            ctx.sink.note(&format!("  {:4} n={} {:?} ({} ms)", r.id, r.n, r.status, r.elapsed_ms));
        }))
    })?;
    let r = &produced.result;
    let passed = r.all_passed();
    if !passed {
        let failures: Vec<_> = r.failures().collect();
        let dump = serde_json::to_string_pretty(&failures).map_err(|e| CliError::Internal(e.to_string()))?;
        ctx.sink.write("counterexamples.json", &(dump + "\n"))?;
    }
    let summary = format!("{} passed, {} failed, {} errors over {} case runs", r.passed, r.failed, r.errors, r.reports.len());
    finish(ctx, "verify", &cfg, &produced, passed, summary, render(&cfg, r))
}
