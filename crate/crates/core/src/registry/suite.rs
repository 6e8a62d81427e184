//! Catalogue filtering and whole-suite runs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::cases::{all_cases, IdentityCase, Section};
use super::check::{check_identity, CheckOptions, Field, IdentityReport, Status};
use super::instance::{MetricKind, TwistKind};
use crate::operators::Mutation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FilterError {
    #[error("unknown filter key `{0}` (expected section, metric, twist, special_metric or id)")]
    UnknownKey(String),
    #[error("bad value `{value}` for filter key `{key}`")]
    BadValue { key: String, value: String },
    #[error("filter term `{0}` is not of the form key=value")]
    Malformed(String),
}

/// Conjunction of constraints; several `id=` terms are alternatives.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filter {
    pub section: Option<Section>,
    pub metric: Option<MetricKind>,
    pub twist: Option<TwistKind>,
    pub special_metric: Option<String>,
    pub ids: Vec<String>,
}

fn metric_kind(s: &str) -> Option<MetricKind> {
    Some(match s {
        "flat" => MetricKind::Flat,
        "generic" => MetricKind::Generic,
        "gamma_eta" => MetricKind::GammaEta,
        _ => return None,
    })
}

fn twist_kind(s: &str) -> Option<TwistKind> {
    Some(match s {
        "none" => TwistKind::None,
        "constant" => TwistKind::Constant,
        "generic" => TwistKind::Generic,
        _ => return None,
    })
}

impl Filter {
    pub fn all() -> Filter {
        Filter::default()
    }

    /// Parses `key=value[,key=value...]`. The empty string selects everything.
    pub fn parse(spec: &str) -> Result<Filter, FilterError> {
        let mut f = Filter::default();
        for term in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = term.split_once('=').ok_or_else(|| FilterError::Malformed(term.to_string()))?;
            let (k, v) = (k.trim(), v.trim());
            let bad = || FilterError::BadValue { key: k.to_string(), value: v.to_string() };
            match k {
                "section" => f.section = Some(Section::parse(v).ok_or_else(bad)?),
                "metric" => f.metric = Some(metric_kind(v).ok_or_else(bad)?),
                "twist" => f.twist = Some(twist_kind(v).ok_or_else(bad)?),
                "special_metric" => match v {
                    "gamma_eta" | "none" => f.special_metric = Some(v.to_string()),
                    _ => return Err(bad()),
                },
                "id" => f.ids.extend(v.split('|').map(|s| s.trim().to_ascii_uppercase())),
                _ => return Err(FilterError::UnknownKey(k.to_string())),
            }
        }
        Ok(f)
    }

    pub fn matches(&self, c: &IdentityCase) -> bool {
        self.section.map_or(true, |s| s == c.section)
            && self.metric.map_or(true, |m| m == c.requires.metric)
            && self.twist.map_or(true, |t| t == c.requires.twist)
            && self.special_metric.as_deref().map_or(true, |s| s == c.requires.special_metric())
            && (self.ids.is_empty() || self.ids.iter().any(|i| i == c.id))
    }
}

/// Catalogue entries matching the filter, ordered by id.
pub fn list_identities(filter: &Filter) -> Vec<IdentityCase> {
    all_cases().into_iter().filter(|c| filter.matches(c)).collect()
}

/// Text covering every case definition, for content-addressed caching.
pub fn catalogue_fingerprint() -> String {
    use super::cases::Check;
    let mut out = String::new();
    for c in all_cases() {
        out.push_str(&format!("{}|{}|{:?}|{}\n", c.id, c.title, c.requires, c.degree_bound));
        for p in &c.parts {
            let (l, r) = match &p.check {
                Check::Op { lhs, rhs } => (lhs.to_string(), rhs.to_string()),
                Check::Form { lhs, rhs } => (lhs.to_string(), rhs.to_string()),
            };
            out.push_str(&format!("  {}|{}|{}|{}\n", p.label, p.statement, l, r));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    pub n_set: Vec<usize>,
    pub field: Field,
    pub degree_bound: Option<usize>,
    #[serde(skip)]
    pub mutation: Option<Mutation>,
    pub fail_fast: bool,
}

impl SuiteOptions {
    pub fn new(trials: usize, seed: u64, n_set: Vec<usize>) -> Self {
        SuiteOptions { trials, seed, n_set, field: Field::Exact, degree_bound: None, mutation: None, fail_fast: true }
    }

    fn check_options(&self, n: usize) -> CheckOptions {
        let mut o = CheckOptions::new(n, self.trials, self.seed);
        o.field = self.field;
        o.degree_bound = self.degree_bound;
        o.mutation = self.mutation;
        o.fail_fast = self.fail_fast;
        o
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub n_set: Vec<usize>,
    pub field: Field,
    pub mutation: Option<String>,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub reports: Vec<IdentityReport>,
}

impl SuiteReport {
    /// True when nothing failed; an empty report succeeds.
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityReport> {
        self.reports.iter().filter(|r| r.status != Status::Pass)
    }
}

/// Runs every matching case for every n in the set. Deterministic in the seed.
pub fn run_suite(filter: &Filter, opts: &SuiteOptions) -> SuiteReport {
    run_cases(&list_identities(filter), opts, |_| {})
}

/// As [`run_suite`] on an explicit list, calling `progress` after each case.
pub fn run_cases(cases: &[IdentityCase], opts: &SuiteOptions, mut progress: impl FnMut(&IdentityReport)) -> SuiteReport {
    let mut reports = Vec::new();
    for &n in &opts.n_set {
        for case in cases.iter().filter(|c| c.n_range().contains(&n)) {
            let r = check_identity(case, &opts.check_options(n));
            progress(&r);
            reports.push(r);
        }
    }
    let count = |s| reports.iter().filter(|r| r.status == s).count();
    SuiteReport {
        seed: opts.seed,
        trials: opts.trials,
        n_set: opts.n_set.clone(),
        field: opts.field,
        mutation: opts.mutation.map(|m| m.name()),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        errors: count(Status::Error),
        reports,
    }
}
