use std::fmt::Write as _;

use clap::Args;
use etwist_core::spectral::{fss_pages, FssTable, InvariantComplex};

use super::{cached, finish, load_model, Ctx};
use crate::config::{ensure, FssConfig};
use crate::CliError;

#[derive(Args, Debug)]
pub struct FssArgs {
    /// Built-in model (torus2, torus3, iwasawa) or a model file.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    r_max: Option<usize>,
}

/// Rows q = n..0, columns p = 0..n.
pub fn page_grid(t: &mut String, page: &[Vec<usize>]) {
    let n = page.len() - 1;
    for q in (0..=n).rev() {
        let row: Vec<String> = (0..=n).map(|p| format!("{:4}", page[p][q])).collect();
        let _ = writeln!(t, "    q={q} |{}", row.join(""));
    }
    let cols: Vec<String> = (0..=n).map(|p| format!("{p:4}")).collect();
    let _ = writeln!(t, "      p =  {}", cols.join("").trim_start());
}

fn render(t_: &FssTable) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "fss  model={} n={}", t_.model, t_.n);
    for (r, page) in t_.pages.iter().enumerate() {
        let totals: Vec<usize> = (0..=2 * t_.n).map(|k| t_.total(r + 1, k)).collect();
        let _ = writeln!(t, "  E_{}  (dim E_{}^k = {:?})", r + 1, r + 1, totals);
        page_grid(&mut t, page);
    }
    let _ = writeln!(t, "  E_inf");
    page_grid(&mut t, &t_.e_infinity);
    let _ = writeln!(t, "  betti {:?}", t_.betti);
    let _ = writeln!(t, "  degeneration page by degree {:?}", t_.degeneration_by_degree);
    let _ = writeln!(t, "  degeneration page {}", t_.degeneration_page);
    let _ = writeln!(t, "  spectral sequence axioms: {}", if t_.axioms_hold() { "hold" } else { "VIOLATED" });
    t
}

pub fn run(args: &FssArgs, ctx: &Ctx) -> Result<bool, CliError> {
    let sec = ctx.file.fss.as_ref();
    let cfg = FssConfig {
        model: args.model.clone().or_else(|| sec.and_then(|s| s.model.clone())).ok_or_else(|| CliError::Config("fss needs --model".into()))?,
        r_max: args.r_max.or_else(|| sec.and_then(|s| s.r_max)).unwrap_or(3),
    };
    ensure((1..=10).contains(&cfg.r_max), || format!("r_max must be in 1..=10, got {}", cfg.r_max))?;
    let model = load_model(&cfg.model)?;
    let produced = cached(ctx, "fss", &cfg, &format!("{model:?}"), || {
        let cx = InvariantComplex::build(&model).map_err(|e| CliError::Config(e.to_string()))?;
        fss_pages(&cx, cfg.r_max).map_err(|e| CliError::Config(e.to_string()))
    })?;
    let t = &produced.result;
    let passed = t.axioms_hold();
    let summary = format!("{}: betti {:?}, degeneration page {}", t.model, t.betti, t.degeneration_page);
    finish(ctx, "fss", &cfg, &produced, passed, summary, render(t))
}
