//! Lie algebra models: structure equations of an invariant (1,0)-coframe and
//! an invariant Hermitian metric on it.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::scalar::GaussRational;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read model file: {0}")]
    Io(String),
    #[error("malformed model file: {0}")]
    Parse(String),
    #[error("unknown generator `{0}` (expected z1..zn or zb1..zbn)")]
    BadGenerator(String),
    #[error("structure entry for ζ{0} is out of range")]
    BadTarget(usize),
    #[error("dζ{0} has a ζ̄∧ζ̄ component; the complex structure is not integrable")]
    NotIntegrable(usize),
    #[error("d∘d does not vanish on the coframe")]
    NotClosed,
    #[error("metric must be an n×n Hermitian positive definite matrix: {0}")]
    BadMetric(String),
    #[error("unsupported dimension n = {0} (models need 1 <= n <= 4)")]
    BadDimension(usize),
    #[error("unknown built-in model `{0}`")]
    UnknownBuiltin(String),
}

/// One term c·(a∧b) of dζ_l; generator indices are 0..n for ζ_j and n..2n for ζ̄_j.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTerm {
    pub coeff: GaussRational,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraModel {
    pub name: String,
    pub n: usize,
    /// dζ_l for l = 0..n.
    pub structure: Vec<Vec<StructureTerm>>,
    /// ⟨ζ_j, ζ_k⟩.
    pub metric: Vec<Vec<GaussRational>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: Option<String>,
    n: usize,
    metric: Option<Vec<Vec<String>>>,
    #[serde(default)]
    structure: Vec<StructureEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureEntry {
    target: usize,
    terms: Vec<TermEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermEntry {
    coeff: String,
    left: String,
    right: String,
}

const TORUS2: &str = include_str!("../../models/torus2.toml");
const TORUS3: &str = include_str!("../../models/torus3.toml");
const IWASAWA: &str = include_str!("../../models/iwasawa.toml");

pub const BUILTIN_MODELS: [&str; 3] = ["torus2", "torus3", "iwasawa"];

fn parse_generator(s: &str, n: usize) -> Result<usize, ModelError> {
    let bad = || ModelError::BadGenerator(s.to_string());
    let t = s.trim();
    let (conj, digits) = if let Some(d) = t.strip_prefix("zb") {
        (true, d)
    } else if let Some(d) = t.strip_prefix('z') {
        (false, d)
    } else {
        return Err(bad());
    };
    let j: usize = digits.parse().map_err(|_| bad())?;
    if j == 0 || j > n {
        return Err(bad());
    }
    Ok(if conj { n + j - 1 } else { j - 1 })
}

impl LieAlgebraModel {
    /// Flat torus of dimension n (all structure constants zero).
    pub fn torus(n: usize) -> LieAlgebraModel {
        LieAlgebraModel { name: format!("torus{n}"), n, structure: vec![Vec::new(); n], metric: identity(n) }
    }

    pub fn iwasawa() -> LieAlgebraModel {
        Self::from_toml(IWASAWA).expect("shipped model is valid")
    }

    pub fn builtin(name: &str) -> Result<LieAlgebraModel, ModelError> {
        let src = match name {
            "torus2" => TORUS2,
            "torus3" => TORUS3,
            "iwasawa" => IWASAWA,
            _ => return Err(ModelError::UnknownBuiltin(name.to_string())),
        };
        Self::from_toml(src)
    }

    /// A built-in name or a path to a model file.
    pub fn load(spec: &str) -> Result<LieAlgebraModel, ModelError> {
        if BUILTIN_MODELS.contains(&spec) {
            return Self::builtin(spec);
        }
        Self::load_file(Path::new(spec))
    }

    pub fn load_file(path: &Path) -> Result<LieAlgebraModel, ModelError> {
        let src = std::fs::read_to_string(path).map_err(|e| ModelError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&src)
    }

    pub fn from_toml(src: &str) -> Result<LieAlgebraModel, ModelError> {
        let file: ModelFile = toml::from_str(src).map_err(|e| ModelError::Parse(e.to_string()))?;
        let n = file.n;
        if !(1..=4).contains(&n) {
            return Err(ModelError::BadDimension(n));
        }
        let mut structure = vec![Vec::new(); n];
        for entry in &file.structure {
            if entry.target == 0 || entry.target > n {
                return Err(ModelError::BadTarget(entry.target));
            }
            for t in &entry.terms {
                let coeff: GaussRational = t.coeff.parse().map_err(|_| ModelError::Parse(format!("coefficient `{}`", t.coeff)))?;
                let left = parse_generator(&t.left, n)?;
                let right = parse_generator(&t.right, n)?;
                structure[entry.target - 1].push(StructureTerm { coeff, left, right });
            }
        }
        let metric = match file.metric {
            None => identity(n),
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(ModelError::BadMetric(format!("expected {n}×{n} entries")));
                }
                rows.iter()
                    .map(|r| {
                        r.iter()
                            .map(|s| s.parse().map_err(|_| ModelError::BadMetric(format!("entry `{s}`"))))
                            .collect::<Result<Vec<GaussRational>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        let model = LieAlgebraModel { name: file.name.unwrap_or_else(|| "model".to_string()), n, structure, metric };
        model.validate()?;
        Ok(model)
    }

    /// Integrability, Hermitian positive metric and d² = 0.
    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.n;
        for (l, terms) in self.structure.iter().enumerate() {
            // net coefficient of each ζ̄_a∧ζ̄_b, a < b
            let mut bar_bar = std::collections::BTreeMap::new();
            for t in terms.iter().filter(|t| t.left >= n && t.right >= n && t.left != t.right) {
                let (key, c) =
                    if t.left < t.right { ((t.left, t.right), t.coeff.clone()) } else { ((t.right, t.left), t.coeff.neg()) };
                let e = bar_bar.entry(key).or_insert_with(GaussRational::zero);
                *e = e.add(&c);
            }
            if bar_bar.values().any(|c| !c.is_zero()) {
                return Err(ModelError::NotIntegrable(l + 1));
            }
        }
        check_metric(&self.metric)?;
        let cx = super::complex::InvariantComplex::build_unchecked(self);
        if !cx.d_squared_vanishes() {
            return Err(ModelError::NotClosed);
        }
        Ok(())
    }
}

fn identity(n: usize) -> Vec<Vec<GaussRational>> {
    (0..n)
        .map(|a| (0..n).map(|b| if a == b { GaussRational::one() } else { GaussRational::zero() }).collect())
        .collect()
}

fn check_metric(g: &[Vec<GaussRational>]) -> Result<(), ModelError> {
    let n = g.len();
    for a in 0..n {
        for b in 0..n {
            if g[a][b] != g[b][a].conj() {
                return Err(ModelError::BadMetric("not Hermitian".into()));
            }
        }
    }
    // leading principal minors, exactly
    for k in 1..=n {
        let rows: Vec<usize> = (0..k).collect();
        let m = super::exact::ExactMatrix {
            rows: k,
            cols: k,
            data: rows.iter().map(|&i| rows.iter().map(|&j| g[i][j].clone()).collect()).collect(),
        };
        let det = determinant(&m);
        if !det.is_real() || det.to_f64_pair().0 <= 0.0 {
            return Err(ModelError::BadMetric("not positive definite".into()));
        }
    }
    Ok(())
}

/// Determinant by exact elimination.
pub(crate) fn determinant(m: &super::exact::ExactMatrix) -> GaussRational {
    let n = m.rows;
    let mut a = m.data.clone();
    let mut det = GaussRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return GaussRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&a[c][c]);
        let inv = a[c][c].inv().expect("nonzero pivot");
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].mul(&inv);
            for k in c..n {
                let t = a[c][k].mul(&f);
                a[r][k] = a[r][k].sub(&t);
            }
        }
    }
    det
}
