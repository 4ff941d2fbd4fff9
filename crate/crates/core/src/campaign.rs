//! Verification campaigns: a declarative grid of formulas, parameters and
//! test functions, evaluated in parallel and emitted in a fixed order.

use crate::eigen::{eigen_table, EigenTable, Params};
use crate::error::{Error, Result};
use crate::identities::{
    eval_corollary_half_eisenstein, eval_corollary_half_lambert, eval_corollary_zeta_odd, eval_corollary_zeta_odd_half,
    eval_entry_ab, eval_theorem5, eval_thm_eisenstein_p,
};
use crate::report::{to_csv, to_jsonl, Tolerance, VerificationReport};
use crate::sumform::{
    eval_abel_plana, eval_entry4, eval_entry5, eval_entry6, eval_half_integer, eval_koshagain, eval_koshalt,
    eval_ramanujan_alpha, eval_rotation_lemma, eval_theorem1, eval_theorem3, eval_theorem4,
};
use crate::testfns::preset;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Roots per eigenvalue table built for a campaign.
pub const DEFAULT_TABLE_SIZE: usize = 4000;
/// Relative slack accepted on a configured αβ product before β is renormalised.
pub const DUAL_PRODUCT_RTOL: f64 = 1e-6;

/// Every identity the library can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    AbelPlana,
    Theorem1,
    Theorem3,
    Theorem4,
    HalfInteger,
    Entry4,
    Entry5,
    Entry6,
    RotationLemma,
    Koshagain,
    Koshalt,
    RamanujanAlpha,
    Theorem5,
    HalfLambert,
    EntryAb,
    ThmEisensteinP,
    HalfEisenstein,
    ZetaOdd,
    ZetaOddHalf,
}

/// Which inputs a formula consumes besides the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// A test function only.
    Function,
    /// A test function at each p.
    FunctionAtP,
    /// A test function and an angle α.
    FunctionAlpha,
    /// p only; the test function is fixed.
    AtP,
    /// Exponents w and z.
    Lambert,
    /// Order n and a dual pair with αβ = 4π².
    Eisenstein,
    /// Integer m and a dual pair with αβ = π².
    OddZeta,
}

impl Formula {
    pub const ALL: [Formula; 19] = [
        Formula::AbelPlana,
        Formula::Theorem1,
        Formula::Theorem3,
        Formula::Theorem4,
        Formula::HalfInteger,
        Formula::Entry4,
        Formula::Entry5,
        Formula::Entry6,
        Formula::RotationLemma,
        Formula::Koshagain,
        Formula::Koshalt,
        Formula::RamanujanAlpha,
        Formula::Theorem5,
        Formula::HalfLambert,
        Formula::EntryAb,
        Formula::ThmEisensteinP,
        Formula::HalfEisenstein,
        Formula::ZetaOdd,
        Formula::ZetaOddHalf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Formula::AbelPlana => "abel_plana",
            Formula::Theorem1 => "theorem1",
            Formula::Theorem3 => "theorem3",
            Formula::Theorem4 => "theorem4",
            Formula::HalfInteger => "half_integer",
            Formula::Entry4 => "entry4",
            Formula::Entry5 => "entry5",
            Formula::Entry6 => "entry6",
            Formula::RotationLemma => "rotation_lemma",
            Formula::Koshagain => "koshagain",
            Formula::Koshalt => "koshalt",
            Formula::RamanujanAlpha => "ramanujan_alpha",
            Formula::Theorem5 => "theorem5",
            Formula::HalfLambert => "half_lambert",
            Formula::EntryAb => "entry_ab",
            Formula::ThmEisensteinP => "thm_eisenstein_p",
            Formula::HalfEisenstein => "half_eisenstein",
            Formula::ZetaOdd => "zeta_odd",
            Formula::ZetaOddHalf => "zeta_odd_half",
        }
    }

    pub fn shape(self) -> Shape {
        use Formula::*;
        match self {
            AbelPlana | HalfInteger | Entry4 | Entry5 | Entry6 | RotationLemma => Shape::Function,
            Theorem1 | Theorem3 | Theorem4 | Koshagain => Shape::FunctionAtP,
            RamanujanAlpha => Shape::FunctionAlpha,
            Koshalt => Shape::AtP,
            Theorem5 | HalfLambert => Shape::Lambert,
            EntryAb | ThmEisensteinP | HalfEisenstein => Shape::Eisenstein,
            ZetaOdd | ZetaOddHalf => Shape::OddZeta,
        }
    }

    /// Whether the formula runs over the eigenvalues of a finite p.
    pub fn uses_p(self) -> bool {
        use Formula::*;
        matches!(self, Theorem1 | Theorem3 | Theorem4 | Koshagain | Koshalt | Theorem5 | ThmEisensteinP | ZetaOdd)
    }

    /// The αβ product the formula requires, if it takes a dual pair.
    pub fn dual_product(self) -> Option<f64> {
        match self.shape() {
            Shape::Eisenstein => Some(4.0 * PI * PI),
            Shape::OddZeta => Some(PI * PI),
            _ => None,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match key.as_str() {
            "rotation" => "rotation_lemma",
            "alpha" => "ramanujan_alpha",
            "thm1" | "eisenstein_p" => "thm_eisenstein_p",
            other => other,
        };
        Formula::ALL
            .into_iter()
            .find(|f| f.name() == alias)
            .ok_or_else(|| Error::Config(format!("unknown formula `{s}`")))
    }
}

/// One fully specified evaluation.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Case {
    pub formula: Option<Formula>,
    pub p: Option<f64>,
    pub function: Option<String>,
    pub w: Option<f64>,
    pub z: Option<f64>,
    pub n: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub m: Option<u32>,
}

impl Case {
    pub fn new(formula: Formula) -> Self {
        Self { formula: Some(formula), ..Self::default() }
    }

    fn formula(&self) -> Result<Formula> {
        self.formula.ok_or_else(|| Error::Config("case has no formula".into()))
    }

    /// Checks that the inputs the formula needs are present and fixes up the dual pair:
    /// a missing β is derived from α, and a supplied one is checked to
    /// [`DUAL_PRODUCT_RTOL`] and then replaced by the exact partner.
    pub fn normalized(mut self) -> Result<Self> {
        let formula = self.formula()?;
        let need = |v: bool, what: &str| {
            if v {
                Ok(())
            } else {
                Err(Error::Config(format!("{formula} needs {what}")))
            }
        };
        if formula.uses_p() {
            need(self.p.is_some(), "p")?;
        }
        match formula.shape() {
            Shape::Function | Shape::FunctionAtP => need(self.function.is_some(), "a function")?,
            Shape::FunctionAlpha => need(self.function.is_some() && self.alpha.is_some(), "a function and alpha")?,
            Shape::AtP => {}
            Shape::Lambert => need(self.w.is_some() && self.z.is_some(), "w and z")?,
            Shape::Eisenstein => need(self.n.is_some(), "n")?,
            Shape::OddZeta => need(self.m.is_some(), "m")?,
        }
        if let Some(product) = formula.dual_product() {
            let alpha = self.alpha.ok_or_else(|| Error::Config(format!("{formula} needs alpha")))?;
            self.beta = Some(dual_partner(alpha, self.beta, product)?);
        }
        Ok(self)
    }
}

/// β := product/α, after checking a supplied β against it.
pub fn dual_partner(alpha: f64, beta: Option<f64>, product: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Config(format!("alpha must be finite and > 0, got {alpha}")));
    }
    let exact = product / alpha;
    if let Some(b) = beta {
        if !(b.is_finite() && b > 0.0) || ((alpha * b - product) / product).abs() > DUAL_PRODUCT_RTOL {
            return Err(Error::Config(format!("alpha·beta = {} but must equal {product}", alpha * b)));
        }
    }
    Ok(exact)
}

/// Runs one case. Formulas over eigenvalues need `table` built for the case's p.
pub fn evaluate(case: &Case, table: Option<&EigenTable>, tol: &Tolerance) -> Result<VerificationReport> {
    let case = case.clone().normalized()?;
    let formula = case.formula()?;
    let function = || preset(case.function.as_deref().unwrap_or_default());
    let params = || Params::new(case.p.unwrap_or_default());
    let table = || table.ok_or_else(|| Error::InsufficientTable(format!("{formula} needs an eigenvalue table")));
    let c = |x: Option<f64>| Complex64::from(x.unwrap_or_default());
    let (alpha, beta, m) = (case.alpha.unwrap_or_default(), case.beta.unwrap_or_default(), case.m.unwrap_or_default());
    match formula {
        Formula::AbelPlana => eval_abel_plana(&function()?, tol),
        Formula::Theorem1 => eval_theorem1(&function()?, &params()?, table()?, tol),
        Formula::Theorem3 => eval_theorem3(&function()?, &params()?, table()?, tol),
        Formula::Theorem4 => eval_theorem4(&function()?, &params()?, table()?, tol),
        Formula::HalfInteger => eval_half_integer(&function()?, tol),
        Formula::Entry4 => eval_entry4(&function()?, tol),
        Formula::Entry5 => eval_entry5(&function()?, tol),
        Formula::Entry6 => eval_entry6(&function()?, tol),
        Formula::RotationLemma => eval_rotation_lemma(&function()?, tol),
        Formula::Koshagain => eval_koshagain(&function()?, &params()?, table()?, tol),
        Formula::Koshalt => eval_koshalt(&params()?, table()?, tol),
        Formula::RamanujanAlpha => eval_ramanujan_alpha(&function()?, alpha, tol),
        Formula::Theorem5 => eval_theorem5(&params()?, table()?, c(case.w), c(case.z), tol),
        Formula::HalfLambert => eval_corollary_half_lambert(c(case.w), c(case.z), tol),
        Formula::EntryAb => eval_entry_ab(c(case.n), alpha, beta, tol),
        Formula::ThmEisensteinP => eval_thm_eisenstein_p(&params()?, table()?, c(case.n), alpha, beta, tol),
        Formula::HalfEisenstein => eval_corollary_half_eisenstein(c(case.n), alpha, beta, tol),
        Formula::ZetaOdd => eval_corollary_zeta_odd(&params()?, table()?, m, alpha, beta, tol),
        Formula::ZetaOddHalf => eval_corollary_zeta_odd_half(m, alpha, beta, tol),
    }
}

/// Absolute and relative thresholds as written in a config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolSpec {
    pub atol: f64,
    pub rtol: f64,
}

impl TolSpec {
    pub fn tolerance(&self) -> Result<Tolerance> {
        Tolerance::new(self.atol, self.rtol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub atol: f64,
    pub rtol: f64,
    /// Per-formula replacements of the default.
    #[serde(default)]
    pub overrides: BTreeMap<String, TolSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambertGrid {
    pub w: Vec<f64>,
    pub z: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EisensteinGrid {
    pub n: Vec<f64>,
    /// (α, β) pairs; each product must be 4π².
    pub pairs: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OddZetaGrid {
    pub m: Vec<u32>,
    /// (α, β) pairs; each product must be π².
    pub pairs: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaGrid {
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grids {
    pub lambert: LambertGrid,
    pub eisenstein: EisensteinGrid,
    pub odd_zeta: OddZetaGrid,
    pub alpha: AlphaGrid,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub jsonl: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// A campaign read from TOML. Omitted sections take the standard values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CampaignConfig {
    pub formulas: Vec<String>,
    pub p_grid: Vec<f64>,
    pub functions: Vec<String>,
    pub table_size: usize,
    pub tolerances: Tolerances,
    pub grids: Grids,
    pub outputs: Outputs,
}

impl Default for Grids {
    fn default() -> Self {
        CampaignConfig::standard().grids
    }
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self::standard()
    }
}

impl CampaignConfig {
    /// Every formula over the standard presets and p ∈ {0.1, 1, 10}.
    pub fn standard() -> Self {
        let mut overrides = BTreeMap::new();
        overrides.insert("koshalt".to_string(), TolSpec { atol: 1e-5, rtol: 1e-5 });
        Self {
            formulas: Formula::ALL.iter().map(|f| f.name().to_string()).collect(),
            p_grid: vec![0.1, 1.0, 10.0],
            functions: ["exp:a=1", "rational:b=1,c=1", "expcos:a=1,b=1", "mellin_pair"].map(String::from).to_vec(),
            table_size: DEFAULT_TABLE_SIZE,
            tolerances: Tolerances { atol: 1e-6, rtol: 1e-6, overrides },
            grids: Grids {
                lambert: LambertGrid { w: vec![2.0, 2.5], z: vec![0.8] },
                eisenstein: EisensteinGrid { n: vec![3.0, 4.0], pairs: vec![[PI, 4.0 * PI], [2.0 * PI, 2.0 * PI]] },
                odd_zeta: OddZetaGrid { m: vec![1, 2], pairs: vec![[PI / 2.0, 2.0 * PI], [PI, PI]] },
                alpha: AlphaGrid { alpha: vec![0.3, 0.5] },
            },
            outputs: Outputs::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config; relative output paths are taken from the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for out in [&mut cfg.outputs.jsonl, &mut cfg.outputs.csv].into_iter().flatten() {
            if out.is_relative() {
                *out = base.join(&*out);
            }
        }
        Ok(cfg)
    }

    pub fn formulas(&self) -> Result<Vec<Formula>> {
        self.formulas.iter().map(|s| s.parse()).collect()
    }

    /// Rejects empty grids, bad values and dual pairs off their constraint.
    pub fn validate(&self) -> Result<()> {
        let non_empty = |ok: bool, what: &str| if ok { Ok(()) } else { Err(Error::Config(format!("{what} is empty"))) };
        let formulas = self.formulas()?;
        non_empty(!formulas.is_empty(), "formulas")?;
        if formulas.iter().any(|f| f.uses_p()) {
            non_empty(!self.p_grid.is_empty(), "p_grid")?;
            for &p in &self.p_grid {
                Params::new(p).map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        if formulas.iter().any(|f| matches!(f.shape(), Shape::Function | Shape::FunctionAtP | Shape::FunctionAlpha)) {
            non_empty(!self.functions.is_empty(), "functions")?;
        }
        for name in &self.functions {
            preset(name)?;
        }
        if self.table_size < 2 {
            return Err(Error::Config("table_size must be at least 2".into()));
        }
        Tolerance::new(self.tolerances.atol, self.tolerances.rtol)?;
        for (name, spec) in &self.tolerances.overrides {
            name.parse::<Formula>()?;
            spec.tolerance()?;
        }
        let g = &self.grids;
        for f in &formulas {
            match f.shape() {
                Shape::Lambert => non_empty(!g.lambert.w.is_empty() && !g.lambert.z.is_empty(), "grids.lambert")?,
                Shape::Eisenstein => {
                    non_empty(!g.eisenstein.n.is_empty() && !g.eisenstein.pairs.is_empty(), "grids.eisenstein")?
                }
                Shape::OddZeta => {
                    non_empty(!g.odd_zeta.m.is_empty() && !g.odd_zeta.pairs.is_empty(), "grids.odd_zeta")?
                }
                Shape::FunctionAlpha => non_empty(!g.alpha.alpha.is_empty(), "grids.alpha")?,
                _ => {}
            }
        }
        for &[a, b] in &g.eisenstein.pairs {
            dual_partner(a, Some(b), 4.0 * PI * PI)?;
        }
        for &[a, b] in &g.odd_zeta.pairs {
            dual_partner(a, Some(b), PI * PI)?;
        }
        Ok(())
    }

    pub fn tolerance_for(&self, formula: Formula) -> Result<Tolerance> {
        let t = &self.tolerances;
        t.overrides.get(formula.name()).map_or_else(|| Tolerance::new(t.atol, t.rtol), TolSpec::tolerance)
    }

    /// The cases in canonical order: formula, then p, then the remaining inputs.
    pub fn cases(&self) -> Result<Vec<Case>> {
        let mut out = Vec::new();
        let g = &self.grids;
        for formula in self.formulas()? {
            let ps: Vec<Option<f64>> =
                if formula.uses_p() { self.p_grid.iter().copied().map(Some).collect() } else { vec![None] };
            for &p in &ps {
                let base = Case { p, ..Case::new(formula) };
                let with_fn = |f: &String| Case { function: Some(f.clone()), ..base.clone() };
                match formula.shape() {
                    Shape::Function | Shape::FunctionAtP => out.extend(self.functions.iter().map(with_fn)),
                    Shape::FunctionAlpha => {
                        for f in &self.functions {
                            out.extend(g.alpha.alpha.iter().map(|&a| Case { alpha: Some(a), ..with_fn(f) }));
                        }
                    }
                    Shape::AtP => out.push(base.clone()),
                    Shape::Lambert => {
                        for &w in &g.lambert.w {
                            out.extend(g.lambert.z.iter().map(|&z| Case { w: Some(w), z: Some(z), ..base.clone() }));
                        }
                    }
                    Shape::Eisenstein => {
                        for &n in &g.eisenstein.n {
                            out.extend(g.eisenstein.pairs.iter().map(|&[a, b]| Case {
                                n: Some(n),
                                alpha: Some(a),
                                beta: Some(b),
                                ..base.clone()
                            }));
                        }
                    }
                    Shape::OddZeta => {
                        for &m in &g.odd_zeta.m {
                            out.extend(g.odd_zeta.pairs.iter().map(|&[a, b]| Case {
                                m: Some(m),
                                alpha: Some(a),
                                beta: Some(b),
                                ..base.clone()
                            }));
                        }
                    }
                }
            }
        }
        out.into_iter().map(Case::normalized).collect()
    }
}

/// What became of one case.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Report(VerificationReport),
    /// The test function lies outside the formula's hypothesis class.
    Skipped(String),
    /// The evaluation itself failed.
    Failed(Error),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match self {
            Outcome::Report(r) => r.pass,
            Outcome::Skipped(_) => true,
            Outcome::Failed(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub entries: Vec<(Case, Outcome)>,
}

impl CampaignResult {
    pub fn reports(&self) -> Vec<VerificationReport> {
        self.entries
            .iter()
            .filter_map(|(_, o)| match o {
                Outcome::Report(r) => Some(r.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|(_, o)| o.passed())
    }

    pub fn to_jsonl(&self) -> String {
        to_jsonl(&self.reports())
    }

    pub fn to_csv(&self) -> Result<String> {
        to_csv(&self.reports())
    }

    /// Per formula: passed, failed and skipped counts.
    pub fn matrix(&self) -> BTreeMap<Formula, [usize; 3]> {
        let mut m = BTreeMap::new();
        for (case, outcome) in &self.entries {
            let Some(f) = case.formula else { continue };
            let row: &mut [usize; 3] = m.entry(f).or_default();
            match outcome {
                Outcome::Report(r) if r.pass => row[0] += 1,
                Outcome::Skipped(_) => row[2] += 1,
                _ => row[1] += 1,
            }
        }
        m
    }

    /// Writes whichever outputs the config names.
    pub fn write_outputs(&self, outputs: &Outputs) -> Result<()> {
        let io = |path: &Path, e: std::io::Error| Error::Config(format!("{}: {e}", path.display()));
        if let Some(path) = &outputs.jsonl {
            std::fs::write(path, self.to_jsonl()).map_err(|e| io(path, e))?;
        }
        if let Some(path) = &outputs.csv {
            std::fs::write(path, self.to_csv()?).map_err(|e| io(path, e))?;
        }
        Ok(())
    }
}

/// Thread cap from `KOSH_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("KOSH_THREADS").ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

/// Runs every case of `cfg` on a pool of at most `threads` workers (all cores if `None`).
/// Output order depends only on the config.
pub fn run_campaign(cfg: &CampaignConfig, threads: Option<usize>) -> Result<CampaignResult> {
    cfg.validate()?;
    let cases = cfg.cases()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| {
        let mut ps: Vec<f64> =
            cases.iter().filter(|c| c.formula.is_some_and(Formula::uses_p)).filter_map(|c| c.p).collect();
        ps.sort_by(f64::total_cmp);
        ps.dedup();
        let tables = ps
            .par_iter()
            .map(|&p| {
                let params = Params::new(p)?;
                Ok((p.to_bits(), eigen_table(&params, cfg.table_size, 1e-15)?))
            })
            .collect::<Result<HashMap<u64, EigenTable>>>()?;
        let mut entries: Vec<(Case, Outcome)> = cases
            .into_par_iter()
            .map(|case| {
                let table = case.p.and_then(|p| tables.get(&p.to_bits()));
                let outcome = match cfg.tolerance_for(case.formula.expect("normalized")) {
                    Err(e) => Outcome::Failed(e),
                    Ok(tol) => match evaluate(&case, table, &tol) {
                        Ok(r) => Outcome::Report(r),
                        Err(e @ (Error::HypothesisViolation { .. } | Error::HypothesisUnmet { .. })) => {
                            Outcome::Skipped(e.to_string())
                        }
                        Err(e) => Outcome::Failed(e),
                    },
                };
                (case, outcome)
            })
            .collect();
        entries.sort_by_key(|(c, _)| c.formula);
        Ok(CampaignResult { entries })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_names_round_trip() {
        for f in Formula::ALL {
            assert_eq!(f.name().parse::<Formula>().unwrap(), f);
        }
        assert_eq!("rotation".parse::<Formula>().unwrap(), Formula::RotationLemma);
        assert!("theorem2".parse::<Formula>().is_err());
    }

    #[test]
    fn dual_pair_is_renormalized() {
        let truncated = (2.0 * PI * 1e7).trunc() / 1e7;
        let b = dual_partner(truncated, Some(truncated), 4.0 * PI * PI).unwrap();
        assert_eq!(b, 4.0 * PI * PI / truncated);
        assert!(dual_partner(PI, Some(3.0 * PI), 4.0 * PI * PI).is_err());
        assert!(dual_partner(-1.0, None, PI * PI).is_err());
    }

    #[test]
    fn config_parses_and_validates() {
        let cfg = CampaignConfig::from_toml(
            r#"
            formulas = ["entry6", "entry_ab"]
            functions = ["exp:a=1"]
            [tolerances]
            atol = 1e-8
            rtol = 1e-8
            [grids.lambert]
            w = [2.0]
            z = [1.0]
            [grids.eisenstein]
            n = [3.0]
            pairs = [[3.141592653589793, 12.566370614359172]]
            [grids.odd_zeta]
            m = [1]
            pairs = [[3.141592653589793, 3.141592653589793]]
            [grids.alpha]
            alpha = [0.5]
            "#,
        )
        .unwrap();
        let cases = cfg.cases().unwrap();
        assert_eq!(cases.len(), 2);
        assert_eq!(cases[1].beta, Some(4.0 * PI * PI / PI));
    }

    #[test]
    fn config_rejects_bad_input() {
        assert!(CampaignConfig::from_toml("formulas = []").is_err());
        assert!(CampaignConfig::from_toml("formulas = [\"nope\"]").is_err());
        assert!(CampaignConfig::from_toml("p_grid = [-1.0]").is_err());
        assert!(CampaignConfig::from_toml("surprise = 1").is_err());
        let bad_pair = "[grids.eisenstein]\nn = [3.0]\npairs = [[1.0, 1.0]]";
        let mut cfg = CampaignConfig::standard();
        cfg.grids.eisenstein = toml::from_str::<EisensteinGrid>(&bad_pair.replace("[grids.eisenstein]\n", "")).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn shipped_config_is_the_standard_grid() {
        let mut cfg = CampaignConfig::from_toml(include_str!("../../../configs/standard.toml")).unwrap();
        assert!(cfg.outputs.jsonl.is_some() && cfg.outputs.csv.is_some());
        cfg.outputs = Outputs::default();
        assert_eq!(cfg, CampaignConfig::standard());
    }

    #[test]
    fn standard_cases_are_ordered_by_formula() {
        let cases = CampaignConfig::standard().cases().unwrap();
        assert!(cases.windows(2).all(|w| w[0].formula <= w[1].formula));
        assert_eq!(cases.iter().filter(|c| c.formula == Some(Formula::Koshalt)).count(), 3);
    }

    #[test]
    fn case_requires_its_inputs() {
        assert!(Case::new(Formula::Theorem4).normalized().is_err());
        let c = Case { function: Some("exp:a=1".into()), ..Case::new(Formula::Entry6) };
        let r = evaluate(&c, None, &Tolerance::default()).unwrap();
        assert!(r.pass);
        let c = Case { p: Some(1.0), function: Some("exp:a=1".into()), ..Case::new(Formula::Theorem4) };
        assert!(matches!(evaluate(&c, None, &Tolerance::default()), Err(Error::InsufficientTable(_))));
    }
}
