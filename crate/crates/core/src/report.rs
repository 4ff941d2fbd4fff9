//! Verification reports, tolerances, and their JSON lines / CSV forms.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::time::Duration;

/// Acceptance thresholds for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
    /// Admit test functions that are singular at z = 0.
    pub allow_origin_singularity: bool,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { atol: 1e-9, rtol: 1e-9, allow_origin_singularity: false }
    }
}

impl Tolerance {
    pub fn new(atol: f64, rtol: f64) -> Result<Self> {
        if !(atol > 0.0 && rtol >= 0.0 && atol.is_finite() && rtol.is_finite()) {
            return Err(Error::InvalidParameter(format!("need atol > 0 and rtol ≥ 0, got {atol}, {rtol}")));
        }
        Ok(Self { atol, rtol, allow_origin_singularity: false })
    }

    pub fn allowing_origin_singularity(mut self) -> Self {
        self.allow_origin_singularity = true;
        self
    }

    /// Target for the individual series and quadratures feeding a report.
    pub fn working(&self) -> f64 {
        (0.01 * self.atol).clamp(1e-14, 1e-8)
    }
}

/// Which parameter regime a report belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamTag {
    /// A concrete p.
    Value(f64),
    /// λ_n = n, the classical case.
    Classical,
    /// λ_n = n − 1/2.
    HalfInteger,
    /// The formula has no p.
    Free,
}

impl Serialize for ParamTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ParamTag::Value(p) => s.serialize_f64(*p),
            ParamTag::Classical => s.serialize_str("p->inf"),
            ParamTag::HalfInteger => s.serialize_str("p->0"),
            ParamTag::Free => s.serialize_none(),
        }
    }
}

impl ParamTag {
    fn csv_field(&self) -> String {
        match self {
            ParamTag::Value(p) => p.to_string(),
            ParamTag::Classical => "p->inf".into(),
            ParamTag::HalfInteger => "p->0".into(),
            ParamTag::Free => String::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Budgets {
    /// Truncation error of the sums.
    pub sum_tail: f64,
    /// Error estimate of every quadrature, in evaluation order.
    pub quad_errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub formula_id: String,
    pub params: ParamTag,
    pub function_id: String,
    /// Scalar arguments besides p and the test function (n, α, β, w, z, m).
    pub inputs: BTreeMap<String, f64>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub budgets: Budgets,
    pub diagnostics: BTreeMap<String, f64>,
    pub atol: f64,
    pub rtol: f64,
    pub pass: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn new(
        formula_id: &str,
        params: ParamTag,
        function_id: &str,
        lhs: Complex64,
        rhs: Complex64,
        budgets: Budgets,
        tol: &Tolerance,
    ) -> Self {
        let mut r = Self {
            formula_id: formula_id.to_string(),
            params,
            function_id: function_id.to_string(),
            inputs: BTreeMap::new(),
            lhs,
            rhs,
            abs_residual: 0.0,
            rel_residual: 0.0,
            budgets,
            diagnostics: BTreeMap::new(),
            atol: tol.atol,
            rtol: tol.rtol,
            pass: false,
            wall_time: Duration::ZERO,
        };
        r.rejudge(tol.atol, tol.rtol);
        r
    }

    /// Recomputes residuals and the verdict under new thresholds.
    pub fn rejudge(&mut self, atol: f64, rtol: f64) {
        let scale = self.lhs.norm().max(self.rhs.norm());
        self.abs_residual = (self.lhs - self.rhs).norm();
        self.rel_residual = if scale > 0.0 { self.abs_residual / scale } else { 0.0 };
        self.atol = atol;
        self.rtol = rtol;
        self.pass = self.abs_residual <= atol.max(rtol * scale);
    }

    pub fn with_input(mut self, name: &str, value: f64) -> Self {
        self.inputs.insert(name.to_string(), value);
        self
    }

    pub fn with_diagnostic(mut self, name: &str, value: f64) -> Self {
        self.diagnostics.insert(name.to_string(), value);
        self
    }

    pub fn scale(&self) -> f64 {
        self.lhs.norm().max(self.rhs.norm())
    }

    /// One JSON object without timing, so that reruns are byte-identical.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Like [`to_json`](Self::to_json) with a `wall_time_s` field appended.
    pub fn to_json_timed(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["wall_time_s"] = serde_json::json!(self.wall_time.as_secs_f64());
        v.to_string()
    }
}

/// One report per line, in the given order.
pub fn to_jsonl(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.to_json());
        out.push('\n');
    }
    out
}

pub const CSV_COLUMNS: [&str; 9] =
    ["formula_id", "p", "function", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_residual", "pass"];

pub fn to_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for r in reports {
        w.write_record([
            r.formula_id.clone(),
            r.params.csv_field(),
            r.function_id.clone(),
            r.lhs.re.to_string(),
            r.lhs.im.to_string(),
            r.rhs.re.to_string(),
            r.rhs.im.to_string(),
            r.abs_residual.to_string(),
            r.pass.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
