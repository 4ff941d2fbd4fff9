//! Analytic test functions with the metadata the evaluators gate on.

use crate::error::{Error, Result};
use crate::quad::Envelope;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A function analytic in Re z ≥ 0 (possibly except the origin) with
/// |f(x ± iy)| ≤ C·e^{γy}, where γ is `growth_bound`.
#[derive(Clone)]
pub struct AnalyticFunction {
    pub id: String,
    eval: ComplexFn,
    deriv: Option<ComplexFn>,
    pub growth_bound: f64,
    pub x_integrable: bool,
    /// Decay along the positive real axis.
    pub real_decay: Envelope,
    /// Not analytic at z = 0 (only admitted when explicitly allowed).
    pub origin_singular: bool,
    pub closed_forms: BTreeMap<String, f64>,
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("id", &self.id)
            .field("growth_bound", &self.growth_bound)
            .field("real_decay", &self.real_decay)
            .field("has_deriv", &self.deriv.is_some())
            .field("origin_singular", &self.origin_singular)
            .finish()
    }
}

impl AnalyticFunction {
    pub fn new(
        id: impl Into<String>,
        eval: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        growth_bound: f64,
        real_decay: Envelope,
    ) -> Self {
        Self {
            id: id.into(),
            eval: Arc::new(eval),
            deriv: None,
            growth_bound,
            x_integrable: true,
            real_decay,
            origin_singular: false,
            closed_forms: BTreeMap::new(),
        }
    }

    pub fn with_deriv(mut self, deriv: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(deriv));
        self
    }

    pub fn with_closed_form(mut self, name: &str, value: f64) -> Self {
        self.closed_forms.insert(name.to_string(), value);
        self
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        (self.eval)(Complex64::from(x))
    }

    pub fn deriv(&self, z: Complex64) -> Option<Complex64> {
        self.deriv.as_ref().map(|d| d(z))
    }

    pub fn has_deriv(&self) -> bool {
        self.deriv.is_some()
    }

    /// z ↦ f(c·z) for c > 0.
    pub fn dilate(&self, c: f64) -> AnalyticFunction {
        let inner = self.eval.clone();
        let mut out = AnalyticFunction {
            id: format!("{}@x{}", self.id, c),
            eval: Arc::new(move |z| inner(z * c)),
            deriv: None,
            growth_bound: self.growth_bound * c,
            x_integrable: self.x_integrable,
            real_decay: match self.real_decay {
                Envelope::Exponential(r) => Envelope::Exponential(r * c),
                other => other,
            },
            origin_singular: self.origin_singular,
            closed_forms: BTreeMap::new(),
        };
        if let Some(d) = self.deriv.clone() {
            out.deriv = Some(Arc::new(move |z| d(z * c) * c));
        }
        out
    }

    /// Refuses functions whose growth reaches the formula's threshold.
    pub fn check_gate(&self, formula: &str, threshold: f64, allow_origin_singularity: bool) -> Result<()> {
        if !(self.growth_bound < threshold) {
            return Err(Error::HypothesisViolation {
                formula: formula.to_string(),
                growth: self.growth_bound,
                threshold,
            });
        }
        if self.origin_singular && !allow_origin_singularity {
            return Err(Error::HypothesisUnmet {
                formula: formula.to_string(),
                reason: format!("{} is singular at the origin (allow_origin_singularity not set)", self.id),
            });
        }
        Ok(())
    }

    /// Derivative from metadata, else a central difference.
    pub(crate) fn deriv_or_fd(&self, z: Complex64) -> Complex64 {
        self.deriv(z).unwrap_or_else(|| {
            let h = 1e-5 * (1.0 + z.norm());
            (self.eval(z + h) - self.eval(z - h)) / (2.0 * h)
        })
    }
}

fn parse_args(spec: &str, allowed: &[&str]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    if spec.is_empty() {
        return Ok(out);
    }
    for part in spec.split(',') {
        let (k, v) =
            part.split_once('=').ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{part}`")))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            return Err(Error::InvalidParameter(format!("unknown preset parameter `{k}`")));
        }
        let v: f64 = v.trim().parse().map_err(|_| Error::InvalidParameter(format!("bad number `{v}` for `{k}`")))?;
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("`{k}` must be finite")));
        }
        out.insert(k.to_string(), v);
    }
    Ok(out)
}

fn required(args: &BTreeMap<String, f64>, key: &str, default: Option<f64>) -> Result<f64> {
    args.get(key)
        .copied()
        .or(default)
        .ok_or_else(|| Error::InvalidParameter(format!("missing preset parameter `{key}`")))
}

/// e^{−az}
pub fn exp_preset(a: f64) -> Result<AnalyticFunction> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("exp needs a > 0, got {a}")));
    }
    Ok(AnalyticFunction::new(format!("exp:a={a}"), move |z| (-z * a).exp(), 0.0, Envelope::Exponential(a))
        .with_deriv(move |z| -(-z * a).exp() * a)
        .with_closed_form("integral", 1.0 / a)
        .with_closed_form("sum_from_0", 1.0 / -(-a).exp_m1()))
}

/// 1/((z + b)² + c²)
pub fn rational_preset(b: f64, c: f64) -> Result<AnalyticFunction> {
    if !(b > 0.0 && c >= 0.0) {
        return Err(Error::InvalidParameter(format!("rational needs b > 0 and c ≥ 0, got b={b}, c={c}")));
    }
    let integral = if c == 0.0 { 1.0 / b } else { (PI / 2.0 - (b / c).atan()) / c };
    Ok(AnalyticFunction::new(
        format!("rational:b={b},c={c}"),
        move |z| {
            let u = z + b;
            (u * u + c * c).inv()
        },
        0.0,
        Envelope::Algebraic(2.0),
    )
    .with_deriv(move |z| {
        let u = z + b;
        let d = u * u + c * c;
        -u * 2.0 / (d * d)
    })
    .with_closed_form("integral", integral))
}

/// t^{w−1} e^{−t·z₀}; singular at the origin unless w is a positive integer.
pub fn gammaker_preset(w: Complex64, z0: Complex64) -> Result<AnalyticFunction> {
    if !(z0.re > 0.0 && w.re > 0.0) {
        return Err(Error::InvalidParameter("gammaker needs Re(w) > 0 and Re(z0) > 0".into()));
    }
    let integer_power = w.im == 0.0 && w.re.fract() == 0.0;
    let id = if w.im == 0.0 && z0.im == 0.0 {
        format!("gammaker:w={},z0={}", w.re, z0.re)
    } else {
        format!("gammaker:w={w},z0={z0}")
    };
    let power =
        move |t: Complex64| if t == Complex64::default() { Complex64::default() } else { (t.ln() * (w - 1.0)).exp() };
    let mut f =
        AnalyticFunction::new(id, move |t| power(t) * (-t * z0).exp(), z0.im.abs(), Envelope::Exponential(z0.re))
            .with_deriv(move |t| {
                let base = (-t * z0).exp();
                if t == Complex64::default() {
                    return Complex64::default();
                }
                (t.ln() * (w - 2.0)).exp() * base * ((w - 1.0) - t * z0)
            });
    f.origin_singular = !integer_power;
    Ok(f)
}

/// e^{−az}·cos(bz), growth bound b.
pub fn expcos_preset(a: f64, b: f64) -> Result<AnalyticFunction> {
    if !(a > 0.0 && b >= 0.0) {
        return Err(Error::InvalidParameter(format!("expcos needs a > 0, b ≥ 0, got a={a}, b={b}")));
    }
    Ok(AnalyticFunction::new(
        format!("expcos:a={a},b={b}"),
        move |z| (-z * a).exp() * (z * b).cos(),
        b,
        Envelope::Exponential(a),
    )
    .with_deriv(move |z| -(-z * a).exp() * ((z * b).cos() * a + (z * b).sin() * b))
    .with_closed_form("integral", a / (a * a + b * b)))
}

/// f(x) = 1/(1 + x)², the Laplace transform of f₁(y) = y·e^{−y}.
pub fn mellin_pair() -> AnalyticFunction {
    AnalyticFunction::new("mellin_pair", |z| (z + 1.0).powi(-2), 0.0, Envelope::Algebraic(2.0))
        .with_deriv(|z| (z + 1.0).powi(-3) * -2.0)
        .with_closed_form("f0", 1.0)
        .with_closed_form("integral", 1.0)
}

/// The companion f₁(y) = y·e^{−y} of [`mellin_pair`].
pub fn mellin_companion(y: f64) -> f64 {
    y * (-y).exp()
}

/// Builds a preset from a string such as `exp:a=1.5` or `rational:b=1,c=2`.
pub fn preset(name: &str) -> Result<AnalyticFunction> {
    let (kind, rest) = name.split_once(':').unwrap_or((name, ""));
    match kind.trim().to_ascii_lowercase().as_str() {
        "exp" => {
            let a = parse_args(rest, &["a"])?;
            exp_preset(required(&a, "a", Some(1.0))?)
        }
        "rational" => {
            let a = parse_args(rest, &["b", "c"])?;
            rational_preset(required(&a, "b", Some(1.0))?, required(&a, "c", Some(0.0))?)
        }
        "gammaker" => {
            let a = parse_args(rest, &["w", "z0"])?;
            gammaker_preset(Complex64::from(required(&a, "w", None)?), Complex64::from(required(&a, "z0", None)?))
        }
        "expcos" => {
            let a = parse_args(rest, &["a", "b"])?;
            expcos_preset(required(&a, "a", None)?, required(&a, "b", None)?)
        }
        "mellin_pair" => {
            parse_args(rest, &[])?;
            Ok(mellin_pair())
        }
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_semi_infinite, IntegrandSpec};

    #[test]
    fn preset_examples() {
        let e = preset("exp:a=1").unwrap();
        assert!((e.eval(Complex64::new(0.0, PI)) + 1.0).norm() < 1e-15);
        let r = preset("rational:b=1,c=1").unwrap();
        assert!((r.eval_real(0.0).re - 0.5).abs() < 1e-16);
        let m = preset("mellin_pair").unwrap();
        assert_eq!(m.eval_real(0.0).re, 1.0);
    }

    #[test]
    fn mellin_pair_integral_and_laplace() {
        let m = mellin_pair();
        let f = |x: f64| m.eval_real(x);
        let r = integrate_semi_infinite(&IntegrandSpec::new(&f).algebraic_decay(2.0), 1e-12).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-10);
        for x in [0.3, 2.0] {
            let g = |y: f64| Complex64::from((-x * y).exp() * mellin_companion(y));
            let lap = integrate_semi_infinite(&IntegrandSpec::new(&g).exponential_decay(1.0 + x), 1e-13).unwrap();
            assert!((lap.value.re - m.eval_real(x).re).abs() < 1e-11);
        }
    }

    #[test]
    fn unknown_and_bad_presets() {
        assert!(matches!(preset("sinc:a=1"), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset("exp:a=-1"), Err(Error::InvalidParameter(_))));
        assert!(matches!(preset("exp:q=1"), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn gate_rejects_fast_growth_and_origin_singularity() {
        let f = preset("expcos:a=1,b=2").unwrap();
        assert!(f.check_gate("entry4", PI / 2.0, false).is_err());
        assert!(f.check_gate("theorem4", 2.0 * PI, false).is_ok());
        let g = preset("gammaker:w=2.5,z0=1").unwrap();
        assert!(g.check_gate("theorem5", 2.0 * PI, false).is_err());
        assert!(g.check_gate("theorem5", 2.0 * PI, true).is_ok());
    }

    #[test]
    fn dilation() {
        let f = preset("exp:a=1").unwrap().dilate(2.0);
        let z = Complex64::new(0.3, 0.2);
        assert!((f.eval(z) - (-z * 2.0).exp()).norm() < 1e-15);
        assert!((f.deriv(z).unwrap() + (-z * 2.0).exp() * 2.0).norm() < 1e-15);
    }

    #[test]
    fn closed_forms_hold() {
        let r = preset("rational:b=2,c=1").unwrap();
        let f = |x: f64| r.eval_real(x);
        let q = integrate_semi_infinite(&IntegrandSpec::new(&f).algebraic_decay(2.0), 1e-13).unwrap();
        assert!((q.value.re - r.closed_forms["integral"]).abs() < 1e-11);
    }
}
