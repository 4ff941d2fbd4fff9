//! Koshliakov zeta functions
//!   ζ_p(s) = Σ_j w(λ_j)·λ_j^{−s},   η_p(s) = Σ_k (s, 2πpk)_k·k^{−s},
//! with the integral representation of η_p and the functional equation
//! that carries η_p(2m + 2) to ζ_p(−2m − 1).

use crate::eigen::{weight, EigenTable, Params};
use crate::error::{Error, Result};
use crate::kernels::kernel_real;
use crate::quad::{integrate_semi_infinite, IntegrandSpec};
use crate::series::{alternating_series, smooth_series, Nodes, Tail};
use crate::special::{gamma, hurwitz_zeta, pochhammer, real_pow, riemann_zeta, NeumaierSum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaMethod {
    Series,
    IntegralRep,
    FunctionalEq,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaValue {
    pub s: Complex64,
    pub value: Complex64,
    pub method: ZetaMethod,
    pub error_estimate: f64,
}

impl ZetaValue {
    fn new(s: Complex64, value: Complex64, method: ZetaMethod, error: f64) -> Self {
        let floor = f64::EPSILON * value.norm().max(f64::MIN_POSITIVE);
        Self { s, value, method, error_estimate: error.max(floor) }
    }
}

/// Limits of the parameter p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamLimit {
    /// p → 0: λ_j → j − 1/2 and every weight → 1.
    Zero,
    /// p → ∞: λ_j → j, the classical case.
    Infinity,
}

/// ζ_p(s) in the limit p → 0 or p → ∞.
pub fn zeta_p_limit(limit: ParamLimit, s: Complex64) -> Complex64 {
    match limit {
        ParamLimit::Zero => (real_pow(2.0, s) - 1.0) * riemann_zeta(s),
        ParamLimit::Infinity => riemann_zeta(s),
    }
}

/// η_p(s) in the limit p → 0 or p → ∞.
pub fn eta_p_limit(limit: ParamLimit, s: Complex64) -> Complex64 {
    match limit {
        ParamLimit::Zero => (real_pow(2.0, Complex64::from(1.0) - s) - 1.0) * riemann_zeta(s),
        ParamLimit::Infinity => riemann_zeta(s),
    }
}

fn require_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")))
    }
}

/// Direct eigenvalue series for Re s > 1.
pub fn zeta_p_series(params: &Params, s: Complex64, table: &EigenTable, tol: f64) -> Result<ZetaValue> {
    require_tol(tol)?;
    if !(s.re > 1.0) {
        return Err(Error::InvalidParameter(format!("series needs Re s > 1, got {s}")));
    }
    let term = |l: f64| real_pow(l, -s) * weight(params, l);
    // ∫_L^∞ w(λ)·λ^{−s}·(dk/dλ) dλ with dk/dλ = 1/w
    let closed = |l: f64| real_pow(l, Complex64::from(1.0) - s) / (s - 1.0);
    let sum = smooth_series(&Nodes::eigen(params, table), &term, Tail::Closed(&closed), tol)?;
    if sum.error > tol.max(1e-15 * sum.value.norm()) {
        let msg = format!("ζ_p({s}) error {:e} with {} roots", sum.error, table.count());
        return Err(if s.re < 1.5 { Error::SlowConvergence(msg) } else { Error::InsufficientTable(msg) });
    }
    Ok(ZetaValue::new(s, sum.value, ZetaMethod::Series, sum.error))
}

/// ((a − x)/(a + x))^k without loss of precision on either side of x = a.
fn twisted_power(a: f64, x: f64, k: u64) -> f64 {
    let kf = k as f64;
    if x <= a {
        (kf * (-2.0 * x / (a + x)).ln_1p()).exp()
    } else {
        let m = (kf * (-2.0 * a / (x + a)).ln_1p()).exp();
        if k.is_multiple_of(2) {
            m
        } else {
            -m
        }
    }
}

/// (s, νk)_k = Γ(s)^{−1} ∫_0^∞ e^{−x}·((kν − x)/(kν + x))^k·x^{s−1} dx with its error estimate.
fn coeff_with_error(s: Complex64, nu: f64, k: u64, tol: f64) -> Result<(Complex64, f64)> {
    let a = k as f64 * nu;
    let f = |x: f64| real_pow(x, s - 1.0) * ((-x).exp() * twisted_power(a, x, k));
    // the positive lobe lives on x ≲ ν/(ν + 2); the alternating lobe peaks near √(2ak)
    let lobe = nu / (nu + 2.0);
    let saddle = (2.0 * a * k as f64).sqrt();
    let mut breaks = vec![0.5 * a, a, a + 1.0, a + 30.0, 0.5 * saddle, saddle, 2.0 * saddle];
    for scale in [1.0, 4.0, 16.0, 48.0] {
        breaks.extend([lobe * scale, scale, saddle + scale]);
    }
    breaks.retain(|&b| b > 0.0 && b.is_finite());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs());
    let mut spec = IntegrandSpec::new(&f).exponential_decay(1.0).breaks(&breaks).max_subdivisions(8000);
    if s.re < 1.0 || s.re.fract() != 0.0 || s.im != 0.0 {
        spec = spec.algebraic_at_zero(s.re - 1.0);
    }
    let r = integrate_semi_infinite(&spec, tol)?;
    let g = gamma(s);
    Ok((r.value / g, r.error_estimate / g.norm()))
}

/// The coefficient (s, νk)_k for Re s > 0, ν > 0, k ≥ 1.
pub fn coeff_s_nu_k(s: Complex64, nu: f64, k: u64, tol: f64) -> Result<Complex64> {
    require_tol(tol)?;
    if !(s.re > 0.0) {
        return Err(Error::InvalidParameter(format!("coefficient needs Re s > 0, got {s}")));
    }
    if !(nu > 0.0 && nu.is_finite()) || k == 0 {
        return Err(Error::InvalidParameter(format!("need ν > 0 and k ≥ 1, got ν = {nu}, k = {k}")));
    }
    coeff_with_error(s, nu, k, tol).map(|(v, _)| v)
}

/// The largest index summed term by term before the asymptotic tail.
const ETA_DIRECT_LIMIT: usize = 8192;

/// η_p(s) from its defining series, Re s > 1.
///
/// Past k ≈ 20/√(2ν) the coefficient has the expansion
///   q^{−s}·[1 − D'/k² + E'/k⁴ + …],  q = 1 + 2/ν,
/// so the tail is a combination of Hurwitz zeta values. When that point lies
/// beyond the direct limit the coefficients are ≈ (−1)^k throughout and the
/// series is summed by repeated averaging instead.
pub fn eta_p_series(params: &Params, s: Complex64, tol: f64) -> Result<ZetaValue> {
    require_tol(tol)?;
    if !(s.re > 1.0) {
        return Err(Error::InvalidParameter(format!("series needs Re s > 1, got {s}")));
    }
    let nu = 2.0 * PI * params.p();
    let coeff_tol = 0.1 * tol;
    let onset = (20.0 / (2.0 * nu).sqrt()).max(10.0 * (s.norm() + 6.0)).ceil() as usize;
    let term = |k: usize| -> Result<(Complex64, f64)> {
        let (c, e) = coeff_with_error(s, nu, k as u64, coeff_tol)?;
        let scale = real_pow(k as f64, -s);
        Ok((c * scale, e * scale.norm()))
    };

    if onset > ETA_DIRECT_LIMIT {
        let terms: Vec<(Complex64, f64)> = (1..=ETA_DIRECT_LIMIT).into_par_iter().map(term).collect::<Result<_>>()?;
        let quad_err: f64 = terms.iter().map(|t| t.1).sum();
        let nodes = Nodes::Uniform { start: 1.0, step: 1.0, limit: ETA_DIRECT_LIMIT };
        let lookup = |x: f64| terms[x as usize - 1].0;
        let sum = alternating_series(&nodes, &lookup)?;
        let error = sum.error + quad_err;
        if error > tol.max(1e-15 * sum.value.norm()) {
            return Err(Error::SlowConvergence(format!("η_p({s}) at p = {} error {error:e}", params.p())));
        }
        return Ok(ZetaValue::new(s, sum.value, ZetaMethod::Series, error));
    }

    let n = (4 * onset).div_ceil(3);
    let terms: Vec<(Complex64, f64)> = (1..=n).into_par_iter().map(term).collect::<Result<_>>()?;
    let q = 1.0 + 2.0 / nu;
    let ratio = |j: usize| pochhammer(s, j) * real_pow(q, -s - j as f64);
    let c0 = real_pow(q, -s);
    let c2 = ratio(3) * (2.0 / (3.0 * nu.powi(3)));
    let c4 = ratio(6) * (2.0 / (9.0 * nu.powi(6))) - ratio(5) * (2.0 / (5.0 * nu.powi(5)));
    let tail = |m: usize| {
        let a = m as f64 + 1.0;
        c0 * hurwitz_zeta(s, a) - c2 * hurwitz_zeta(s + 2.0, a) + c4 * hurwitz_zeta(s + 4.0, a)
    };
    let mut acc = NeumaierSum::default();
    let mut at_onset = Complex64::default();
    for (i, t) in terms.iter().enumerate() {
        acc.add(t.0);
        if i + 1 == onset {
            at_onset = acc.value();
        }
    }
    let value = acc.value() + tail(n);
    let other = at_onset + tail(onset);
    let quad_err: f64 = terms.iter().map(|t| t.1).sum();
    let error = (value - other).norm() + quad_err;
    Ok(ZetaValue::new(s, value, ZetaMethod::Series, error))
}

/// η_p(n) = (2π)^n/Γ(n) · ∫_0^∞ z^{n−1}·K(z) dz for Re n > 1.
pub fn eta_p_integral(params: &Params, n: Complex64, tol: f64) -> Result<ZetaValue> {
    require_tol(tol)?;
    if !(n.re > 1.0) {
        return Err(Error::InvalidParameter(format!("integral representation needs Re n > 1, got {n}")));
    }
    let p = params.p();
    let f = |z: f64| real_pow(z, n - 1.0) * kernel_real(p, z);
    let mut breaks = vec![0.5, 1.0, 3.0];
    if p < 3.0 {
        breaks.extend([0.1 * p, p]);
    }
    let spec = IntegrandSpec::new(&f)
        .exponential_decay(2.0 * PI)
        .algebraic_at_zero(n.re - 2.0)
        .breaks(&breaks)
        .max_subdivisions(8000);
    let prefactor = real_pow(2.0 * PI, n) / gamma(n);
    let r = integrate_semi_infinite(&spec, tol / prefactor.norm().max(1.0))?;
    Ok(ZetaValue::new(n, r.value * prefactor, ZetaMethod::IntegralRep, r.error_estimate * prefactor.norm()))
}

/// ζ_p(−2m − 1) = 2(−1)^{m+1}·Γ(2m + 2)·(2π)^{−2m−2}·η_p(2m + 2) for m ≥ 1.
pub fn zeta_p_via_functional_eq(params: &Params, m: u32, tol: f64) -> Result<ZetaValue> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be ≥ 1".into()));
    }
    let s = 2.0 * m as f64 + 2.0;
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    let factor = 2.0 * sign * gamma(Complex64::from(s)).re * (2.0 * PI).powf(-s);
    let eta = eta_p_integral(params, Complex64::from(s), tol / factor.abs().max(1e-300))?;
    Ok(ZetaValue::new(
        Complex64::from(-s + 1.0),
        eta.value * factor,
        ZetaMethod::FunctionalEq,
        eta.error_estimate * factor.abs(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigen_table;

    fn c(x: f64) -> Complex64 {
        Complex64::from(x)
    }

    #[test]
    fn zeta_series_limits() {
        let big = Params::new(1e8).unwrap();
        let t = eigen_table(&big, 400, 1e-13).unwrap();
        let v = zeta_p_series(&big, c(2.0), &t, 1e-10).unwrap();
        assert!((v.value.re - PI * PI / 6.0).abs() < 1e-5);
        let small = Params::new(1e-8).unwrap();
        let t = eigen_table(&small, 400, 1e-13).unwrap();
        let v = zeta_p_series(&small, c(2.0), &t, 1e-10).unwrap();
        assert!((v.value.re - PI * PI / 2.0).abs() < 1e-4);
    }

    #[test]
    fn zeta_series_regression() {
        let p = Params::new(1.0).unwrap();
        let t = eigen_table(&p, 300, 1e-13).unwrap();
        let v = zeta_p_series(&p, c(3.0), &t, 1e-12).unwrap();
        // 3000 roots summed at 30 digits plus tail
        assert!((v.value.re - 2.012_569_606_422_981).abs() < 1e-11, "{}", v.value.re);
        assert_eq!(v.method, ZetaMethod::Series);
        assert!(v.error_estimate > 0.0);
    }

    #[test]
    fn zeta_series_rejects_low_s() {
        let p = Params::new(1.0).unwrap();
        let t = eigen_table(&p, 50, 1e-13).unwrap();
        assert!(zeta_p_series(&p, c(1.0), &t, 1e-8).is_err());
        assert!(matches!(zeta_p_series(&p, c(1.2), &t, 1e-12), Err(Error::SlowConvergence(_))));
    }

    #[test]
    fn coefficient_examples() {
        let v = coeff_s_nu_k(c(2.0), 2.0 * PI, 10_000, 1e-12).unwrap();
        assert!((v.re - (1.0 + 1.0 / PI).powi(-2)).abs() < 1e-3, "{v}");
        let v = coeff_s_nu_k(c(2.0), 2.0 * PI, 1, 1e-13).unwrap();
        assert!((v.re - 0.555_599_051_779_633_4).abs() < 1e-12, "{}", v.re);
        for k in [1, 2, 7, 40] {
            assert!(coeff_s_nu_k(c(1.0), 0.3, k, 1e-12).unwrap().norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn coefficient_half_order() {
        // at s = 1/2 the integrand is x^{−1/2} near the origin
        let v = coeff_s_nu_k(c(0.5), 1.0, 3, 1e-10).unwrap();
        assert!(v.norm() <= 1.0 && v.re.is_finite());
    }

    #[test]
    fn eta_representations_agree() {
        let p = Params::new(1.0).unwrap();
        let a = eta_p_series(&p, c(2.0), 1e-11).unwrap();
        let b = eta_p_integral(&p, c(2.0), 1e-11).unwrap();
        assert!((a.value - b.value).norm() < 1e-9, "{} {}", a.value, b.value);
        assert!((b.value.re - 0.925_315_120_707_844_2).abs() < 1e-10);
    }

    #[test]
    fn eta_limits() {
        let big = Params::new(1e8).unwrap();
        let v = eta_p_integral(&big, c(4.0), 1e-12).unwrap();
        assert!((v.value.re - PI.powi(4) / 90.0).abs() < 1e-6);
        let small = Params::new(1e-6).unwrap();
        let v = eta_p_integral(&small, c(3.0), 1e-12).unwrap();
        let target = eta_p_limit(ParamLimit::Zero, c(3.0)).re;
        assert!((v.value.re - target).abs() < 1e-5, "{} {target}", v.value.re);
    }

    #[test]
    fn functional_equation_values() {
        let big = Params::new(1e8).unwrap();
        let v = zeta_p_via_functional_eq(&big, 1, 1e-13).unwrap();
        assert!((v.value.re - 1.0 / 120.0).abs() < 1e-7);
        let v = zeta_p_via_functional_eq(&big, 2, 1e-13).unwrap();
        assert!((v.value.re + 1.0 / 252.0).abs() < 1e-6);
        let one = Params::new(1.0).unwrap();
        let v = zeta_p_via_functional_eq(&one, 1, 1e-14).unwrap();
        assert!((v.value.re - 0.002_241_769_886_304_332).abs() < 1e-12, "{}", v.value.re);
        assert_eq!(v.s, c(-3.0));
    }

    #[test]
    fn limits_are_consistent() {
        assert!((zeta_p_limit(ParamLimit::Zero, c(2.0)).re - PI * PI / 2.0).abs() < 1e-12);
        assert!((eta_p_limit(ParamLimit::Zero, c(2.0)).re + PI * PI / 12.0).abs() < 1e-12);
    }
}
