//! Eigenvalues λ_n: the roots of p·sin(πλ) + λ·cos(πλ) = 0 in (n − 1/2, n).
//!
//! Roots are solved in the offset t = λ − (n − 1/2) ∈ (0, 1/2), where the
//! equation becomes p·cos(πt) − λ·sin(πt) = 0 up to the sign (−1)^{n+1}.
//! This form keeps full relative precision in t for tiny and huge p.

use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_PI, PI};

/// The Koshliakov parameter p > 0 with its derived weight shift p(p + 1/π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    p: f64,
    weight_denom_shift: f64,
}

impl Params {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidParameter(format!("p must be finite and > 0, got {p}")));
        }
        Ok(Self { p, weight_denom_shift: p * (p + FRAC_1_PI) })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weight_denom_shift(&self) -> f64 {
        self.weight_denom_shift
    }

    /// The factor 1/(1 + 1/(πp)) that multiplies f(0) and ∫f in the weighted formulas.
    pub fn origin_factor(&self) -> f64 {
        1.0 / (1.0 + 1.0 / (PI * self.p))
    }
}

/// One certified root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub n: usize,
    pub lambda: f64,
    pub residual: f64,
    /// λ − (n − 1/2), kept at full relative precision.
    #[serde(skip)]
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenTable {
    pub p: f64,
    pub roots: Vec<Root>,
}

impl EigenTable {
    pub fn count(&self) -> usize {
        self.roots.len()
    }

    /// λ_n for 1 ≤ n ≤ count.
    pub fn lambda(&self, n: usize) -> Option<f64> {
        self.roots.get(n.checked_sub(1)?).map(|r| r.lambda)
    }

    pub fn lambdas(&self) -> impl Iterator<Item = f64> + '_ {
        self.roots.iter().map(|r| r.lambda)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }
}

/// Reduced-form residual h(t) = p·cos(πt) − (k − 1/2 + t)·sin(πt).
/// Equals ±(p·sin(πλ) + λ·cos(πλ)) with λ = k − 1/2 + t.
pub fn reduced_residual(p: f64, k: f64, t: f64) -> f64 {
    let (s, c) = (PI * t).sin_cos();
    p * c - (k - 0.5 + t) * s
}

fn reduced_derivative(p: f64, k: f64, t: f64) -> f64 {
    let (s, c) = (PI * t).sin_cos();
    -PI * p * s - s - (k - 0.5 + t) * PI * c
}

/// Solves h(t) = 0 on [0, 1/2] for real index k ≥ 1/2; returns t.
fn solve_offset(p: f64, k: f64, index: usize) -> Result<f64> {
    let (mut a, mut b) = (0.0_f64, 0.5_f64);
    let (ha, hb) = (reduced_residual(p, k, a), reduced_residual(p, k, b));
    if !(ha > 0.0 && hb < 0.0) {
        return Err(Error::BracketFailure { index, p });
    }
    while b - a > 1e-6 {
        let m = 0.5 * (a + b);
        if reduced_residual(p, k, m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let guess = (p / k).atan() / PI;
    let mut t = if guess > a && guess < b { guess } else { 0.5 * (a + b) };
    for _ in 0..100 {
        let h = reduced_residual(p, k, t);
        if h == 0.0 {
            return Ok(t);
        }
        if h > 0.0 {
            a = t;
        } else {
            b = t;
        }
        let mut next = t - h / reduced_derivative(p, k, t);
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        let step = (next - t).abs();
        t = next;
        if step <= 2.0 * f64::EPSILON * t || b - a <= 2.0 * f64::EPSILON * b {
            break;
        }
    }
    Ok(t)
}

/// λ_n in (n − 1/2, n).
pub fn solve_lambda(params: &Params, n: usize, tol: f64) -> Result<f64> {
    Ok(solve_root(params, n, tol)?.lambda)
}

fn solve_root(params: &Params, n: usize, tol: f64) -> Result<Root> {
    if n == 0 {
        return Err(Error::InvalidParameter("root index starts at 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    let p = params.p();
    let k = n as f64;
    let t = solve_offset(p, k, n)?;
    let lambda = (k - 0.5) + t;
    let residual = reduced_residual(p, k, t).abs();
    if !(t > 0.0 && t < 0.5) {
        return Err(Error::BracketFailure { index: n, p });
    }
    Ok(Root { n, lambda, residual, offset: t })
}

/// λ_1..λ_{n_max}, each solved independently.
pub fn eigen_table(params: &Params, n_max: usize, tol: f64) -> Result<EigenTable> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be ≥ 1".into()));
    }
    let roots = (1..=n_max).into_par_iter().map(|n| solve_root(params, n, tol)).collect::<Result<Vec<_>>>()?;
    Ok(EigenTable { p: params.p(), roots })
}

/// Node weight (p² + λ²)/(p(p + 1/π) + λ²), written as 1 − (p/π)/(p(p+1/π) + λ²).
pub fn weight(params: &Params, lambda: f64) -> f64 {
    1.0 - (params.p() * FRAC_1_PI) / (params.weight_denom_shift() + lambda * lambda)
}

/// The node λ(k) for real k ≥ 1/2, interpolating the eigenvalues smoothly.
/// dk/dλ = 1/weight(λ), which drives the Euler–Maclaurin tails.
pub fn lambda_continuous(params: &Params, k: f64) -> f64 {
    let t = solve_offset(params.p(), k, 0).expect("bracket holds for p > 0");
    (k - 0.5) + t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect(p: f64, n: usize) -> f64 {
        let g = |x: f64| p * (PI * x).sin() + x * (PI * x).cos();
        let (mut a, mut b) = (n as f64 - 0.5, n as f64);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if g(a) * g(m) <= 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn p1_first_root_regression() {
        let params = Params::new(1.0).unwrap();
        let l = solve_lambda(&params, 1, 1e-13).unwrap();
        // frozen from plain bisection at 1e-14
        assert!((l - 0.787_637_294_164_863_9).abs() < 1e-14, "{l}");
        assert!((l - bisect(1.0, 1)).abs() < 1e-14);
    }

    #[test]
    fn large_and_small_p_limits() {
        let big = Params::new(1e8).unwrap();
        assert!((solve_lambda(&big, 1, 1e-13).unwrap() - 1.0).abs() < 1e-7);
        let small = Params::new(1e-8).unwrap();
        assert!((solve_lambda(&small, 3, 1e-13).unwrap() - 2.5).abs() < 1e-7);
    }

    #[test]
    fn tables_near_limits() {
        let t = eigen_table(&Params::new(0.001).unwrap(), 3, 1e-13).unwrap();
        for r in &t.roots {
            assert!((r.lambda - (r.n as f64 - 0.5)).abs() < 1e-3);
        }
        let t = eigen_table(&Params::new(1000.0).unwrap(), 3, 1e-13).unwrap();
        for r in &t.roots {
            assert!((r.lambda - r.n as f64).abs() < 1e-2);
        }
    }

    #[test]
    fn table_matches_bisection() {
        for &p in &[0.05, 1.0, 20.0] {
            let t = eigen_table(&Params::new(p).unwrap(), 20, 1e-13).unwrap();
            for r in &t.roots {
                assert!((r.lambda - bisect(p, r.n)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn weight_examples() {
        let p1 = Params::new(1.0).unwrap();
        assert!(weight(&p1, 1e8) > 1.0 - 1e-15);
        assert!((weight(&p1, 0.0) - 1.0 / (1.0 + FRAC_1_PI)).abs() < 1e-15);
        let p2 = Params::new(2.0).unwrap();
        let expected = (4.0 + 1.0) / (2.0 * (2.0 + FRAC_1_PI) + 1.0);
        assert!((weight(&p2, 1.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn continuous_nodes_interpolate() {
        let params = Params::new(0.7).unwrap();
        for n in 1..10 {
            let a = lambda_continuous(&params, n as f64);
            assert!((a - solve_lambda(&params, n, 1e-13).unwrap()).abs() < 1e-15);
        }
        let mid = lambda_continuous(&params, 5.5);
        assert!(mid > solve_lambda(&params, 5, 1e-13).unwrap());
        assert!(mid < solve_lambda(&params, 6, 1e-13).unwrap());
    }

    #[test]
    fn invalid_inputs() {
        assert!(Params::new(-1.0).is_err());
        assert!(Params::new(0.0).is_err());
        assert!(Params::new(f64::NAN).is_err());
        let p = Params::new(1.0).unwrap();
        assert!(solve_lambda(&p, 0, 1e-13).is_err());
    }

    #[test]
    fn json_shape() {
        let t = eigen_table(&Params::new(1.0).unwrap(), 2, 1e-13).unwrap();
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["roots"].as_array().unwrap().len(), 2);
        assert!(v["roots"][0]["lambda"].is_f64());
        assert_eq!(v["roots"][0]["n"], 1);
        assert!(v["roots"][0].get("offset").is_none());
    }
}
