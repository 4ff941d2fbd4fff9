//! The map σ(t) = (p + t)/(p − t), the kernel K(z) = 1/(σ(z)e^{2πz} − 1),
//! its partial-fraction expansion over the eigenvalues, and σ_p(z).

use crate::eigen::{lambda_continuous, solve_lambda, weight, EigenTable, Params};
use crate::error::{Error, Result};
use crate::series::midpoint_correction;
use crate::special::{expm1, NeumaierSum};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

const POLE_RADIUS: f64 = 1e-8;

pub fn sigma(params: &Params, t: Complex64) -> Result<Complex64> {
    let p = params.p();
    let d = Complex64::from(p) - t;
    if d.norm() < 1e-300_f64.max(p * f64::EPSILON) {
        return Err(Error::PoleAtP { t });
    }
    Ok((p + t) / d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEval {
    pub z: Complex64,
    pub value: Complex64,
    pub nearest_singularity_distance: f64,
}

/// K(z) without pole checks, in the overflow-free form for either half-plane.
pub fn kernel_value(p: f64, z: Complex64) -> Complex64 {
    let two_pi_z = z * (2.0 * PI);
    if z.re < 0.0 {
        let e = two_pi_z.exp();
        (p - z) / (expm1(two_pi_z) * p + z * (e + 1.0))
    } else {
        let e = (-two_pi_z).exp();
        (Complex64::from(p) - z) * e / (-expm1(-two_pi_z) * p + z * (e + 1.0))
    }
}

/// K(x) for real x > 0.
pub fn kernel_real(p: f64, x: f64) -> f64 {
    let e = (-2.0 * PI * x).exp();
    (p - x) * e / (-p * (-2.0 * PI * x).exp_m1() + x * (1.0 + e))
}

/// Distance from z to the nearest pole of K (0 and ±iλ_j).
fn nearest_pole(params: &Params, z: Complex64) -> (f64, f64) {
    let mut best = (z.norm(), 0.0);
    let y = z.im.abs();
    let base = y.floor() as i64;
    for n in (base - 1).max(1)..=(base + 2) {
        if let Ok(l) = solve_lambda(params, n as usize, 1e-13) {
            let d = Complex64::new(z.re, y - l).norm();
            if d < best.0 {
                best = (d, l);
            }
        }
    }
    best
}

pub fn kernel_k(params: &Params, z: Complex64) -> Result<KernelEval> {
    let (distance, lambda) = nearest_pole(params, z);
    if distance < POLE_RADIUS {
        return Err(Error::NearPole { z, lambda });
    }
    Ok(KernelEval { z, value: kernel_value(params.p(), z), nearest_singularity_distance: distance })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialFraction {
    pub value: Complex64,
    /// Analytic tail beyond the last table term.
    pub tail: Complex64,
    pub error_estimate: f64,
    pub terms: usize,
}

/// −1/2 + c₀/z + (z/π)·Σ w_k/(z² + λ_k²), with an Euler–Maclaurin tail.
pub fn kernel_k_partial_fraction(
    params: &Params,
    z: Complex64,
    table: &EigenTable,
    tail_tol: f64,
) -> Result<PartialFraction> {
    if table.count() < 8 {
        return Err(Error::InsufficientTable(format!("need at least 8 roots, have {}", table.count())));
    }
    let (distance, lambda) = nearest_pole(params, z);
    if distance < POLE_RADIUS {
        return Err(Error::NearPole { z, lambda });
    }
    let term = |l: f64| z * weight(params, l) / ((z * z + l * l) * PI);
    let n = table.count() - 2;
    let lambdas: Vec<f64> = table.lambdas().collect();
    let mut partial = Vec::with_capacity(n + 1);
    let mut acc = NeumaierSum::default();
    partial.push(acc.value());
    for &l in &lambdas[..n] {
        acc.add(term(l));
        partial.push(acc.value());
    }
    let tail_at = |m: usize| -> Complex64 {
        let cut = lambda_continuous(params, m as f64 + 0.5);
        let a = [term(lambdas[m - 2]), term(lambdas[m - 1]), term(lambdas[m]), term(lambdas[m + 1])];
        (z / cut).atan() / PI + midpoint_correction(a)
    };
    let head = Complex64::from(-0.5) + params.origin_factor() / (2.0 * PI) / z;
    let tail = tail_at(n);
    let coarse = 3 * n / 4;
    let error_estimate = ((partial[n] + tail) - (partial[coarse] + tail_at(coarse))).norm();
    if error_estimate > tail_tol {
        return Err(Error::InsufficientTable(format!(
            "partial-fraction tail error {error_estimate:e} exceeds {tail_tol:e} with {} roots",
            table.count()
        )));
    }
    Ok(PartialFraction { value: head + partial[n] + tail, tail, error_estimate, terms: n })
}

/// σ_p(z) = Σ_j w_j e^{−λ_j z} together with a truncation error estimate.
pub fn sigma_p_with_error(params: &Params, z: f64, table: &EigenTable, tol: f64) -> Result<(f64, f64)> {
    if !(z > 0.0) {
        return Err(Error::DivergesAtZero { z });
    }
    let lambdas: Vec<f64> = table.lambdas().collect();
    let term = |l: f64| weight(params, l) * (-l * z).exp();
    let geometric = 1.0 / -(-z).exp_m1();
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut partial = Vec::with_capacity(lambdas.len());
    for (k, &l) in lambdas.iter().enumerate() {
        let t = term(l);
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        partial.push(sum);
        if let Some(&next) = lambdas.get(k + 1) {
            let bound = (-next * z).exp() * geometric;
            if bound < tol {
                return Ok((sum, bound));
            }
        }
    }
    let n = lambdas.len() - 2;
    if n < 8 {
        return Err(Error::InsufficientTable("σ_p needs at least 9 roots".into()));
    }
    let with_tail = |m: usize| {
        let cut = lambda_continuous(params, m as f64 + 0.5);
        let a = [m - 2, m - 1, m, m + 1].map(|i| Complex64::from(term(lambdas[i])));
        partial[m - 1] + (-cut * z).exp() / z + midpoint_correction(a).re
    };
    let value = with_tail(n);
    let error = (value - with_tail(3 * n / 4)).abs();
    if error > tol.max(1e-15 * value.abs()) * 10.0 {
        return Err(Error::InsufficientTable(format!("σ_p({z}) tail error {error:e}")));
    }
    Ok((value, error))
}

pub fn sigma_p(params: &Params, z: f64, table: &EigenTable, tol: f64) -> Result<f64> {
    Ok(sigma_p_with_error(params, z, table, tol)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigen_table;

    fn params(p: f64) -> Params {
        Params::new(p).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let p1 = params(1.0);
        assert_eq!(sigma(&p1, Complex64::from(0.0)).unwrap(), Complex64::from(1.0));
        assert!((sigma(&p1, Complex64::from(1e12)).unwrap() + 1.0).norm() < 1e-11);
        let s = sigma(&params(2.0), Complex64::i()).unwrap();
        assert!((s - Complex64::new(0.6, 0.8)).norm() < 1e-15);
        assert!(matches!(sigma(&p1, Complex64::from(1.0)), Err(Error::PoleAtP { .. })));
    }

    #[test]
    fn kernel_decay_and_classical_limit() {
        for &p in &[0.01, 1.0, 100.0] {
            let k = kernel_k(&params(p), Complex64::from(3.0)).unwrap().value;
            assert!(k.norm() < 2.0 * (-6.0 * PI).exp());
        }
        let k = kernel_k(&params(1e8), Complex64::from(0.5)).unwrap().value;
        assert!((k.re - 1.0 / PI.exp_m1()).abs() < 1e-6);
    }

    #[test]
    fn kernel_definition_closure_below_p() {
        let pr = params(2.0);
        for &x in &[0.1, 0.5, 1.0, 1.9] {
            let k = kernel_real(2.0, x);
            let s = sigma(&pr, Complex64::from(x)).unwrap().re;
            assert!((k * (s * (2.0 * PI * x).exp() - 1.0) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_rejects_poles() {
        let pr = params(1.0);
        let l1 = solve_lambda(&pr, 1, 1e-13).unwrap();
        assert!(matches!(kernel_k(&pr, Complex64::new(0.0, l1)), Err(Error::NearPole { .. })));
        assert!(matches!(kernel_k(&pr, Complex64::from(0.0)), Err(Error::NearPole { .. })));
    }

    #[test]
    fn partial_fraction_examples() {
        let cases = [(1.0, Complex64::from(0.7), 200, 1e-8), (1.0, Complex64::new(2.0, 0.3), 400, 1e-8)];
        for (p, z, n, tol) in cases {
            let pr = params(p);
            let table = eigen_table(&pr, n, 1e-13).unwrap();
            let pf = kernel_k_partial_fraction(&pr, z, &table, 1e-9).unwrap();
            assert!((pf.value - kernel_value(p, z)).norm() < tol);
        }
        for p in [0.01, 100.0] {
            let pr = params(p);
            let table = eigen_table(&pr, 200, 1e-13).unwrap();
            let pf = kernel_k_partial_fraction(&pr, Complex64::from(0.9), &table, 1e-9).unwrap();
            assert!((pf.value - kernel_value(p, Complex64::from(0.9))).norm() < 1e-7);
        }
    }

    #[test]
    fn partial_fraction_short_table_is_rejected() {
        let pr = params(1.0);
        let table = eigen_table(&pr, 4, 1e-13).unwrap();
        assert!(matches!(
            kernel_k_partial_fraction(&pr, Complex64::from(0.7), &table, 1e-9),
            Err(Error::InsufficientTable(_))
        ));
    }

    #[test]
    fn sigma_p_examples() {
        let pr = params(1.0);
        let table = eigen_table(&pr, 400, 1e-13).unwrap();
        // λ_1 ≈ 0.788 at p = 1, so the leading term is w_1·e^{−39.4} ≈ 6e-18
        let lead = weight(&pr, table.roots[0].lambda) * (-50.0 * table.roots[0].lambda).exp();
        let v = sigma_p(&pr, 50.0, &table, 1e-30).unwrap();
        assert!(v < 1e-17 && (v - lead).abs() < 1e-6 * lead);
        let big = params(1e8);
        let tb = eigen_table(&big, 400, 1e-13).unwrap();
        assert!((sigma_p(&big, 1.0, &tb, 1e-16).unwrap() - 1.0 / 1f64.exp_m1()).abs() < 1e-6);
        // brute-force oracle: direct summation over 4000 roots
        let long = eigen_table(&pr, 4000, 1e-13).unwrap();
        let direct: f64 = long.lambdas().map(|l| weight(&pr, l) * (-2.0 * l).exp()).sum();
        assert!((sigma_p(&pr, 2.0, &table, 1e-16).unwrap() - direct).abs() < 1e-15);
        assert!(matches!(sigma_p(&pr, 0.0, &table, 1e-10), Err(Error::DivergesAtZero { .. })));
    }

    #[test]
    fn sigma_p_small_argument_uses_tail() {
        let pr = params(1.0);
        let table = eigen_table(&pr, 400, 1e-13).unwrap();
        let long = eigen_table(&pr, 20000, 1e-13).unwrap();
        let z = 0.01;
        let direct: f64 = long.lambdas().map(|l| weight(&pr, l) * (-l * z).exp()).sum();
        let v = sigma_p(&pr, z, &table, 1e-12).unwrap();
        let cut = lambda_continuous(&pr, 20000.5);
        assert!((v - direct - (-cut * z).exp() / z).abs() < 1e-9);
    }

    #[test]
    fn sigma_p_decreasing() {
        let pr = params(0.3);
        let table = eigen_table(&pr, 400, 1e-13).unwrap();
        let vals: Vec<f64> = (1..40).map(|k| sigma_p(&pr, 0.05 * k as f64, &table, 1e-14).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }
}
