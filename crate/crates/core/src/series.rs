//! Infinite sums over smooth node sequences: eigenvalues λ_k or arithmetic
//! progressions. Tails use the midpoint Euler–Maclaurin rule
//!   Σ_{k>N} a(x_k) ≈ ∫_{x(N+½)}^∞ a(x)·(dk/dx) dx + Δ₁/24 − 17·Δ₃/5760,
//! where Δ₁, Δ₃ are the first and third differences centred at N + ½.
//! Error estimates come from comparing two cutoffs.

use crate::eigen::{lambda_continuous, weight, EigenTable, Params};
use crate::error::{Error, Result};
use crate::quad::{integrate_semi_infinite, Envelope, IntegrandSpec};
use crate::special::NeumaierSum;
use num_complex::Complex64;

pub(crate) enum Nodes<'a> {
    Eigen {
        params: &'a Params,
        table: &'a EigenTable,
    },
    /// x_k = start + step·(k − 1) for k ≥ 1.
    Uniform {
        start: f64,
        step: f64,
        limit: usize,
    },
}

impl Nodes<'_> {
    pub fn eigen<'a>(params: &'a Params, table: &'a EigenTable) -> Nodes<'a> {
        Nodes::Eigen { params, table }
    }

    pub fn uniform(start: f64, step: f64) -> Nodes<'static> {
        Nodes::Uniform { start, step, limit: 4000 }
    }

    fn count(&self) -> usize {
        match self {
            Nodes::Eigen { table, .. } => table.count(),
            Nodes::Uniform { limit, .. } => *limit,
        }
    }

    fn node(&self, k: usize) -> f64 {
        match self {
            Nodes::Eigen { table, .. } => table.roots[k - 1].lambda,
            Nodes::Uniform { start, step, .. } => start + step * (k as f64 - 1.0),
        }
    }

    /// x(k) at half-integer k, the lower limit of the tail integral.
    fn node_between(&self, k: f64) -> f64 {
        match self {
            Nodes::Eigen { params, .. } => lambda_continuous(params, k),
            Nodes::Uniform { start, step, .. } => start + step * (k - 1.0),
        }
    }

    /// dk/dx
    fn density(&self, x: f64) -> f64 {
        match self {
            Nodes::Eigen { params, .. } => 1.0 / weight(params, x),
            Nodes::Uniform { step, .. } => 1.0 / step,
        }
    }
}

/// Derivative corrections of the midpoint rule from a_{N−1}, a_N, a_{N+1}, a_{N+2}.
pub(crate) fn midpoint_correction(a: [Complex64; 4]) -> Complex64 {
    let d1 = a[2] - a[1];
    let d3 = a[3] - a[2] * 3.0 + a[1] * 3.0 - a[0];
    d1 / 24.0 - d3 * (17.0 / 5760.0)
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesValue {
    pub value: Complex64,
    pub error: f64,
    pub terms: usize,
}

/// How to integrate the tail beyond the last summed node.
pub(crate) enum Tail<'a> {
    /// Numerically, with the given envelope of a(x) in x.
    Quad(Envelope),
    /// Closed form: ∫_L^∞ a(x)·(dk/dx) dx as a function of L.
    Closed(&'a dyn Fn(f64) -> Complex64),
}

/// Σ_{k≥1} a(x_k) for a term that is smooth in x.
pub(crate) fn smooth_series(
    nodes: &Nodes<'_>,
    term: &dyn Fn(f64) -> Complex64,
    tail: Tail<'_>,
    tol: f64,
) -> Result<SeriesValue> {
    let cap = nodes.count().saturating_sub(2);
    if cap < 16 {
        return Err(Error::InsufficientTable(format!("series needs at least 17 nodes, have {}", nodes.count())));
    }
    let mut acc = NeumaierSum::default();
    let mut partial = Vec::with_capacity(cap + 1);
    partial.push(Complex64::default());
    let mut terms = Vec::with_capacity(cap + 1);
    terms.push(Complex64::default());
    for k in 1..=cap {
        let a = term(nodes.node(k));
        acc.add(a);
        partial.push(acc.value());
        terms.push(a);
        if k >= 3 {
            let (a1, a2) = (terms[k - 1].norm(), a.norm());
            let scale = acc.value().norm();
            if a2 <= 1e-17 * scale && a1 <= 1e-16 * scale && a2 <= 0.9 * a1 || (a2 == 0.0 && a1 == 0.0) {
                let ratio = if a1 > 0.0 { a2 / a1 } else { 0.0 };
                return Ok(SeriesValue {
                    value: acc.value(),
                    error: a2 * ratio / (1.0 - ratio) + f64::EPSILON * scale,
                    terms: k,
                });
            }
        }
    }
    terms.push(term(nodes.node(cap + 1)));
    terms.push(term(nodes.node(cap + 2)));
    let tail_at = |m: usize| -> Result<Complex64> {
        let cut = nodes.node_between(m as f64 + 0.5);
        let integral = match &tail {
            Tail::Closed(g) => g(cut),
            Tail::Quad(env) => {
                let f = |x: f64| term(x) * nodes.density(x);
                let spec = IntegrandSpec::new(&f).lower(cut);
                let spec = match *env {
                    Envelope::Exponential(r) => spec.exponential_decay(r),
                    Envelope::Algebraic(d) => spec.algebraic_decay(d),
                };
                integrate_semi_infinite(&spec, tol * 0.1)?.value
            }
        };
        Ok(integral + midpoint_correction([terms[m - 1], terms[m], terms[m + 1], terms[m + 2]]))
    };
    let value = partial[cap] + tail_at(cap)?;
    let coarse = 3 * cap / 4;
    let other = partial[coarse] + tail_at(coarse)?;
    Ok(SeriesValue { value, error: (value - other).norm(), terms: cap })
}

/// Σ_{k≥1} a(x_k) for a term with an oscillating sign, accelerated by
/// repeated averaging of the last partial sums.
pub(crate) fn alternating_series(nodes: &Nodes<'_>, term: &dyn Fn(f64) -> Complex64) -> Result<SeriesValue> {
    const LEVELS: usize = 24;
    let cap = nodes.count();
    let mut acc = NeumaierSum::default();
    let mut partial = Vec::with_capacity(cap);
    let mut prev_mag = f64::INFINITY;
    for k in 1..=cap {
        let a = term(nodes.node(k));
        acc.add(a);
        partial.push(acc.value());
        let scale = acc.value().norm();
        if k >= 3 && a.norm() <= 1e-17 * scale && prev_mag <= 1e-16 * scale {
            return Ok(SeriesValue { value: acc.value(), error: a.norm() + f64::EPSILON * scale, terms: k });
        }
        prev_mag = a.norm();
    }
    if partial.len() < LEVELS + 1 {
        return Err(Error::InsufficientTable("alternating series needs more nodes".into()));
    }
    let mut level: Vec<Complex64> = partial[partial.len() - LEVELS - 1..].to_vec();
    let mut last_diff = f64::INFINITY;
    while level.len() > 1 {
        if level.len() == 2 {
            last_diff = (level[1] - level[0]).norm();
        }
        level = level.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    }
    Ok(SeriesValue { value: level[0], error: 0.5 * last_diff, terms: cap })
}
