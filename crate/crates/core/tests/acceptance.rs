//! End-to-end acceptance checks, one line of output per criterion.
//! Runs sequentially so the PV invocation counter sees only its own calls.

use koshliakov::campaign::{run_campaign, CampaignConfig, Formula, Outcome};
use koshliakov::eigen::{eigen_table, reduced_residual, EigenTable, Params};
use koshliakov::identities::{
    eval_corollary_half_eisenstein, eval_corollary_zeta_odd, eval_entry_ab, eval_thm_eisenstein_p,
};
use koshliakov::kernels::{kernel_k, kernel_k_partial_fraction};
use koshliakov::quad::pv_invocation_count;
use koshliakov::report::{Tolerance, VerificationReport};
use koshliakov::special::riemann_zeta;
use koshliakov::sumform::{
    eval_abel_plana, eval_entry4, eval_entry5, eval_entry6, eval_half_integer, eval_koshagain, eval_theorem4,
};
use koshliakov::testfns::{exp_preset, preset, rational_preset};
use koshliakov::zeta::{eta_p_integral, eta_p_series, zeta_p_via_functional_eq};
use koshliakov::Complex64;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::from(x)
}

fn table(p: f64, n: usize) -> (Params, EigenTable) {
    let params = Params::new(p).unwrap();
    let t = eigen_table(&params, n, 1e-15).unwrap();
    (params, t)
}

fn closes(r: &VerificationReport, bound: f64) -> Check {
    ensure(r.abs_residual <= bound * r.scale().max(1.0), || {
        format!("{} {:?} {}: residual {:e} > {bound:e}", r.formula_id, r.params, r.function_id, r.abs_residual)
    })
}

fn eigen_certification() -> Check {
    for p in [1e-6, 0.01, 0.1, 1.0, 10.0, 100.0, 1e6] {
        let (_, t) = table(p, 50);
        for root in &t.roots {
            let (n, l) = (root.n as f64, root.lambda);
            ensure(n - 0.5 < l && l < n, || format!("p={p}: λ_{n} = {l} outside its bracket"))?;
            // the reduced form in t = λ − n + ½ avoids the rounding of sin(πλ) at large λ
            let residual = reduced_residual(p, n, root.offset).abs();
            ensure(residual <= 1e-12 * (1.0 + p), || format!("p={p} n={n}: residual {residual:e}"))?;
            // tan(πt) = λ/p below n, p/λ above n − ½, and tan x ≥ x
            if p >= 100.0 {
                ensure(n - l <= n / (PI * p), || format!("p={p} n={n}: |λ − n| = {:e}", n - l))?;
            }
            if p <= 0.01 {
                let d = root.offset;
                ensure(d <= p / (PI * (n - 0.5)), || format!("p={p} n={n}: |λ − n + ½| = {d:e}"))?;
            }
        }
    }
    Ok(())
}

fn partial_fraction_closure() -> Check {
    for p in [0.01, 0.1, 1.0, 10.0, 100.0] {
        let (params, t) = table(p, 4000);
        for re in [0.1, 0.3, 1.0, 2.5, 5.0] {
            for im in [-2.0, -1.3, -0.6, 0.0, 0.75, 1.5, 2.0] {
                let z = Complex64::new(re, im);
                if (z - p).norm() < 1e-3 {
                    continue;
                }
                let direct = kernel_k(&params, z).map_err(|e| e.to_string())?.value;
                let series = kernel_k_partial_fraction(&params, z, &t, 1e-9).map_err(|e| e.to_string())?.value;
                let d = (direct - series).norm();
                ensure(d < 1e-7, || format!("p={p} z={z}: K = {direct}, expansion = {series}"))?;
            }
        }
    }
    Ok(())
}

fn zeta_cross_representation() -> Check {
    for p in [0.1, 1.0, 10.0] {
        let params = Params::new(p).unwrap();
        for s in [2.0, 3.0, 4.0] {
            let a = eta_p_series(&params, c(s), 1e-10).map_err(|e| e.to_string())?.value;
            let b = eta_p_integral(&params, c(s), 1e-10).map_err(|e| e.to_string())?.value;
            ensure((a - b).norm() < 1e-6, || format!("p={p} s={s}: series {a} vs integral {b}"))?;
        }
    }
    let large = Params::new(1e8).unwrap();
    let small = Params::new(1e-6).unwrap();
    for (s, expected) in [(2.0, PI * PI / 6.0), (4.0, PI.powi(4) / 90.0)] {
        let v = eta_p_integral(&large, c(s), 1e-10).map_err(|e| e.to_string())?.value.re;
        ensure((v - expected).abs() < 1e-4, || format!("s={s}, p=1e8: {v} vs {expected}"))?;
    }
    for s in [2.0, 3.0, 4.0] {
        let expected = ((2f64).powf(1.0 - s) - 1.0) * riemann_zeta(c(s)).re;
        let v = eta_p_series(&small, c(s), 1e-10).map_err(|e| e.to_string())?.value.re;
        ensure((v - expected).abs() < 1e-4, || format!("s={s}, p=1e-6: {v} vs {expected}"))?;
    }
    Ok(())
}

const SUMMATION: [Formula; 12] = [
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
];

fn summation_closure() -> Check {
    let cfg = CampaignConfig {
        formulas: SUMMATION.iter().map(|f| f.name().to_string()).collect(),
        ..CampaignConfig::standard()
    };
    let result = run_campaign(&cfg, None).map_err(|e| e.to_string())?;
    let mut seen = std::collections::BTreeSet::new();
    for (case, outcome) in &result.entries {
        match outcome {
            Outcome::Report(r) => {
                let bound = if case.formula == Some(Formula::Koshalt) { 1e-5 } else { 1e-6 };
                closes(r, bound)?;
                seen.insert(case.formula);
            }
            Outcome::Skipped(_) => {}
            Outcome::Failed(e) => return Err(format!("{case:?}: {e}")),
        }
    }
    ensure(seen.len() == SUMMATION.len(), || format!("only {} formulas produced reports", seen.len()))?;
    let tight = Tolerance::new(1e-10, 1e-10).unwrap();
    let err = |e: koshliakov::Error| e.to_string();
    let exp1 = exp_preset(1.0).unwrap();
    let r = eval_abel_plana(&exp1, &tight).map_err(err)?;
    let expected = 1.0 / -(-1f64).exp_m1();
    ensure((r.lhs.re - expected).abs() < 1e-9 && r.abs_residual < 1e-9, || format!("Σe^(−n): {r:?}"))?;
    let r = eval_abel_plana(&rational_preset(1.0, 0.0).unwrap(), &tight).map_err(err)?;
    ensure((r.lhs.re - PI * PI / 6.0).abs() < 1e-9 && r.abs_residual < 1e-9, || format!("Σ1/(n+1)²: {r:?}"))?;
    let r = eval_entry6(&exp1, &tight).map_err(err)?;
    ensure((r.lhs.re - 0.5 / 1f64.sinh()).abs() < 1e-9 && r.abs_residual < 1e-9, || format!("1/(2 sinh 1): {r:?}"))
}

fn degeneration_web() -> Check {
    let tol = Tolerance::new(1e-8, 1e-8).unwrap();
    let err = |e: koshliakov::Error| e.to_string();
    let near = |a: Complex64, b: Complex64, what: &str| ensure((a - b).norm() < 1e-4, || format!("{what}: {a} vs {b}"));
    let (large, large_t) = table(1e8, 4000);
    let (small, small_t) = table(1e-6, 4000);
    for name in ["exp:a=1", "rational:b=1,c=1", "expcos:a=1,b=1"] {
        let f = preset(name).unwrap();
        let f0 = f.eval_real(0.0);
        let t4 = eval_theorem4(&f, &large, &large_t, &tol).map_err(err)?;
        let ap = eval_abel_plana(&f, &tol).map_err(err)?;
        near(t4.lhs + f0, ap.lhs, &format!("{name} theorem4(1e8) lhs"))?;
        near(t4.rhs + f0, ap.rhs, &format!("{name} theorem4(1e8) rhs"))?;
        let t4 = eval_theorem4(&f, &small, &small_t, &tol).map_err(err)?;
        let hi = eval_half_integer(&f, &tol).map_err(err)?;
        near(t4.lhs, hi.lhs, &format!("{name} theorem4(1e-6) lhs"))?;
        near(t4.rhs, hi.rhs, &format!("{name} theorem4(1e-6) rhs"))?;
    }
    let i4 = Complex64::new(0.0, -4.0);
    for name in ["exp:a=1", "rational:b=1,c=1"] {
        let f = preset(name).unwrap();
        let half_f0 = f.eval_real(0.0) * 0.5;
        let k = eval_koshagain(&f, &large, &large_t, &tol).map_err(err)?;
        let e5 = eval_entry5(&f.dilate(2.0), &tol).map_err(err)?;
        near(k.lhs + half_f0, e5.lhs, &format!("{name} koshagain(1e8) lhs"))?;
        near(k.rhs + half_f0, e5.rhs, &format!("{name} koshagain(1e8) rhs"))?;
        let k = eval_koshagain(&f, &small, &small_t, &tol).map_err(err)?;
        let e4 = eval_entry4(&f, &tol).map_err(err)?;
        near(k.lhs * i4, e4.lhs, &format!("{name} koshagain(1e-6) lhs"))?;
        near(k.rhs * i4, e4.rhs, &format!("{name} koshagain(1e-6) rhs"))?;
    }
    Ok(())
}

fn eisenstein_suite() -> Check {
    let tol = Tolerance::new(1e-9, 1e-9).unwrap();
    let err = |e: koshliakov::Error| e.to_string();
    let before = pv_invocation_count();
    let r = eval_entry_ab(c(4.0), PI, 4.0 * PI, &tol).map_err(err)?;
    closes(&r, 1e-6)?;
    ensure(pv_invocation_count() == before, || "n = 4 ran a principal-value integral".into())?;
    let r = eval_entry_ab(c(3.0), PI, 4.0 * PI, &tol).map_err(err)?;
    closes(&r, 1e-6)?;
    ensure(pv_invocation_count() == before + 1, || "n = 3 did not run its principal-value integral".into())?;
    let classical = r.lhs;
    for p in [0.5, 1.0, 3.0] {
        let (params, t) = table(p, 4000);
        for (n, a, b) in [(3.0, PI, 4.0 * PI), (4.0, 2.0 * PI, 2.0 * PI), (3.5, 2.0 * PI, 2.0 * PI)] {
            closes(&eval_thm_eisenstein_p(&params, &t, c(n), a, b, &tol).map_err(err)?, 1e-6)?;
        }
        closes(&eval_corollary_zeta_odd(&params, &t, 1, PI / 2.0, 2.0 * PI, &tol).map_err(err)?, 1e-6)?;
        let r = eval_corollary_zeta_odd(&params, &t, 2, PI, PI, &tol).map_err(err)?;
        let bracket = r.diagnostics["bracket"];
        ensure(bracket.abs() < 1e-7, || format!("p={p}: m = 2 bracket {bracket:e}"))?;
    }
    let (large, large_t) = table(1e8, 4000);
    let r = eval_thm_eisenstein_p(&large, &large_t, c(3.0), PI, 4.0 * PI, &tol).map_err(err)?;
    ensure((r.lhs - classical).norm() < 1e-4, || format!("p=1e8 vs classical: {} vs {classical}", r.lhs))?;
    for (n, a, b) in [(4.0, PI, 4.0 * PI), (3.0, 2.0 * PI, 2.0 * PI), (2.5, PI, 4.0 * PI)] {
        closes(&eval_corollary_half_eisenstein(c(n), a, b, &tol).map_err(err)?, 1e-6)?;
    }
    let z = zeta_p_via_functional_eq(&large, 1, 1e-12).map_err(err)?.value.re;
    ensure((z - 1.0 / 120.0).abs() < 1e-6, || format!("ζ_p(−3) at p=1e8: {z}"))
}

fn determinism() -> Check {
    let cfg = CampaignConfig::standard();
    let a = run_campaign(&cfg, Some(1)).map_err(|e| e.to_string())?.to_jsonl();
    let b = run_campaign(&cfg, None).map_err(|e| e.to_string())?.to_jsonl();
    ensure(!a.is_empty() && a == b, || "campaign JSONL differs between runs".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("eigenvalue certification", eigen_certification, Duration::from_secs(1)),
        ("partial-fraction closure", partial_fraction_closure, Duration::from_secs(10)),
        ("zeta cross-representation", zeta_cross_representation, Duration::from_secs(60)),
        ("summation-formula closure", summation_closure, Duration::from_secs(300)),
        ("degeneration web", degeneration_web, Duration::from_secs(300)),
        ("Eisenstein suite", eisenstein_suite, Duration::from_secs(600)),
        ("determinism", determinism, Duration::from_secs(600)),
    ];
    let mut failures = Vec::new();
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, elapsed <= budget) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (took {elapsed:.2?}, budget {budget:?})"),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        println!("criterion {}: {name}: {verdict} [{elapsed:.2?}]", i + 1);
        if verdict != "PASS" {
            failures.push(i + 1);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
