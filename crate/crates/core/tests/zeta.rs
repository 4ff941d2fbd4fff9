use koshliakov::eigen::Params;
use koshliakov::zeta::{eta_p_integral, eta_p_limit, eta_p_series, ParamLimit};
use koshliakov::Complex64;
use std::f64::consts::PI;

fn c(x: f64) -> Complex64 {
    Complex64::from(x)
}

#[test]
fn eta_series_and_integral_agree_on_grid() {
    for &p in &[0.1, 1.0, 10.0] {
        let params = Params::new(p).unwrap();
        for s in [2.0, 3.0, 4.0] {
            let a = eta_p_series(&params, c(s), 1e-11).unwrap();
            let b = eta_p_integral(&params, c(s), 1e-11).unwrap();
            assert!((a.value - b.value).norm() < 1e-7, "p={p} s={s}: {} vs {}", a.value, b.value);
        }
    }
}

#[test]
fn eta_series_limits() {
    let big = eta_p_series(&Params::new(1e8).unwrap(), c(2.0), 1e-10).unwrap();
    assert!((big.value.re - PI * PI / 6.0).abs() < 1e-4);
    let small = eta_p_series(&Params::new(1e-6).unwrap(), c(2.0), 1e-10).unwrap();
    assert!((small.value.re + PI * PI / 12.0).abs() < 1e-3, "{}", small.value);
    assert!((eta_p_limit(ParamLimit::Zero, c(2.0)).re + PI * PI / 12.0).abs() < 1e-14);
}

#[test]
fn eta_two_approaches_zeta_two_monotonically() {
    let mut last = f64::INFINITY;
    for p in [1.0, 10.0, 100.0, 1000.0] {
        let v = eta_p_integral(&Params::new(p).unwrap(), c(2.0), 1e-12).unwrap();
        let gap = (v.value.re - PI * PI / 6.0).abs();
        assert!(gap < last, "p={p}");
        last = gap;
    }
}

#[test]
fn coefficient_bound_for_real_s() {
    for s in [1.0, 1.5, 3.0] {
        for k in (1..=100).step_by(9) {
            let v = koshliakov::zeta::coeff_s_nu_k(c(s), 2.0 * PI * 0.5, k, 1e-12).unwrap();
            assert!(v.norm() <= 1.0 + 1e-12);
        }
    }
}
