use koshliakov::campaign::{dual_partner, Formula};
use koshliakov::eigen::{eigen_table, reduced_residual, solve_lambda, weight, Params};
use koshliakov::kernels::kernel_value;
use koshliakov::report::{ParamTag, Tolerance, VerificationReport};
use koshliakov::sumform::eval_ramanujan_alpha;
use koshliakov::testfns::{exp_preset, preset};
use koshliakov::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn fast() -> ProptestConfig {
    ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(fast())]

    #[test]
    fn root_sits_in_its_bracket(log_p in -6.0f64..6.0, n in 1usize..400) {
        let p = 10f64.powf(log_p);
        let params = Params::new(p).unwrap();
        let root = eigen_table(&params, n, 1e-15).unwrap().roots[n - 1];
        let nf = n as f64;
        prop_assert!(nf - 0.5 < root.lambda && root.lambda < nf);
        prop_assert!(reduced_residual(p, nf, root.offset).abs() <= 1e-12 * (1.0 + p));
    }

    #[test]
    fn roots_increase(log_p in -4.0f64..4.0, n in 1usize..200) {
        let params = Params::new(10f64.powf(log_p)).unwrap();
        prop_assert!(solve_lambda(&params, n, 1e-15).unwrap() < solve_lambda(&params, n + 1, 1e-15).unwrap());
    }

    #[test]
    fn weight_in_unit_interval(log_p in -6.0f64..6.0, lambda in 0.0f64..1e6) {
        // strictly below 1 in exact arithmetic; rounds to 1 once λ² dwarfs p/π
        let w = weight(&Params::new(10f64.powf(log_p)).unwrap(), lambda);
        prop_assert!(w > 0.0 && w <= 1.0);
    }

    #[test]
    fn kernel_is_real_on_real_axis(log_p in -2.0f64..2.0, re in 0.05f64..4.0, im in -3.0f64..3.0) {
        let p = 10f64.powf(log_p);
        let z = Complex64::new(re, im);
        let (a, b) = (kernel_value(p, z), kernel_value(p, z.conj()).conj());
        prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
    }

    #[test]
    fn pass_rule(lhs in -1e3f64..1e3, gap in -1e-3f64..1e-3, atol in 1e-12f64..1e-4, rtol in 0.0f64..1e-4) {
        let tol = Tolerance::new(atol, rtol).unwrap();
        let r = VerificationReport::new(
            "t", ParamTag::Free, "f", Complex64::from(lhs), Complex64::from(lhs + gap), Default::default(), &tol,
        );
        let scale = lhs.abs().max((lhs + gap).abs());
        prop_assert_eq!(r.pass, r.abs_residual <= atol.max(rtol * scale));
        prop_assert!((r.abs_residual - gap.abs()).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn alpha_analogue_is_even(alpha in 0.05f64..0.95, a in 0.5f64..2.0) {
        let f = exp_preset(a).unwrap();
        let tol = Tolerance::new(1e-9, 1e-9).unwrap();
        let plus = eval_ramanujan_alpha(&f, alpha, &tol).unwrap();
        let minus = eval_ramanujan_alpha(&f, -alpha, &tol).unwrap();
        prop_assert!((plus.lhs - minus.lhs).norm() < 1e-12);
        prop_assert!((plus.rhs - minus.rhs).norm() < 1e-12);
    }

    #[test]
    fn presets_parse_their_parameters(a in 0.01f64..10.0, b in 0.01f64..10.0, c in 0.0f64..10.0) {
        let f = preset(&format!("exp:a={a}")).unwrap();
        prop_assert!((f.eval_real(1.0).re - (-a).exp()).abs() < 1e-15);
        let r = preset(&format!("rational:b={b},c={c}")).unwrap();
        prop_assert!((r.eval_real(0.0).re - 1.0 / (b * b + c * c)).abs() <= 1e-15 / (b * b + c * c));
        let negative = format!("exp:a={}", -a);
        prop_assert!(preset(&negative).is_err());
    }

    #[test]
    fn dual_pairs_renormalize(alpha in 0.1f64..40.0, drift in -1e-7f64..1e-7) {
        let product = 4.0 * PI * PI;
        let beta = product / alpha * (1.0 + drift);
        prop_assert_eq!(dual_partner(alpha, Some(beta), product).unwrap(), product / alpha);
        prop_assert!(dual_partner(alpha, Some(beta * 1.01), product).is_err());
    }

    #[test]
    fn formula_names_parse(i in 0usize..19) {
        let f = Formula::ALL[i];
        prop_assert_eq!(f.name().to_uppercase().parse::<Formula>().unwrap(), f);
    }
}
