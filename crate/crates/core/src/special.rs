//! Special functions and summation helpers used across the crate.

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex gamma function (Lanczos, reflection for Re z < 1/2).
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::from(PI) / (s * gamma(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::from(LANCZOS[0]);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * x
}

/// Rising factorial s(s+1)...(s+k-1).
pub fn pochhammer(s: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::from(1.0), |acc, i| acc * (s + i as f64))
}

// B_2, B_4, ..., B_24
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Hurwitz zeta ζ(s, a) for real a > 0 and s ≠ 1, by Euler–Maclaurin.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Complex64 {
    assert!(a > 0.0, "hurwitz_zeta requires a > 0");
    let m = (s.norm() + 20.0 - a).ceil().max(0.0) as usize;
    let mut sum = NeumaierSum::default();
    for k in 0..m {
        sum.add((-s * (a + k as f64).ln()).exp());
    }
    let b = a + m as f64;
    let lb = b.ln();
    let pow_b = |e: Complex64| (e * lb).exp();
    sum.add(pow_b(Complex64::from(1.0) - s) / (s - 1.0));
    sum.add(0.5 * pow_b(-s));
    // term_j = B_2j/(2j)! * s(s+1)...(s+2j-2) * b^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut bpow = pow_b(-s - 1.0);
    for (j, bern) in BERNOULLI_EVEN.iter().enumerate() {
        let term = rising * bpow * (*bern / fact);
        sum.add(term);
        if term.norm() < 1e-18 * sum.value().norm() {
            break;
        }
        let k = 2 * j as u32 + 2;
        rising *= (s + (k - 1) as f64) * (s + k as f64);
        fact *= ((k + 1) * (k + 2)) as f64;
        bpow /= b * b;
    }
    sum.value()
}

/// Riemann zeta for s ≠ 1, with the reflection formula for Re s < 0.
pub fn riemann_zeta(s: Complex64) -> Complex64 {
    if s.re < 0.0 {
        let one_minus = Complex64::from(1.0) - s;
        let two_s = (s * 2f64.ln()).exp();
        let pi_s1 = ((s - 1.0) * PI.ln()).exp();
        return two_s * pi_s1 * (s * PI / 2.0).sin() * gamma(one_minus) * riemann_zeta(one_minus);
    }
    hurwitz_zeta(s, 1.0)
}

/// e^z − 1 without cancellation for small |z|.
pub fn expm1(z: Complex64) -> Complex64 {
    let (sy, cy) = z.im.sin_cos();
    let half = (z.im / 2.0).sin();
    Complex64::new(z.re.exp_m1() * cy - 2.0 * half * half, z.re.exp() * sy)
}

/// Returns (cos(πn/2), sin(πn/2)), exact when n is a real integer.
pub fn cos_sin_half_pi(n: Complex64) -> (Complex64, Complex64) {
    if n.im == 0.0 && n.re.fract() == 0.0 && n.re.abs() < 9.0e15 {
        let r = (n.re as i64).rem_euclid(4);
        let (c, s) = match r {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        return (Complex64::from(c), Complex64::from(s));
    }
    let x = n * (PI / 2.0);
    (x.cos(), x.sin())
}

/// x^s for real x > 0 and complex s.
pub fn real_pow(x: f64, s: Complex64) -> Complex64 {
    if s.im == 0.0 {
        Complex64::from(x.powf(s.re))
    } else {
        (s * x.ln()).exp()
    }
}

/// Compensated (Neumaier) summation of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier_step(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl NeumaierSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier_step(&mut self.re, z.re);
        neumaier_step(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}
