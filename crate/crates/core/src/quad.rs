//! Adaptive Gauss–Kronrod (10/21) quadrature for complex integrands on
//! [a, b] or [a, ∞), with endpoint grading and Cauchy principal values.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_929_966_823,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

thread_local! {
    static PV_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of principal-value integrations run on this thread so far.
pub fn pv_invocation_count() -> u64 {
    PV_CALLS.with(|c| c.get())
}

/// Declared decay of |f(x)| as x → ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Envelope {
    /// |f(x)| ≲ C·e^{−rate·x}
    Exponential(f64),
    /// |f(x)| ≲ C·x^{−power}, power > 1
    Algebraic(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndpointSingularity {
    None,
    /// f ~ log(x − a) at the lower endpoint
    LogAtZero,
    /// f ~ (x − a)^e at the lower endpoint, e > −1
    AlgebraicAtZero(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvPole {
    pub location: f64,
    pub residue_hint: Option<Complex64>,
}

/// What to integrate and what is known about it.
pub struct IntegrandSpec<'a> {
    pub evaluator: &'a dyn Fn(f64) -> Complex64,
    pub lower: f64,
    /// `None` means +∞.
    pub upper: Option<f64>,
    pub envelope: Envelope,
    pub endpoint_singularity: EndpointSingularity,
    pub pv_poles: Vec<PvPole>,
    pub panel_breaks: Vec<f64>,
    /// Sampling radius for residue estimation.
    pub excision_radius: f64,
    pub max_subdivisions: usize,
}

impl<'a> IntegrandSpec<'a> {
    pub fn new(evaluator: &'a dyn Fn(f64) -> Complex64) -> Self {
        Self {
            evaluator,
            lower: 0.0,
            upper: None,
            envelope: Envelope::Exponential(1.0),
            endpoint_singularity: EndpointSingularity::None,
            pv_poles: Vec::new(),
            panel_breaks: Vec::new(),
            excision_radius: 1e-4,
            max_subdivisions: 4000,
        }
    }

    pub fn lower(mut self, a: f64) -> Self {
        self.lower = a;
        self
    }

    pub fn upper(mut self, b: f64) -> Self {
        self.upper = Some(b);
        self
    }

    pub fn exponential_decay(mut self, rate: f64) -> Self {
        self.envelope = Envelope::Exponential(rate);
        self
    }

    pub fn algebraic_decay(mut self, power: f64) -> Self {
        self.envelope = Envelope::Algebraic(power);
        self
    }

    pub fn log_at_zero(mut self) -> Self {
        self.endpoint_singularity = EndpointSingularity::LogAtZero;
        self
    }

    pub fn algebraic_at_zero(mut self, exponent: f64) -> Self {
        self.endpoint_singularity = EndpointSingularity::AlgebraicAtZero(exponent);
        self
    }

    pub fn pole(mut self, location: f64) -> Self {
        self.pv_poles.push(PvPole { location, residue_hint: None });
        self
    }

    pub fn pole_with_residue(mut self, location: f64, residue: Complex64) -> Self {
        self.pv_poles.push(PvPole { location, residue_hint: Some(residue) });
        self
    }

    pub fn breaks(mut self, points: &[f64]) -> Self {
        self.panel_breaks.extend_from_slice(points);
        self
    }

    pub fn excision_radius(mut self, r: f64) -> Self {
        self.excision_radius = r;
        self
    }

    pub fn max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels_used: usize,
    /// Where the infinite range was cut; +∞ when a mapped tail was integrated.
    pub truncation_point: f64,
}

/// ∫ over [lower, ∞) (or [lower, upper]) of an integrand without interior poles.
pub fn integrate_semi_infinite(spec: &IntegrandSpec<'_>, tol: f64) -> Result<QuadResult> {
    if !spec.pv_poles.is_empty() {
        return Err(Error::InvalidParameter("integrand declares poles; use integrate_pv".into()));
    }
    integrate(spec, tol)
}

/// Principal value of ∫ across the declared simple poles.
pub fn integrate_pv(spec: &IntegrandSpec<'_>, tol: f64) -> Result<QuadResult> {
    PV_CALLS.with(|c| c.set(c.get() + 1));
    integrate(spec, tol)
}

/// ∫_a^b f for a smooth integrand.
pub fn integrate_interval(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    integrate(&IntegrandSpec::new(f).lower(a).upper(b), tol)
}

struct Segment {
    kind: usize,
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21(f: &dyn Fn(usize, f64) -> Complex64, kind: usize, a: f64, b: f64) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut fv = [Complex64::default(); 21];
    fv[10] = f(kind, c);
    for j in 0..10 {
        fv[j] = f(kind, c - h * XGK[j]);
        fv[20 - j] = f(kind, c + h * XGK[j]);
    }
    if let Some(bad) = fv.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        let x = if bad == 10 {
            c
        } else if bad < 10 {
            c - h * XGK[bad]
        } else {
            c + h * XGK[20 - bad]
        };
        return Err(Error::QuadFailure(format!("non-finite integrand at x = {x} (kind {kind}, [{a}, {b}])")));
    }
    let mut resk = fv[10] * WGK[10];
    let mut resg = Complex64::default();
    let mut resabs = fv[10].norm() * WGK[10];
    for j in 0..10 {
        let pair = fv[j] + fv[20 - j];
        resk += pair * WGK[j];
        resabs += WGK[j] * (fv[j].norm() + fv[20 - j].norm());
        if j % 2 == 1 {
            resg += pair * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[10] * (fv[10] - mean).norm();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[j] - mean).norm() + (fv[20 - j] - mean).norm());
    }
    let ah = h.abs();
    let value = resk * h;
    let mut error = ((resk - resg) * h).norm();
    let resabs = resabs * ah;
    let resasc = resasc * ah;
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Segment { kind, a, b, value, error, resabs })
}

/// Globally adaptive bisection over an initial list of (kind, a, b) intervals.
fn adaptive(
    f: &dyn Fn(usize, f64) -> Complex64,
    initial: &[(usize, f64, f64)],
    abs_tol: f64,
    rel_tol: f64,
    max_sub: usize,
) -> Result<(Complex64, f64, usize)> {
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Segment> = Vec::new();
    for &(kind, a, b) in initial {
        if b > a {
            heap.push(gk21(f, kind, a, b)?);
        }
    }
    let totals = |heap: &BinaryHeap<Segment>, done: &[Segment]| {
        let mut v = crate::special::NeumaierSum::default();
        let (mut e, mut r) = (0.0, 0.0);
        for s in heap.iter().chain(done.iter()) {
            v.add(s.value);
            e += s.error;
            r += s.resabs;
        }
        (v.value(), e, r)
    };
    let (mut value, mut err, mut resabs) = totals(&heap, &done);
    let mut count = heap.len();
    loop {
        let target = abs_tol.max(rel_tol * value.norm()).max(100.0 * f64::EPSILON * resabs);
        if err <= target {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) <= 1e-15 * worst.a.abs().max(worst.b.abs()) {
            done.push(worst);
            continue;
        }
        if count >= max_sub {
            return Err(Error::MaxSubdivisions { limit: max_sub, error_estimate: err });
        }
        let left = gk21(f, worst.kind, worst.a, mid)?;
        let right = gk21(f, worst.kind, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        count += 1;
        if count % 64 == 0 {
            (value, err, resabs) = totals(&heap, &done);
        }
    }
    let (value, err, _) = totals(&heap, &done);
    Ok((value, err, heap.len() + done.len()))
}

const KIND_PLAIN: usize = 0;
const KIND_LOG_END: usize = 1;
const KIND_ALG_END: usize = 2;
const KIND_TAIL: usize = 3;
const KIND_WINDOW: usize = 4;
const LOG_SPAN: f64 = 50.0;

struct Window {
    center: f64,
    radius: f64,
    residue: Complex64,
}

fn validate(spec: &IntegrandSpec<'_>, tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    if !spec.lower.is_finite() {
        return Err(Error::InvalidParameter("lower limit must be finite".into()));
    }
    if let Some(b) = spec.upper {
        if !(b > spec.lower && b.is_finite()) {
            return Err(Error::InvalidParameter("upper limit must exceed lower".into()));
        }
    }
    match spec.envelope {
        Envelope::Exponential(r) if !(r > 0.0) => {
            return Err(Error::InvalidParameter(format!("decay rate must be > 0, got {r}")))
        }
        Envelope::Algebraic(d) if !(d > 1.0) => {
            return Err(Error::InvalidParameter(format!("algebraic decay power must be > 1, got {d}")))
        }
        _ => {}
    }
    if let EndpointSingularity::AlgebraicAtZero(e) = spec.endpoint_singularity {
        if !(e > -1.0) {
            return Err(Error::InvalidParameter(format!("endpoint exponent must be > −1, got {e}")));
        }
    }
    let hi = spec.upper.unwrap_or(f64::INFINITY);
    let mut prev: Option<f64> = None;
    for pole in &spec.pv_poles {
        if !(pole.location > spec.lower && pole.location < hi) {
            return Err(Error::InvalidParameter(format!("pole {} outside the domain", pole.location)));
        }
        if prev.is_some_and(|q| pole.location - q <= 2.0 * spec.excision_radius) {
            return Err(Error::InvalidParameter("poles must be sorted and separated".into()));
        }
        prev = Some(pole.location);
    }
    Ok(())
}

/// Moves a probe point off any nearby declared pole.
fn away_from_poles(x: f64, poles: &[f64]) -> f64 {
    let i = poles.partition_point(|&z| z < x);
    let gap = |j: usize| -> f64 {
        let left = if j == 0 { poles[0] } else { poles[j] - poles[j - 1] };
        let right = if j + 1 < poles.len() { poles[j + 1] - poles[j] } else { left };
        left.min(right)
    };
    for j in [i.wrapping_sub(1), i] {
        if j < poles.len() {
            let g = gap(j);
            if (x - poles[j]).abs() < 0.2 * g {
                return poles[j] + 0.3 * g;
            }
        }
    }
    x
}

/// Puts a cut point at the midpoint of the pole gap containing it.
fn cut_between_poles(x: f64, poles: &[f64]) -> f64 {
    let n = poles.len();
    if n == 0 {
        return x;
    }
    let gap = |j: usize| {
        if j + 1 < n {
            poles[j + 1] - poles[j]
        } else if j > 0 {
            poles[j] - poles[j - 1]
        } else {
            poles[0]
        }
    };
    let i = poles.partition_point(|&z| z <= x);
    if i == n {
        return x.max(poles[n - 1] + 0.5 * gap(n - 1));
    }
    if i == 0 && poles[0] - x >= 0.25 * gap(0) {
        return x;
    }
    let j = i.max(1) - 1;
    poles[j] + 0.5 * gap(j)
}

fn integrate(spec: &IntegrandSpec<'_>, tol: f64) -> Result<QuadResult> {
    validate(spec, tol)?;
    let f = spec.evaluator;
    let lower = spec.lower;
    let poles: Vec<f64> = spec.pv_poles.iter().map(|p| p.location).collect();
    let mut breaks: Vec<f64> = spec.panel_breaks.iter().copied().filter(|&b| b > lower).collect();
    breaks.sort_by(f64::total_cmp);

    // Truncation point and envelope tail.
    let mut tail_bound = 0.0;
    let mut mapped_tail = false;
    let cut = match (spec.upper, spec.envelope) {
        (Some(b), _) => b,
        (None, Envelope::Exponential(rate)) => {
            let anchor = breaks.last().copied().unwrap_or(lower).max(lower);
            let mut x = cut_between_poles(anchor + 2.0 / rate, &poles);
            let limit = anchor + 1000.0 / rate;
            loop {
                let mut m: f64 = 0.0;
                for k in 0..3 {
                    let probe = away_from_poles(x + 0.5 * k as f64 / rate, &poles);
                    let v = f(probe).norm() * (rate * (probe - x)).exp();
                    m = m.max(if v.is_finite() { v } else { f64::INFINITY });
                }
                tail_bound = m / rate;
                if tail_bound < tol / 10.0 || x >= limit {
                    break;
                }
                let mut step = ((tail_bound / (tol / 10.0)).ln() / rate).max(1.0 / rate).min(limit - x);
                // snapping to a pole gap may fall back onto x; widen until it advances
                let mut next = cut_between_poles(x + step, &poles);
                while next <= x && step < limit {
                    step *= 2.0;
                    next = cut_between_poles(x + step, &poles);
                }
                x = if next > x { next } else { cut_between_poles(limit, &poles) };
            }
            x
        }
        (None, Envelope::Algebraic(_)) => {
            mapped_tail = true;
            let last_pole = poles.last().copied().unwrap_or(lower);
            let anchor = breaks.last().copied().unwrap_or(lower).max(lower + 1.0).max(last_pole);
            cut_between_poles(anchor, &poles)
        }
    };
    breaks.retain(|&b| b < cut);
    let kept: Vec<&PvPole> = spec.pv_poles.iter().filter(|p| p.location < cut).collect();

    // Endpoint panel.
    let mut start = lower;
    let mut endpoint_width = 0.0;
    if spec.endpoint_singularity != EndpointSingularity::None {
        let mut w: f64 = 1.0;
        if let Some(&b) = breaks.first() {
            w = w.min(b - lower);
        }
        if let Some(p) = kept.first() {
            w = w.min(0.5 * (p.location - lower));
        }
        w = w.min(0.5 * (cut - lower));
        endpoint_width = w;
        start = lower + w;
    }

    // Principal-value windows.
    let mut windows: Vec<Window> = Vec::with_capacity(kept.len());
    for (j, pole) in kept.iter().enumerate() {
        let z = pole.location;
        let left = if j == 0 { z - start } else { z - kept[j - 1].location };
        let right = if j + 1 < kept.len() { kept[j + 1].location - z } else { cut - z };
        let radius = 0.45 * left.min(right);
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!("pole {z} too close to a panel edge")));
        }
        let h = spec.excision_radius.min(0.25 * radius);
        let residue = match pole.residue_hint {
            Some(c) => c,
            None => {
                let sample = |h: f64| (f(z + h) - f(z - h)) * (0.5 * h);
                (sample(0.5 * h) * 4.0 - sample(h)) / 3.0
            }
        };
        // growth detector: the remainder must stay bounded as x → z
        let g = |d: f64| (f(z + d) - residue / d).norm().max((f(z - d) + residue / d).norm());
        let far = g(radius / 8.0);
        let scale = residue.norm() / radius;
        let mut d = radius / 8.0;
        for _ in 0..6 {
            d /= 4.0;
            let near = g(d);
            if !near.is_finite() || near > 100.0 * far + 1e-3 * scale + 1e-300 {
                return Err(Error::PoleMisdeclared { location: z });
            }
        }
        windows.push(Window { center: z, radius, residue });
    }

    let mut pieces: Vec<(usize, f64, f64)> = Vec::new();
    match spec.endpoint_singularity {
        EndpointSingularity::None => {}
        EndpointSingularity::LogAtZero => {
            let nodes = [0.0, 1.0, 3.0, 8.0, 20.0, LOG_SPAN];
            for w in nodes.windows(2) {
                pieces.push((KIND_LOG_END, w[0], w[1]));
            }
        }
        EndpointSingularity::AlgebraicAtZero(_) => {
            pieces.push((KIND_ALG_END, 0.0, 0.5));
            pieces.push((KIND_ALG_END, 0.5, 1.0));
        }
    }
    let push_plain = |a: f64, b: f64, pieces: &mut Vec<(usize, f64, f64)>| {
        let mut x = a;
        for &br in breaks.iter().filter(|&&br| br > a && br < b) {
            pieces.push((KIND_PLAIN, x, br));
            x = br;
        }
        pieces.push((KIND_PLAIN, x, b));
    };
    let mut x = start;
    for (j, w) in windows.iter().enumerate() {
        push_plain(x, w.center - w.radius, &mut pieces);
        pieces.push((KIND_WINDOW + j, 0.0, 0.5 * w.radius));
        pieces.push((KIND_WINDOW + j, 0.5 * w.radius, w.radius));
        x = w.center + w.radius;
    }
    push_plain(x, cut, &mut pieces);
    let tail_scale = (cut - lower).max(1.0);
    if mapped_tail {
        for w in [0.0, 0.5, 0.9, 0.99, 1.0].windows(2) {
            pieces.push((KIND_TAIL, w[0], w[1]));
        }
    }

    let sigma = match spec.endpoint_singularity {
        EndpointSingularity::AlgebraicAtZero(e) => e + 1.0,
        _ => 1.0,
    };
    let eval = |kind: usize, t: f64| -> Complex64 {
        match kind {
            KIND_PLAIN => f(t),
            KIND_LOG_END => {
                let s = endpoint_width * (-t).exp();
                f(lower + s) * s
            }
            KIND_ALG_END => {
                if t == 0.0 {
                    return Complex64::default();
                }
                let s = endpoint_width * t.powf(1.0 / sigma);
                f(lower + s) * (endpoint_width / sigma * t.powf(1.0 / sigma - 1.0))
            }
            KIND_TAIL => {
                let u = 1.0 - t;
                f(cut + tail_scale * t / u) * (tail_scale / (u * u))
            }
            k => {
                let w = &windows[k - KIND_WINDOW];
                // offsets recomputed from the rounded abscissae so that the
                // subtracted pole matches the point actually evaluated
                let (xp, xm) = (w.center + t, w.center - t);
                (f(xp) - w.residue / (xp - w.center)) + (f(xm) - w.residue / (xm - w.center))
            }
        }
    };
    let budget = (tol - tail_bound).max(0.5 * tol);
    let (value, err, panels) = adaptive(&eval, &pieces, budget, tol, spec.max_subdivisions)?;
    let mut error = err + tail_bound;
    if spec.endpoint_singularity == EndpointSingularity::LogAtZero {
        // mass below x0·e^{−LOG_SPAN} is neglected; bound it by the first sample
        let s = endpoint_width * (-LOG_SPAN).exp();
        error += (f(lower + s) * s).norm();
    }
    Ok(QuadResult {
        value,
        error_estimate: error,
        panels_used: panels,
        truncation_point: if mapped_tail { f64::INFINITY } else { cut },
    })
}
