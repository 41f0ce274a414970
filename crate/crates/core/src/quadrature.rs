//! Globally adaptive Gauss–Kronrod (7, 15) quadrature and the rank-one base
//! case `∫ |2 sin(t h0)|^{2k} t^{2-2k} dt`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Neumaier;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// Integrates `f` over consecutive `breakpoints`, bisecting the panel with
/// the largest error estimate until the total estimate is below
/// `max(abs_tol, rel_tol |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<Quadrature> {
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("breakpoints must be strictly increasing".into()));
    }
    let mut heap: BinaryHeap<Panel> = breakpoints.windows(2).map(|w| gk15(&f, w[0], w[1])).collect();
    loop {
        let value: Neumaier = heap.iter().map(|p| p.value).collect();
        let error: Neumaier = heap.iter().map(|p| p.error).collect();
        let (value, error) = (value.total(), error.total());
        if !value.is_finite() {
            return Err(Error::InvalidArgument("integrand is not finite".into()));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Quadrature {
                value,
                abs_error: error,
                intervals: heap.len(),
            });
        }
        if heap.len() >= max_panels {
            return Err(Error::InvalidArgument(format!(
                "no convergence within {max_panels} panels (error estimate {error:e})"
            )));
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
    }
}

fn base_case_integrand(h0: f64, k: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        let s = (2.0 * (t * h0).sin()).abs();
        if s == 0.0 {
            0.0
        } else {
            (2.0 * k * s.ln() + (2.0 - 2.0 * k) * t.ln()).exp()
        }
    }
}

/// `∫_a^b |2 sin(t h0)|^{2k} t^{2-2k} dt`, split at the zeros of the sine,
/// to relative accuracy `1e-10`.
pub fn base_case_integral(h0: f64, k: f64, a: f64, b: f64) -> Result<Quadrature> {
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(Error::InvalidArgument(format!("h0 = {h0} must be positive")));
    }
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!("k = {k} must be >= 1")));
    }
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("interval [{a}, {b}] must satisfy 0 < a < b")));
    }
    let period = PI / h0;
    let mut points = vec![a];
    let mut j = (a / period).floor() + 1.0;
    while j * period < b {
        if j * period > a {
            points.push(j * period);
        }
        j += 1.0;
    }
    points.push(b);
    let max_panels = 64 * points.len() + 10_000;
    integrate(base_case_integrand(h0, k), &points, 1e-300, 1e-10, max_panels)
}

/// `∫_1^{r_max} |2 sin(t h0)|^{2k} t^{2-2k} dt`.
pub fn base_case_quadrature(h0: f64, k: f64, r_max: f64) -> Result<f64> {
    if !(r_max >= 2.0) {
        return Err(Error::InvalidArgument(format!("r_max = {r_max} must be >= 2")));
    }
    Ok(base_case_integral(h0, k, 1.0, r_max)?.value)
}
