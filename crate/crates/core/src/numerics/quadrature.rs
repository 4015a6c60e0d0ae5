//! Globally adaptive Gauss–Kronrod (7/15) quadrature with optional
//! square-root substitution at integrable endpoint singularities.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        }
    }
}

/// Marks endpoints where the integrand may blow up like an inverse square
/// root (or milder).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EndpointFlags {
    pub lo: bool,
    pub hi: bool,
}

impl EndpointFlags {
    pub const NONE: Self = Self { lo: false, hi: false };
    pub const LO: Self = Self { lo: true, hi: false };
    pub const HI: Self = Self { lo: false, hi: true };
    pub const BOTH: Self = Self { lo: true, hi: true };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub max_segments: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_depth: 40,
            max_segments: 20_000,
        }
    }
}

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

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
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

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * h;
    let resabs = abs * h.abs();
    let resasc = asc * h.abs();
    let mut err = ((kronrod - gauss) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, opts: &QuadratureOptions) -> Result<QuadratureResult> {
    let (v, e) = gk15(f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v,
        error: e,
        depth: 0,
    });
    // segments that reached max depth; they still count towards the totals
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    let mut segments = 1;
    loop {
        let value: f64 = frozen_value + heap.iter().map(|s| s.value).sum::<f64>();
        let error: f64 = frozen_error + heap.iter().map(|s| s.error).sum::<f64>();
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => {
                return Err(Error::NoConvergence {
                    estimate: value,
                    error,
                    tolerance: target,
                })
            }
        };
        if worst.depth >= opts.max_depth || segments >= opts.max_segments || !worst.value.is_finite() {
            if !worst.value.is_finite() || segments >= opts.max_segments {
                heap.push(worst);
                let value = frozen_value + heap.iter().map(|s| s.value).sum::<f64>();
                let error = frozen_error + heap.iter().map(|s| s.error).sum::<f64>();
                return Err(Error::NoConvergence {
                    estimate: value,
                    error,
                    tolerance: target,
                });
            }
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        evaluations += 30;
        segments += 1;
        for (a, b, value, error) in [(worst.a, mid, v1, e1), (mid, worst.b, v2, e2)] {
            heap.push(Segment {
                a,
                b,
                value,
                error,
                depth: worst.depth + 1,
            });
        }
    }
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol`.
///
/// A flagged endpoint `e` is treated with the substitution `x = e ± s²`,
/// which turns an inverse-square-root singularity into a bounded integrand.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64, flags: EndpointFlags) -> Result<QuadratureResult> {
    let opts = QuadratureOptions {
        abs_tol: tol,
        ..Default::default()
    };
    integrate_with(f, lo, hi, flags, &opts)
}

pub fn integrate_with<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    flags: EndpointFlags,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if !(lo <= hi) || !(opts.abs_tol > 0.0 || opts.rel_tol > 0.0) {
        return Err(Error::Domain(format!(
            "integrate requires lo <= hi and a positive tolerance, got [{lo}, {hi}]"
        )));
    }
    if lo == hi {
        return Ok(QuadratureResult::zero());
    }
    substituted(&f, lo, hi, flags, opts)
}

fn substituted<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    flags: EndpointFlags,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    match (flags.lo, flags.hi) {
        (false, false) => adaptive(f, lo, hi, opts),
        (true, false) => {
            let g = |s: f64| 2.0 * s * f(lo + s * s);
            adaptive(&g, 0.0, (hi - lo).sqrt(), opts)
        }
        (false, true) => {
            let g = |s: f64| 2.0 * s * f(hi - s * s);
            adaptive(&g, 0.0, (hi - lo).sqrt(), opts)
        }
        (true, true) => {
            let mid = 0.5 * (lo + hi);
            let half = QuadratureOptions {
                abs_tol: 0.5 * opts.abs_tol,
                ..*opts
            };
            let left = substituted(f, lo, mid, EndpointFlags::LO, &half)?;
            let right = substituted(f, mid, hi, EndpointFlags::HI, &half)?;
            Ok(QuadratureResult {
                value: left.value + right.value,
                error_estimate: left.error_estimate + right.error_estimate,
                evaluations: left.evaluations + right.evaluations,
            })
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
