//! Density of the triangular-lattice eigenvalue `|1 + e^{iU} + e^{iV}|²`,
//! `f(x) = ½∫₀^∞ t·J₀(t√x)·J₀(t)³ dt`.
//!
//! The integral is split at the zeros of `J₀`, each panel is integrated by
//! Gauss–Legendre, and the partial sums are smoothed by repeated pairwise
//! averaging.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mgf::bessel::bessel_j0;
use crate::numerics::{gauss_legendre, integrate_with, EndpointFlags, QuadratureOptions, QuadratureResult};

/// Rounds of pairwise averaging applied to the partial sums.
const AVERAGING_LEVELS: usize = 20;
/// Largest accepted difference between the last two averaging rounds.
pub const TRIANGULAR_TOLERANCE: f64 = 1e-3;

/// Zero number `s` of `J₀`, McMahon expansion refined by secant steps.
fn j0_zero(s: usize) -> f64 {
    let b = (s as f64 - 0.25) * PI;
    let b2 = b * b;
    let guess = b + 1.0 / (8.0 * b) - 31.0 / (384.0 * b * b2) + 3779.0 / (15360.0 * b2 * b2 * b);
    let (mut x0, mut x1) = (guess - 1e-3, guess);
    let (mut f0, mut f1) = (bessel_j0(x0), bessel_j0(x1));
    for _ in 0..50 {
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = bessel_j0(x1);
        if (x1 - x0).abs() < 1e-15 * x1 {
            break;
        }
    }
    x1
}

/// Precomputed nodes and `½ t J₀(t)³` weights for repeated evaluation.
#[derive(Debug, Clone)]
pub struct TriangularDensity {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    points_per_panel: usize,
    pub tolerance: f64,
}

impl TriangularDensity {
    /// Panels run between consecutive zeros of `J₀` below `cutoff`; each
    /// gets `n_points` Gauss–Legendre nodes.
    pub fn new(cutoff: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 || !(cutoff > j0_zero(AVERAGING_LEVELS + 2)) {
            return Err(Error::Domain(format!(
                "triangular density needs n_points >= 2 and cutoff beyond the first {} zeros of J0 (got {cutoff}, {n_points})",
                AVERAGING_LEVELS + 2
            )));
        }
        let (gx, gw) = gauss_legendre(n_points);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut a = 0.0;
        for s in 1.. {
            let b = j0_zero(s);
            if b > cutoff {
                break;
            }
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, w) in gx.iter().zip(&gw) {
                let t = mid + half * x;
                nodes.push(t);
                weights.push(0.5 * half * w * t * bessel_j0(t).powi(3));
            }
            a = b;
        }
        Ok(Self {
            nodes,
            weights,
            points_per_panel: n_points,
            tolerance: TRIANGULAR_TOLERANCE,
        })
    }

    pub fn panels(&self) -> usize {
        self.nodes.len() / self.points_per_panel
    }

    /// Value and error estimate at `x`, without the convergence check.
    pub fn estimate(&self, x: f64) -> Result<QuadratureResult> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("triangular density needs x > 0, got {x}")));
        }
        let r = x.sqrt();
        let mut partial = Vec::with_capacity(self.panels());
        let mut acc = 0.0;
        for (ts, ws) in self
            .nodes
            .chunks(self.points_per_panel)
            .zip(self.weights.chunks(self.points_per_panel))
        {
            acc += ts.iter().zip(ws).map(|(t, w)| w * bessel_j0(t * r)).sum::<f64>();
            partial.push(acc);
        }
        let mut prev = *partial.last().unwrap_or(&0.0);
        let mut diff = f64::INFINITY;
        for _ in 0..AVERAGING_LEVELS.min(partial.len() - 1) {
            partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
            let last = *partial.last().unwrap_or(&0.0);
            diff = (last - prev).abs();
            prev = last;
        }
        Ok(QuadratureResult {
            value: prev,
            error_estimate: diff,
            evaluations: self.nodes.len(),
        })
    }

    /// Value at `x`; `NoConvergence` if the last two averages differ by more
    /// than the tolerance.
    pub fn eval(&self, x: f64) -> Result<QuadratureResult> {
        let r = self.estimate(x)?;
        if !(r.error_estimate <= self.tolerance) {
            return Err(Error::NoConvergence {
                estimate: r.value,
                error: r.error_estimate,
                tolerance: self.tolerance,
            });
        }
        Ok(r)
    }
}

/// `½∫₀^cutoff t·J₀(t√x)·J₀³(t) dt` with tail averaging.
pub fn pdf_triangular(x: f64, cutoff: f64, n_points: usize) -> Result<QuadratureResult> {
    TriangularDensity::new(cutoff, n_points)?.eval(x)
}

/// The same density as a mixture of arcsine laws: with `r = 2cos(φ/2)`,
/// `φ` uniform on `(0, π)`, the conditional law is arcsine on
/// `((r−1)², (r+1)²)`, so
/// `f(x) = π⁻²∫ dr/√((s+1−r)(s+r−1)(r+1−s)(r+1+s)(1−r²/4))`, `s = √x`.
///
/// Near each end of `(|1−s|, min(2, 1+s))` two roots of the integrand
/// approach each other as `x → 1`; the substitution `w = δ sinh²v` turns
/// `dw/√(w(w+δ))` into `2dv` and keeps the integrand smooth. `x = 1` itself
/// is a logarithmic singularity.
pub fn pdf_triangular_mixture(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 9.0) {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(f64::INFINITY);
    }
    let s = x.sqrt();
    let gap = (1.0 - s).abs();
    let r_lo = gap;
    let r_hi = (1.0 + s).min(2.0);
    let mid = 0.5 * (r_lo + r_hi);
    let opts = QuadratureOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        ..QuadratureOptions::default()
    };
    // (r − r_lo)(r + r_lo) with w = r − r_lo, δ = 2 r_lo
    let lower = |v: f64| {
        let w = 2.0 * gap * v.sinh().powi(2);
        let r = r_lo + w;
        2.0 / ((s + 1.0 - r) * (r + 1.0 + s) * (2.0 - r) * (2.0 + r) / 4.0).sqrt()
    };
    // (r_hi − r)(r_hi + δ − r) with w = r_hi − r, δ = |s − 1|
    let upper = |v: f64| {
        let w = gap * v.sinh().powi(2);
        let r = r_hi - w;
        2.0 / ((s + r - 1.0) * (r + 1.0 - s) * (r + 1.0 + s) * (2.0 + r) / 4.0).sqrt()
    };
    let v_lo = ((mid - r_lo) / (2.0 * gap)).sqrt().asinh();
    let v_hi = ((r_hi - mid) / gap).sqrt().asinh();
    let a = integrate_with(lower, 0.0, v_lo, EndpointFlags::NONE, &opts)?;
    let b = integrate_with(upper, 0.0, v_hi, EndpointFlags::NONE, &opts)?;
    Ok((a.value + b.value) / (PI * PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_of_j0() {
        assert!((j0_zero(1) - 2.404_825_557_695_773).abs() < 1e-13);
        assert!((j0_zero(2) - 5.520_078_110_286_311).abs() < 1e-13);
        assert!((j0_zero(10) - 30.634_606_468_431_975).abs() < 1e-12);
        for s in [1, 5, 50, 200] {
            assert!(bessel_j0(j0_zero(s)).abs() < 1e-14);
        }
    }

    #[test]
    fn bessel_route_matches_mixture() {
        let t = TriangularDensity::new(200.0 * PI, 32).unwrap();
        for x in [0.3, 0.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 8.5] {
            let a = t.eval(x).unwrap().value;
            let b = pdf_triangular_mixture(x).unwrap();
            assert!((a - b).abs() < 1e-3, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn mixture_mass_and_mean() {
        let opts = QuadratureOptions {
            abs_tol: 1e-8,
            ..QuadratureOptions::default()
        };
        let f = |x: f64| pdf_triangular_mixture(x).unwrap();
        let mut mass = 0.0;
        let mut mean = 0.0;
        for (a, b) in [(0.0, 1.0), (1.0, 9.0)] {
            mass += integrate_with(f, a, b, EndpointFlags::BOTH, &opts).unwrap().value;
            mean += integrate_with(|x| x * f(x), a, b, EndpointFlags::BOTH, &opts).unwrap().value;
        }
        assert!((mass - 1.0).abs() < 1e-5, "{mass}");
        assert!((mean - 3.0).abs() < 1e-4, "{mean}");
    }

    #[test]
    fn bad_arguments() {
        assert!(pdf_triangular(0.0, 200.0 * PI, 32).is_err());
        assert!(pdf_triangular(1.0, 5.0, 32).is_err());
        assert!(pdf_triangular(1.0, 200.0 * PI, 1).is_err());
        assert_eq!(pdf_triangular_mixture(9.5).unwrap(), 0.0);
    }
}
