//! Numerical density for general `(p,q)` by inverting the eigenvalue map
//! on each monotone branch.
//!
//! With `θ = U/(p+q)` uniform on `(0, π/(p+q))` and `v = cos θ`, the
//! eigenvalue given `J = j` is `Φ_j(θ) = φ_j(cos θ)`. On a branch where `Φ_j`
//! is monotone, the conditional density is `(p+q)/(π|Φ_j'(θ)|)`.

use std::f64::consts::PI;

use super::{DensityPiece, PiecewiseDensity};
use crate::error::{Error, Result};
use crate::lattice::ChiralVector;
use crate::numerics::{chebyshev_p, chebyshev_t, refine_extrema, EndpointFlags, Extremum};

/// Extrema positions are refined to this tolerance in `v`.
const EXTREMUM_TOL: f64 = 1e-12;
/// Interior checks of the derivative sign on each branch.
const MONOTONE_PROBES: usize = 64;
/// A branch end with `|Φ'|` below this is a turning point.
const TURNING_SLOPE: f64 = 1e-6;
/// Within this distance of a turning value the density is taken from the
/// local quadratic `Φ ≈ x* + ½Φ''(θ*)(θ−θ*)²`, since inverting `Φ` there
/// is dominated by rounding.
const TURNING_WINDOW: f64 = 1e-10;

/// The functions `φ_j(v)`, `j = 0, …, p+q−1`, in Chebyshev form.
#[derive(Debug, Clone)]
pub struct PhiFamily {
    p: u32,
    q: u32,
    c: Vec<f64>,
    d: Vec<f64>,
}

impl PhiFamily {
    pub fn new(chiral: ChiralVector) -> Self {
        Self::from_pair(chiral.p(), chiral.q())
    }

    pub(crate) fn from_pair(p: u32, q: u32) -> Self {
        let n = p + q;
        let angle = |j: u32| 2.0 * PI * j as f64 / n as f64;
        Self {
            p,
            q,
            c: (0..n).map(|j| angle(j).cos()).collect(),
            d: (0..n).map(|j| angle(j).sin()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// `(c_j, d_j) = (cos(2πj/n), sin(2πj/n))`.
    pub fn coefficients(&self, j: usize) -> (f64, f64) {
        (self.c[j], self.d[j])
    }

    /// `(cos(π/n), 1)`.
    pub fn domain(&self) -> (f64, f64) {
        ((PI / (self.p + self.q) as f64).cos(), 1.0)
    }

    /// `3 + 2[T_n(v) + c_j(T_p(v)+T_q(v)) + d_j√(1−v²)(P_{q−1}(v) − P_{p−1}(v))]`.
    pub fn eval(&self, j: usize, v: f64) -> f64 {
        let (p, q) = (self.p as usize, self.q as usize);
        let s = (1.0 - v * v).max(0.0).sqrt();
        3.0 + 2.0
            * (chebyshev_t(p + q, v)
                + self.c[j] * (chebyshev_t(p, v) + chebyshev_t(q, v))
                + self.d[j] * s * (chebyshev_p(q as isize - 1, v) - chebyshev_p(p as isize - 1, v)))
    }

    /// `Φ_j(θ) = 3 + 2(cos nθ + cos(pθ+φ_j) + cos(qθ−φ_j))`.
    pub fn eval_theta(&self, j: usize, theta: f64) -> f64 {
        let (p, q) = (self.p as f64, self.q as f64);
        let phi = self.phase(j);
        3.0 + 2.0 * (((p + q) * theta).cos() + (p * theta + phi).cos() + (q * theta - phi).cos())
    }

    /// `dΦ_j/dθ`.
    pub fn derivative_theta(&self, j: usize, theta: f64) -> f64 {
        let (p, q) = (self.p as f64, self.q as f64);
        let phi = self.phase(j);
        -2.0 * ((p + q) * ((p + q) * theta).sin() + p * (p * theta + phi).sin() + q * (q * theta - phi).sin())
    }

    /// `d²Φ_j/dθ²`.
    pub fn second_derivative_theta(&self, j: usize, theta: f64) -> f64 {
        let (p, q) = (self.p as f64, self.q as f64);
        let phi = self.phase(j);
        let n = p + q;
        -2.0 * (n * n * (n * theta).cos() + p * p * (p * theta + phi).cos() + q * q * (q * theta - phi).cos())
    }

    fn phase(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.len() as f64
    }

    /// Interior local extrema of `φ_j` on the open domain, in `v`.
    ///
    /// Located by a difference-quotient scan in `v`, then polished by
    /// bisection on the exact derivative `Φ_j'(θ)`.
    pub fn extrema(&self, j: usize, scan_points: usize) -> Result<Vec<Extremum>> {
        let (lo, hi) = self.domain();
        let cell = (hi - lo) / scan_points as f64;
        let mut found = refine_extrema(|v| self.eval(j, v), lo, hi, scan_points, EXTREMUM_TOL)?;
        for e in &mut found {
            let t_a = (e.x + 2.0 * cell).min(hi).acos();
            let t_b = (e.x - 2.0 * cell).max(lo).acos();
            if let Some(t) = self.critical_point(j, t_a, t_b) {
                e.x = t.cos();
                e.value = self.eval_theta(j, t);
            }
        }
        Ok(found)
    }

    /// Root of `Φ_j'` in `[a, b]` if the derivative changes sign there.
    fn critical_point(&self, j: usize, mut a: f64, mut b: f64) -> Option<f64> {
        let mut da = self.derivative_theta(j, a);
        let db = self.derivative_theta(j, b);
        if da.signum() == db.signum() {
            return None;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let dm = self.derivative_theta(j, m);
            if dm.signum() == da.signum() {
                a = m;
                da = dm;
            } else {
                b = m;
            }
        }
        Some(0.5 * (a + b))
    }
}

/// A monotone piece of `Φ_j` on `[θ_lo, θ_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralBranch {
    pub j: usize,
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub x_lo: f64,
    pub x_hi: f64,
}

impl ChiralBranch {
    /// `(x*, |Φ''(θ*)|)` for each end of the branch that is a turning point.
    fn turning_ends(&self, fam: &PhiFamily) -> Vec<(f64, f64)> {
        [self.theta_lo, self.theta_hi]
            .into_iter()
            .filter(|&t| fam.derivative_theta(self.j, t).abs() < TURNING_SLOPE)
            .map(|t| (fam.eval_theta(self.j, t), fam.second_derivative_theta(self.j, t).abs()))
            .collect()
    }

    /// `θ` in the branch with `Φ_j(θ) = x`.
    fn invert(&self, fam: &PhiFamily, x: f64) -> f64 {
        let (mut a, mut b) = (self.theta_lo, self.theta_hi);
        let fa = fam.eval_theta(self.j, a) - x;
        let increasing = fam.eval_theta(self.j, b) > fam.eval_theta(self.j, a);
        let sign = if increasing { 1.0 } else { -1.0 };
        if sign * fa >= 0.0 {
            return a;
        }
        let mut t = 0.5 * (a + b);
        for _ in 0..200 {
            let g = sign * (fam.eval_theta(self.j, t) - x);
            if g == 0.0 {
                return t;
            }
            if g < 0.0 {
                a = t;
            } else {
                b = t;
            }
            let dg = sign * fam.derivative_theta(self.j, t);
            let newton = t - g / dg;
            let next = if dg > 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
            if (next - t).abs() <= 1e-15 * t.abs().max(1e-300) || b - a <= 1e-16 {
                return next;
            }
            t = next;
        }
        t
    }
}

fn branches(fam: &PhiFamily, grid_size: usize) -> Result<Vec<ChiralBranch>> {
    let n = fam.len();
    let theta_max = PI / n as f64;
    let mut out = Vec::new();
    for j in 0..n {
        let mut cuts = vec![0.0];
        let mut interior: Vec<f64> = fam.extrema(j, grid_size)?.iter().map(|e| e.x.acos()).collect();
        interior.sort_by(f64::total_cmp);
        cuts.extend(interior);
        cuts.push(theta_max);
        cuts = split_remaining(fam, j, &cuts, grid_size);
        for w in cuts.windows(2) {
            let (ta, tb) = (w[0], w[1]);
            if tb - ta <= 0.0 {
                continue;
            }
            let (xa, xb) = (fam.eval_theta(j, ta), fam.eval_theta(j, tb));
            if (xa - xb).abs() < 1e-14 {
                continue;
            }
            check_monotone(fam, j, ta, tb, xb > xa)?;
            out.push(ChiralBranch {
                j,
                theta_lo: ta,
                theta_hi: tb,
                x_lo: xa.min(xb),
                x_hi: xa.max(xb),
            });
        }
    }
    Ok(out)
}

/// Adds critical points that the scan in `v` missed: the exact derivative
/// is sampled at `grid_size` points in `θ` between consecutive cuts, and
/// every sign change is bisected. The `v` grid is coarse in `θ` near
/// `v = 1`, where extrema can crowd together.
fn split_remaining(fam: &PhiFamily, j: usize, cuts: &[f64], grid_size: usize) -> Vec<f64> {
    let mut out = vec![cuts[0]];
    for w in cuts.windows(2) {
        let (ta, tb) = (w[0], w[1]);
        let step = (tb - ta) / grid_size as f64;
        let mut prev: Option<(f64, f64)> = None;
        for i in 1..grid_size {
            let t = ta + step * i as f64;
            let d = fam.derivative_theta(j, t);
            if d == 0.0 {
                continue;
            }
            if let Some((tp, dp)) = prev {
                if dp.signum() != d.signum() {
                    if let Some(c) = fam.critical_point(j, tp, t) {
                        out.push(c);
                    }
                }
            }
            prev = Some((t, d));
        }
        out.push(tb);
    }
    out
}

fn check_monotone(fam: &PhiFamily, j: usize, ta: f64, tb: f64, increasing: bool) -> Result<()> {
    let mut prev = fam.eval_theta(j, ta);
    for i in 1..=MONOTONE_PROBES {
        let t = ta + (tb - ta) * i as f64 / MONOTONE_PROBES as f64;
        let x = fam.eval_theta(j, t);
        let step = if increasing { x - prev } else { prev - x };
        if step < -1e-12 {
            return Err(Error::ExtremumDetectionFailure {
                lo: ta.cos().min(tb.cos()),
                hi: ta.cos().max(tb.cos()),
                reason: format!("phi_{j} is not monotone between consecutive extrema"),
            });
        }
        prev = x;
    }
    Ok(())
}

pub(crate) fn numeric_density(p: u32, q: u32, grid_size: usize) -> Result<PiecewiseDensity> {
    if grid_size < 256 {
        return Err(Error::Domain(format!("grid_size must be at least 256, got {grid_size}")));
    }
    let fam = PhiFamily::from_pair(p, q);
    let n = fam.len() as f64;
    let pieces = branches(&fam, grid_size)?
        .into_iter()
        .map(|b| {
            let fam = fam.clone();
            let turning = b.turning_ends(&fam);
            DensityPiece::new(
                b.x_lo.max(0.0),
                b.x_hi.min(9.0),
                1.0 / n,
                EndpointFlags::BOTH,
                format!("j={} theta=[{:.6},{:.6}]", b.j, b.theta_lo, b.theta_hi),
                move |x| {
                    for &(xe, curvature) in &turning {
                        let delta = (x - xe).abs();
                        if delta < TURNING_WINDOW {
                            return n / (PI * (2.0 * curvature * delta).sqrt());
                        }
                    }
                    let t = b.invert(&fam, x);
                    n / (PI * fam.derivative_theta(b.j, t).abs())
                },
            )
        })
        .collect();
    PiecewiseDensity::new(pieces, vec![])
}

/// Density of `Λ*₍p,q₎` for `0 < q < p` from monotone-branch inversion,
/// scanning each `φ_j` at `grid_size` points for extrema.
pub fn pdf_chiral_numeric(chiral: ChiralVector, grid_size: usize) -> Result<PiecewiseDensity> {
    let (p, q) = (chiral.p(), chiral.q());
    if !(0 < q && q < p) {
        return Err(Error::Domain(format!("chiral density needs 0 < q < p, got {chiral}")));
    }
    numeric_density(p, q, grid_size)
}
