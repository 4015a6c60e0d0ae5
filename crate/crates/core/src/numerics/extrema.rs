//! Local extrema of a smooth function from a derivative sign scan.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Finds every interior local extremum of `f` on `(lo, hi)`.
///
/// The centered difference derivative is sampled at `scan_points` cell
/// midpoints; each sign change is bisected down to `tol` in `x`. `f` is only
/// ever evaluated strictly inside `(lo, hi)`, so endpoint singularities are
/// harmless.
pub fn refine_extrema<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    scan_points: usize,
    tol: f64,
) -> Result<Vec<Extremum>> {
    if !(lo < hi) || scan_points < 16 || !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "refine_extrema needs lo < hi, scan_points >= 16, tol > 0 (got [{lo}, {hi}], {scan_points}, {tol})"
        )));
    }
    let cell = (hi - lo) / scan_points as f64;
    let h = (hi - lo) / (8.0 * scan_points as f64);
    let deriv = |x: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let node = |i: usize| lo + (i as f64 + 0.5) * cell;

    let mut out = Vec::new();
    let mut last: Option<(usize, f64)> = None;
    for i in 0..scan_points {
        let d = deriv(node(i));
        if d.is_nan() {
            return Err(Error::ExtremumDetectionFailure {
                lo,
                hi,
                reason: format!("derivative undefined at x = {}", node(i)),
            });
        }
        if d == 0.0 {
            continue;
        }
        if let Some((j, dj)) = last {
            if dj.signum() != d.signum() {
                out.push(bisect(&f, &deriv, node(j), node(i), dj, tol, h, lo, hi)?);
            }
        }
        last = Some((i, d));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn bisect<F: Fn(f64) -> f64, D: Fn(f64) -> f64>(
    f: &F,
    deriv: &D,
    mut a: f64,
    mut b: f64,
    da: f64,
    tol: f64,
    h: f64,
    lo: f64,
    hi: f64,
) -> Result<Extremum> {
    let rising_left = da > 0.0;
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let dm = deriv(m);
        if dm.is_nan() {
            return Err(Error::ExtremumDetectionFailure {
                lo,
                hi,
                reason: format!("derivative undefined at x = {m}"),
            });
        }
        if (dm > 0.0) == rising_left && dm != 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    if b - a > tol.max(4.0 * f64::EPSILON * b.abs()) {
        return Err(Error::ExtremumDetectionFailure {
            lo,
            hi,
            reason: format!("bracket [{a}, {b}] did not shrink below {tol}"),
        });
    }
    let x = 0.5 * (a + b);
    let value = f(x);
    let second = f(x + h) - 2.0 * value + f(x - h);
    let kind = if second > 0.0 {
        ExtremumKind::Min
    } else if second < 0.0 || rising_left {
        ExtremumKind::Max
    } else {
        ExtremumKind::Min
    };
    Ok(Extremum { x, value, kind })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_minimum() {
        let e = refine_extrema(|x| (x - 0.3) * (x - 0.3), 0.0, 1.0, 64, 1e-12).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e[0].x - 0.3).abs() < 1e-10);
        assert_eq!(e[0].kind, ExtremumKind::Min);
    }

    #[test]
    fn monotone_has_no_extrema() {
        assert!(refine_extrema(f64::exp, -1.0, 2.0, 256, 1e-12).unwrap().is_empty());
        assert!(refine_extrema(|x: f64| -x.powi(3), 0.1, 1.0, 16, 1e-12).unwrap().is_empty());
    }

    #[test]
    fn sine_alternates_kinds() {
        let e = refine_extrema(f64::sin, 0.0, 10.0, 512, 1e-12).unwrap();
        let xs: Vec<f64> = e.iter().map(|e| e.x).collect();
        let pi = std::f64::consts::PI;
        let expect = [pi / 2.0, 1.5 * pi, 2.5 * pi];
        assert_eq!(xs.len(), 3);
        for (x, t) in xs.iter().zip(expect) {
            assert!((x - t).abs() < 1e-9);
        }
        assert_eq!(e[0].kind, ExtremumKind::Max);
        assert_eq!(e[1].kind, ExtremumKind::Min);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(refine_extrema(|x| x, 1.0, 0.0, 64, 1e-12).is_err());
        assert!(refine_extrema(|x| x, 0.0, 1.0, 8, 1e-12).is_err());
    }
}
