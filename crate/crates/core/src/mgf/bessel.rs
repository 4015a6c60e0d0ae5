//! Bessel functions `I₀` and `J₀` of real argument.

use std::f64::consts::{FRAC_PI_4, PI};

/// Modified Bessel function `I₀(x)`.
///
/// Power series for `|x| ≤ 30`, the large-argument expansion beyond.
pub fn bessel_i0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 30.0 {
        series_i0(ax)
    } else {
        asymptotic_i0(ax)
    }
}

fn series_i0(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        term *= y / (k as f64 * k as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

fn asymptotic_i0(x: f64) -> f64 {
    let mut a = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let next = a * ((2 * k - 1) as f64).powi(2) / (8.0 * k as f64 * x);
        if next > a {
            break;
        }
        a = next;
        sum += a;
        if a < 1e-17 * sum {
            break;
        }
    }
    x.exp() / (2.0 * PI * x).sqrt() * sum
}

/// Bessel function of the first kind `J₀(x)`.
///
/// Power series for `|x| ≤ 8`, normalised backward recurrence up to 25 and
/// the Hankel expansion beyond. Accuracy is absolute near the zeros.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 8.0 {
        series_j0(ax)
    } else if ax <= 25.0 {
        miller_j0(ax)
    } else {
        hankel_j0(ax)
    }
}

fn series_j0(x: f64) -> f64 {
    let y = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= y / (k as f64 * k as f64);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

fn miller_j0(x: f64) -> f64 {
    let mut n = 2 * (x as usize + 26);
    if n % 2 == 1 {
        n += 1;
    }
    let mut above = 0.0f64;
    let mut cur = 1e-30f64;
    let mut norm = 0.0f64;
    // cur holds J_k, above holds J_{k+1}
    for k in (1..=n).rev() {
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += cur;
    cur / norm
}

fn hankel_j0(x: f64) -> f64 {
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let next = a * ((2 * k - 1) as f64).powi(2) / (8.0 * k as f64 * x);
        if next > last || next < 1e-18 {
            break;
        }
        last = next;
        a = next;
        let sign = if (k / 2 + k) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
