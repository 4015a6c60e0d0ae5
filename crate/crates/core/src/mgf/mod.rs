//! Moment generating functions `m(t) = E e^{tΛ}`.
//!
//! For a tube the expectation over the discrete angle is a Riemann sum
//! [`i0hat`] of the angular integral representation of `I₀`:
//!
//! ```text
//! m(t) = e^{3t}/π ∫₀^π e^{2t cos θ} Î₀(4t α(θ), 4t β(θ), p, q) dθ
//! ```
//!
//! with `α(θ) = cos(θ/2) cos(θ(p−q)/(2(p+q)))` and
//! `β(θ) = cos(θ/2) sin(θ(p−q)/(2(p+q)))`. Letting `p+q → ∞` replaces `Î₀`
//! by `I₀(4t cos(θ/2))` ([`mgf_limit`]).
//!
//! The zigzag and armchair cases are obtained by specialising the general
//! formula; written out by hand they read `Î₀(4t cos(θ/2), 0, p, p)` and
//! `Î₀(4t cos²(θ/2), 2t sin θ, p, 0)`. Without the `4t` factor in the first
//! argument they no longer reproduce the moment series.

pub mod bessel;

pub use bessel::{bessel_i0, bessel_j0};

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::Result;
use crate::lattice::ChiralVector;
use crate::moments::{excess_with, moment_sequence, moment_series, Factorials, Method, Target};
use crate::numerics::{integrate_with, EndpointFlags, QuadratureOptions, QuadratureResult};

/// Quadrature settings used by [`mgf`], [`mgf_limit`] and
/// [`verify_integral_identity`].
pub const MGF_OPTIONS: QuadratureOptions = QuadratureOptions {
    abs_tol: 1e-13,
    rel_tol: 1e-13,
    max_depth: 40,
    max_segments: 20_000,
};

/// `(1/n) Σ_{j<n} exp(α cos(2πj/n) + β sin(2πj/n))`, `n = p + q`.
pub fn i0hat(alpha: f64, beta: f64, p: u32, q: u32) -> f64 {
    let n = p + q;
    assert!(n >= 1, "i0hat needs p + q >= 1");
    let step = 2.0 * PI / n as f64;
    (0..n)
        .map(|j| {
            let a = step * j as f64;
            (alpha * a.cos() + beta * a.sin()).exp()
        })
        .sum::<f64>()
        / n as f64
}

/// `(α(θ), β(θ))` for the chiral vector.
pub fn alpha_beta(chiral: ChiralVector, theta: f64) -> (f64, f64) {
    let (p, q) = (chiral.p() as f64, chiral.q() as f64);
    let half = (theta / 2.0).cos();
    let phase = theta * (p - q) / (2.0 * (p + q));
    (half * phase.cos(), half * phase.sin())
}

fn scaled(r: QuadratureResult, factor: f64) -> QuadratureResult {
    QuadratureResult {
        value: r.value * factor,
        error_estimate: r.error_estimate * factor.abs(),
        evaluations: r.evaluations,
    }
}

/// Moment generating function of `Λ*₍p,q₎` by quadrature over `θ`.
pub fn mgf(chiral: ChiralVector, t: f64) -> Result<QuadratureResult> {
    mgf_with(chiral, t, &MGF_OPTIONS)
}

pub fn mgf_with(chiral: ChiralVector, t: f64, opts: &QuadratureOptions) -> Result<QuadratureResult> {
    let (p, q) = (chiral.p(), chiral.q());
    let f = |theta: f64| {
        let (a, b) = alpha_beta(chiral, theta);
        (2.0 * t * theta.cos()).exp() * i0hat(4.0 * t * a, 4.0 * t * b, p, q)
    };
    let r = integrate_with(f, 0.0, PI, EndpointFlags::NONE, opts)?;
    Ok(scaled(r, (3.0 * t).exp() / PI))
}

/// Moment generating function of the triangular lattice.
pub fn mgf_limit(t: f64) -> Result<QuadratureResult> {
    mgf_limit_with(t, &MGF_OPTIONS)
}

pub fn mgf_limit_with(t: f64, opts: &QuadratureOptions) -> Result<QuadratureResult> {
    let f = |theta: f64| (2.0 * t * theta.cos()).exp() * bessel_i0(4.0 * t * (theta / 2.0).cos());
    let r = integrate_with(f, 0.0, PI, EndpointFlags::NONE, opts)?;
    Ok(scaled(r, (3.0 * t).exp() / PI))
}

/// Both sides of `∫₀¹ I₀³(2i√(t log x)) dx = mgf_limit(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// Evaluates the left side with `x = e^{−s}`: the integrand becomes
/// `e^{−s} I₀³(2√(ts))` for `t ≥ 0` and `e^{−s} J₀³(2√(|t|s))` for `t < 0`,
/// integrated up to a point where the remaining tail is below `e^{−45}`.
pub fn verify_integral_identity(t: f64) -> Result<IntegralIdentity> {
    let lhs = if t >= 0.0 {
        let upper = (3.0 * t.sqrt() + (9.0 * t + 45.0).sqrt()).powi(2);
        let f = |s: f64| (-s).exp() * bessel_i0(2.0 * (t * s).sqrt()).powi(3);
        integrate_with(f, 0.0, upper, EndpointFlags::NONE, &MGF_OPTIONS)?
    } else {
        let f = |s: f64| (-s).exp() * bessel_j0(2.0 * (-t * s).sqrt()).powi(3);
        integrate_with(f, 0.0, 45.0, EndpointFlags::NONE, &MGF_OPTIONS)?
    };
    let rhs = mgf_limit(t)?;
    Ok(IntegralIdentity {
        lhs: lhs.value,
        rhs: rhs.value,
        gap: (lhs.value - rhs.value).abs(),
    })
}

/// `|(1/2π)∫₀^{2π} e^{a cos φ + b sin φ} dφ − I₀(√(a²+b²))|`.
pub fn angular_identity_gap(a: f64, b: f64) -> Result<f64> {
    let r = integrate_with(
        |phi: f64| (a * phi.cos() + b * phi.sin()).exp(),
        0.0,
        2.0 * PI,
        EndpointFlags::NONE,
        &MGF_OPTIONS,
    )?;
    Ok((r.value / (2.0 * PI) - bessel_i0((a * a + b * b).sqrt())).abs())
}

/// Smallest `K` with `(9|t|)^{K+1}/(K+1)! < bound`.
///
/// All moments are at most `9^k`, so this term bounds the first omitted term
/// of the moment series truncated after `K`.
pub fn series_order(t: f64, bound: f64) -> usize {
    let a = 9.0 * t.abs();
    let mut term = a;
    let mut k = 0usize;
    while term >= bound {
        k += 1;
        term *= a / (k + 1) as f64;
    }
    k
}

/// `Σ_{k≤K} μ_k t^k/k!` with exact moments and `K` from [`series_order`].
pub fn mgf_moment_series(target: Target, t: f64, bound: f64) -> Result<f64> {
    let k_max = series_order(t, bound);
    let method = match target {
        Target::Tube(_) => Method::Indicator,
        Target::Triangular => Method::TriangularSum,
    };
    let seq = moment_sequence(target, k_max, method)?;
    Ok(moment_series(&seq.values, t))
}

/// `m_{(p,q)}(t) − m_𝒯(t)` for `t > 0` as the series of excess moments
/// `Σ_{k≥p+q} (μ_k(Λ*) − μ_k(𝒯)) t^k/k!`.
///
/// Every term is non-negative, so the difference is resolved to full
/// relative precision even when it is far below the resolution of either
/// generating function. Summation stops once a term drops below `1e-30` of
/// the running total.
pub fn mgf_gap_to_limit(chiral: ChiralVector, t: f64) -> f64 {
    assert!(t > 0.0, "the excess series needs t > 0");
    let start = chiral.circumference() as usize;
    let f = Factorials::new(start + 400);
    let mut total = 0.0f64;
    for k in start..start + 400 {
        let e = excess_with(chiral, k, &f);
        let ratio = BigRational::new(BigInt::from(e), BigInt::from(f.get(k).clone()));
        let term = ratio.to_f64().unwrap_or(0.0) * t.powi(k as i32);
        total += term;
        if k > start + 4 && term < 1e-30 * total {
            break;
        }
    }
    total
}

/// The `t,m,err` CSV body for a list of evaluations.
pub fn mgf_csv(rows: &[(f64, QuadratureResult)]) -> String {
    let mut out = String::from("t,m,err\n");
    for (t, r) in rows {
        out.push_str(&format!("{t},{},{}\n", r.value, r.error_estimate));
    }
    out
}
