//! Armchair `(p,p)` density.
//!
//! `Λ = 4V² + 4aV + 1` with `a = cos(πJ/p)`, `J` uniform on `{0,…,2p−1}` and
//! `V = cos(U/2)`. Indices `J` and `2p−J` share `a`. Solving for `V` gives
//! the branches `w = (∓a + √(a²+x−1))/2`, each with density
//! `1/(2π√(1−w²)·√(a²+x−1))`.

use std::f64::consts::PI;

use super::{DensityPiece, PiecewiseDensity};
use crate::error::{Error, Result};
use crate::numerics::EndpointFlags;

fn check(p: u32) -> Result<()> {
    if p < 2 {
        return Err(Error::Domain(format!("armchair density needs p >= 2, got {p}")));
    }
    Ok(())
}

fn cosine(p: u32, j: u32) -> f64 {
    (PI * j as f64 / p as f64).cos()
}

/// `1/(π√(x(3 ± 2√x − x)))`.
fn g_end(x: f64, sign: f64) -> f64 {
    let s = x.sqrt();
    1.0 / (PI * (x * (3.0 + sign * 2.0 * s - x)).sqrt())
}

/// Branch density with `w = (−a + √(a²+x−1))/2`, continued to negative `w`.
fn branch(a: f64, x: f64) -> f64 {
    let root = (a * a + x - 1.0).sqrt();
    let w = 0.5 * (-a + root);
    1.0 / (2.0 * PI * (1.0 - w * w).sqrt() * root)
}

/// Density of `Λ*₍p,p₎` at `x` as `(1/p)(½f₀ + Σ_{j=1}^{p−1} f_j)`.
///
/// `f₀` merges `J ∈ {0, p}`; for `2j ≤ p` the map is bijective on `V`, for
/// `2j > p` it has two branches meeting at `1 − a²`.
pub fn pdf_armchair(p: u32, x: f64) -> Result<f64> {
    check(p)?;
    let mut f0 = 0.0;
    if x > 0.0 && x < 9.0 {
        f0 += g_end(x, 1.0);
    }
    if x > 0.0 && x < 1.0 {
        f0 += g_end(x, -1.0);
    }
    let mut sum = 0.5 * f0;
    for j in 1..p {
        let a = cosine(p, j);
        let d = a * a + x - 1.0;
        if d <= 0.0 {
            continue;
        }
        let root = d.sqrt();
        let upper = |lo_ok: bool| -> f64 {
            if lo_ok && x < 5.0 + 4.0 * a {
                let y = -a + root;
                1.0 / (PI * ((4.0 - y * y) * d).sqrt())
            } else {
                0.0
            }
        };
        if 2 * j <= p {
            sum += upper(x >= 1.0);
        } else {
            sum += upper(x > 1.0 - a * a);
            if x < 1.0 {
                let y = a + root;
                sum += 1.0 / (PI * ((4.0 - y * y) * d).sqrt());
            }
        }
    }
    Ok(sum / p as f64)
}

/// Pieces grouped by `|a|`-pairs: `P₀` on `(0,9)`, `P_p` on `(0,1)`, each
/// with weight `1/(2p)`, and `P_j` on `(1−a², 5+4a)` with weight `1/p`.
/// For `a > 0` the piece carries the lower branch of its `−a` partner.
pub fn build_armchair(p: u32) -> Result<PiecewiseDensity> {
    check(p)?;
    let half = 0.5 / p as f64;
    let mut pieces = vec![
        DensityPiece::new(0.0, 9.0, half, EndpointFlags::BOTH, "j=0", |x| g_end(x, 1.0)),
        DensityPiece::new(0.0, 1.0, half, EndpointFlags::BOTH, format!("j={p}"), |x| {
            g_end(x, -1.0)
        }),
    ];
    for j in 1..p {
        let a = cosine(p, j);
        let (lo, hi) = if 2 * j == p { (1.0, 5.0) } else { (1.0 - a * a, 5.0 + 4.0 * a) };
        pieces.push(DensityPiece::new(
            lo,
            hi,
            1.0 / p as f64,
            EndpointFlags::BOTH,
            format!("j={j}"),
            move |x| branch(a, x),
        ));
    }
    PiecewiseDensity::new(pieces, vec![])
}
