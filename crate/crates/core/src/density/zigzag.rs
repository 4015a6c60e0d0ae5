//! Zigzag `(p,0)` density: a uniform mixture of arcsine laws.

use std::f64::consts::PI;

use num_rational::Rational64;

use super::{Atom, DensityPiece, PiecewiseDensity};
use crate::error::{Error, Result};
use crate::numerics::EndpointFlags;

/// Below this radius the conditional law is a point mass at 1.
const DEGENERATE_RADIUS: f64 = 1e-12;

/// `r = 2|cos(πj/p)|`, computed identically for `j` and `p − j`.
pub fn zigzag_radius(p: u32, j: u32) -> f64 {
    let j = (j % p).min(p - j % p);
    2.0 * (PI * j as f64 / p as f64).cos().abs()
}

fn check(p: u32) -> Result<()> {
    if p < 3 {
        return Err(Error::Domain(format!("zigzag density needs p >= 3, got {p}")));
    }
    Ok(())
}

/// Arcsine density of `1 + r² + 2r cos U` on `((r−1)², (r+1)²)`.
fn arcsine(r: f64, x: f64) -> f64 {
    let lo = (r - 1.0) * (r - 1.0);
    let hi = (r + 1.0) * (r + 1.0);
    if x <= lo || x >= hi {
        return 0.0;
    }
    let c = r * r + 1.0 - x;
    1.0 / (PI * (4.0 * r * r - c * c).sqrt())
}

/// Density of `Λ*₍p,0₎` at `x`, excluding the atom at 1 for even `p`.
pub fn pdf_zigzag(p: u32, x: f64) -> Result<f64> {
    check(p)?;
    Ok((0..p)
        .map(|j| zigzag_radius(p, j))
        .filter(|&r| r >= DEGENERATE_RADIUS)
        .map(|r| arcsine(r, x))
        .sum::<f64>()
        / p as f64)
}

/// One arcsine piece per `j` with weight `1/p`; a vanishing radius
/// becomes an atom of mass `1/p` at `x = 1`.
pub fn build_zigzag(p: u32) -> Result<PiecewiseDensity> {
    check(p)?;
    let mut pieces = Vec::new();
    let mut atoms = Vec::new();
    for j in 0..p {
        let r = zigzag_radius(p, j);
        if r < DEGENERATE_RADIUS {
            atoms.push(Atom {
                location: 1.0,
                mass: Rational64::new(1, p as i64),
            });
            continue;
        }
        pieces.push(DensityPiece::new(
            (r - 1.0) * (r - 1.0),
            (r + 1.0) * (r + 1.0),
            1.0 / p as f64,
            EndpointFlags::BOTH,
            format!("j={j}"),
            move |x| arcsine(r, x),
        ));
    }
    PiecewiseDensity::new(pieces, atoms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_intervals() {
        let d = build_zigzag(5).unwrap();
        let mut got = d.intervals();
        got.sort_by(|a, b| a.0.total_cmp(&b.0));
        let want = [(0.146, 2.618), (0.146, 2.618), (0.382, 6.854), (0.382, 6.854), (1.0, 9.0)];
        for (g, w) in got.iter().zip(want) {
            assert!((g.0 - w.0).abs() < 1e-3 && (g.1 - w.1).abs() < 1e-3, "{g:?} vs {w:?}");
        }
        assert!((d.total_mass_check - 1.0).abs() < 1e-6);
        assert!(d.atoms.is_empty());
    }

    #[test]
    fn six_has_atom() {
        let d = build_zigzag(6).unwrap();
        assert_eq!(d.atoms.len(), 1);
        assert_eq!(d.atoms[0].location, 1.0);
        assert_eq!(d.atoms[0].mass, Rational64::new(1, 6));
        assert!((d.mass_between(0.0, 9.0).unwrap() - 5.0 / 6.0).abs() < 1e-6);
        let jump = d.cdf(1.0).unwrap() - d.cdf(1.0 - 1e-12).unwrap();
        assert!((jump - 1.0 / 6.0).abs() < 1e-6);
        assert!((d.cdf(9.0).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn pointwise_matches_builder() {
        for p in [3, 4, 5, 6, 9] {
            let d = build_zigzag(p).unwrap();
            for i in 1..200 {
                let x = 9.0 * i as f64 / 200.0 + 1e-3;
                assert!((pdf_zigzag(p, x).unwrap() - d.pdf(x)).abs() < 1e-12);
                assert!(d.pdf(x) >= 0.0);
            }
        }
        assert!(pdf_zigzag(2, 1.0).is_err());
        assert_eq!(pdf_zigzag(5, -1.0).unwrap(), 0.0);
        assert_eq!(pdf_zigzag(5, 10.0).unwrap(), 0.0);
    }
}
