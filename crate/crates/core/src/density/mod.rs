//! Probability densities of the random eigenvalue.
//!
//! A [`PiecewiseDensity`] is a finite sum of weighted density pieces on
//! intervals inside `[0, 9]` plus point masses. Closed forms exist for the
//! zigzag ([`build_zigzag`]) and armchair ([`build_armchair`]) tubes; chiral
//! tubes use a numerical inversion of the eigenvalue map
//! ([`pdf_chiral_numeric`]); the triangular lattice density is an oscillatory
//! Bessel integral ([`pdf_triangular`]).

mod armchair;
mod chiral;
mod triangular;
mod zigzag;

pub use armchair::{build_armchair, pdf_armchair};
pub use chiral::{pdf_chiral_numeric, ChiralBranch, PhiFamily};
pub use triangular::{pdf_triangular, pdf_triangular_mixture, TriangularDensity};
pub use zigzag::{build_zigzag, pdf_zigzag, zigzag_radius};

use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numerics::{integrate_with, EndpointFlags, QuadratureOptions};

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Quadrature settings for masses and CDF increments.
pub const DENSITY_QUADRATURE: QuadratureOptions = QuadratureOptions {
    abs_tol: 1e-9,
    rel_tol: 1e-10,
    max_depth: 40,
    max_segments: 20_000,
};

/// Integration limits this close to a piece endpoint are moved onto it, so
/// endpoints computed along different routes still get the singular
/// treatment.
const ENDPOINT_SNAP: f64 = 1e-12;

/// `weight · f(x)` on the open interval `(lo, hi)`.
#[derive(Clone)]
pub struct DensityPiece {
    pub lo: f64,
    pub hi: f64,
    pub weight: f64,
    pub singular: EndpointFlags,
    pub label: String,
    eval: Evaluator,
}

impl fmt::Debug for DensityPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityPiece")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("weight", &self.weight)
            .field("singular", &self.singular)
            .field("label", &self.label)
            .finish()
    }
}

impl DensityPiece {
    pub fn new(
        lo: f64,
        hi: f64,
        weight: f64,
        singular: EndpointFlags,
        label: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            lo,
            hi,
            weight,
            singular,
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    /// Weighted density at `x`; zero outside the open interval.
    pub fn pdf(&self, x: f64) -> f64 {
        if x > self.lo && x < self.hi {
            self.weight * (self.eval)(x)
        } else {
            0.0
        }
    }

    /// `∫_a^b` of the weighted density, restricted to the piece.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        self.integral_with(a, b, |_| 1.0)
    }

    fn integral_with(&self, a: f64, b: f64, g: impl Fn(f64) -> f64) -> Result<f64> {
        let near = |x: f64, y: f64| (x - y).abs() <= ENDPOINT_SNAP * (1.0 + y.abs());
        let lo = if near(a, self.lo) { self.lo } else { a.max(self.lo) };
        let hi = if near(b, self.hi) { self.hi } else { b.min(self.hi) };
        if lo >= hi {
            return Ok(0.0);
        }
        let flags = EndpointFlags {
            lo: self.singular.lo && lo == self.lo,
            hi: self.singular.hi && hi == self.hi,
        };
        let eval = &self.eval;
        let r = integrate_with(
            |x| {
                let v = eval(x) * g(x);
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            },
            lo,
            hi,
            flags,
            &DENSITY_QUADRATURE,
        )?;
        Ok(self.weight * r.value)
    }

    pub fn mass(&self) -> Result<f64> {
        self.integral(self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: Rational64,
}

impl Atom {
    pub fn mass_f64(&self) -> f64 {
        self.mass.to_f64().unwrap_or(f64::NAN)
    }
}

/// Absolutely continuous pieces plus atoms.
#[derive(Debug, Clone)]
pub struct PiecewiseDensity {
    pub pieces: Vec<DensityPiece>,
    pub atoms: Vec<Atom>,
    /// Total mass of pieces and atoms, computed at construction.
    pub total_mass_check: f64,
}

impl PiecewiseDensity {
    /// Validates supports and records the total mass.
    pub fn new(pieces: Vec<DensityPiece>, atoms: Vec<Atom>) -> Result<Self> {
        const SLACK: f64 = 1e-9;
        for p in &pieces {
            if !(p.lo >= -SLACK && p.hi <= 9.0 + SLACK && p.lo < p.hi) || !(p.weight > 0.0) {
                return Err(Error::Domain(format!("invalid density piece {p:?}")));
            }
        }
        for a in &atoms {
            if !(0.0..=9.0).contains(&a.location) {
                return Err(Error::Domain(format!("atom outside [0,9]: {a:?}")));
            }
        }
        let mut d = Self {
            pieces,
            atoms,
            total_mass_check: 0.0,
        };
        d.total_mass_check = d.mass_between(f64::NEG_INFINITY, f64::INFINITY)? + d.atom_mass_up_to(f64::INFINITY);
        Ok(d)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.pieces.iter().map(|p| p.pdf(x)).sum()
    }

    /// Piece intervals in construction order.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        self.pieces.iter().map(|p| (p.lo, p.hi)).collect()
    }

    /// Mass of the continuous part on `(a, b)`.
    pub fn mass_between(&self, a: f64, b: f64) -> Result<f64> {
        self.pieces.iter().map(|p| p.integral(a, b)).sum()
    }

    fn atom_mass_up_to(&self, x: f64) -> f64 {
        self.atoms.iter().filter(|a| a.location <= x).map(Atom::mass_f64).sum()
    }

    /// `P(Λ ≤ x)`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.mass_between(f64::NEG_INFINITY, x)? + self.atom_mass_up_to(x))
    }

    /// `E Λ^k`.
    pub fn moment(&self, k: u32) -> Result<f64> {
        let cont: f64 = self
            .pieces
            .iter()
            .map(|p| p.integral_with(p.lo, p.hi, |x| x.powi(k as i32)))
            .sum::<Result<f64>>()?;
        let atoms: f64 = self.atoms.iter().map(|a| a.mass_f64() * a.location.powi(k as i32)).sum();
        Ok(cont + atoms)
    }

    /// Piece endpoints and atom locations, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .pieces
            .iter()
            .flat_map(|p| [p.lo, p.hi])
            .chain(self.atoms.iter().map(|a| a.location))
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// CDF values at increasing points, accumulated cell by cell.
    pub fn cdf_on_grid(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(xs.len());
        let mut prev = f64::NEG_INFINITY;
        let mut acc = 0.0;
        for &x in xs {
            if x < prev {
                return Err(Error::Domain("cdf grid must be non-decreasing".into()));
            }
            acc += self.mass_between(prev, x)?;
            acc += self
                .atoms
                .iter()
                .filter(|a| a.location > prev && a.location <= x)
                .map(Atom::mass_f64)
                .sum::<f64>();
            out.push(acc);
            prev = x;
        }
        Ok(out)
    }

    /// CSV with header `x,pdf,cdf` on `points` equally spaced values in `[0, 9]`.
    pub fn grid_csv(&self, points: usize) -> Result<String> {
        let xs: Vec<f64> = (0..points)
            .map(|i| 9.0 * i as f64 / (points.max(2) - 1) as f64)
            .collect();
        let cdf = self.cdf_on_grid(&xs)?;
        let mut out = String::from("x,pdf,cdf\n");
        for (x, f) in xs.iter().zip(cdf) {
            out.push_str(&format!("{x},{},{f}\n", self.pdf(*x)));
        }
        Ok(out)
    }

    /// CSV with header `x,mass`.
    pub fn atoms_csv(&self) -> String {
        let mut out = String::from("x,mass\n");
        for a in &self.atoms {
            out.push_str(&format!("{},{}\n", a.location, a.mass));
        }
        out
    }
}

/// `P(Λ ≤ x)` for a built density.
pub fn cdf(d: &PiecewiseDensity, x: f64) -> Result<f64> {
    d.cdf(x)
}

/// Tabulated CDF with one-sided limits, fine enough that no cell carries
/// more than `max_cell_mass` of continuous probability.
#[derive(Debug, Clone)]
pub struct CdfTable {
    /// `(x, F(x−), F(x))`.
    pub points: Vec<(f64, f64, f64)>,
}

/// Refinement stops with an error beyond this many table points.
const MAX_TABLE_POINTS: usize = 1_000_000;

impl CdfTable {
    pub fn build(d: &PiecewiseDensity, max_cell_mass: f64) -> Result<Self> {
        let mut marks = d.breakpoints();
        marks.push(0.0);
        marks.push(9.0);
        marks.sort_by(f64::total_cmp);
        marks.dedup();
        let mut points = Vec::new();
        let mut acc = 0.0;
        let atom_at = |x: f64| -> f64 {
            d.atoms.iter().filter(|a| a.location == x).map(Atom::mass_f64).sum()
        };
        let first = marks[0];
        points.push((first, acc, acc + atom_at(first)));
        acc += atom_at(first);
        for w in marks.windows(2) {
            let mut stack = vec![(w[0], w[1], 0u32)];
            // depth-first, left to right
            while let Some((a, b, depth)) = stack.pop() {
                if points.len() > MAX_TABLE_POINTS {
                    return Err(Error::NoConvergence {
                        estimate: acc,
                        error: f64::NAN,
                        tolerance: max_cell_mass,
                    });
                }
                let m = d.mass_between(a, b)?;
                if m > max_cell_mass && depth < 40 {
                    let mid = 0.5 * (a + b);
                    stack.push((mid, b, depth + 1));
                    stack.push((a, mid, depth + 1));
                    continue;
                }
                acc += m;
                let jump = if b == w[1] { atom_at(b) } else { 0.0 };
                points.push((b, acc, acc + jump));
                acc += jump;
            }
        }
        Ok(Self { points })
    }

    pub fn total(&self) -> f64 {
        self.points.last().map(|p| p.2).unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform01() -> DensityPiece {
        DensityPiece::new(0.0, 1.0, 1.0, EndpointFlags::NONE, "u", |_| 1.0)
    }

    #[test]
    fn uniform_with_atom() {
        let piece = DensityPiece::new(0.0, 1.0, 0.5, EndpointFlags::NONE, "u", |_| 1.0);
        let atom = Atom {
            location: 2.0,
            mass: Rational64::new(1, 2),
        };
        let d = PiecewiseDensity::new(vec![piece], vec![atom]).unwrap();
        assert!((d.total_mass_check - 1.0).abs() < 1e-14);
        assert_eq!(d.cdf(0.0).unwrap(), 0.0);
        assert!((d.cdf(0.5).unwrap() - 0.25).abs() < 1e-14);
        assert!((d.cdf(2.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((d.cdf(1.999).unwrap() - 0.5).abs() < 1e-14);
        assert!((d.moment(1).unwrap() - (0.25 + 1.0)).abs() < 1e-13);
        let t = CdfTable::build(&d, 0.01).unwrap();
        assert!((t.total() - 1.0).abs() < 1e-13);
        let at2 = t.points.iter().find(|p| p.0 == 2.0).unwrap();
        assert!((at2.2 - at2.1 - 0.5).abs() < 1e-14);
        assert!(t.points.windows(2).all(|w| w[0].0 < w[1].0 && w[0].2 <= w[1].1 + 1e-15));
        let g = d.cdf_on_grid(&[0.0, 0.5, 1.0, 2.0, 9.0]).unwrap();
        assert!((g[1] - 0.25).abs() < 1e-14 && (g[3] - 1.0).abs() < 1e-14);
        assert!(d.atoms_csv().starts_with("x,mass\n2,1/2"));
    }

    #[test]
    fn arcsine_piece_with_singular_ends() {
        let p = DensityPiece::new(1.0, 9.0, 1.0, EndpointFlags::BOTH, "arcsine", |x: f64| {
            1.0 / (std::f64::consts::PI * ((x - 1.0) * (9.0 - x)).sqrt())
        });
        let d = PiecewiseDensity::new(vec![p], vec![]).unwrap();
        assert!((d.total_mass_check - 1.0).abs() < 1e-9);
        assert!((d.cdf(5.0).unwrap() - 0.5).abs() < 1e-9);
        assert!((d.moment(1).unwrap() - 5.0).abs() < 1e-8);
    }

    #[test]
    fn invalid_pieces_rejected() {
        let p = DensityPiece::new(-1.0, 1.0, 1.0, EndpointFlags::NONE, "bad", |_| 0.5);
        assert!(PiecewiseDensity::new(vec![p], vec![]).is_err());
        assert!(PiecewiseDensity::new(vec![uniform01()], vec![]).is_ok());
    }

    #[test]
    fn grid_csv_header() {
        let d = PiecewiseDensity::new(vec![uniform01()], vec![]).unwrap();
        let csv = d.grid_csv(10).unwrap();
        assert!(csv.starts_with("x,pdf,cdf\n0,0,0\n"));
        let row: Vec<f64> = csv.lines().nth(2).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row[..2], [1.0, 0.0]);
        assert!((row[2] - 1.0).abs() < 1e-12);
        assert_eq!(csv.lines().count(), 11);
    }
}
