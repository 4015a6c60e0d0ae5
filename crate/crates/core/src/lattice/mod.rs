//! Chiral vectors, the triangular lattice rolled up along a chiral vector,
//! and exact closed-walk counting.
//!
//! Vertices of the triangular lattice are written as integer coefficient
//! pairs `(a, b)` in the basis `e1 = (√3, 0)`, `e2 = (√3/2, 3/2)`. Every vertex
//! has the six unit neighbours `±e1`, `±e2`, `±(e1 − e2)` and a loop of
//! weight 3. The dual `(p,q)`-nanotube identifies `v` with `v + j·(p,q)` for
//! every integer `j`.

mod finite;

pub use finite::{
    build_finite_armchair55_dual, half_loop_matrix, normalized_trace_moments, FiniteDualGraph,
    RationalMatrix,
};

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Loop weight carried by every vertex of the infinite dual lattices.
pub const LOOP_WEIGHT: u32 = 3;

/// The six unit steps of the triangular lattice.
pub const STEPS: [LatticeCoord; 6] = [
    LatticeCoord::new(1, 0),
    LatticeCoord::new(-1, 0),
    LatticeCoord::new(0, 1),
    LatticeCoord::new(0, -1),
    LatticeCoord::new(1, -1),
    LatticeCoord::new(-1, 1),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NanotubeClass {
    Zigzag,
    Armchair,
    Chiral,
}

/// A chiral vector `(p, q)` in canonical order `q ≤ p`.
///
/// The constructor accepts any non-negative pair with `p + q ≥ 3` and swaps the
/// entries if needed; `(p,q)` and `(q,p)` describe the same tube. Tubes with
/// `p + q ≥ 5` can occur as the tubular part of a finite fullerene and are
/// reported as [`physical`](Self::is_physical).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChiralVector {
    p: u32,
    q: u32,
}

impl ChiralVector {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        let (p, q) = if q > p { (q, p) } else { (p, q) };
        if p + q < 3 {
            return Err(Error::InvalidChiral {
                p,
                q,
                reason: "circumference p+q must be at least 3",
            });
        }
        Ok(Self { p, q })
    }

    /// Like [`new`](Self::new) but additionally rejects thin tubes (`p + q < 5`).
    pub fn physical(p: u32, q: u32) -> Result<Self> {
        let c = Self::new(p, q)?;
        if !c.is_physical() {
            return Err(Error::InvalidChiral {
                p: c.p,
                q: c.q,
                reason: "circumference p+q below 5 does not occur in a fullerene",
            });
        }
        Ok(c)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `p + q`.
    pub fn circumference(&self) -> u32 {
        self.p + self.q
    }

    pub fn is_physical(&self) -> bool {
        self.circumference() >= 5
    }

    pub fn class(&self) -> NanotubeClass {
        if self.q == 0 {
            NanotubeClass::Zigzag
        } else if self.p == self.q {
            NanotubeClass::Armchair
        } else {
            NanotubeClass::Chiral
        }
    }

    /// `p / (p + q)`, the quantity whose limit parametrises the
    /// large-circumference law.
    pub fn ratio(&self) -> f64 {
        self.p as f64 / self.circumference() as f64
    }
}

impl fmt::Display for ChiralVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Integer coefficients of a lattice vertex in the basis `e1`, `e2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticeCoord {
    pub a: i64,
    pub b: i64,
}

impl LatticeCoord {
    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn scale(self, j: i64) -> Self {
        Self::new(self.a * j, self.b * j)
    }
}

impl Add for LatticeCoord {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for LatticeCoord {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b)
    }
}

/// The weighted triangular lattice, optionally rolled up along a period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientLattice {
    period: Option<LatticeCoord>,
    loop_weight: u32,
}

impl QuotientLattice {
    /// The plane triangular lattice with no identification.
    pub fn triangular() -> Self {
        Self {
            period: None,
            loop_weight: LOOP_WEIGHT,
        }
    }

    /// The dual infinite nanotube for `chiral`.
    pub fn tube(chiral: ChiralVector) -> Self {
        Self {
            period: Some(LatticeCoord::new(chiral.p as i64, chiral.q as i64)),
            loop_weight: LOOP_WEIGHT,
        }
    }

    /// Identification along an arbitrary non-zero period, without reordering
    /// its entries.
    pub fn with_period(a: i64, b: i64) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(Error::Domain("identification period must be non-zero".into()));
        }
        Ok(Self {
            period: Some(LatticeCoord::new(a, b)),
            loop_weight: LOOP_WEIGHT,
        })
    }

    pub fn period(&self) -> Option<LatticeCoord> {
        self.period
    }

    pub fn loop_weight(&self) -> u32 {
        self.loop_weight
    }

    /// Representative of `coord` in the fundamental strip
    /// `0 ≤ a·p + b·q < p² + q²`; the identity on the plane lattice.
    pub fn canonicalize(&self, coord: LatticeCoord) -> LatticeCoord {
        match self.period {
            None => coord,
            Some(per) => {
                let norm = per.a * per.a + per.b * per.b;
                let dot = coord.a * per.a + coord.b * per.b;
                coord - per.scale(dot.div_euclid(norm))
            }
        }
    }
}

/// Canonical representative of `coord` on the `chiral` tube.
pub fn canonicalize(chiral: ChiralVector, coord: LatticeCoord) -> LatticeCoord {
    QuotientLattice::tube(chiral).canonicalize(coord)
}

/// Number of closed `k`-step walks from the origin. The loop counts as a step
/// with multiplicity [`LOOP_WEIGHT`].
pub fn closed_walk_count(lattice: &QuotientLattice, k: usize) -> BigUint {
    closed_walk_counts(lattice, k).pop().unwrap_or_else(BigUint::one)
}

/// Closed walk counts for every length `0..=k_max`, by a dynamic program over
/// canonical coordinates of the quotient lattice.
pub fn closed_walk_counts(lattice: &QuotientLattice, k_max: usize) -> Vec<BigUint> {
    let origin = LatticeCoord::default();
    let weight = BigUint::from(lattice.loop_weight);
    let mut counts = Vec::with_capacity(k_max + 1);
    let mut layer: HashMap<LatticeCoord, BigUint> = HashMap::new();
    layer.insert(origin, BigUint::one());
    counts.push(BigUint::one());

    for _ in 0..k_max {
        let mut next: HashMap<LatticeCoord, BigUint> = HashMap::with_capacity(layer.len() * 2);
        for (&v, c) in &layer {
            *next.entry(v).or_insert_with(BigUint::zero) += c * &weight;
            for &s in &STEPS {
                *next.entry(lattice.canonicalize(v + s)).or_insert_with(BigUint::zero) += c;
            }
        }
        counts.push(next.get(&origin).cloned().unwrap_or_default());
        layer = next;
    }
    counts
}

/// Closed walk counts obtained on the unrolled plane lattice: walks from the
/// origin are counted inside the box `|a|, |b| ≤ radius` and summed over all
/// lifts `j·period` of the origin.
///
/// A `k`-step walk never leaves the box of radius `k`, so any
/// `radius ≥ k_max` reproduces [`closed_walk_counts`] exactly.
pub fn cover_walk_counts(lattice: &QuotientLattice, k_max: usize, radius: usize) -> Vec<BigUint> {
    let r = radius as i64;
    let side = 2 * radius + 1;
    let idx = |c: LatticeCoord| ((c.a + r) as usize) * side + (c.b + r) as usize;
    let inside = |c: LatticeCoord| c.a.abs() <= r && c.b.abs() <= r;

    let mut lifts = vec![LatticeCoord::default()];
    if let Some(per) = lattice.period {
        for j in 1.. {
            let plus = per.scale(j);
            let minus = per.scale(-j);
            let mut any = false;
            for c in [plus, minus] {
                if inside(c) {
                    lifts.push(c);
                    any = true;
                }
            }
            if !any {
                break;
            }
        }
    }

    let weight = BigUint::from(lattice.loop_weight);
    let mut layer = vec![BigUint::zero(); side * side];
    layer[idx(LatticeCoord::default())] = BigUint::one();
    let mut counts = vec![BigUint::one()];
    for _ in 0..k_max {
        let mut next = vec![BigUint::zero(); side * side];
        for a in -r..=r {
            for b in -r..=r {
                let v = LatticeCoord::new(a, b);
                let c = &layer[idx(v)];
                if c.is_zero() {
                    continue;
                }
                next[idx(v)] += c * &weight;
                for &s in &STEPS {
                    let w = v + s;
                    if inside(w) {
                        next[idx(w)] += c;
                    }
                }
            }
        }
        counts.push(lifts.iter().map(|&l| &next[idx(l)]).sum());
        layer = next;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tube(p: u32, q: u32) -> QuotientLattice {
        QuotientLattice::tube(ChiralVector::new(p, q).unwrap())
    }

    #[test]
    fn chiral_vector_is_canonical() {
        let c = ChiralVector::new(1, 5).unwrap();
        assert_eq!((c.p(), c.q()), (5, 1));
        assert_eq!(c.class(), NanotubeClass::Chiral);
        assert_eq!(ChiralVector::new(5, 0).unwrap().class(), NanotubeClass::Zigzag);
        assert_eq!(ChiralVector::new(5, 5).unwrap().class(), NanotubeClass::Armchair);
        assert!(ChiralVector::new(2, 0).is_err());
        assert!(ChiralVector::new(1, 1).is_err());
        assert!(!ChiralVector::new(2, 1).unwrap().is_physical());
        assert!(ChiralVector::physical(3, 1).is_err());
        assert!(ChiralVector::physical(5, 0).is_ok());
    }

    #[test]
    fn canonicalize_examples() {
        let z = ChiralVector::new(5, 0).unwrap();
        let c = ChiralVector::new(5, 1).unwrap();
        assert_eq!(canonicalize(z, LatticeCoord::new(5, 0)), LatticeCoord::new(0, 0));
        assert_eq!(canonicalize(c, LatticeCoord::new(0, 0)), LatticeCoord::new(0, 0));
        assert_eq!(canonicalize(c, LatticeCoord::new(10, 2)), LatticeCoord::new(0, 0));
    }

    #[test]
    fn triangular_small_counts() {
        let t = QuotientLattice::triangular();
        assert_eq!(closed_walk_count(&t, 0), BigUint::from(1u32));
        assert_eq!(closed_walk_count(&t, 1), BigUint::from(3u32));
        assert_eq!(closed_walk_count(&t, 2), BigUint::from(15u32));
        assert_eq!(closed_walk_count(&t, 5), BigUint::from(4653u32));
    }

    #[test]
    fn zigzag_five_wraps_at_five_steps() {
        assert_eq!(closed_walk_count(&tube(5, 0), 5), BigUint::from(4655u32));
        assert_eq!(closed_walk_count(&tube(5, 1), 6), BigUint::from(35181u32));
    }

    #[test]
    fn no_wrap_below_circumference() {
        let tri = closed_walk_counts(&QuotientLattice::triangular(), 10);
        for (p, q) in [(5, 0), (4, 1), (3, 2), (5, 5)] {
            let counts = closed_walk_counts(&tube(p, q), (p + q - 1) as usize);
            for (k, c) in counts.iter().enumerate() {
                assert_eq!(c, &tri[k], "({p},{q}) k={k}");
            }
        }
    }

    #[test]
    fn swapped_period_gives_same_counts() {
        for (p, q) in [(5, 0), (4, 1), (3, 2), (6, 2)] {
            let a = closed_walk_counts(&QuotientLattice::with_period(p, q).unwrap(), 10);
            let b = closed_walk_counts(&QuotientLattice::with_period(q, p).unwrap(), 10);
            assert_eq!(a, b, "({p},{q})");
        }
    }

    #[test]
    fn cover_sum_matches_quotient_dp_and_box_doubling() {
        let k_max = 10;
        for lattice in [QuotientLattice::triangular(), tube(5, 0), tube(4, 2), tube(3, 3)] {
            let dp = closed_walk_counts(&lattice, k_max);
            let boxed = cover_walk_counts(&lattice, k_max, k_max);
            let doubled = cover_walk_counts(&lattice, k_max, 2 * k_max);
            assert_eq!(dp, boxed);
            assert_eq!(boxed, doubled);
        }
    }

    #[test]
    fn period_zero_rejected() {
        assert!(QuotientLattice::with_period(0, 0).is_err());
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent_and_equivariant(
            p in 0u32..12, q in 0u32..12, a in -200i64..200, b in -200i64..200, j in -20i64..20
        ) {
            prop_assume!(p + q >= 3);
            let chiral = ChiralVector::new(p, q).unwrap();
            let v = LatticeCoord::new(a, b);
            let c = canonicalize(chiral, v);
            prop_assert_eq!(canonicalize(chiral, c), c);
            let shift = LatticeCoord::new(chiral.p() as i64, chiral.q() as i64).scale(j);
            prop_assert_eq!(canonicalize(chiral, v + shift), c);
            // the representative differs from v by a multiple of the period
            let d = v - c;
            let per = LatticeCoord::new(chiral.p() as i64, chiral.q() as i64);
            let m = if per.a != 0 { d.a / per.a } else { d.b / per.b };
            prop_assert_eq!(per.scale(m), d);
        }
    }
}
