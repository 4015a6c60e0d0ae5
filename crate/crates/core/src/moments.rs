//! Exact moments `μ_k` of the random eigenvalue of a dual nanotube.
//!
//! Three closed forms are implemented independently of each other and of the
//! walk-counting oracle in [`crate::lattice`]:
//!
//! * [`moments_indicator_sum`]: pairs of trinomial compositions whose
//!   difference is a multiple of `(p, q, −(p+q))`,
//! * [`moments_binomial_ratio`]: squared trinomials with a rational
//!   correction factor,
//! * [`moments_seven_multinomial`]: seven-part multinomials weighted by
//!   `3^{k₁}` under a congruence and a linear constraint.
//!
//! All arithmetic is exact.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{closed_walk_counts, ChiralVector, QuotientLattice};

/// Which computation produced a moment sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Indicator,
    BinomialRatio,
    SevenMultinomial,
    Oracle,
    TriangularSum,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Indicator,
        Method::BinomialRatio,
        Method::SevenMultinomial,
        Method::Oracle,
        Method::TriangularSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Indicator => "indicator",
            Method::BinomialRatio => "binomial_ratio",
            Method::SevenMultinomial => "seven_multinomial",
            Method::Oracle => "oracle",
            Method::TriangularSum => "triangular_sum",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == s)
    }

    /// Methods that apply to `target`, in table order.
    pub fn applicable(target: Target) -> Vec<Method> {
        match target {
            Target::Tube(_) => vec![
                Method::Indicator,
                Method::BinomialRatio,
                Method::SevenMultinomial,
                Method::Oracle,
            ],
            Target::Triangular => Method::ALL.to_vec(),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A dual nanotube or the plane triangular lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Tube(ChiralVector),
    Triangular,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Tube(c) => write!(f, "{c}"),
            Target::Triangular => f.write_str("triangular"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence {
    pub target: Target,
    /// `values[k] = μ_k`.
    pub values: Vec<BigUint>,
    pub method: Method,
}

/// Factorials `0!..=n!` as big integers.
#[derive(Debug, Clone)]
pub struct Factorials {
    table: Vec<BigUint>,
}

impl Factorials {
    pub fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        table.push(BigUint::one());
        for i in 1..=n {
            let next = &table[i - 1] * BigUint::from(i);
            table.push(next);
        }
        Self { table }
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.table[n]
    }

    /// `C(n, k)`, zero when `k > n`.
    pub fn binomial(&self, n: usize, k: usize) -> BigUint {
        if k > n {
            return BigUint::zero();
        }
        &self.table[n] / (&self.table[k] * &self.table[n - k])
    }

    /// `n! / (parts₀!·parts₁!·…)` with `n = Σ parts`.
    pub fn multinomial(&self, parts: &[usize]) -> BigUint {
        let n: usize = parts.iter().sum();
        let den = parts.iter().fold(BigUint::one(), |acc, &x| acc * &self.table[x]);
        &self.table[n] / den
    }
}

/// Visits every composition of `k` into `parts` non-negative parts in
/// lexicographic order.
fn for_each_composition(k: usize, parts: usize, mut visit: impl FnMut(&[usize])) {
    if parts == 0 {
        if k == 0 {
            visit(&[]);
        }
        return;
    }
    let mut c = vec![0usize; parts];
    c[parts - 1] = k;
    loop {
        visit(&c);
        // next composition in lexicographic order
        let Some(i) = (0..parts - 1).rev().find(|&i| c[i + 1..].iter().any(|&x| x > 0)) else {
            return;
        };
        c[i] += 1;
        let rest: usize = k - c[..=i].iter().sum::<usize>();
        for x in &mut c[i + 1..] {
            *x = 0;
        }
        c[parts - 1] = rest;
    }
}

/// `μ_k(𝒯) = Σ_{k₁+k₂+k₃=k} multinomial(k; k₁,k₂,k₃)²`.
pub fn triangular_moments(k: usize) -> BigUint {
    triangular_with(&Factorials::new(k), k)
}

fn triangular_with(f: &Factorials, k: usize) -> BigUint {
    let mut s = BigUint::zero();
    for_each_composition(k, 3, |c| {
        let m = f.multinomial(c);
        s += &m * &m;
    });
    s
}

/// Double composition sum over trinomial pairs that differ by
/// `j·(p, q, −(p+q))`, `|j| ≤ ⌊k/(p+q)⌋`.
pub fn moments_indicator_sum(chiral: ChiralVector, k: usize) -> BigUint {
    indicator_raw(chiral.p(), chiral.q(), k, &Factorials::new(k))
}

pub(crate) fn indicator_raw(p: u32, q: u32, k: usize, f: &Factorials) -> BigUint {
    let (p, q) = (p as i64, q as i64);
    let n = p + q;
    let jmax = k as i64 / n;
    let ki = k as i64;
    let mut s = BigUint::zero();
    for_each_composition(k, 3, |c| {
        let m = f.multinomial(c);
        let (a, b, d) = (c[0] as i64, c[1] as i64, c[2] as i64);
        for j in -jmax..=jmax {
            let other = [a + j * p, b + j * q, d - j * n];
            if other.iter().all(|&x| (0..=ki).contains(&x)) {
                let parts = other.map(|x| x as usize);
                s += &m * f.multinomial(&parts);
            }
        }
    });
    s
}

/// `μ_k(Λ*₍p,q₎) − μ_k(𝒯)`: the `j ≠ 0` terms of the indicator sum, i.e.
/// closed walks that wind around the tube at least once.
pub fn moment_excess(chiral: ChiralVector, k: usize) -> BigUint {
    excess_with(chiral, k, &Factorials::new(k))
}

pub(crate) fn excess_with(chiral: ChiralVector, k: usize, f: &Factorials) -> BigUint {
    let (p, q) = (chiral.p() as i64, chiral.q() as i64);
    let n = p + q;
    let jmax = k as i64 / n;
    let ki = k as i64;
    let mut s = BigUint::zero();
    for_each_composition(k, 3, |c| {
        let (a, b, d) = (c[0] as i64, c[1] as i64, c[2] as i64);
        for j in (-jmax..=jmax).filter(|&j| j != 0) {
            let other = [a + j * p, b + j * q, d - j * n];
            if other.iter().all(|&x| (0..=ki).contains(&x)) {
                s += f.multinomial(c) * f.multinomial(&other.map(|x| x as usize));
            }
        }
    });
    s
}

/// Squared trinomials times `1 + 2·Σ_l C(2k₁−lq, k₁+lp)·C(k, k₁−lq) /
/// (C(k, k₁)·C(2(k−k₁), k−k₁))`, `l = 1..⌊k₁/(p+q)⌋`, summed exactly.
pub fn moments_binomial_ratio(chiral: ChiralVector, k: usize) -> Result<BigUint> {
    binomial_ratio_raw(chiral.p(), chiral.q(), k, &Factorials::new(2 * k))
}

pub(crate) fn binomial_ratio_raw(p: u32, q: u32, k: usize, f: &Factorials) -> Result<BigUint> {
    let (p, q) = (p as usize, q as usize);
    let n = p + q;
    let big = |x: BigUint| BigInt::from(x);
    // correction factor depends on k₁ only
    let correction: Vec<BigRational> = (0..=k)
        .map(|k1| {
            let mut inner = BigRational::zero();
            let den = big(f.binomial(k, k1) * f.binomial(2 * (k - k1), k - k1));
            for l in 1..=k1 / n {
                let num = big(f.binomial(2 * k1 - l * q, k1 + l * p) * f.binomial(k, k1 - l * q));
                inner += BigRational::new(num, den.clone());
            }
            BigRational::one() + inner * BigRational::from_integer(BigInt::from(2))
        })
        .collect();
    let mut total = BigRational::zero();
    for_each_composition(k, 3, |c| {
        let m = big(f.multinomial(c));
        total += BigRational::from_integer(&m * &m) * &correction[c[0]];
    });
    if !total.is_integer() {
        return Err(Error::NonIntegralMoment {
            k,
            value: total.to_string(),
        });
    }
    Ok(total.to_integer().to_biguint().expect("moment totals are positive"))
}

/// Seven-part multinomials `3^{k₁}·multinomial(k; k₁..k₇)` restricted to
/// `p | (pk − k₂ − k₄ + k₅ + k₇)` and `p(−k₂+k₃+k₅−k₆) = q(k₂+k₄−k₅−k₇)`.
pub fn moments_seven_multinomial(chiral: ChiralVector, k: usize) -> BigUint {
    seven_raw(chiral.p(), chiral.q(), k, &Factorials::new(k))
}

pub(crate) fn seven_raw(p: u32, q: u32, k: usize, f: &Factorials) -> BigUint {
    assert!(p > 0, "the congruence needs p > 0");
    let (p, q) = (p as i64, q as i64);
    let ki = k as i64;
    let pow3: Vec<BigUint> = (0..=k).map(|e| BigUint::from(3u32).pow(e as u32)).collect();
    let mut s = BigUint::zero();
    for_each_composition(k, 7, |c| {
        let [k1, k2, k3, k4, k5, k6, k7] = [c[0], c[1], c[2], c[3], c[4], c[5], c[6]].map(|x| x as i64);
        if (p * ki - k2 - k4 + k5 + k7).rem_euclid(p) != 0 {
            return;
        }
        if p * (-k2 + k3 + k5 - k6) != q * (k2 + k4 - k5 - k7) {
            return;
        }
        s += f.multinomial(c) * &pow3[k1 as usize];
    });
    s
}

/// Chiral vector whose first `k_max + 1` moments coincide with the
/// triangular lattice: any tube with circumference above `k_max` works.
pub fn triangular_surrogate(k_max: usize) -> ChiralVector {
    let p = (k_max as u32 + 1).max(3);
    ChiralVector::new(p, 0).expect("p >= 3")
}

/// Computes `μ_0..=μ_{k_max}` with one method.
pub fn moment_sequence(target: Target, k_max: usize, method: Method) -> Result<MomentSequence> {
    let tube = match (target, method) {
        (Target::Tube(c), Method::TriangularSum) => {
            return Err(Error::MethodNotApplicable {
                method,
                target: c.to_string(),
            })
        }
        (Target::Tube(c), _) => c,
        (Target::Triangular, _) => triangular_surrogate(k_max),
    };
    let values = match method {
        Method::Oracle => {
            let lattice = match target {
                Target::Tube(c) => QuotientLattice::tube(c),
                Target::Triangular => QuotientLattice::triangular(),
            };
            closed_walk_counts(&lattice, k_max)
        }
        Method::TriangularSum => {
            let f = Factorials::new(k_max);
            (0..=k_max).map(|k| triangular_with(&f, k)).collect()
        }
        Method::Indicator => {
            let f = Factorials::new(k_max);
            (0..=k_max).map(|k| indicator_raw(tube.p(), tube.q(), k, &f)).collect()
        }
        Method::BinomialRatio => {
            let f = Factorials::new(2 * k_max);
            (0..=k_max)
                .map(|k| binomial_ratio_raw(tube.p(), tube.q(), k, &f))
                .collect::<Result<_>>()?
        }
        Method::SevenMultinomial => {
            let f = Factorials::new(k_max);
            (0..=k_max).map(|k| seven_raw(tube.p(), tube.q(), k, &f)).collect()
        }
    };
    Ok(MomentSequence { target, values, method })
}

/// Runs every requested method and checks that all of them agree.
pub fn moment_table(target: Target, k_max: usize, methods: &[Method]) -> Result<Vec<MomentSequence>> {
    let table: Vec<MomentSequence> = methods
        .iter()
        .map(|&m| moment_sequence(target, k_max, m))
        .collect::<Result<_>>()?;
    if let Some((first, rest)) = table.split_first() {
        for other in rest {
            for k in 0..=k_max {
                if first.values[k] != other.values[k] {
                    return Err(Error::MomentMismatch {
                        k,
                        method_a: first.method,
                        value_a: first.values[k].to_string(),
                        method_b: other.method,
                        value_b: other.values[k].to_string(),
                    });
                }
            }
        }
    }
    Ok(table)
}

/// CSV with columns `k,method,value`, one row per (sequence, k).
pub fn moments_csv(table: &[MomentSequence]) -> String {
    let mut out = String::from("k,method,value\n");
    for seq in table {
        for (k, v) in seq.values.iter().enumerate() {
            out.push_str(&format!("{k},{},{v}\n", seq.method));
        }
    }
    out
}

/// `Σ_k μ_k t^k / k!` for the given exact moments, in `f64`.
///
/// Terms are accumulated from the largest index down to limit rounding.
pub fn moment_series(values: &[BigUint], t: f64) -> f64 {
    let f = Factorials::new(values.len());
    let mut acc = 0.0;
    for (k, mu) in values.iter().enumerate().rev() {
        let ratio = BigRational::new(BigInt::from(mu.clone()), BigInt::from(f.get(k).clone()));
        acc += ratio.to_f64().unwrap_or(f64::INFINITY) * t.powi(k as i32);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::closed_walk_count;
    use proptest::prelude::*;

    fn cv(p: u32, q: u32) -> ChiralVector {
        ChiralVector::new(p, q).unwrap()
    }

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn compositions_are_lexicographic_and_complete() {
        let mut all = Vec::new();
        for_each_composition(3, 3, |c| all.push(c.to_vec()));
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 0, 3]);
        assert_eq!(all[9], vec![3, 0, 0]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let mut count = 0;
        for_each_composition(6, 7, |_| count += 1);
        assert_eq!(count, 924);
        let mut empty = 0;
        for_each_composition(0, 3, |c| {
            assert_eq!(c, &[0, 0, 0]);
            empty += 1
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn triangular_values() {
        let expect = [1u64, 3, 15, 93, 639, 4653, 35169];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(triangular_moments(k), n(*e));
        }
    }

    #[test]
    fn known_tube_values() {
        assert_eq!(moments_indicator_sum(cv(5, 0), 0), n(1));
        assert_eq!(moments_indicator_sum(cv(5, 0), 5), n(4655));
        assert_eq!(moments_indicator_sum(cv(5, 1), 6), n(35181));
        assert_eq!(moments_binomial_ratio(cv(5, 0), 4).unwrap(), n(639));
        assert_eq!(moments_binomial_ratio(cv(5, 0), 5).unwrap(), n(4655));
        assert_eq!(moments_seven_multinomial(cv(5, 0), 5), n(4655));
        for (p, q) in [(3, 0), (5, 1), (9, 9)] {
            assert_eq!(moments_seven_multinomial(cv(p, q), 1), n(3));
        }
    }

    #[test]
    fn excess_is_the_winding_part() {
        for (p, q) in [(5, 0), (5, 1), (3, 3)] {
            for k in 0..=12 {
                let c = cv(p, q);
                assert_eq!(moment_excess(c, k) + triangular_moments(k), moments_indicator_sum(c, k));
            }
        }
        assert_eq!(moment_excess(cv(5, 1), 6), n(12));
    }

    #[test]
    fn cross_formula_small_tubes() {
        assert_eq!(
            moments_binomial_ratio(cv(3, 2), 10).unwrap(),
            moments_indicator_sum(cv(3, 2), 10)
        );
        let oracle = closed_walk_count(&QuotientLattice::tube(cv(5, 5)), 6);
        assert_eq!(moments_seven_multinomial(cv(5, 5), 6), oracle);
    }

    #[test]
    fn thin_tubes_also_agree() {
        for (p, q) in [(3, 0), (2, 1), (4, 0), (3, 1), (2, 2)] {
            let t = moment_table(Target::Tube(cv(p, q)), 9, &Method::applicable(Target::Tube(cv(p, q)))).unwrap();
            assert_eq!(t.len(), 4);
        }
    }

    #[test]
    fn swapped_entries_give_equal_values() {
        for (p, q) in [(4u32, 1u32), (3, 2), (6, 2)] {
            let f = Factorials::new(20);
            for k in 0..=10 {
                assert_eq!(indicator_raw(p, q, k, &f), indicator_raw(q, p, k, &f));
                assert_eq!(
                    binomial_ratio_raw(p, q, k, &f).unwrap(),
                    binomial_ratio_raw(q, p, k, &f).unwrap()
                );
                assert_eq!(seven_raw(p, q, k, &f), seven_raw(q, p, k, &f));
                let a = closed_walk_count(&QuotientLattice::with_period(p as i64, q as i64).unwrap(), k);
                let b = closed_walk_count(&QuotientLattice::with_period(q as i64, p as i64).unwrap(), k);
                assert_eq!(a, b);
                assert_eq!(a, indicator_raw(p, q, k, &f));
            }
        }
    }

    #[test]
    fn tables() {
        let t = moment_table(Target::Tube(cv(5, 1)), 8, &Method::applicable(Target::Tube(cv(5, 1)))).unwrap();
        assert_eq!(t.len(), 4);
        let t = moment_table(Target::Tube(cv(5, 0)), 3, &[Method::Oracle, Method::Indicator]).unwrap();
        assert_eq!(t[0].values, vec![n(1), n(3), n(15), n(93)]);
        let t = moment_table(Target::Triangular, 2, &Method::applicable(Target::Triangular)).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t[0].values, vec![n(1), n(3), n(15)]);
        let err = moment_table(Target::Tube(cv(5, 0)), 3, &[Method::TriangularSum]).unwrap_err();
        assert!(matches!(err, Error::MethodNotApplicable { .. }));
    }

    #[test]
    fn csv_layout() {
        let t = moment_table(Target::Triangular, 1, &[Method::TriangularSum]).unwrap();
        assert_eq!(moments_csv(&t), "k,method,value\n0,triangular_sum,1\n1,triangular_sum,3\n");
    }

    #[test]
    fn method_names_roundtrip() {
        for m in Method::ALL {
            assert_eq!(Method::parse(m.name()), Some(m));
        }
        assert_eq!(Method::parse("bogus"), None);
    }

    #[test]
    fn series_of_triangular_moments() {
        let values: Vec<BigUint> = (0..40).map(triangular_moments).collect();
        assert_eq!(moment_series(&values, 0.0), 1.0);
        let h = 1e-6;
        let d = (moment_series(&values, h) - moment_series(&values, -h)) / (2.0 * h);
        assert!((d - 3.0).abs() < 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn formulas_match_oracle(s in 5u32..=10, qs in 0u32..=5, k in 0usize..=9) {
            let q = qs.min(s / 2);
            let c = cv(s - q, q);
            let oracle = closed_walk_count(&QuotientLattice::tube(c), k);
            prop_assert_eq!(moments_indicator_sum(c, k), oracle.clone());
            prop_assert_eq!(moments_binomial_ratio(c, k).unwrap(), oracle.clone());
            prop_assert_eq!(moments_seven_multinomial(c, k), oracle.clone());
            let tri = triangular_moments(k);
            if (s as usize) > k {
                prop_assert_eq!(oracle, tri);
            } else {
                prop_assert!(oracle > tri);
            }
        }
    }
}
