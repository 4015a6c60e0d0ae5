//! End-to-end verification suite.
//!
//! Ten criteria, each returning a [`CriterionReport`] with one line of detail
//! per check. The [`Suite::Full`] sizes are the reference ones; the
//! [`Suite::Quick`] suite lowers the moment order to 8 and runs the
//! convergence check on `p ∈ {5, 10, 25}` with 10⁶ draws per side.

use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::{build_armchair, build_zigzag, pdf_chiral_numeric, CdfTable, PhiFamily, PiecewiseDensity};
use crate::error::Result;
use crate::lattice::{build_finite_armchair55_dual, half_loop_matrix, normalized_trace_moments, ChiralVector};
use crate::mgf::{angular_identity_gap, mgf, mgf_gap_to_limit, mgf_limit, mgf_moment_series, verify_integral_identity};
use crate::moments::{moment_sequence, moment_table, moments_indicator_sum, triangular_moments, Method, Target};
use crate::numerics::{symmetric_eigenvalues, ExtremumKind};
use crate::sampler::{
    sample_armchair, sample_general, sample_triangular_limit, sample_zigzag, SeededStream,
};
use crate::stats::{ecdf_jump, empirical_moments, ks_against_table, ks_two_sample_sorted, sorted};

/// Base seed for every random draw in the suite.
pub const SUITE_SEED: u64 = 20_240_917;
/// Largest continuous mass in one cell of a tabulated CDF.
pub const CDF_CELL_MASS: f64 = 5e-4;
/// Draws per Monte Carlo comparison in criteria 4–7.
pub const MC_SAMPLES: usize = 1_000_000;
/// Scan resolution for extremum detection.
pub const EXTREMUM_SCAN: usize = 4096;

/// Extrema `(v*, φ_j(v*))` of `φ_j`, `j = 1..5`, for `(5,1)`.
pub const TABLE_51: [(f64, f64); 5] = [
    (0.890885, 0.843372),
    (0.930533, 0.094556),
    (0.941337, 0.467574),
    (0.991806, 3.45796),
    (0.997728, 7.23622),
];

/// `μ_k` of the triangular lattice, `k = 0..6`.
pub const TRIANGULAR_MOMENTS: [u64; 7] = [1, 3, 15, 93, 639, 4653, 35169];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "quick" => Some(Suite::Quick),
            "full" => Some(Suite::Full),
            _ => None,
        }
    }

    fn moment_order(self) -> usize {
        match self {
            Suite::Quick => 8,
            Suite::Full => 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub details: Vec<String>,
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{status} criterion {:>2} {} ({:.1} s)", self.id, self.title, self.seconds)?;
        for d in &self.details {
            write!(f, "\n    {d}")?;
        }
        Ok(())
    }
}

pub const TITLES: [&str; 10] = [
    "exact cross-formula agreement",
    "stabilization of moments",
    "triangular moments",
    "sampler moments and determinism",
    "zigzag density",
    "armchair density",
    "chiral numerical density",
    "moment generating functions",
    "convergence to the triangular lattice",
    "finite (5,5) duals",
];

/// Collects named checks.
struct Checks {
    pass: bool,
    details: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl Into<String>) {
        let msg = msg.into();
        self.pass &= ok;
        self.details.push(format!("[{}] {msg}", if ok { "ok" } else { "FAILED" }));
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.details.push(msg.into());
    }

    fn run(&mut self, body: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = body(self) {
            self.check(false, format!("error: {e}"));
        }
    }
}

fn cv(p: u32, q: u32) -> ChiralVector {
    ChiralVector::new(p, q).expect("valid chiral vector")
}

/// `(p,q)` with `5 ≤ p+q ≤ 10` and `q ≤ p`.
pub fn moment_grid() -> Vec<ChiralVector> {
    (5..=10u32)
        .flat_map(|n| (0..=n / 2).map(move |q| cv(n - q, q)))
        .collect()
}

/// Runs one criterion.
pub fn run_criterion(id: usize, suite: Suite) -> CriterionReport {
    let start = Instant::now();
    let mut c = Checks::new();
    match id {
        1 => c.run(|c| cross_formula(c, suite)),
        2 => c.run(|c| stabilization(c, suite)),
        3 => c.run(triangular),
        4 => c.run(sampler_moments),
        5 => c.run(zigzag),
        6 => c.run(armchair),
        7 => c.run(chiral),
        8 => c.run(generating_functions),
        9 => c.run(|c| convergence(c, suite)),
        10 => c.run(finite_duals),
        _ => c.check(false, format!("no criterion {id}")),
    }
    CriterionReport {
        id,
        title: TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        pass: c.pass,
        details: c.details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs criteria 1–10 in order.
pub fn run_suite(suite: Suite) -> Vec<CriterionReport> {
    (1..=10).map(|id| run_criterion(id, suite)).collect()
}

fn cross_formula(c: &mut Checks, suite: Suite) -> Result<()> {
    let k_max = suite.moment_order();
    let grid = moment_grid();
    let mut agreeing = 0;
    for &chiral in &grid {
        let target = Target::Tube(chiral);
        match moment_table(target, k_max, &Method::applicable(target)) {
            Ok(_) => agreeing += 1,
            Err(e) => c.check(false, format!("{chiral}: {e}")),
        }
    }
    c.check(
        agreeing == grid.len(),
        format!(
            "{agreeing}/{} tubes agree across indicator, binomial-ratio, seven-multinomial and oracle for k <= {k_max}",
            grid.len()
        ),
    );
    Ok(())
}

fn stabilization(c: &mut Checks, suite: Suite) -> Result<()> {
    let k_max = suite.moment_order();
    let tri: Vec<BigUint> = (0..=k_max).map(triangular_moments).collect();
    let (mut equal, mut strict, mut total_equal, mut total_strict) = (0, 0, 0, 0);
    for chiral in moment_grid() {
        let oracle = moment_sequence(Target::Tube(chiral), k_max, Method::Oracle)?;
        let n = chiral.circumference() as usize;
        for (k, (v, t)) in oracle.values.iter().zip(&tri).enumerate() {
            if n > k {
                total_equal += 1;
                equal += usize::from(v == t);
            } else {
                total_strict += 1;
                strict += usize::from(v > t);
            }
        }
    }
    c.check(
        equal == total_equal,
        format!("mu_k equals the triangular value in {equal}/{total_equal} cases with p+q > k"),
    );
    c.check(
        strict == total_strict,
        format!("mu_k exceeds the triangular value in {strict}/{total_strict} cases with p+q <= k"),
    );
    let m50 = &moment_sequence(Target::Tube(cv(5, 0)), 5, Method::Oracle)?.values[5];
    let m51 = &moment_sequence(Target::Tube(cv(5, 1)), 6, Method::Oracle)?.values[6];
    c.check(*m50 == BigUint::from(4655u32), format!("mu_5(5,0) = {m50} (triangular 4653)"));
    c.check(*m51 == BigUint::from(35181u32), format!("mu_6(5,1) = {m51} (triangular 35169)"));
    Ok(())
}

fn triangular(c: &mut Checks) -> Result<()> {
    let want: Vec<BigUint> = TRIANGULAR_MOMENTS.iter().map(|&v| BigUint::from(v)).collect();
    for method in Method::applicable(Target::Triangular) {
        let seq = moment_sequence(Target::Triangular, 6, method)?;
        c.check(seq.values == want, format!("{method}: {:?}", seq.values.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
    }
    Ok(())
}

fn moment_z_scores(c: &mut Checks, label: &str, chiral: ChiralVector, samples: &[f64]) {
    let est = empirical_moments(samples, 6);
    let worst = est
        .iter()
        .filter(|e| e.k >= 1)
        .map(|e| e.z_score(moments_indicator_sum(chiral, e.k).to_f64().unwrap_or(f64::NAN)).abs())
        .fold(0.0, f64::max);
    let in_range = samples.iter().all(|x| (0.0..=9.0).contains(x));
    c.check(worst <= 4.0 && in_range, format!("{label}: max |z| over k <= 6 is {worst:.2}, all samples in [0,9]: {in_range}"));
}

fn sampler_moments(c: &mut Checks) -> Result<()> {
    for (i, chiral) in [cv(5, 0), cv(5, 1), cv(5, 5)].into_iter().enumerate() {
        let draw = || sample_general(chiral, &mut SeededStream::substream(SUITE_SEED, 40 + i as u64), MC_SAMPLES);
        let a = draw();
        moment_z_scores(c, &format!("{chiral} general"), chiral, &a);
        let b = draw();
        let same = a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits());
        c.check(same, format!("{chiral}: repeated draw with the same seed is bit-identical"));
    }
    let z = sample_zigzag(5, &mut SeededStream::substream(SUITE_SEED, 43), MC_SAMPLES)?;
    moment_z_scores(c, "(5,0) zigzag", cv(5, 0), &z);
    let a = sample_armchair(5, &mut SeededStream::substream(SUITE_SEED, 44), MC_SAMPLES)?;
    moment_z_scores(c, "(5,5) armchair", cv(5, 5), &a);
    Ok(())
}

/// Sup distance between samples and a density, including the largest
/// possible excursion inside one table cell.
fn ks_bound(d: &PiecewiseDensity, samples: &[f64]) -> Result<f64> {
    let table = CdfTable::build(d, CDF_CELL_MASS)?;
    Ok(ks_against_table(&sorted(samples), &table.points) + CDF_CELL_MASS)
}

fn mass_check(c: &mut Checks, label: &str, d: &PiecewiseDensity, tol: f64) {
    let m = d.total_mass_check;
    c.check((m - 1.0).abs() <= tol, format!("{label}: total mass {m:.12} (tolerance {tol:e})"));
}

fn zigzag(c: &mut Checks) -> Result<()> {
    let d = build_zigzag(5)?;
    let mut got = d.intervals();
    got.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let want = [(0.146, 2.618), (0.146, 2.618), (0.382, 6.854), (0.382, 6.854), (1.0, 9.0)];
    let ok = got.len() == 5 && got.iter().zip(want).all(|(g, w)| (g.0 - w.0).abs() <= 1e-3 && (g.1 - w.1).abs() <= 1e-3);
    let shown: Vec<String> = got.iter().map(|(a, b)| format!("({a:.3},{b:.3})")).collect();
    c.check(ok, format!("p=5 intervals {}", shown.join(" ")));
    mass_check(c, "p=5", &d, 1e-6);
    let s = sample_zigzag(5, &mut SeededStream::substream(SUITE_SEED, 50), MC_SAMPLES)?;
    let ks = ks_bound(&d, &s)?;
    c.check(ks <= 0.01, format!("p=5 sup-CDF distance to sampling <= {ks:.5}"));

    let d6 = build_zigzag(6)?;
    mass_check(c, "p=6", &d6, 1e-6);
    let atom_ok = d6.atoms.len() == 1 && d6.atoms[0].location == 1.0 && d6.atoms[0].mass == num_rational::Rational64::new(1, 6);
    c.check(atom_ok, format!("p=6 atoms {:?}", d6.atoms.iter().map(|a| (a.location, a.mass.to_string())).collect::<Vec<_>>()));
    let s6 = sorted(&sample_zigzag(6, &mut SeededStream::substream(SUITE_SEED, 51), MC_SAMPLES)?);
    let jump = ecdf_jump(&s6, 1.0, 1e-9);
    c.check((jump - 1.0 / 6.0).abs() <= 0.002, format!("p=6 empirical CDF jump at 1 is {jump:.5}"));
    let model_jump = d6.cdf(1.0)? - d6.cdf(1.0 - 1e-9)?;
    c.check((model_jump - 1.0 / 6.0).abs() <= 1e-6, format!("p=6 density CDF jump at 1 is {model_jump:.8}"));
    Ok(())
}

fn armchair(c: &mut Checks) -> Result<()> {
    let d = build_armchair(5)?;
    let r5 = 5f64.sqrt();
    let mut want = vec![
        (0.0, 9.0),
        (0.0, 1.0),
        ((5.0 - r5) / 8.0, 6.0 + r5),
        ((5.0 + r5) / 8.0, 4.0 + r5),
        ((5.0 + r5) / 8.0, 6.0 - r5),
        ((5.0 - r5) / 8.0, 4.0 - r5),
    ];
    let mut got = d.intervals();
    let key = |a: &(f64, f64), b: &(f64, f64)| {
        let round = |x: f64| (x * 1e6).round();
        round(a.0).total_cmp(&round(b.0)).then(a.1.total_cmp(&b.1))
    };
    got.sort_by(key);
    want.sort_by(key);
    let worst = got.iter().zip(&want).map(|(g, w)| (g.0 - w.0).abs().max((g.1 - w.1).abs())).fold(0.0, f64::max);
    c.check(got.len() == 6 && worst <= 1e-9, format!("p=5 six supports, worst endpoint error {worst:.1e}"));
    mass_check(c, "p=5", &d, 1e-6);
    let s = sample_armchair(5, &mut SeededStream::substream(SUITE_SEED, 60), MC_SAMPLES)?;
    let ks = ks_bound(&d, &s)?;
    c.check(ks <= 0.01, format!("p=5 sup-CDF distance to sampling <= {ks:.5}"));
    Ok(())
}

/// `φ_j` for `(5,1)` as a polynomial in `v` and `√(1−v²)`.
pub fn phi51_polynomial(c: f64, d: f64, v: f64) -> f64 {
    let s = (1.0 - v * v).sqrt();
    64.0 * v.powi(6) + 32.0 * c * v.powi(5) - 32.0 * (3.0 + d * s) * v.powi(4) - 40.0 * c * v.powi(3)
        + 12.0 * (2.0 * d * s + 3.0) * v * v
        + 12.0 * c * v
        + 1.0
}

fn chiral(c: &mut Checks) -> Result<()> {
    let chiral = cv(5, 1);
    let fam = PhiFamily::new(chiral);
    let e0 = fam.extrema(0, EXTREMUM_SCAN)?;
    c.check(e0.is_empty(), format!("phi_0 has {} interior extrema", e0.len()));
    for (j, &(x, y)) in TABLE_51.iter().enumerate() {
        let e = fam.extrema(j + 1, EXTREMUM_SCAN)?;
        let ok = e.len() == 1 && (e[0].x - x).abs() <= 1e-4 && (e[0].value - y).abs() <= 1e-4;
        let shown: Vec<String> = e
            .iter()
            .map(|e| format!("({:.6}, {:.6}, {})", e.x, e.value, if e.kind == ExtremumKind::Min { "min" } else { "max" }))
            .collect();
        c.check(ok, format!("phi_{} extrema {} vs ({x}, {y})", j + 1, shown.join(" ")));
    }
    let (lo, hi) = fam.domain();
    let mut worst = 0.0f64;
    for j in 0..fam.len() {
        let (cj, dj) = fam.coefficients(j);
        for i in 0..=1000 {
            let v = lo + (hi - lo) * i as f64 / 1000.0;
            worst = worst.max((fam.eval(j, v) - phi51_polynomial(cj, dj, v)).abs());
        }
    }
    c.check(worst <= 1e-10, format!("Chebyshev form vs degree-six polynomial: max gap {worst:.1e}"));
    let d = pdf_chiral_numeric(chiral, EXTREMUM_SCAN)?;
    mass_check(c, "(5,1)", &d, 1e-3);
    let s = sample_general(chiral, &mut SeededStream::substream(SUITE_SEED, 70), MC_SAMPLES);
    let ks = ks_bound(&d, &s)?;
    c.check(ks <= 0.01, format!("(5,1) sup-CDF distance to sampling <= {ks:.5}"));
    Ok(())
}

fn generating_functions(c: &mut Checks) -> Result<()> {
    for chiral in [cv(5, 0), cv(5, 1), cv(5, 5)] {
        let m0 = mgf(chiral, 0.0)?.value;
        c.check((m0 - 1.0).abs() <= 1e-12, format!("{chiral}: m(0) = {m0:.15}"));
        let mut worst = 0.0f64;
        for t in [-0.3, -0.1, 0.1, 0.3] {
            let quad = mgf(chiral, t)?.value;
            let series = mgf_moment_series(Target::Tube(chiral), t, 1e-18)?;
            worst = worst.max((quad - series).abs());
        }
        c.check(worst <= 1e-8, format!("{chiral}: quadrature vs moment series at t = ±0.1, ±0.3, max gap {worst:.1e}"));
    }
    for t in [-0.5, 0.0, 0.1, 0.5] {
        let r = verify_integral_identity(t)?;
        c.check(r.gap <= 1e-6, format!("Bessel integral identity at t = {t}: lhs {:.12}, rhs {:.12}, gap {:.1e}", r.lhs, r.rhs, r.gap));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a: f64 = rng.gen_range(-3.0..3.0);
        let b: f64 = rng.gen_range(-3.0..3.0);
        worst = worst.max(angular_identity_gap(a, b)?);
    }
    c.check(worst <= 1e-9, format!("angular average of exp equals I0 on 20 random pairs, max gap {worst:.1e}"));
    Ok(())
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn convergence(c: &mut Checks, suite: Suite) -> Result<()> {
    let (ps, n): (&[u32], usize) = match suite {
        Suite::Quick => (&[5, 10, 25], 1_000_000),
        Suite::Full => (&[5, 10, 25, 50], 8_000_000),
    };
    let limit = sorted(&sample_triangular_limit(0.5, &mut SeededStream::substream(SUITE_SEED, 90), n)?);
    let mut ks = Vec::new();
    for (i, &p) in ps.iter().enumerate() {
        let s = sorted(&sample_general(cv(p, p), &mut SeededStream::substream(SUITE_SEED, 91 + i as u64), n));
        ks.push(ks_two_sample_sorted(&s, &limit));
    }
    let shown: Vec<String> = ps.iter().zip(&ks).map(|(p, d)| format!("p={p}: {d:.5}")).collect();
    c.check(
        strictly_decreasing(&ks),
        format!("two-sample sup-CDF distance to the limit ({n} draws each): {}", shown.join(", ")),
    );
    let t = 0.5;
    let gaps: Vec<f64> = ps.iter().map(|&p| mgf_gap_to_limit(cv(p, p), t)).collect();
    let shown: Vec<String> = ps.iter().zip(&gaps).map(|(p, g)| format!("p={p}: {g:.3e}")).collect();
    c.check(
        strictly_decreasing(&gaps) && gaps.iter().all(|g| *g > 0.0),
        format!("mgf gap to the limit at t = 0.5: {}", shown.join(", ")),
    );
    let limit_m = mgf_limit(t)?.value;
    let quad5 = mgf(cv(5, 5), t)?.value - limit_m;
    c.check(
        ((quad5 - gaps[0]) / gaps[0]).abs() <= 1e-4,
        format!("p=5 gap by quadrature {quad5:.6e} agrees with the excess series"),
    );
    Ok(())
}

fn finite_duals(c: &mut Checks) -> Result<()> {
    let exact: Vec<f64> = (0..=6)
        .map(|k| moments_indicator_sum(cv(5, 5), k).to_f64().unwrap_or(f64::NAN))
        .collect();
    let mut errors: Vec<Vec<f64>> = Vec::new();
    for r in [0usize, 5, 10, 20] {
        let g = build_finite_armchair55_dual(r);
        let (v, e) = (g.vertex_count(), g.edge_count());
        let hist = g.degree_histogram();
        let five = hist.iter().find(|h| h.0 == 5).map(|h| h.1).unwrap_or(0);
        let ok = v == 32 + 10 * r && e == 90 + 30 * r && five == 12 && e == 3 * v - 6;
        c.check(ok, format!("r={r}: {v} vertices, {e} edges, {five} of degree 5, degree histogram {hist:?}"));
        let m = half_loop_matrix(&g);
        let traces = normalized_trace_moments(&m, 6);
        let traces_f: Vec<f64> = traces.iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect();
        errors.push((1..=6).map(|k| ((traces_f[k] - exact[k]) / exact[k]).abs()).collect());
        let spec = symmetric_eigenvalues(&m.to_f64())?;
        let worst = (1..=6u32)
            .map(|k| ((spec.power_sum(k) / v as f64 - traces_f[k as usize]) / traces_f[k as usize]).abs())
            .fold(0.0, f64::max);
        c.check(worst <= 1e-8, format!("r={r}: eigenvalue power sums reproduce exact traces, max relative gap {worst:.1e}"));
    }
    for k in 0..6 {
        let col: Vec<f64> = errors.iter().map(|e| e[k]).collect();
        let shown: Vec<String> = col.iter().map(|x| format!("{x:.3e}")).collect();
        c.check(
            strictly_decreasing(&col),
            format!("k={}: relative error to mu_k(5,5) over r = 0,5,10,20: {}", k + 1, shown.join(", ")),
        );
    }
    c.note(format!("mu_k(5,5), k = 1..6: {:?}", &exact[1..]));
    Ok(())
}
