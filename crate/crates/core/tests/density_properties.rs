use std::f64::consts::PI;

use nanotube_spectra::density::{
    build_armchair, build_zigzag, cdf, pdf_chiral_numeric, pdf_triangular, pdf_triangular_mixture, CdfTable,
    PiecewiseDensity, TriangularDensity,
};
use nanotube_spectra::moments::moments_indicator_sum;
use nanotube_spectra::numerics::{integrate_with, EndpointFlags, QuadratureOptions};
use nanotube_spectra::sampler::{sample_triangular_limit, sample_zigzag, SeededStream};
use nanotube_spectra::stats::{ecdf, kde, sorted};
use nanotube_spectra::ChiralVector;
use num_traits::ToPrimitive;

fn cv(p: u32, q: u32) -> ChiralVector {
    ChiralVector::new(p, q).unwrap()
}

fn check_valid(label: &str, d: &PiecewiseDensity) {
    assert!((d.total_mass_check - 1.0).abs() <= 1e-6, "{label}: mass {}", d.total_mass_check);
    for piece in &d.pieces {
        assert!(piece.lo >= 0.0 && piece.hi <= 9.0, "{label}: {piece:?}");
        for i in 1..100 {
            let x = piece.lo + (piece.hi - piece.lo) * i as f64 / 100.0;
            let v = piece.pdf(x);
            assert!(v.is_finite() && v >= 0.0, "{label}: pdf({x}) = {v}");
        }
    }
    assert!(cdf(d, 0.0).unwrap().abs() < 1e-15 || d.atoms.iter().any(|a| a.location == 0.0));
    assert!((cdf(d, 9.0).unwrap() - 1.0).abs() <= 1e-6, "{label}");
    let xs: Vec<f64> = (0..=90).map(|i| i as f64 / 10.0).collect();
    let grid = d.cdf_on_grid(&xs).unwrap();
    assert!(grid.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{label}: cdf not monotone");
}

#[test]
fn every_built_density_is_normalized() {
    for p in 3..=12 {
        check_valid(&format!("zigzag {p}"), &build_zigzag(p).unwrap());
    }
    for p in 2..=10 {
        check_valid(&format!("armchair {p}"), &build_armchair(p).unwrap());
    }
    for (p, q) in [(5, 1), (4, 1), (3, 2), (7, 2), (6, 5), (9, 4)] {
        check_valid(&format!("chiral ({p},{q})"), &pdf_chiral_numeric(cv(p, q), 1024).unwrap());
    }
}

#[test]
fn density_moments_match_exact_moments() {
    let cases = [
        (cv(5, 0), build_zigzag(5).unwrap()),
        (cv(5, 5), build_armchair(5).unwrap()),
        (cv(5, 1), pdf_chiral_numeric(cv(5, 1), 4096).unwrap()),
    ];
    for (chiral, d) in cases {
        for k in 0..=4u32 {
            let exact = moments_indicator_sum(chiral, k as usize).to_f64().unwrap();
            let got = d.moment(k).unwrap();
            assert!(((got - exact) / exact).abs() <= 1e-3, "{chiral} k={k}: {got} vs {exact}");
        }
    }
}

#[test]
fn zigzag_six_atom_against_sampling() {
    let d = build_zigzag(6).unwrap();
    let jump = cdf(&d, 1.0).unwrap() - cdf(&d, 1.0 - 1e-9).unwrap();
    assert!((jump - 1.0 / 6.0).abs() < 1e-6);
    let s = sorted(&sample_zigzag(6, &mut SeededStream::new(11), 200_000).unwrap());
    for x in [0.5, 0.999, 1.0, 2.0, 4.0, 8.0] {
        assert!((ecdf(&s, x) - cdf(&d, x).unwrap()).abs() < 0.01, "x={x}");
    }
}

#[test]
fn cdf_table_cells_are_fine() {
    let d = build_armchair(4).unwrap();
    let t = CdfTable::build(&d, 5e-4).unwrap();
    assert!((t.total() - 1.0).abs() < 1e-6);
    for w in t.points.windows(2) {
        assert!(w[1].1 - w[0].2 <= 5e-4 + 1e-12);
        assert!(w[0].0 < w[1].0);
    }
}

fn triangular_integral(kernel: &TriangularDensity, power: i32) -> f64 {
    let opts = QuadratureOptions {
        abs_tol: 1e-6,
        ..QuadratureOptions::default()
    };
    [(0.0, 1.0), (1.0, 9.0)]
        .iter()
        .map(|&(a, b)| {
            integrate_with(
                |x: f64| kernel.estimate(x).map(|r| r.value * x.powi(power)).unwrap_or(0.0),
                a,
                b,
                EndpointFlags::BOTH,
                &opts,
            )
            .unwrap()
            .value
        })
        .sum()
}

#[test]
fn triangular_density_normalization_and_mean() {
    let kernel = TriangularDensity::new(200.0 * PI, 32).unwrap();
    let mass = triangular_integral(&kernel, 0);
    let mean = triangular_integral(&kernel, 1);
    assert!((mass - 1.0).abs() <= 1e-3, "mass {mass}");
    assert!((mean - 3.0).abs() <= 1e-2, "mean {mean}");
}

#[test]
fn triangular_density_matches_kde_of_limit_samples() {
    let s = sorted(&sample_triangular_limit(0.5, &mut SeededStream::new(2024), 1_000_000).unwrap());
    let kernel = TriangularDensity::new(200.0 * PI, 32).unwrap();
    let mut worst = 0.0f64;
    for i in 0..=60 {
        let x = 0.15 + i as f64 * (8.7 - 0.15) / 60.0;
        if (x - 1.0).abs() < 0.15 {
            continue;
        }
        let f = kernel.eval(x).unwrap().value;
        worst = worst.max((f - kde(&s, x, 0.02)).abs());
        assert!((f - pdf_triangular_mixture(x).unwrap()).abs() < 1e-3, "x={x}");
    }
    assert!(worst <= 0.02, "max deviation {worst}");
    assert!(pdf_triangular(4.0, 200.0 * PI, 32).is_ok());
}
