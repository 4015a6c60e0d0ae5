//! Seeded samplers for the random eigenvalue `Λ*₍p,q₎` and its limit `𝒳_c`.
//!
//! All samplers draw `U` uniformly from the half-open interval `(0, π]`
//! (respectively `(0, 2π]`) and clamp the realised value into `[0, 9]` to
//! absorb rounding just outside the support.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::ChiralVector;

/// A reproducible random stream.
///
/// Two streams built from the same `(seed, substream)` produce bit-identical
/// output. Distinct substreams of one seed are independent ChaCha8 streams.
#[derive(Debug, Clone)]
pub struct SeededStream {
    seed: u64,
    substream: u64,
    counter: u64,
    rng: ChaCha8Rng,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self {
            seed,
            substream: index,
            counter: 0,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn substream_index(&self) -> u64 {
        self.substream
    }

    /// Number of primitive draws taken so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Uniform on `(0, scale]`.
    pub fn uniform(&mut self, scale: f64) -> f64 {
        self.counter += 1;
        scale * (1.0 - self.rng.gen::<f64>())
    }

    /// Uniform on `{0, …, n−1}`.
    pub fn index(&mut self, n: u32) -> u32 {
        self.counter += 1;
        self.rng.gen_range(0..n)
    }
}

fn clamp_support(x: f64) -> f64 {
    x.clamp(0.0, 9.0)
}

/// `3 + 2(cos u + cos((p u + 2π j)/n) + cos((q u − 2π j)/n))`, `n = p + q`.
pub fn eigenvalue_map(p: u32, q: u32, u: f64, j: u32) -> f64 {
    let n = (p + q) as f64;
    let phase = 2.0 * PI * j as f64;
    clamp_support(
        3.0 + 2.0 * (u.cos() + ((p as f64 * u + phase) / n).cos() + ((q as f64 * u - phase) / n).cos()),
    )
}

/// Zigzag form: `4(1+cos φ)v² − 4 sin φ·v·√(1−v²) + 1` with `φ = 2πj/p`.
pub fn zigzag_map(p: u32, j: u32, v: f64) -> f64 {
    let phi = 2.0 * PI * j as f64 / p as f64;
    let s = (1.0 - v * v).max(0.0).sqrt();
    clamp_support(4.0 * (1.0 + phi.cos()) * v * v - 4.0 * phi.sin() * v * s + 1.0)
}

/// Armchair form: `4v² + 4 cos(πj/p)·v + 1`.
pub fn armchair_map(p: u32, j: u32, v: f64) -> f64 {
    let a = (PI * j as f64 / p as f64).cos();
    clamp_support(4.0 * v * v + 4.0 * a * v + 1.0)
}

/// `3 + 2(cos u + cos((1−c)u + v) + cos(cu − v))`.
pub fn triangular_limit_map(c: f64, u: f64, v: f64) -> f64 {
    clamp_support(3.0 + 2.0 * (u.cos() + ((1.0 - c) * u + v).cos() + (c * u - v).cos()))
}

/// `n` draws of `Λ*₍p,q₎` from the two-uniform representation.
pub fn sample_general(chiral: ChiralVector, stream: &mut SeededStream, n: usize) -> Vec<f64> {
    let (p, q) = (chiral.p(), chiral.q());
    let m = chiral.circumference();
    (0..n)
        .map(|_| {
            let u = stream.uniform(PI);
            let j = stream.index(m);
            eigenvalue_map(p, q, u, j)
        })
        .collect()
}

/// `n` draws of `Λ*₍p,0₎` through `V = cos(U/2)`.
pub fn sample_zigzag(p: u32, stream: &mut SeededStream, n: usize) -> Result<Vec<f64>> {
    if p < 3 {
        return Err(Error::Domain(format!("zigzag sampler needs p >= 3, got {p}")));
    }
    Ok((0..n)
        .map(|_| {
            let v = (stream.uniform(PI) / 2.0).cos();
            let j = stream.index(p);
            zigzag_map(p, j, v)
        })
        .collect())
}

/// `n` draws of `Λ*₍p,p₎` with `J` uniform on `{0, …, 2p−1}`.
pub fn sample_armchair(p: u32, stream: &mut SeededStream, n: usize) -> Result<Vec<f64>> {
    if p < 2 {
        return Err(Error::Domain(format!("armchair sampler needs p >= 2, got {p}")));
    }
    Ok((0..n)
        .map(|_| {
            let v = (stream.uniform(PI) / 2.0).cos();
            let j = stream.index(2 * p);
            armchair_map(p, j, v)
        })
        .collect())
}

/// `n` draws of the large-circumference limit `𝒳_c`.
pub fn sample_triangular_limit(c: f64, stream: &mut SeededStream, n: usize) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::Domain(format!("limit parameter c must lie in [0,1], got {c}")));
    }
    Ok((0..n)
        .map(|_| {
            let u = stream.uniform(2.0 * PI);
            let v = stream.uniform(2.0 * PI);
            triangular_limit_map(c, u, v)
        })
        .collect())
}

/// Single-column CSV with header `lambda`.
pub fn samples_csv(samples: &[f64]) -> String {
    let mut out = String::with_capacity(samples.len() * 20 + 8);
    out.push_str("lambda\n");
    for x in samples {
        out.push_str(&format!("{x}\n"));
    }
    out
}
