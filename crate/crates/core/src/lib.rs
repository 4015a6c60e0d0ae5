//! Spectral distributions of dual infinite `(p,q)`-nanotubes.
//!
//! The random eigenvalue of a dual nanotube is the random variable whose
//! `k`-th moment is the average number of closed `k`-step walks per vertex of
//! the triangular lattice rolled up along the chiral vector `(p,q)`, with a
//! loop of weight 3 at every vertex. This crate provides
//!
//! * [`lattice`]: chiral vectors, the quotient lattice and an exact closed-walk
//!   counting oracle, plus finite `(5,5)` dual nanotubes,
//! * [`moments`]: three independent closed-form moment formulas in exact
//!   big-integer arithmetic,
//! * [`sampler`]: seeded samplers for the random eigenvalue and its
//!   large-circumference limit,
//! * [`density`]: probability densities (zigzag, armchair, chiral, triangular),
//! * [`mgf`]: moment generating functions and the Bessel integral identity,
//! * [`numerics`]: quadrature, extremum search, a symmetric eigensolver and
//!   Chebyshev polynomials,
//! * [`verify`]: the end-to-end verification suite shared by the CLI and the
//!   acceptance tests.

pub mod density;
pub mod error;
pub mod lattice;
pub mod mgf;
pub mod moments;
pub mod numerics;
pub mod sampler;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{ChiralVector, NanotubeClass};
