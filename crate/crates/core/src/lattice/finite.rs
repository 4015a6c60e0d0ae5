//! Finite dual `(5,5)`-nanotubes and exact trace moments of their half-loop
//! matrices.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::numerics::DenseMatrix;

/// A finite triangulation of the sphere with per-vertex loop weights
/// `deg(v)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDualGraph {
    neighbors: Vec<Vec<usize>>,
    loop_weights: Vec<Rational64>,
}

impl FiniteDualGraph {
    fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut sets = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            assert_ne!(u, v, "self-loop in edge list");
            sets[u].insert(v);
            sets[v].insert(u);
        }
        let neighbors: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let loop_weights = neighbors
            .iter()
            .map(|nb| Rational64::new(nb.len() as i64, 2))
            .collect();
        Self {
            neighbors,
            loop_weights,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn loop_weights(&self) -> &[Rational64] {
        &self.loop_weights
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Number of vertices of each degree, as `(degree, count)` sorted by degree.
    pub fn degree_histogram(&self) -> Vec<(usize, usize)> {
        let mut h = std::collections::BTreeMap::new();
        for nb in &self.neighbors {
            *h.entry(nb.len()).or_insert(0usize) += 1;
        }
        h.into_iter().collect()
    }

    /// 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0u8; n]; n];
        for (u, v) in self.edges() {
            m[u][v] = 1;
            m[v][u] = 1;
        }
        m
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    /// True if the graph is a triangulated closed surface of Euler
    /// characteristic 2: the link of every vertex is a single cycle and
    /// `V − E + F = 2`.
    pub fn is_sphere_triangulation(&self) -> bool {
        for (v, nb) in self.neighbors.iter().enumerate() {
            if nb.len() < 3 {
                return false;
            }
            // every neighbour must see exactly two others inside the link
            for &u in nb {
                let inside = nb.iter().filter(|&&w| w != u && self.adjacent(u, w)).count();
                if inside != 2 {
                    return false;
                }
            }
            // and the link must be one cycle, not several
            let mut prev = usize::MAX;
            let mut cur = nb[0];
            let mut steps = 0;
            loop {
                let next = nb
                    .iter()
                    .copied()
                    .find(|&w| w != cur && w != prev && self.adjacent(cur, w))
                    .expect("link vertex with two link neighbours");
                prev = cur;
                cur = next;
                steps += 1;
                if cur == nb[0] || steps > nb.len() {
                    break;
                }
            }
            if steps != nb.len() {
                return false;
            }
            let _ = v;
        }
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let triangles = self.triangle_count() as i64;
        v - e + triangles == 2
    }

    pub fn triangle_count(&self) -> usize {
        let mut t = 0;
        for (u, v) in self.edges() {
            t += self.neighbors[v]
                .iter()
                .filter(|&&w| w > v && self.adjacent(u, w))
                .count();
        }
        t
    }

    /// Edge-list text: a header `n m`, one `u v` line per edge, then `loops:`
    /// followed by one `v numerator/denominator` line per vertex.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.vertex_count(), self.edge_count()).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out.push_str("loops:\n");
        for (v, w) in self.loop_weights.iter().enumerate() {
            writeln!(out, "{v} {}/{}", w.numer(), w.denom()).unwrap();
        }
        out
    }

    /// Parses the format written by [`to_edge_list`](Self::to_edge_list).
    pub fn from_edge_list(text: &str) -> Option<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let mut header = lines.next()?.split_whitespace();
        let n: usize = header.next()?.parse().ok()?;
        let m: usize = header.next()?.parse().ok()?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let mut it = lines.next()?.split_whitespace();
            let u: usize = it.next()?.parse().ok()?;
            let v: usize = it.next()?.parse().ok()?;
            if u >= n || v >= n {
                return None;
            }
            edges.push((u, v));
        }
        if lines.next()?.trim() != "loops:" {
            return None;
        }
        let mut g = Self::from_edges(n, &edges);
        for _ in 0..n {
            let mut it = lines.next()?.split_whitespace();
            let v: usize = it.next()?.parse().ok()?;
            let (num, den) = it.next()?.split_once('/')?;
            g.loop_weights[v] = Rational64::new(num.parse().ok()?, den.parse().ok()?);
        }
        Some(g)
    }
}

/// Dual of the finite `(5,5)`-nanotube with `rings` hexagonal belts between
/// two caps; `rings = 0` is the dual of the Buckminster fullerene.
///
/// Layout along the tube axis: apex, a ring of 5, the 10-vertex cap boundary,
/// `rings` tube rings of 10, the second cap boundary, a ring of 5 and the
/// second apex. Consecutive 10-rings `L`, `U` are glued by the armchair strip
/// `L[2i]–U[2i]`, `L[2i+1]–U[2i], U[2i+1], U[2i+2]`.
pub fn build_finite_armchair55_dual(rings: usize) -> FiniteDualGraph {
    let n = 32 + 10 * rings;
    let north = 0;
    let upper5 = |i: usize| 1 + i % 5;
    let ring10 = |r: usize, i: usize| 6 + 10 * r + i % 10;
    // 10-rings: 0 is the north cap boundary, 1..=rings the belts, rings+1 the
    // south cap boundary
    let south_boundary = rings + 1;
    let lower5 = |i: usize| 6 + 10 * (rings + 2) + i % 5;
    let south = n - 1;

    let mut edges = Vec::with_capacity(90 + 30 * rings);
    for i in 0..5 {
        edges.push((north, upper5(i)));
        edges.push((upper5(i), upper5(i + 1)));
        for d in 0..3 {
            edges.push((upper5(i), ring10(0, 2 * i + d)));
        }
    }
    for r in 0..=south_boundary {
        for i in 0..10 {
            edges.push((ring10(r, i), ring10(r, i + 1)));
        }
    }
    for r in 0..south_boundary {
        for i in 0..5 {
            edges.push((ring10(r, 2 * i), ring10(r + 1, 2 * i)));
            for d in 0..3 {
                edges.push((ring10(r, 2 * i + 1), ring10(r + 1, 2 * i + d)));
            }
        }
    }
    for i in 0..5 {
        edges.push((south, lower5(i)));
        edges.push((lower5(i), lower5(i + 1)));
        for d in 1..4 {
            edges.push((lower5(i), ring10(south_boundary, 2 * i + d)));
        }
    }
    FiniteDualGraph::from_edges(n, &edges)
}

/// Square matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rational64>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![Rational64::zero(); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Rational64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> Rational64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn to_f64(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let r = self.get(i, j);
                m[(i, j)] = *r.numer() as f64 / *r.denom() as f64;
            }
        }
        m
    }
}

/// `A* + ½·D*`: adjacency plus half the degree on the diagonal.
pub fn half_loop_matrix(g: &FiniteDualGraph) -> RationalMatrix {
    let n = g.vertex_count();
    let mut m = RationalMatrix::zeros(n);
    for (u, v) in g.edges() {
        m.set(u, v, Rational64::one());
        m.set(v, u, Rational64::one());
    }
    for (v, w) in g.loop_weights().iter().enumerate() {
        m.set(v, v, *w);
    }
    m
}

/// Exact `tr(Mᵏ)/n` for `k = 0..=k_max`.
pub fn normalized_trace_moments(m: &RationalMatrix, k_max: usize) -> Vec<BigRational> {
    let n = m.dim();
    if n == 0 {
        return vec![BigRational::zero(); k_max + 1];
    }
    let denom = m
        .entries
        .iter()
        .fold(1i64, |acc, r| acc.lcm(r.denom()));
    // sparse integer matrix denom·M
    let rows: Vec<Vec<(usize, BigInt)>> = (0..n)
        .map(|i| {
            (0..n)
                .filter_map(|j| {
                    let r = m.get(i, j);
                    (!r.is_zero()).then(|| (j, BigInt::from(r.numer() * (denom / r.denom()))))
                })
                .collect()
        })
        .collect();

    let mut traces = vec![BigInt::zero(); k_max + 1];
    for v in 0..n {
        let mut x = vec![BigInt::zero(); n];
        x[v] = BigInt::one();
        traces[0] += 1;
        for trace in traces.iter_mut().skip(1) {
            let y: Vec<BigInt> = rows
                .iter()
                .map(|row| row.iter().map(|(j, a)| a * &x[*j]).sum())
                .collect();
            *trace += &y[v];
            x = y;
        }
    }
    let n_big = BigInt::from(n);
    let d_big = BigInt::from(denom);
    let mut scale = n_big.clone();
    traces
        .into_iter()
        .map(|t| {
            let r = BigRational::new(t, scale.clone());
            scale *= &d_big;
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_invariants(g: &FiniteDualGraph, rings: usize) {
        assert_eq!(g.vertex_count(), 32 + 10 * rings);
        assert_eq!(g.edge_count(), 90 + 30 * rings);
        assert_eq!(g.edge_count(), 3 * g.vertex_count() - 6);
        assert_eq!(g.degree_histogram(), vec![(5, 12), (6, 20 + 10 * rings)]);
        assert!(g.is_connected());
        assert!(g.is_sphere_triangulation());
    }

    #[test]
    fn buckyball_dual() {
        let g = build_finite_armchair55_dual(0);
        check_invariants(&g, 0);
        // pentakis dodecahedron: pentagons only touch hexagons, every hexagon
        // touches three pentagons
        for v in 0..g.vertex_count() {
            let pent = g.neighbors(v).iter().filter(|&&u| g.degree(u) == 5).count();
            if g.degree(v) == 5 {
                assert_eq!(pent, 0);
            } else {
                assert_eq!(pent, 3);
            }
        }
        assert_eq!(g.triangle_count(), 60);
    }

    #[test]
    fn invariants_for_several_ring_counts() {
        for r in [1, 2, 3, 5, 10] {
            check_invariants(&build_finite_armchair55_dual(r), r);
        }
        let g = build_finite_armchair55_dual(3);
        assert_eq!((g.vertex_count(), g.edge_count()), (62, 180));
    }

    #[test]
    fn half_loop_matrix_diagonal() {
        let g = build_finite_armchair55_dual(0);
        let m = half_loop_matrix(&g);
        assert!(m.is_symmetric());
        let diag: Vec<_> = (0..32).map(|i| m.get(i, i)).collect();
        assert_eq!(diag.iter().filter(|&&d| d == Rational64::new(5, 2)).count(), 12);
        assert_eq!(diag.iter().filter(|&&d| d == Rational64::from(3)).count(), 20);
        assert_eq!(m.trace(), Rational64::new(90, 1));
    }

    #[test]
    fn trace_moments_small_k() {
        let m = half_loop_matrix(&build_finite_armchair55_dual(0));
        let t = normalized_trace_moments(&m, 2);
        assert_eq!(t[0], BigRational::one());
        assert_eq!(t[1], BigRational::new(45.into(), 16.into()));
        // tr(M²) = Σ diag² + 2E = 12·25/4 + 20·9 + 180
        assert_eq!(t[2], BigRational::new((75 + 180 + 180).into(), 32.into()));
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = build_finite_armchair55_dual(2);
        let text = g.to_edge_list();
        assert!(text.starts_with("52 150\n"));
        assert!(text.contains("\nloops:\n0 5/2\n"));
        assert_eq!(FiniteDualGraph::from_edge_list(&text), Some(g));
    }
}
