//! Dense simple graphs and the ring graph constructions.
//!
//! Adjacency is a bitset matrix, one row of `u64` words per vertex. Edge
//! iteration is lexicographic in `(u, v)` with `u < v`, so anything derived
//! from it (reports, DIMACS dumps) is reproducible.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::closed_forms::EdgePartition;
use crate::error::{Error, Result};
use crate::ring::FiniteRing;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    degrees: Vec<usize>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph {
            n,
            words,
            bits: vec![0; n * words],
            degrees: vec![0; n],
        }
    }

    /// Tests every pair `u < v` with `adjacent(u, v)`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if adjacent(u, v) {
                    g.set(u, v);
                    g.set(v, u);
                }
            }
        }
        g.recount_degrees();
        g
    }

    /// Builds a simple graph from an edge list. Loops and repeated edges are
    /// dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} vertices");
            if u != v {
                g.set(u, v);
                g.set(v, u);
            }
        }
        g.recount_degrees();
        g
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    fn recount_degrees(&mut self) {
        self.degrees = (0..self.n)
            .map(|u| self.row(u).iter().map(|w| w.count_ones() as usize).sum())
            .collect();
    }

    #[inline]
    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(wi, &w)| BitIter {
            word: w,
            base: wi * 64,
        })
    }

    /// Edges `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .skip_while(move |&v| v <= u)
                .map(move |v| (u, v))
        })
    }

    pub fn is_regular(&self) -> Option<usize> {
        let first = *self.degrees.first()?;
        self.degrees.iter().all(|&d| d == first).then_some(first)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        let tail = if self.n % 64 == 0 {
            u64::MAX
        } else {
            (1u64 << (self.n % 64)) - 1
        };
        for u in 0..self.n {
            let src = self.row(u);
            let dst = &mut g.bits[u * self.words..(u + 1) * self.words];
            for (d, s) in dst.iter_mut().zip(src) {
                *d = !s;
            }
            if let Some(last) = dst.last_mut() {
                *last &= tail;
            }
            dst[u / 64] &= !(1 << (u % 64));
        }
        g.degrees = self.degrees.iter().map(|&d| self.n - 1 - d).collect();
        g
    }

    /// Whether every two distinct vertices of `vertices` are adjacent.
    pub fn induces_complete(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..].iter().all(|&v| self.has_edge(u, v))
        })
    }

    /// Counts edges by the labels of their endpoints. `labels[v] < num_labels`;
    /// the result is a `num_labels x num_labels` row-major matrix where entry
    /// `(a, b)` with `a <= b` holds the number of edges joining label `a` to
    /// label `b`. Entries below the diagonal are zero.
    pub fn label_pair_counts(&self, labels: &[usize], num_labels: usize) -> Vec<u64> {
        assert_eq!(labels.len(), self.n);
        let mut counts = vec![0u64; num_labels * num_labels];
        let mut bump = |a: usize, b: usize, by: u64| {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            counts[a * num_labels + b] += by;
        };
        if num_labels <= 16 {
            // popcount against one vertex mask per label
            let mut masks = vec![0u64; num_labels * self.words];
            for (v, &l) in labels.iter().enumerate() {
                masks[l * self.words + v / 64] |= 1 << (v % 64);
            }
            for u in 0..self.n {
                let row = self.row(u);
                let first = u / 64;
                let above = !0u64 << (u % 64) << 1;
                for l in 0..num_labels {
                    let mask = &masks[l * self.words..(l + 1) * self.words];
                    let mut c = (row[first] & mask[first] & above).count_ones() as u64;
                    for w in first + 1..self.words {
                        c += (row[w] & mask[w]).count_ones() as u64;
                    }
                    if c > 0 {
                        bump(labels[u], l, c);
                    }
                }
            }
        } else {
            for (u, v) in self.edges() {
                bump(labels[u], labels[v], 1);
            }
        }
        counts
    }

    /// Number of edges for each unordered degree pair `(d_u, d_v)`, `d_u <= d_v`.
    pub fn degree_pair_counts(&self) -> Vec<((usize, usize), u64)> {
        let mut distinct: Vec<usize> = self.degrees.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let index: HashMap<usize, usize> =
            distinct.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        let labels: Vec<usize> = self.degrees.iter().map(|d| index[d]).collect();
        let k = distinct.len();
        if k > 1024 {
            let mut map: HashMap<(usize, usize), u64> = HashMap::new();
            for (u, v) in self.edges() {
                let (a, b) = (self.degrees[u], self.degrees[v]);
                *map.entry((a.min(b), a.max(b))).or_default() += 1;
            }
            let mut out: Vec<_> = map.into_iter().collect();
            out.sort_unstable();
            return out;
        }
        let counts = self.label_pair_counts(&labels, k);
        let mut out = Vec::new();
        for a in 0..k {
            for b in a..k {
                let c = counts[a * k + b];
                if c > 0 {
                    out.push(((distinct[a], distinct[b]), c));
                }
            }
        }
        out
    }

    /// DIMACS-style edge list: `p edge n m`, then `e u v` per edge, 1-indexed.
    pub fn write_dimacs(&self, mut out: impl Write, comment: Option<&str>) -> io::Result<()> {
        if let Some(c) = comment {
            writeln!(out, "c {c}")?;
        }
        writeln!(out, "p edge {} {}", self.n, self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(out, "e {} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

struct BitIter {
    word: u64,
    base: usize,
}

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let tz = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.base + tz)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Total,
    Unit,
}

impl GraphKind {
    pub const ALL: [GraphKind; 2] = [GraphKind::Total, GraphKind::Unit];

    pub fn as_str(&self) -> &'static str {
        match self {
            GraphKind::Total => "total",
            GraphKind::Unit => "unit",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VertexClass {
    ZeroDivisor,
    Unit,
}

/// Zero-divisor / unit class of each vertex, indexed like the ring elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClasses(Vec<VertexClass>);

impl VertexClasses {
    pub fn of_ring(ring: &FiniteRing) -> Self {
        VertexClasses(
            ring.unit_mask()
                .into_iter()
                .map(|u| if u { VertexClass::Unit } else { VertexClass::ZeroDivisor })
                .collect(),
        )
    }

    pub fn from_unit_mask(mask: &[bool]) -> Self {
        VertexClasses(
            mask.iter()
                .map(|&u| if u { VertexClass::Unit } else { VertexClass::ZeroDivisor })
                .collect(),
        )
    }

    pub fn get(&self, v: usize) -> VertexClass {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn zero_divisors(&self) -> Vec<usize> {
        self.members(VertexClass::ZeroDivisor)
    }

    pub fn units(&self) -> Vec<usize> {
        self.members(VertexClass::Unit)
    }

    fn members(&self, class: VertexClass) -> Vec<usize> {
        (0..self.0.len()).filter(|&v| self.0[v] == class).collect()
    }

    /// `(zero-divisor count, unit count)`.
    pub fn sizes(&self) -> (usize, usize) {
        let units = self.0.iter().filter(|&&c| c == VertexClass::Unit).count();
        (self.0.len() - units, units)
    }
}

fn ring_graph(ring: &FiniteRing, want_unit_sum: bool) -> (Graph, VertexClasses) {
    let units = ring.unit_mask();
    let graph = Graph::from_fn(ring.order(), |x, y| units[ring.add(x, y)] == want_unit_sum);
    (graph, VertexClasses::from_unit_mask(&units))
}

/// `x ~ y` iff `x + y` is a zero-divisor (0 included).
pub fn total_graph(ring: &FiniteRing) -> (Graph, VertexClasses) {
    ring_graph(ring, false)
}

/// `x ~ y` iff `x + y` is a unit.
pub fn unit_graph(ring: &FiniteRing) -> (Graph, VertexClasses) {
    ring_graph(ring, true)
}

pub fn ring_graph_of_kind(ring: &FiniteRing, kind: GraphKind) -> (Graph, VertexClasses) {
    match kind {
        GraphKind::Total => total_graph(ring),
        GraphKind::Unit => unit_graph(ring),
    }
}

pub fn complement(g: &Graph) -> Graph {
    g.complement()
}

pub fn complete_graph(n: usize) -> Graph {
    Graph::from_fn(n, |_, _| true)
}

/// Vertex `i` adjacent to `i +- s (mod n)` for every offset `s`.
pub fn circulant_graph(n: usize, offsets: &[usize]) -> Result<Graph> {
    let max = n / 2;
    if let Some(&bad) = offsets.iter().find(|&&s| s == 0 || s > max) {
        return Err(Error::InvalidOffset { offset: bad, max });
    }
    let edges = offsets
        .iter()
        .flat_map(|&s| (0..n).map(move |i| (i, (i + s) % n)));
    Ok(Graph::from_edges(n, edges))
}

/// Offsets of a `k`-regular circulant on `n` vertices, when one exists:
/// `1..=k/2`, plus `n/2` when `k` is odd (which needs `n` even).
pub fn regular_circulant_offsets(n: usize, k: usize) -> Option<Vec<usize>> {
    if k >= n || (k % 2 == 1 && n % 2 == 1) {
        return None;
    }
    let mut offsets: Vec<usize> = (1..=k / 2).collect();
    if k % 2 == 1 {
        offsets.push(n / 2);
    }
    Some(offsets)
}

/// Degrees of zero-divisors and of units in a ring graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DegreePair {
    pub zero_divisor: u64,
    pub unit: u64,
}

/// Degree of each vertex class in the total or unit graph of a finite
/// commutative ring with `order` elements and `unit_count` units.
///
/// When 2 is a unit, `x + x` is a unit exactly for units `x`, so units gain
/// one total-graph neighbor and lose one unit-graph neighbor relative to the
/// zero-divisors.
pub fn predicted_degrees(order: u64, unit_count: u64, two_is_unit: bool, kind: GraphKind) -> DegreePair {
    let base = order - unit_count - 1;
    match (kind, two_is_unit) {
        (GraphKind::Total, false) => DegreePair { zero_divisor: base, unit: base },
        (GraphKind::Total, true) => DegreePair { zero_divisor: base, unit: base + 1 },
        (GraphKind::Unit, false) => DegreePair { zero_divisor: unit_count, unit: unit_count },
        (GraphKind::Unit, true) => DegreePair { zero_divisor: unit_count, unit: unit_count - 1 },
    }
}

pub fn predicted_ring_degrees(ring: &FiniteRing, kind: GraphKind) -> DegreePair {
    predicted_degrees(ring.order() as u64, ring.unit_count(), ring.two_is_unit(), kind)
}

pub fn edge_partition_of(g: &Graph, classes: &VertexClasses) -> EdgePartition {
    let labels: Vec<usize> = (0..g.vertex_count())
        .map(|v| match classes.get(v) {
            VertexClass::ZeroDivisor => 0,
            VertexClass::Unit => 1,
        })
        .collect();
    let c = g.label_pair_counts(&labels, 2);
    EdgePartition::from_counts(c[0], c[1], c[3])
}
