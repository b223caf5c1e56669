//! Commutation graphs and the combinatorics used to classify them.
//!
//! Vertices are observables and edges join compatible pairs. Indices are
//! 0-based inside the crate; the I/O layer converts to and from the 1-based
//! labels `A_1..A_n`.
//!
//! Every exhaustive routine (stable sets, cliques, independence number,
//! hole search) works on `u32` adjacency masks and refuses graphs with more
//! than [`EXHAUSTIVE_LIMIT`] vertices.

use std::f64::consts::PI;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// Largest vertex count accepted by the exhaustive routines.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommutationGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl CommutationGraph {
    /// Builds a graph from 0-based edges. Pairs are normalized to `(min, max)`
    /// and deduplicated.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("a commutation graph needs at least one vertex"));
        }
        let mut list = Vec::new();
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(invalid(format!(
                    "edge ({}, {}) has an endpoint outside 1..={n}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::Validation(format!("self-loop on vertex {}", i + 1)));
            }
            list.push((i.min(j), i.max(j)));
        }
        list.sort_unstable();
        list.dedup();
        let mut neighbors = vec![Vec::new(); n];
        for &(i, j) in &list {
            neighbors[i].push(j);
            neighbors[j].push(i);
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
        }
        Ok(Self {
            n,
            edges: list,
            neighbors,
        })
    }

    /// Same as [`CommutationGraph::new`] but with 1-based labels.
    pub fn from_one_based(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut shifted = Vec::new();
        for (i, j) in edges {
            if i == 0 || j == 0 {
                return Err(invalid("vertex labels are 1-based; found label 0"));
            }
            shifted.push((i - 1, j - 1));
        }
        Self::new(n, shifted)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted, deduplicated 0-based edges with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.neighbors[i].binary_search(&j).is_ok()
    }

    /// True when every pair of vertices in `vertices` is adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(a, &i)| vertices[a + 1..].iter().all(|&j| self.has_edge(i, j)))
    }

    /// True when `cycle`, read in order and closed back to its first vertex,
    /// is an induced chordless cycle of length at least 3.
    pub fn is_chordless_cycle(&self, cycle: &VertexSubset) -> bool {
        let c = cycle.as_slice();
        let k = c.len();
        if k < 3 || c.iter().any(|&v| v >= self.n) {
            return false;
        }
        let consecutive = (0..k).all(|i| self.has_edge(c[i], c[(i + 1) % k]));
        consecutive && self.induced_edge_count(c) == k
    }

    fn induced_edge_count(&self, vertices: &[usize]) -> usize {
        vertices
            .iter()
            .enumerate()
            .map(|(a, &i)| {
                vertices[a + 1..]
                    .iter()
                    .filter(|&&j| self.has_edge(i, j))
                    .count()
            })
            .sum()
    }

    pub fn complement(&self) -> Self {
        let mut edges =
            Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2 - self.edges.len());
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.has_edge(i, j) {
                    edges.push((i, j));
                }
            }
        }
        Self::new(self.n, edges).expect("complement of a valid graph is valid")
    }

    /// Subgraph induced by `subset`, relabeled `0..|subset|` in the subset's order.
    pub fn induced_subgraph(&self, subset: &VertexSubset) -> Result<Self> {
        subset.check_range(self.n)?;
        let s = subset.as_slice();
        if s.is_empty() {
            return Err(invalid("induced subgraph of an empty vertex subset"));
        }
        let mut edges = Vec::new();
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                if self.has_edge(s[a], s[b]) {
                    edges.push((a, b));
                }
            }
        }
        Self::new(s.len(), edges)
    }

    /// Neighborhood bitmasks, available only for graphs within the exhaustive limit.
    pub fn adjacency_masks(&self) -> Result<Vec<u32>> {
        if self.n > EXHAUSTIVE_LIMIT {
            return Err(Error::ResourceLimit {
                n: self.n,
                limit: EXHAUSTIVE_LIMIT,
            });
        }
        Ok(self
            .neighbors
            .iter()
            .map(|nb| nb.iter().fold(0u32, |m, &j| m | (1 << j)))
            .collect())
    }
}

impl fmt::Display for CommutationGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph on {} vertices:", self.n)?;
        for &(i, j) in &self.edges {
            write!(f, " {}-{}", i + 1, j + 1)?;
        }
        Ok(())
    }
}

/// Ordered list of distinct vertex indices. Serialized with 1-based labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSubset(Vec<usize>);

impl VertexSubset {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        let mut seen = vertices.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid(format!(
                "vertex subset {:?} repeats a vertex",
                vertices.iter().map(|v| v + 1).collect::<Vec<_>>()
            )));
        }
        Ok(Self(vertices))
    }

    pub fn from_one_based(labels: &[usize]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(invalid("vertex labels are 1-based; found label 0"));
        }
        Self::new(labels.iter().map(|l| l - 1).collect())
    }

    /// All vertices `0..n` in order.
    pub fn all(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&v| v >= n) {
            Some(v) => Err(invalid(format!("vertex {} is outside 1..={n}", v + 1))),
            None => Ok(()),
        }
    }
}

impl Serialize for VertexSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(serializer)
    }
}

impl fmt::Display for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.0.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// 0/1 indicator of a stable set, stored as a bitmask (vertex `i` is bit `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableLabeling {
    mask: u32,
    n: usize,
}

impl StableLabeling {
    /// Checks that `q` is a 0/1 vector with no two labeled vertices adjacent in `g`.
    pub fn new(g: &CommutationGraph, q: &[u8]) -> Result<Self> {
        if q.len() != g.n() {
            return Err(Error::DimensionMismatch {
                expected: g.n(),
                found: q.len(),
            });
        }
        let adj = g.adjacency_masks()?;
        let mut mask = 0u32;
        for (i, &bit) in q.iter().enumerate() {
            match bit {
                0 => {}
                1 => mask |= 1 << i,
                other => return Err(invalid(format!("labeling entry {other} is not 0 or 1"))),
            }
        }
        if !is_stable(&adj, mask) {
            return Err(invalid("labeling marks two adjacent vertices"));
        }
        Ok(Self { mask, n: g.n() })
    }

    pub(crate) fn from_mask(mask: u32, n: usize) -> Self {
        Self { mask, n }
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.mask & (1 << v) != 0
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn q(&self) -> Vec<u8> {
        (0..self.n).map(|i| u8::from(self.contains(i))).collect()
    }

    pub fn vertices(&self) -> VertexSubset {
        VertexSubset((0..self.n).filter(|&i| self.contains(i)).collect())
    }
}

fn is_stable(adj: &[u32], mask: u32) -> bool {
    bits(mask).all(|v| adj[v] & mask == 0)
}

fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub fn build_cycle(k: usize) -> Result<CommutationGraph> {
    if k < 3 {
        return Err(invalid(format!(
            "a cycle needs at least 3 vertices, got {k}"
        )));
    }
    CommutationGraph::new(k, (0..k).map(|i| (i, (i + 1) % k)))
}

pub fn build_complement(g: &CommutationGraph) -> CommutationGraph {
    g.complement()
}

pub fn induced_subgraph(g: &CommutationGraph, s: &VertexSubset) -> Result<CommutationGraph> {
    g.induced_subgraph(s)
}

/// Every independent set of `g`, including the empty set, ordered by bitmask
/// value (vertex 1 is the least significant bit).
pub fn enumerate_stable_sets(g: &CommutationGraph) -> Result<Vec<StableLabeling>> {
    let adj = g.adjacency_masks()?;
    let n = g.n();
    let total = 1usize << n;
    // stable[mask] follows from stable[mask without its lowest bit].
    let mut stable = vec![false; total];
    stable[0] = true;
    let mut out = vec![StableLabeling::from_mask(0, n)];
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if stable[rest] && adj[low] & rest as u32 == 0 {
            stable[mask] = true;
            out.push(StableLabeling::from_mask(mask as u32, n));
        }
    }
    Ok(out)
}

/// Maximal cliques via Bron–Kerbosch with pivoting. Each clique is sorted
/// ascending and the list is sorted lexicographically.
pub fn enumerate_maximal_cliques(g: &CommutationGraph) -> Result<Vec<VertexSubset>> {
    let adj = g.adjacency_masks()?;
    let mut found = Vec::new();
    bron_kerbosch(&adj, 0, full_mask(g.n()), 0, &mut found);
    let mut cliques: Vec<VertexSubset> = found
        .into_iter()
        .map(|m| VertexSubset(bits(m).collect()))
        .collect();
    cliques.sort();
    Ok(cliques)
}

fn bron_kerbosch(adj: &[u32], r: u32, mut p: u32, mut x: u32, out: &mut Vec<u32>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits(p | x)
        .max_by_key(|&u| ((p & adj[u]).count_ones(), std::cmp::Reverse(u)))
        .expect("p is non-empty");
    for v in bits(p & !adj[pivot]) {
        let bit = 1u32 << v;
        bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], out);
        p &= !bit;
        x |= bit;
    }
}

pub fn independence_number(g: &CommutationGraph) -> Result<usize> {
    let adj = g.adjacency_masks()?;
    let mut best = 0;
    max_stable(&adj, full_mask(g.n()), 0, &mut best);
    Ok(best)
}

fn max_stable(adj: &[u32], candidates: u32, size: usize, best: &mut usize) {
    if size + candidates.count_ones() as usize <= *best {
        return;
    }
    if candidates == 0 {
        *best = size;
        return;
    }
    let v = bits(candidates)
        .max_by_key(|&u| ((adj[u] & candidates).count_ones(), std::cmp::Reverse(u)))
        .expect("candidates non-empty");
    if adj[v] & candidates == 0 {
        // Every remaining candidate is isolated among the candidates.
        *best = (*best).max(size + candidates.count_ones() as usize);
        return;
    }
    let bit = 1u32 << v;
    max_stable(adj, candidates & !bit & !adj[v], size + 1, best);
    max_stable(adj, candidates & !bit, size, best);
}

/// First induced chordless odd cycle of length at least 5, in cycle order.
///
/// Search order: the smallest vertex of the hole is tried ascending, and the
/// induced path from it is extended through ascending neighbors.
pub fn find_odd_hole(g: &CommutationGraph) -> Result<Option<VertexSubset>> {
    let adj = g.adjacency_masks()?;
    Ok(odd_hole_in_masks(&adj).map(VertexSubset))
}

fn odd_hole_in_masks(adj: &[u32]) -> Option<Vec<usize>> {
    let n = adj.len();
    for start in 0..n {
        let allowed = full_mask(n) & !full_mask(start + 1);
        let mut path = vec![start];
        for first in bits(adj[start] & allowed) {
            path.push(first);
            let on_path = (1u32 << start) | (1u32 << first);
            if extend_hole(adj, allowed, &mut path, on_path, 0) {
                return Some(path);
            }
            path.pop();
        }
    }
    None
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// `blocked` holds the closed neighborhoods of the interior path vertices
/// (everything strictly between the start and the current end).
fn extend_hole(
    adj: &[u32],
    allowed: u32,
    path: &mut Vec<usize>,
    on_path: u32,
    blocked: u32,
) -> bool {
    let start = path[0];
    let end = *path.last().expect("path holds the start");
    let start_bit = 1u32 << start;
    let candidates = adj[end] & allowed & !on_path & !blocked;
    for w in bits(candidates) {
        let len = path.len() + 1;
        if adj[w] & start_bit != 0 {
            if len >= 5 && len % 2 == 1 {
                path.push(w);
                return true;
            }
            continue;
        }
        // The old end becomes interior; the start stays reachable for closing.
        let next_blocked = (blocked | adj[end] | (1u32 << end)) & !start_bit;
        path.push(w);
        if extend_hole(adj, allowed, path, on_path | (1u32 << w), next_blocked) {
            return true;
        }
        path.pop();
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HoleKind {
    Hole,
    Antihole,
}

impl fmt::Display for HoleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HoleKind::Hole => "hole",
            HoleKind::Antihole => "antihole",
        })
    }
}

/// Perfectness verdict. An imperfect graph carries a vertex subset inducing
/// an odd hole, or an odd antihole listed in the complement's cycle order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PerfectnessWitness {
    Perfect,
    Imperfect {
        kind: HoleKind,
        vertices: VertexSubset,
    },
}

impl PerfectnessWitness {
    pub fn is_perfect(&self) -> bool {
        matches!(self, PerfectnessWitness::Perfect)
    }
}

/// Perfect iff neither the graph nor its complement has an induced odd
/// cycle of length at least 5.
pub fn is_perfect(g: &CommutationGraph) -> Result<PerfectnessWitness> {
    let adj = g.adjacency_masks()?;
    if let Some(hole) = odd_hole_in_masks(&adj) {
        return Ok(PerfectnessWitness::Imperfect {
            kind: HoleKind::Hole,
            vertices: VertexSubset(hole),
        });
    }
    let full = full_mask(g.n());
    let co_adj: Vec<u32> = adj
        .iter()
        .enumerate()
        .map(|(v, &m)| !m & full & !(1u32 << v))
        .collect();
    Ok(match odd_hole_in_masks(&co_adj) {
        Some(antihole) => PerfectnessWitness::Imperfect {
            kind: HoleKind::Antihole,
            vertices: VertexSubset(antihole),
        },
        None => PerfectnessWitness::Perfect,
    })
}

/// Lovász number of the odd hole `C_m` or odd antihole, closed form.
pub fn theta_closed_form(kind: HoleKind, m: usize) -> Result<f64> {
    if m < 5 || m.is_multiple_of(2) {
        return Err(invalid(format!(
            "closed forms need an odd length m >= 5, got {m}"
        )));
    }
    let c = (PI / m as f64).cos();
    Ok(match kind {
        HoleKind::Hole => m as f64 * c / (1.0 + c),
        HoleKind::Antihole => (1.0 + c) / c,
    })
}

/// Independence number of the odd hole (`(m-1)/2`) or antihole (`2`).
pub fn hole_independence_number(kind: HoleKind, m: usize) -> usize {
    match kind {
        HoleKind::Hole => m / 2,
        HoleKind::Antihole => 2,
    }
}

/// Two odd cycles of length `n` sharing `A_1 = A'_1` and `A_{n+2-m} = A'_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GluedCycleSpec {
    n: usize,
    m: usize,
}

impl GluedCycleSpec {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 5 || n.is_multiple_of(2) {
            return Err(invalid(format!(
                "cycle length n must be odd and >= 5, got {n}"
            )));
        }
        if m < 3 || m > n - 1 {
            return Err(invalid(format!(
                "splice index m must satisfy 3 <= m <= {}, got {m}",
                n - 1
            )));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n - 2
    }
}

/// The glued graph together with the vertex index of every `A_i` and `A'_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedCycles {
    spec: GluedCycleSpec,
    graph: CommutationGraph,
    unprimed: Vec<usize>,
    primed: Vec<usize>,
}

impl GluedCycles {
    pub fn spec(&self) -> GluedCycleSpec {
        self.spec
    }

    pub fn graph(&self) -> &CommutationGraph {
        &self.graph
    }

    /// Vertex index of `A_i` (1-based `i`).
    pub fn a(&self, i: usize) -> usize {
        self.unprimed[i - 1]
    }

    /// Vertex index of `A'_i` (1-based `i`).
    pub fn a_primed(&self, i: usize) -> usize {
        self.primed[i - 1]
    }

    /// `A_1, ..., A_n` in cycle order.
    pub fn unprimed_cycle(&self) -> VertexSubset {
        VertexSubset(self.unprimed.clone())
    }

    /// `A'_1, ..., A'_n` in cycle order.
    pub fn primed_cycle(&self) -> VertexSubset {
        VertexSubset(self.primed.clone())
    }

    /// Names of every vertex; shared vertices carry both labels, e.g. `A4=A'3`.
    pub fn vertex_names(&self) -> Vec<String> {
        let mut names = vec![String::new(); self.graph.n()];
        for (i, &v) in self.unprimed.iter().enumerate() {
            names[v] = format!("A{}", i + 1);
        }
        for (i, &v) in self.primed.iter().enumerate() {
            if names[v].is_empty() {
                names[v] = format!("A'{}", i + 1);
            } else {
                names[v] = format!("{}=A'{}", names[v], i + 1);
            }
        }
        names
    }

    /// The two chordless even cycles whose edge sets partition the glued graph:
    /// `(A_1..A_{n+2-m}, A'_{m+1}..A'_n)` and `(A_1, A'_2..A'_{m-1}, A_{n+2-m}..A_n)`.
    pub fn even_cycles(&self) -> (VertexSubset, VertexSubset) {
        let (n, m) = (self.spec.n, self.spec.m);
        let mut first: Vec<usize> = (1..=n + 2 - m).map(|i| self.a(i)).collect();
        first.extend((m + 1..=n).map(|i| self.a_primed(i)));
        let mut second = vec![self.a(1)];
        second.extend((2..m).map(|i| self.a_primed(i)));
        second.extend((n + 2 - m..=n).map(|i| self.a(i)));
        (VertexSubset(first), VertexSubset(second))
    }
}

/// Unprimed vertices take indices `0..n`; the free primed vertices follow in
/// order of their primed label.
pub fn build_glued_cycles(spec: GluedCycleSpec) -> GluedCycles {
    let (n, m) = (spec.n, spec.m);
    let unprimed: Vec<usize> = (0..n).collect();
    let mut next = n;
    let primed: Vec<usize> = (1..=n)
        .map(|j| {
            if j == 1 {
                unprimed[0]
            } else if j == m {
                unprimed[n + 1 - m]
            } else {
                next += 1;
                next - 1
            }
        })
        .collect();
    let edges = (0..n)
        .map(|i| (unprimed[i], unprimed[(i + 1) % n]))
        .chain((0..n).map(|i| (primed[i], primed[(i + 1) % n])));
    let graph =
        CommutationGraph::new(spec.vertex_count(), edges).expect("glued cycle edges are valid");
    GluedCycles {
        spec,
        graph,
        unprimed,
        primed,
    }
}

pub fn decompose_glued_into_even_cycles(spec: GluedCycleSpec) -> (VertexSubset, VertexSubset) {
    build_glued_cycles(spec).even_cycles()
}
