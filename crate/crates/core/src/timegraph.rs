//! Edges, permutations and time-graphs, the HAMP reduction, and the
//! brute-force oracles everything else is checked against.
//!
//! Edges of the complete time-graph of order `n` are laid out layer-major:
//! `(i, j, t)` has index `((t - 1) n + (i - 1)) n + (j - 1)`, so layer 1
//! occupies the contiguous prefix `0..n²`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// Number of edges of the complete time-graph, `n²(n − 1)`.
#[inline]
pub const fn num_edges(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        n * n * (n - 1)
    }
}

/// Edge from vertex `i` in layer `t` to vertex `j` in layer `t + 1`.
/// All labels are 1-based; `i == j` is allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub t: usize,
}

impl Edge {
    pub const fn new(i: usize, j: usize, t: usize) -> Self {
        Self { i, j, t }
    }

    pub fn is_valid(&self, n: usize) -> bool {
        (1..=n).contains(&self.i) && (1..=n).contains(&self.j) && self.t >= 1 && self.t < n
    }

    /// Whether this edge is traversed by `p`, i.e. `p(t) = i` and `p(t+1) = j`.
    pub fn is_incident(&self, p: &Permutation) -> bool {
        self.t >= 1 && self.t < p.order() && p.at(self.t) == self.i && p.at(self.t + 1) == self.j
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.i, self.j, self.t)
    }
}

pub fn edge_index(e: Edge, n: usize) -> Result<usize> {
    if !e.is_valid(n) {
        return Err(Error::EdgeOutOfRange {
            i: e.i,
            j: e.j,
            t: e.t,
            n,
        });
    }
    Ok(((e.t - 1) * n + (e.i - 1)) * n + (e.j - 1))
}

pub fn edge_from_index(index: usize, n: usize) -> Result<Edge> {
    if index >= num_edges(n) {
        return Err(Error::EdgeIndexOutOfRange { index, n });
    }
    Ok(Edge {
        i: (index / n) % n + 1,
        j: index % n + 1,
        t: index / (n * n) + 1,
    })
}

pub fn is_incident(e: Edge, p: &Permutation) -> bool {
    e.is_incident(p)
}

/// A bijection of `{1, …, n}` stored as its image array.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &v in &image {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(n));
            }
            seen[v] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (1..=n).collect(),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.image.len()
    }

    /// `p(position)` for a 1-based position.
    #[inline]
    pub fn at(&self, position: usize) -> usize {
        self.image[position - 1]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn into_image(self) -> Vec<usize> {
        self.image
    }

    /// Lexicographic successor, or `None` for the last permutation.
    pub fn next_lex(&self) -> Option<Self> {
        let mut image = self.image.clone();
        let n = image.len();
        let k = (0..n.saturating_sub(1))
            .rev()
            .find(|&k| image[k] < image[k + 1])?;
        let l = (k + 1..n).rev().find(|&l| image[k] < image[l])?;
        image.swap(k, l);
        image[k + 1..].reverse();
        Some(Self { image })
    }

    /// All of `S_n` in lexicographic order of image arrays.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = Some(Self::identity(n));
        while let Some(p) = cur {
            cur = p.next_lex();
            out.push(p);
        }
        out
    }

    /// The `n − 1` edges traversed by this permutation, one per layer.
    pub fn incident_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.image
            .windows(2)
            .enumerate()
            .map(|(k, w)| Edge::new(w[0], w[1], k + 1))
    }

    /// Indices of [`Self::incident_edges`], increasing.
    pub fn incident_edge_indices(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.order();
        self.image
            .windows(2)
            .enumerate()
            .map(move |(k, w)| (k * n + (w[0] - 1)) * n + (w[1] - 1))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.image)
    }
}

/// A time-graph of order `n`: a subset of the edges of `K_T^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TimeGraph {
    n: usize,
    edges: BitVec,
}

impl TimeGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: BitVec::zeros(num_edges(n)),
        }
    }

    /// `K_T^n`, every edge present.
    pub fn complete(n: usize) -> Self {
        Self {
            n,
            edges: BitVec::ones(num_edges(n)),
        }
    }

    pub fn from_edge_indices<I: IntoIterator<Item = usize>>(n: usize, indices: I) -> Result<Self> {
        let mut g = Self::empty(n);
        for index in indices {
            g.insert_index(index)?;
        }
        Ok(g)
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::empty(n);
        for e in edges {
            g.insert_index(edge_index(e, n)?)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_bits(&self) -> &BitVec {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_zero()
    }

    pub fn insert_index(&mut self, index: usize) -> Result<()> {
        if index >= self.edges.len() {
            return Err(Error::EdgeIndexOutOfRange { index, n: self.n });
        }
        self.edges.set(index, true);
        Ok(())
    }

    pub fn remove_index(&mut self, index: usize) -> Result<()> {
        if index >= self.edges.len() {
            return Err(Error::EdgeIndexOutOfRange { index, n: self.n });
        }
        self.edges.set(index, false);
        Ok(())
    }

    #[inline]
    pub fn contains_index(&self, index: usize) -> bool {
        index < self.edges.len() && self.edges.get(index)
    }

    pub fn contains(&self, e: Edge) -> bool {
        edge_index(e, self.n).is_ok_and(|k| self.edges.get(k))
    }

    /// Edge indices present, increasing.
    pub fn edge_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter_ones()
    }

    /// Edge indices of the complement `G^c`, increasing.
    pub fn complement_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(move |&k| !self.edges.get(k))
    }

    /// Whether every edge traversed by `p` belongs to this graph.
    pub fn admits(&self, p: &Permutation) -> bool {
        p.order() == self.n && p.incident_edge_indices().all(|k| self.edges.get(k))
    }
}

/// Scale limits for the enumerating oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCaps {
    /// Largest time-graph order for permutation enumeration.
    pub time_graph: usize,
    /// Largest vertex count for the Hamiltonian path backtracking search.
    pub graph: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self {
            time_graph: 8,
            graph: 10,
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::ScaleExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// Depth-first extension of partial permutations whose edges all lie in
/// `g`. Candidates are tried in increasing order, so complete permutations
/// are reached in lexicographic order. `visit` returns `false` to stop.
fn walk_incident(g: &TimeGraph, mut visit: impl FnMut(&[usize]) -> bool) {
    fn go(
        g: &TimeGraph,
        prefix: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let n = g.order();
        if prefix.len() == n {
            return visit(prefix);
        }
        let t = prefix.len();
        for v in 1..=n {
            if used[v] {
                continue;
            }
            if let Some(&prev) = prefix.last() {
                // edge (prev, v, t) with t = prefix.len() (1-based layer of prev)
                if !g.contains_index(((t - 1) * n + (prev - 1)) * n + (v - 1)) {
                    continue;
                }
            }
            used[v] = true;
            prefix.push(v);
            let more = go(g, prefix, used, visit);
            prefix.pop();
            used[v] = false;
            if !more {
                return false;
            }
        }
        true
    }
    let mut used = vec![false; g.order() + 1];
    go(g, &mut Vec::with_capacity(g.order()), &mut used, &mut visit);
}

/// `S_n(G)`: all permutations incident on `g`, lexicographically ordered.
pub fn incident_permutations(g: &TimeGraph, caps: &OracleCaps) -> Result<Vec<Permutation>> {
    check_cap(g.order(), caps.time_graph)?;
    let mut out = Vec::new();
    walk_incident(g, |image| {
        out.push(Permutation {
            image: image.to_vec(),
        });
        true
    });
    Ok(out)
}

pub fn is_hamiltonian_oracle(g: &TimeGraph, caps: &OracleCaps) -> Result<bool> {
    check_cap(g.order(), caps.time_graph)?;
    let mut found = false;
    walk_incident(g, |_| {
        found = true;
        false
    });
    Ok(found)
}

/// A simple undirected graph on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adjacency: Vec<BitVec>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            adjacency: vec![BitVec::zeros(n); n],
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::new(n);
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Adds `{i, j}`. Repeats and reversed pairs are no-ops.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        for v in [i, j] {
            if v == 0 || v > self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        self.adjacency[i - 1].set(j - 1, true);
        self.adjacency[j - 1].set(i - 1, true);
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (1..=self.n).contains(&i) && (1..=self.n).contains(&j) && self.adjacency[i - 1].get(j - 1)
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n).flat_map(move |i| {
            self.adjacency[i - 1]
                .iter_ones()
                .map(|j0| j0 + 1)
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v - 1].count_ones()
    }

    /// Unordered vertex pairs in the fixed order `(1,2), (1,3), …, (n−1,n)`.
    pub fn pair_list(n: usize) -> Vec<(usize, usize)> {
        (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .collect()
    }

    /// Graph whose edges are the pairs of [`Self::pair_list`] selected by `mask`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut g = Self::new(n);
        for (k, (i, j)) in Self::pair_list(n).into_iter().enumerate() {
            if k < 64 && (mask >> k) & 1 == 1 {
                g.add_edge(i, j).expect("pair list is valid");
            }
        }
        g
    }

    /// Every graph on `n` labelled vertices, by increasing pair mask.
    pub fn all(n: usize) -> impl Iterator<Item = Graph> {
        let pairs = n * n.saturating_sub(1) / 2;
        assert!(pairs < 64, "too many vertex pairs to enumerate");
        (0..1u64 << pairs).map(move |mask| Self::from_pair_mask(n, mask))
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, Self::pair_list(n)).expect("pair list is valid")
    }

    /// Path `1 – 2 – … – n`.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v, v + 1))).expect("valid path")
    }

    /// Cycle `1 – 2 – … – n – 1`, `n ≥ 3`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        g.add_edge(n, 1).expect("valid cycle");
        g
    }

    /// Star `K_{1,leaves}` centred at vertex 1.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (2..=leaves + 1).map(|v| (1, v))).expect("valid star")
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|k| (k + 1, (k + 1) % 5 + 1));
        let spokes = (0..5).map(|k| (k + 1, k + 6));
        let inner = (0..5).map(|k| (k + 6, (k + 2) % 5 + 6));
        Self::from_edges(10, outer.chain(spokes).chain(inner)).expect("valid petersen")
    }
}

/// Hamiltonian path as a vertex sequence, by backtracking.
pub fn find_hamiltonian_path(g: &Graph, caps: &OracleCaps) -> Result<Option<Vec<usize>>> {
    let n = g.order();
    check_cap(n, caps.graph.min(63))?;
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let neighbours: Vec<u64> = (0..n)
        .map(|v| g.adjacency[v].iter_ones().fold(0u64, |m, w| m | 1 << w))
        .collect();
    let full = (1u64 << n) - 1;

    fn extend(nb: &[u64], full: u64, visited: u64, path: &mut Vec<usize>) -> bool {
        if visited == full {
            return true;
        }
        let last = *path.last().expect("path starts non-empty");
        let mut options = nb[last] & !visited;
        while options != 0 {
            let w = options.trailing_zeros() as usize;
            options &= options - 1;
            path.push(w);
            if extend(nb, full, visited | 1 << w, path) {
                return true;
            }
            path.pop();
        }
        false
    }

    let mut path = Vec::with_capacity(n);
    for start in 0..n {
        path.clear();
        path.push(start);
        if extend(&neighbours, full, 1 << start, &mut path) {
            return Ok(Some(path.into_iter().map(|v| v + 1).collect()));
        }
    }
    Ok(None)
}

pub fn hamiltonian_path_oracle(g: &Graph, caps: &OracleCaps) -> Result<bool> {
    Ok(find_hamiltonian_path(g, caps)?.is_some())
}

/// The HAMP to HAMTG reduction: `(i, j, t)` is present for every layer `t`
/// exactly when `{i, j}` is an edge of `g`.
pub fn reduce_hamp(g: &Graph) -> TimeGraph {
    let n = g.order();
    let mut tg = TimeGraph::empty(n);
    for (i, j) in g.edges() {
        for t in 1..n {
            for (a, b) in [(i, j), (j, i)] {
                let k = edge_index(Edge::new(a, b, t), n).expect("graph edge in range");
                tg.edges.set(k, true);
            }
        }
    }
    tg
}
