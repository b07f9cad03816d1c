//! Canonical layered bases of `H^n` (and `H_P^n`) relative to a time-graph
//! `G` and an enumeration `e_1, …, e_k` of its complement.
//!
//! Write `G_l = G ∪ {e_1, …, e_l}`. Layer `l` of a canonical basis holds
//! indicators of permutations incident on `G_l` but not on `G_{l−1}`, so
//! each of them traverses `e_l`, and layers `0..=l` together span
//! `H^n(G_l)`.
//!
//! Every permutation has an *entry layer*: the largest enumeration position
//! among its edges missing from `G` (zero if it is incident on `G`). It
//! belongs to `S_n(G_l)` exactly when its entry layer is at most `l`, which
//! lets the whole basis be built from one pass over `S_n`.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2Basis, Insertion};
use crate::permvec::{pmap, tn, tpn, EdgeVector, PairVector};
use crate::timegraph::{num_edges, OracleCaps, Permutation, TimeGraph};

/// Order in which candidate permutations are offered within each layer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PermOrder {
    #[default]
    Lexicographic,
    /// Lexicographic order shuffled by a ChaCha8 stream with this seed.
    Shuffled(u64),
}

impl PermOrder {
    pub fn seed(&self) -> Option<u64> {
        match self {
            PermOrder::Lexicographic => None,
            PermOrder::Shuffled(s) => Some(*s),
        }
    }
}

/// Checks that `order` lists every edge of `G^c` exactly once and returns
/// each edge's 1-based position in it (zero for edges of `G`).
fn positions(graph: &TimeGraph, order: &[usize]) -> Result<Vec<usize>> {
    let m = num_edges(graph.order());
    let mut pos = vec![0usize; m];
    for (k, &e) in order.iter().enumerate() {
        if e >= m || graph.contains_index(e) || pos[e] != 0 {
            return Err(Error::InvalidEnumeration);
        }
        pos[e] = k + 1;
    }
    if order.len() != m - graph.len() {
        return Err(Error::InvalidEnumeration);
    }
    Ok(pos)
}

/// `S_n` split by entry layer; bucket `l` is `S_n(G_l) \ S_n(G_{l−1})`.
fn entry_buckets(
    graph: &TimeGraph,
    order: &[usize],
    perm_order: PermOrder,
    caps: &OracleCaps,
) -> Result<Vec<Vec<Permutation>>> {
    let n = graph.order();
    if n > caps.time_graph {
        return Err(Error::ScaleExceeded {
            n,
            cap: caps.time_graph,
        });
    }
    let pos = positions(graph, order)?;
    let mut buckets = vec![Vec::new(); order.len() + 1];
    for p in Permutation::all(n) {
        let entry = p.incident_edge_indices().map(|e| pos[e]).max().unwrap_or(0);
        buckets[entry].push(p);
    }
    if let PermOrder::Shuffled(seed) = perm_order {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for b in &mut buckets {
            b.shuffle(&mut rng);
        }
    }
    Ok(buckets)
}

fn greedy_layers(
    buckets: Vec<Vec<Permutation>>,
    dim: usize,
    vector: impl Fn(&Permutation) -> BitVec,
) -> Result<(Vec<Vec<Permutation>>, Gf2Basis)> {
    let mut span = Gf2Basis::new(dim);
    let mut layers = Vec::with_capacity(buckets.len());
    for bucket in buckets {
        let mut layer = Vec::new();
        for p in bucket {
            if let Insertion::Extended { .. } = span.insert(vector(&p))? {
                layer.push(p);
            }
        }
        layers.push(layer);
    }
    Ok((layers, span))
}

/// Canonical basis `{f(i, j) = T^n(π_ij)}` of `H^n`.
#[derive(Clone, Debug)]
pub struct CanonicalBasis {
    graph: TimeGraph,
    complement_order: Vec<usize>,
    perm_order: PermOrder,
    layers: Vec<Vec<Permutation>>,
    offsets: Vec<usize>,
    span: Gf2Basis,
}

/// Enumeration of `G^c` by increasing edge index.
pub fn default_enumeration(graph: &TimeGraph) -> Vec<usize> {
    graph.complement_indices().collect()
}

pub fn build_canonical_basis(
    graph: &TimeGraph,
    order: &[usize],
    perm_order: PermOrder,
    caps: &OracleCaps,
) -> Result<CanonicalBasis> {
    let buckets = entry_buckets(graph, order, perm_order, caps)?;
    let dim = num_edges(graph.order());
    let (layers, span) = greedy_layers(buckets, dim, |p| tn(p).into_bits())?;
    Ok(CanonicalBasis::assemble(
        graph.clone(),
        order.to_vec(),
        perm_order,
        layers,
        span,
    ))
}

impl CanonicalBasis {
    fn assemble(
        graph: TimeGraph,
        complement_order: Vec<usize>,
        perm_order: PermOrder,
        layers: Vec<Vec<Permutation>>,
        span: Gf2Basis,
    ) -> Self {
        let mut offsets = Vec::with_capacity(layers.len() + 1);
        let mut acc = 0;
        for layer in &layers {
            offsets.push(acc);
            acc += layer.len();
        }
        offsets.push(acc);
        Self {
            graph,
            complement_order,
            perm_order,
            layers,
            offsets,
            span,
        }
    }

    /// Rebuilds a basis from stored layers, checking every canonical
    /// invariant against a fresh enumeration of `S_n`.
    pub fn from_layers(
        graph: &TimeGraph,
        order: &[usize],
        perm_order: PermOrder,
        layers: Vec<Vec<Permutation>>,
        caps: &OracleCaps,
    ) -> Result<Self> {
        let n = graph.order();
        if layers.len() != order.len() + 1 {
            return Err(Error::Inconsistent("layer count must be |G^c| + 1"));
        }
        let pos = positions(graph, order)?;
        let buckets = entry_buckets(graph, order, PermOrder::Lexicographic, caps)?;
        let dim = num_edges(n);
        let mut span = Gf2Basis::new(dim);
        let mut reference = Gf2Basis::new(dim);
        for (l, (layer, bucket)) in layers.iter().zip(&buckets).enumerate() {
            for p in layer {
                if p.order() != n {
                    return Err(Error::OrderMismatch {
                        expected: n,
                        found: p.order(),
                    });
                }
                let entry = p.incident_edge_indices().map(|e| pos[e]).max().unwrap_or(0);
                if entry != l {
                    return Err(Error::Inconsistent("permutation stored in the wrong layer"));
                }
                if let Insertion::Dependent(_) = span.insert(tn(p).into_bits())? {
                    return Err(Error::Inconsistent("stored basis is linearly dependent"));
                }
            }
            for p in bucket {
                reference.insert(tn(p).into_bits())?;
            }
            if span.rank() != reference.rank() {
                return Err(Error::Inconsistent("layer prefix does not span H^n(G_l)"));
            }
        }
        Ok(Self::assemble(
            graph.clone(),
            order.to_vec(),
            perm_order,
            layers,
            span,
        ))
    }

    pub fn graph(&self) -> &TimeGraph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    /// The enumeration `e_1, …, e_k` as edge indices.
    pub fn complement_order(&self) -> &[usize] {
        &self.complement_order
    }

    pub fn perm_order(&self) -> PermOrder {
        self.perm_order
    }

    /// `k = |G^c|`.
    pub fn k(&self) -> usize {
        self.complement_order.len()
    }

    pub fn layers(&self) -> &[Vec<Permutation>] {
        &self.layers
    }

    /// Layer sizes `d(0), …, d(k)`.
    pub fn d(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// Total size, equal to `dim H^n`.
    pub fn len(&self) -> usize {
        self.span.rank()
    }

    pub fn is_empty(&self) -> bool {
        self.span.rank() == 0
    }

    /// `f(i, j)`, with `j` zero-based.
    pub fn f(&self, i: usize, j: usize) -> EdgeVector {
        tn(&self.layers[i][j])
    }

    /// `F(i, j) = T_P^n(π_ij)`, with `j` zero-based.
    pub fn pair_element(&self, i: usize, j: usize) -> PairVector {
        tpn(&self.layers[i][j])
    }

    /// The basis vectors of layers `0..=l`.
    pub fn prefix_vectors(&self, l: usize) -> Vec<BitVec> {
        self.span.originals()[..self.offsets[l + 1]].to_vec()
    }
}

/// Layered basis `{g(i, j) = T_P^n(π'_ij)}` of `H_P^n`.
#[derive(Clone, Debug)]
pub struct CanonicalPairBasis {
    pub complement_order: Vec<usize>,
    pub layers: Vec<Vec<Permutation>>,
}

impl CanonicalPairBasis {
    /// Layer sizes `c(0), …, c(k)`.
    pub fn c(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn build_canonical_pair_basis(
    graph: &TimeGraph,
    order: &[usize],
    perm_order: PermOrder,
    caps: &OracleCaps,
) -> Result<CanonicalPairBasis> {
    let buckets = entry_buckets(graph, order, perm_order, caps)?;
    let m = num_edges(graph.order());
    let (layers, _) = greedy_layers(buckets, m * m, |p| tpn(p).into_bits())?;
    Ok(CanonicalPairBasis {
        complement_order: order.to_vec(),
        layers,
    })
}

/// `g = g_c ⊕ ⊕ α(i, j) F(i, j)` with `g_c` a closed cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `alpha[i]` holds `α(i, ·)` over layer `i`.
    pub alpha: Vec<BitVec>,
    pub gc: PairVector,
    /// `f^{(i)} = ⊕_j α(i, j) f(i, j)`.
    pub layer_sums: Vec<EdgeVector>,
}

impl Decomposition {
    /// `⊕_{i ≥ from} f^{(i)}(e)` for the edge index `e`.
    pub fn tail_at(&self, from: usize, e: usize) -> bool {
        self.layer_sums
            .iter()
            .skip(from)
            .fold(false, |acc, f| acc ^ f.get(e))
    }

    /// Largest `j` with `f^{(j)} ≠ 0`.
    pub fn top_layer(&self) -> Option<usize> {
        self.layer_sums.iter().rposition(|f| !f.is_zero())
    }
}

pub fn decompose(g: &PairVector, cb: &CanonicalBasis) -> Result<Decomposition> {
    let n = cb.order();
    if g.order() != n {
        return Err(Error::OrderMismatch {
            expected: n,
            found: g.order(),
        });
    }
    let diagonal = pmap(g);
    let coeffs = cb.span.coords(diagonal.bits())?.ok_or(Error::Inconsistent(
        "P(g) is outside the span of the canonical basis",
    ))?;

    let mut gc = g.clone();
    let mut alpha = Vec::with_capacity(cb.layers.len());
    let mut layer_sums = Vec::with_capacity(cb.layers.len());
    for (i, layer) in cb.layers.iter().enumerate() {
        let base = cb.offsets[i];
        let mut a = BitVec::zeros(layer.len());
        let mut sum = EdgeVector::zero(n);
        for (j, p) in layer.iter().enumerate() {
            if coeffs.get(base + j) {
                a.set(j, true);
                gc.add_permutation(p);
                sum.xor_assign(&tn(p));
            }
        }
        alpha.push(a);
        layer_sums.push(sum);
    }
    if !gc.is_closed_cycle() {
        return Err(Error::Inconsistent(
            "remainder of the decomposition is not a closed cycle",
        ));
    }
    Ok(Decomposition {
        alpha,
        gc,
        layer_sums,
    })
}

/// Checks `⊕_{i ≥ m} f^{(i)}(e_m) = 0` for `m = 1, …, k`.
pub fn tail_identity_holds(dec: &Decomposition, cb: &CanonicalBasis) -> bool {
    first_tail_identity_failure(dec, cb).is_none()
}

/// Smallest `m` at which the layered identity fails.
pub fn first_tail_identity_failure(dec: &Decomposition, cb: &CanonicalBasis) -> Option<usize> {
    cb.complement_order()
        .iter()
        .enumerate()
        .map(|(k, &e)| (k + 1, e))
        .find(|&(m, e)| dec.tail_at(m, e))
        .map(|(m, _)| m)
}
