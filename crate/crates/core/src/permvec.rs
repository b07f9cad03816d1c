//! Indicator vectors of permutations and the maps between them.
//!
//! An [`EdgeVector`] is an element of `B^{E(n)}`; a [`PairVector`] is an
//! element of `B^{E(n)×E(n)}` stored as the full square matrix, row-major
//! by edge index. Pair vectors built from indicators are symmetric.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::timegraph::{edge_index, num_edges, Edge, Permutation, TimeGraph};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeVector {
    n: usize,
    bits: BitVec,
}

impl EdgeVector {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            bits: BitVec::zeros(num_edges(n)),
        }
    }

    pub fn from_bits(n: usize, bits: BitVec) -> Result<Self> {
        if bits.len() != num_edges(n) {
            return Err(Error::LengthMismatch {
                expected: num_edges(n),
                found: bits.len(),
            });
        }
        Ok(Self { n, bits })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn into_bits(self) -> BitVec {
        self.bits
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        self.bits.get(index)
    }

    pub fn at(&self, e: Edge) -> Result<bool> {
        Ok(self.bits.get(edge_index(e, self.n)?))
    }

    pub fn xor_assign(&mut self, other: &EdgeVector) {
        assert_eq!(self.n, other.n, "order mismatch");
        self.bits.xor_assign(&other.bits);
    }

    pub fn xor(&self, other: &EdgeVector) -> EdgeVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    /// A cycle is an element of value zero.
    pub fn is_cycle(&self) -> bool {
        !value(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairVector {
    n: usize,
    bits: BitVec,
}

impl PairVector {
    pub fn zero(n: usize) -> Self {
        let m = num_edges(n);
        Self {
            n,
            bits: BitVec::zeros(m * m),
        }
    }

    pub fn from_bits(n: usize, bits: BitVec) -> Result<Self> {
        let m = num_edges(n);
        if bits.len() != m * m {
            return Err(Error::LengthMismatch {
                expected: m * m,
                found: bits.len(),
            });
        }
        Ok(Self { n, bits })
    }

    /// Xor of the pair indicators of `perms`.
    pub fn sum_of<'a, I: IntoIterator<Item = &'a Permutation>>(n: usize, perms: I) -> Self {
        let mut out = Self::zero(n);
        for p in perms {
            out.add_permutation(p);
        }
        out
    }

    /// `self ^= tpn(p)` without materialising `tpn(p)`.
    pub fn add_permutation(&mut self, p: &Permutation) {
        assert_eq!(p.order(), self.n, "order mismatch");
        let m = num_edges(self.n);
        let edges: Vec<usize> = p.incident_edge_indices().collect();
        for &a in &edges {
            for &b in &edges {
                self.bits.toggle(a * m + b);
            }
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Side length `|E(n)|` of the square matrix.
    #[inline]
    pub fn side(&self) -> usize {
        num_edges(self.n)
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn into_bits(self) -> BitVec {
        self.bits
    }

    /// `g(e, e')` by edge indices.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits.get(row * self.side() + col)
    }

    pub fn at(&self, e: Edge, e2: Edge) -> Result<bool> {
        Ok(self.get(edge_index(e, self.n)?, edge_index(e2, self.n)?))
    }

    pub fn row_is_zero(&self, row: usize) -> bool {
        let m = self.side();
        !self.bits.any_in_range(row * m, (row + 1) * m)
    }

    pub fn xor_assign(&mut self, other: &PairVector) {
        assert_eq!(self.n, other.n, "order mismatch");
        self.bits.xor_assign(&other.bits);
    }

    pub fn xor(&self, other: &PairVector) -> PairVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.side();
        self.bits
            .iter_ones()
            .all(|k| self.bits.get((k % m) * m + k / m))
    }

    /// Value zero.
    pub fn is_cycle(&self) -> bool {
        !value_pair(self)
    }

    /// Zero diagonal, i.e. `P(g) = 0`.
    pub fn is_closed_cycle(&self) -> bool {
        pmap(self).is_zero()
    }
}

/// `T^n(π)`: indicator of the edges traversed by `p`.
pub fn tn(p: &Permutation) -> EdgeVector {
    let n = p.order();
    EdgeVector {
        n,
        bits: BitVec::from_ones(num_edges(n), p.incident_edge_indices()),
    }
}

/// `T_P^n(π)`: indicator of ordered pairs of edges traversed by `p`.
pub fn tpn(p: &Permutation) -> PairVector {
    let mut out = PairVector::zero(p.order());
    out.add_permutation(p);
    out
}

/// The diagonal map `P(g)(e) = g(e, e)`.
pub fn pmap(g: &PairVector) -> EdgeVector {
    let m = g.side();
    let mut bits = BitVec::zeros(m);
    for e in 0..m {
        if g.bits.get(e * m + e) {
            bits.set(e, true);
        }
    }
    EdgeVector { n: g.n, bits }
}

/// The row map `P_e(g)(e') = g(e, e')`.
pub fn pe_map(g: &PairVector, e: Edge) -> Result<EdgeVector> {
    let row = edge_index(e, g.n)?;
    Ok(pe_map_index(g, row))
}

pub fn pe_map_index(g: &PairVector, row: usize) -> EdgeVector {
    let m = g.side();
    EdgeVector {
        n: g.n,
        bits: g.bits.slice(row * m, m),
    }
}

/// Parity of the layer-1 entries, which occupy indices `0..n²`.
pub fn value(f: &EdgeVector) -> bool {
    f.bits.parity_range(0, (f.n * f.n).min(f.bits.len()))
}

pub fn value_pair(g: &PairVector) -> bool {
    value(&pmap(g))
}

/// Edges whose row of `g` is nonzero.
pub fn support(g: &PairVector) -> TimeGraph {
    let rows = (0..g.side()).filter(|&e| !g.row_is_zero(e));
    TimeGraph::from_edge_indices(g.n, rows).expect("rows index valid edges")
}

/// Whether every row of `g` outside `graph` is zero.
pub fn is_supported_in(g: &PairVector, graph: &TimeGraph) -> bool {
    first_unsupported_row(g, graph).is_none()
}

/// First edge of the complement of `graph` carrying a nonzero row of `g`.
pub fn first_unsupported_row(g: &PairVector, graph: &TimeGraph) -> Option<usize> {
    graph.complement_indices().find(|&e| !g.row_is_zero(e))
}
