//! Recursive construction of a basis of `H_P^n` made of pair indicators.
//!
//! For an anchor vertex `i`, a bijection `p_i : {1..n−1} → {1..n} \ {i}`
//! lifts a permutation `π` of order `n − 1` to `q_i(π) = (i, p_i(π(1)), …,
//! p_i(π(n−1)))`, which starts at `i`, and lifts an edge `(a, b, t)` of
//! order `n − 1` to `r_i(a, b, t) = (p_i(a), p_i(b), t + 1)`. Lifting a
//! basis of `H_P^{n−1}` through every anchor yields a spanning set of
//! `H_P^n`, from which a greedy pass keeps an independent subset.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Basis, Insertion};
use crate::permvec::tpn;
use crate::timegraph::{num_edges, Edge, Permutation};

/// Largest order [`algorithm1`] will build by default. At order 7 every
/// pair vector needs about 86k² bits.
pub const DEFAULT_MAX_ORDER: usize = 6;

/// The relabelling `p_i` for one anchor vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    n: usize,
    anchor: usize,
    /// `table[j − 1] = p_i(j)` for `j` in `1..n`.
    table: Vec<usize>,
    /// `inverse[v]` = `p_i^{-1}(v)`, zero at the anchor.
    inverse: Vec<usize>,
}

impl Lift {
    /// `p_i(j) = j` for `j < i` and `j + 1` otherwise.
    pub fn canonical(n: usize, anchor: usize) -> Result<Self> {
        let table = (1..n).map(|j| if j < anchor { j } else { j + 1 }).collect();
        Self::new(n, anchor, table)
    }

    pub fn new(n: usize, anchor: usize, table: Vec<usize>) -> Result<Self> {
        if n < 2 || anchor == 0 || anchor > n {
            return Err(Error::VertexOutOfRange { vertex: anchor, n });
        }
        if table.len() != n - 1 {
            return Err(Error::LengthMismatch {
                expected: n - 1,
                found: table.len(),
            });
        }
        let mut inverse = vec![0usize; n + 1];
        for (j, &v) in table.iter().enumerate() {
            if v == 0 || v > n || v == anchor || inverse[v] != 0 {
                return Err(Error::Inconsistent(
                    "lift table is not a bijection onto {1..n} minus the anchor",
                ));
            }
            inverse[v] = j + 1;
        }
        Ok(Self {
            n,
            anchor,
            table,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    /// `p_i(j)`.
    pub fn relabel(&self, j: usize) -> usize {
        self.table[j - 1]
    }

    /// `q_i`: order `n − 1` permutation to one of order `n` starting at the anchor.
    pub fn q_lift(&self, p: &Permutation) -> Result<Permutation> {
        if p.order() + 1 != self.n {
            return Err(Error::OrderMismatch {
                expected: self.n - 1,
                found: p.order(),
            });
        }
        let mut image = Vec::with_capacity(self.n);
        image.push(self.anchor);
        image.extend(p.image().iter().map(|&v| self.relabel(v)));
        Permutation::new(image)
    }

    /// `q_i^{-1}`, or `None` when `p` does not start at the anchor.
    pub fn q_unlift(&self, p: &Permutation) -> Result<Option<Permutation>> {
        if p.order() != self.n {
            return Err(Error::OrderMismatch {
                expected: self.n,
                found: p.order(),
            });
        }
        if p.at(1) != self.anchor {
            return Ok(None);
        }
        let image = p.image()[1..].iter().map(|&v| self.inverse[v]).collect();
        Permutation::new(image).map(Some)
    }

    /// `r_i`: edge of order `n − 1` to an edge of `E(n, i)`.
    pub fn r_lift(&self, e: Edge) -> Result<Edge> {
        if !e.is_valid(self.n - 1) {
            return Err(Error::EdgeOutOfRange {
                i: e.i,
                j: e.j,
                t: e.t,
                n: self.n - 1,
            });
        }
        Ok(Edge::new(self.relabel(e.i), self.relabel(e.j), e.t + 1))
    }

    /// `r_i^{-1}`, or `None` for edges outside `E(n, i)`.
    pub fn r_unlift(&self, e: Edge) -> Option<Edge> {
        self.in_lifted_edges(e)
            .then(|| Edge::new(self.inverse[e.i], self.inverse[e.j], e.t - 1))
    }

    /// Membership in `E(n, i)`: layer at least 2, both ends differ from the anchor.
    pub fn in_lifted_edges(&self, e: Edge) -> bool {
        e.is_valid(self.n) && e.t >= 2 && e.i != self.anchor && e.j != self.anchor
    }
}

/// `|E(n, i)| = (n − 1)²(n − 2)`.
pub const fn lifted_edge_count(n: usize) -> usize {
    num_edges(n - 1)
}

/// Greedy independent subset of `candidates`' pair indicators, in order.
fn greedy_pair_basis<I: IntoIterator<Item = Permutation>>(
    n: usize,
    candidates: I,
) -> Result<Vec<Permutation>> {
    let m = num_edges(n);
    let mut span = Gf2Basis::new(m * m);
    let mut kept = Vec::new();
    for p in candidates {
        if let Insertion::Extended { .. } = span.insert(tpn(&p).into_bits())? {
            kept.push(p);
        }
    }
    Ok(kept)
}

/// Direct basis for orders 1 to 3, by lexicographic greedy selection.
pub fn base_basis(n: usize) -> Result<Vec<Permutation>> {
    match n {
        // E(1) is empty, but S_1 has one element and its indicator is kept.
        1 => Ok(vec![Permutation::identity(1)]),
        2 | 3 => greedy_pair_basis(n, Permutation::all(n)),
        _ => Err(Error::UnsupportedOrder(n)),
    }
}

/// One recursion step: lifts a basis of order `n − 1` through every anchor
/// and keeps the greedy independent subset in `(anchor, k)` order.
pub fn lift_basis(previous: &[Permutation], n: usize) -> Result<Vec<Permutation>> {
    if n < 2 {
        return Err(Error::UnsupportedOrder(n));
    }
    let lifts = (1..=n)
        .map(|i| Lift::canonical(n, i))
        .collect::<Result<Vec<_>>>()?;
    let mut candidates = Vec::with_capacity(n * previous.len());
    for lift in &lifts {
        for p in previous {
            candidates.push(lift.q_lift(p)?);
        }
    }
    greedy_pair_basis(n, candidates)
}

/// Basis of `H_P^n` consisting of pair indicators, as their permutations.
pub fn algorithm1(n: usize, max_order: usize) -> Result<Vec<Permutation>> {
    if n > max_order {
        return Err(Error::ScaleExceeded { n, cap: max_order });
    }
    if n <= 3 {
        return base_basis(n);
    }
    let previous = algorithm1(n - 1, max_order)?;
    lift_basis(&previous, n)
}
