//! The linear-system decision procedure for Hamiltonian paths.
//!
//! With a basis `{T_P^n(π_k)}` of `H_P^n`, an element `g = ⊕ α_k T_P^n(π_k)`
//! has value `⊕ α_k` and entries `g(e, e') = ⊕ α_k T_P^n(π_k)(e, e')`. The
//! system asks for value one and a zero row at every edge missing from the
//! time-graph. A Hamiltonian path always yields a solution; the converse is
//! what the two conjectures would guarantee.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::{self, BitVec};
use crate::liftbasis::algorithm1;
use crate::permvec::PairVector;
use crate::timegraph::{num_edges, reduce_hamp, Graph, Permutation, TimeGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowTag {
    /// `⊕ α_k = 1`.
    Value,
    /// `g(e, e') = 0` for `e` outside the graph, by edge indices.
    Pair { e: usize, e2: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemRow {
    pub coeffs: BitVec,
    pub rhs: bool,
    pub tag: RowTag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub num_vars: usize,
    /// The value row first, then distinct nonzero pair constraints ordered by `(e, e')`.
    pub rows: Vec<SystemRow>,
    /// `1 + |G^c|·|E(n)|`, the row count before dropping and deduplication.
    pub raw_rows: usize,
}

impl LinearSystem {
    pub fn coefficient_rows(&self) -> Vec<BitVec> {
        self.rows.iter().map(|r| r.coeffs.clone()).collect()
    }

    pub fn rhs(&self) -> BitVec {
        BitVec::from_bools(&self.rows.iter().map(|r| r.rhs).collect::<Vec<_>>())
    }

    /// Whether `x` satisfies every row.
    pub fn is_satisfied_by(&self, x: &BitVec) -> bool {
        x.len() == self.num_vars && self.rows.iter().all(|r| r.coeffs.dot(x) == r.rhs)
    }
}

fn check_orders(graph: &TimeGraph, basis: &[Permutation]) -> Result<()> {
    match basis.iter().find(|p| p.order() != graph.order()) {
        Some(p) => Err(Error::OrderMismatch {
            expected: graph.order(),
            found: p.order(),
        }),
        None => Ok(()),
    }
}

/// Distinct nonzero rows `(T_P^n(π_k)(e, e'))_k` for `e ∈ G^c`, `e' ∈ E(n)`.
///
/// Only pairs of edges both traversed by some basis permutation can give a
/// nonzero row, so rows are gathered per permutation instead of scanning
/// all of `G^c × E(n)`.
pub fn pair_constraint_rows(
    graph: &TimeGraph,
    basis: &[Permutation],
) -> Result<Vec<(BitVec, RowTag)>> {
    check_orders(graph, basis)?;
    let num_vars = basis.len();
    let mut rows: BTreeMap<(usize, usize), BitVec> = BTreeMap::new();
    for (k, p) in basis.iter().enumerate() {
        let edges: Vec<usize> = p.incident_edge_indices().collect();
        for &e in edges.iter().filter(|&&e| !graph.contains_index(e)) {
            for &e2 in &edges {
                rows.entry((e, e2))
                    .or_insert_with(|| BitVec::zeros(num_vars))
                    .set(k, true);
            }
        }
    }
    let mut seen = BTreeSet::new();
    Ok(rows
        .into_iter()
        .filter(|(_, coeffs)| seen.insert(coeffs.clone()))
        .map(|((e, e2), coeffs)| (coeffs, RowTag::Pair { e, e2 }))
        .collect())
}

pub fn assemble_system(graph: &TimeGraph, basis: &[Permutation]) -> Result<LinearSystem> {
    let num_vars = basis.len();
    let mut rows = Vec::new();
    rows.push(SystemRow {
        coeffs: BitVec::ones(num_vars),
        rhs: true,
        tag: RowTag::Value,
    });
    for (coeffs, tag) in pair_constraint_rows(graph, basis)? {
        rows.push(SystemRow {
            coeffs,
            rhs: false,
            tag,
        });
    }
    let missing = num_edges(graph.order()) - graph.len();
    Ok(LinearSystem {
        num_vars,
        rows,
        raw_rows: 1 + missing * num_edges(graph.order()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SystemStats {
    /// Number of variables `N`.
    pub num_vars: usize,
    pub rows: usize,
    pub raw_rows: usize,
    /// Rank of the coefficient matrix.
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub answer: bool,
    /// Coefficients over the basis permutations, present when `answer` holds.
    pub witness: Option<BitVec>,
    pub stats: SystemStats,
}

pub fn decide(system: &LinearSystem) -> Result<Decision> {
    let coeffs = system.coefficient_rows();
    let solution = gf2::solve(system.num_vars, &coeffs, &system.rhs())?;
    let rank = match &solution {
        Some(s) => s.rank,
        None => gf2::rank(&coeffs)?,
    };
    let witness = solution.map(|s| s.particular);
    if let Some(x) = &witness {
        if !system.is_satisfied_by(x) {
            return Err(Error::Inconsistent(
                "solver witness does not satisfy the system",
            ));
        }
    }
    Ok(Decision {
        answer: witness.is_some(),
        witness,
        stats: SystemStats {
            num_vars: system.num_vars,
            rows: system.rows.len(),
            raw_rows: system.raw_rows,
            rank,
        },
    })
}

/// Reduce, assemble and solve with a precomputed basis of `H_P^n`.
pub fn algorithm2_with_basis(g: &Graph, basis: &[Permutation]) -> Result<Decision> {
    let tg = reduce_hamp(g);
    decide(&assemble_system(&tg, basis)?)
}

/// Full pipeline, building the basis first.
pub fn algorithm2(g: &Graph, max_order: usize) -> Result<Decision> {
    if g.order() == 0 {
        return Err(Error::UnsupportedOrder(0));
    }
    let basis = algorithm1(g.order(), max_order)?;
    algorithm2_with_basis(g, &basis)
}

/// `⊕ α_k T_P^n(π_k)`.
pub fn span_element(n: usize, basis: &[Permutation], alpha: &BitVec) -> PairVector {
    PairVector::sum_of(n, alpha.iter_ones().map(|k| &basis[k]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liftbasis::DEFAULT_MAX_ORDER;
    use crate::permvec::{is_supported_in, value_pair};
    use crate::timegraph::{find_hamiltonian_path, OracleCaps};

    #[test]
    fn complete_time_graph_has_only_value_row() {
        for n in 2..=5 {
            let basis = algorithm1(n, DEFAULT_MAX_ORDER).unwrap();
            let sys = assemble_system(&TimeGraph::complete(n), &basis).unwrap();
            assert_eq!(sys.rows.len(), 1);
            assert_eq!(sys.rows[0].tag, RowTag::Value);
            assert!(decide(&sys).unwrap().answer);
        }
    }

    #[test]
    fn empty_time_graph_is_inconsistent() {
        let basis = algorithm1(3, DEFAULT_MAX_ORDER).unwrap();
        let sys = assemble_system(&TimeGraph::empty(3), &basis).unwrap();
        assert!(sys.rows.len() <= sys.raw_rows);
        assert_eq!(sys.raw_rows, 1 + 18 * 18);
        let d = decide(&sys).unwrap();
        assert!(!d.answer);
        assert!(d.witness.is_none());
    }

    #[test]
    fn order_mismatch() {
        let basis = algorithm1(3, DEFAULT_MAX_ORDER).unwrap();
        assert!(matches!(
            assemble_system(&TimeGraph::empty(4), &basis),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn rows_are_distinct_and_nonzero() {
        let basis = algorithm1(4, DEFAULT_MAX_ORDER).unwrap();
        let sys = assemble_system(&reduce_hamp(&Graph::star(3)), &basis).unwrap();
        let mut seen = BTreeSet::new();
        for r in &sys.rows {
            assert!(!r.coeffs.is_zero());
            assert!(seen.insert(r.coeffs.clone()));
        }
    }

    #[test]
    fn complete_graphs_say_yes() {
        for n in 3..=5 {
            let d = algorithm2(&Graph::complete(n), DEFAULT_MAX_ORDER).unwrap();
            assert!(d.answer);
        }
    }

    #[test]
    fn witness_is_supported_with_value_one() {
        let basis = algorithm1(4, DEFAULT_MAX_ORDER).unwrap();
        for g in Graph::all(4) {
            let d = algorithm2_with_basis(&g, &basis).unwrap();
            let has_path = find_hamiltonian_path(&g, &OracleCaps::default())
                .unwrap()
                .is_some();
            if has_path {
                assert!(d.answer);
            }
            if let Some(alpha) = d.witness {
                let w = span_element(4, &basis, &alpha);
                assert!(value_pair(&w));
                assert!(is_supported_in(&w, &reduce_hamp(&g)));
            }
        }
    }

    #[test]
    fn single_vertex() {
        let d = algorithm2(&Graph::new(1), DEFAULT_MAX_ORDER).unwrap();
        assert!(d.answer);
        assert!(algorithm2(&Graph::new(0), DEFAULT_MAX_ORDER).is_err());
    }
}
