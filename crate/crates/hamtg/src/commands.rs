//! JSON documents produced by the single-shot subcommands.

use hamtg_core::canonical::{build_canonical_basis, PermOrder};
use hamtg_core::lab::{dimension_row, DimensionRow};
use hamtg_core::solver::{algorithm2_with_basis, Decision};
use hamtg_core::timegraph::{
    find_hamiltonian_path, incident_permutations, num_edges, reduce_hamp, Graph, OracleCaps,
    Permutation, TimeGraph,
};
use serde::{Deserialize, Serialize};

use crate::cache::BasisCache;
use crate::error::{HarnessError, Result};
use crate::formats::{images, BasisFile, CanonicalBasisFile};

/// Exit code of `solve` when the system is consistent.
pub const EXIT_YES: i32 = 10;
/// Exit code of `solve` when the system is inconsistent.
pub const EXIT_NO: i32 = 11;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub n: usize,
    pub edge_count: usize,
    pub edges: Vec<usize>,
}

pub fn reduce(g: &Graph) -> ReduceReport {
    let tg = reduce_hamp(g);
    ReduceReport {
        n: tg.order(),
        edge_count: tg.len(),
        edges: tg.edge_indices().collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: usize,
    pub hamiltonian_path: bool,
    pub path: Option<Vec<usize>>,
    /// Incident permutations of the reduced time-graph, when within the cap.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incident_permutations: Option<Vec<Vec<usize>>>,
}

pub fn oracle(g: &Graph, caps: &OracleCaps) -> Result<OracleReport> {
    let path = find_hamiltonian_path(g, caps)?;
    let incident = if g.order() <= caps.time_graph {
        Some(images(&incident_permutations(&reduce_hamp(g), caps)?))
    } else {
        None
    };
    Ok(OracleReport {
        n: g.order(),
        hamiltonian_path: path.is_some(),
        path,
        incident_permutations: incident,
    })
}

pub fn basis(n: usize, cache: &mut BasisCache) -> Result<BasisFile> {
    Ok(BasisFile::new(n, cache.get(n)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRecord {
    pub n: usize,
    pub edges: usize,
    pub dim_h: usize,
    pub dim_hp: usize,
    pub lifted: usize,
}

impl From<DimensionRow> for DimensionRecord {
    fn from(r: DimensionRow) -> Self {
        Self {
            n: r.n,
            edges: r.edges,
            dim_h: r.dim_h,
            dim_hp: r.dim_hp,
            lifted: r.lifted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub rows: Vec<DimensionRecord>,
}

pub fn dimensions(max_n: usize, max_order: usize) -> Result<DimensionReport> {
    let rows = (2..=max_n)
        .map(|n| dimension_row(n, max_order).map(DimensionRecord::from))
        .collect::<hamtg_core::Result<_>>()?;
    Ok(DimensionReport { rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTerm {
    pub index: usize,
    pub permutation: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub basis_size: usize,
    pub rows: usize,
    pub raw_rows: usize,
    pub rank: usize,
    pub answer: bool,
    /// Basis permutations with coefficient one in the solution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<WitnessTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_answer: Option<bool>,
    /// Set when the oracle ran: true when the solver accepts a graph with no
    /// Hamiltonian path, so some conjecture must fail on it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjecture_flag: Option<bool>,
}

impl SolveReport {
    pub fn exit_code(&self) -> i32 {
        if self.answer {
            EXIT_YES
        } else {
            EXIT_NO
        }
    }
}

fn witness_terms(decision: &Decision, basis: &[Permutation]) -> Option<Vec<WitnessTerm>> {
    decision.witness.as_ref().map(|w| {
        w.iter_ones()
            .map(|index| WitnessTerm {
                index,
                permutation: basis[index].image().to_vec(),
            })
            .collect()
    })
}

pub fn solve(
    g: &Graph,
    cache: &mut BasisCache,
    with_oracle: bool,
    caps: &OracleCaps,
) -> Result<SolveReport> {
    if g.order() == 0 {
        return Err(HarnessError::Format("graph has no vertices".into()));
    }
    let basis = cache.get(g.order())?;
    let decision = algorithm2_with_basis(g, basis)?;
    let oracle_answer = if with_oracle {
        Some(find_hamiltonian_path(g, caps)?.is_some())
    } else {
        None
    };
    Ok(SolveReport {
        n: g.order(),
        basis_size: decision.stats.num_vars,
        rows: decision.stats.rows,
        raw_rows: decision.stats.raw_rows,
        rank: decision.stats.rank,
        answer: decision.answer,
        witness: witness_terms(&decision, basis),
        oracle_answer,
        conjecture_flag: oracle_answer.map(|h| decision.answer && !h),
    })
}

/// Canonical basis of `H_P^n` for a time-graph under a complement enumeration.
pub fn canonical(
    graph: &TimeGraph,
    order: Option<Vec<usize>>,
    seed: Option<u64>,
    caps: &OracleCaps,
) -> Result<CanonicalBasisFile> {
    let order = order.unwrap_or_else(|| graph.complement_indices().collect());
    if let Some(&bad) = order.iter().find(|&&k| k >= num_edges(graph.order())) {
        return Err(HarnessError::Format(format!(
            "edge index {bad} out of range"
        )));
    }
    let perm_order = seed.map_or(PermOrder::Lexicographic, PermOrder::Shuffled);
    let cb = build_canonical_basis(graph, &order, perm_order, caps)?;
    Ok(CanonicalBasisFile::new(&cb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_reports_witness_and_oracle() {
        let mut cache = BasisCache::in_memory(5);
        let caps = OracleCaps::default();
        let report = solve(&Graph::path(4), &mut cache, true, &caps).unwrap();
        assert!(report.answer);
        assert_eq!(report.exit_code(), EXIT_YES);
        assert_eq!(report.basis_size, 24);
        assert_eq!(report.oracle_answer, Some(true));
        assert_eq!(report.conjecture_flag, Some(false));
        assert!(!report.witness.unwrap().is_empty());

        let report = solve(&Graph::star(3), &mut cache, false, &caps).unwrap();
        assert!(!report.answer);
        assert_eq!(report.exit_code(), EXIT_NO);
        assert!(report.witness.is_none() && report.oracle_answer.is_none());
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["N"], 24);
        assert!(json.get("witness").is_none());
    }

    #[test]
    fn oracle_and_reduce_agree() {
        let caps = OracleCaps::default();
        let g = Graph::cycle(4);
        let o = oracle(&g, &caps).unwrap();
        assert!(o.hamiltonian_path);
        assert_eq!(o.incident_permutations.unwrap().len(), 8);
        let r = reduce(&g);
        assert_eq!(r.edge_count, r.edges.len());
    }

    #[test]
    fn dimensions_match_known_values() {
        let report = dimensions(4, 6).unwrap();
        let hp: Vec<_> = report
            .rows
            .iter()
            .map(|r| (r.n, r.edges, r.dim_h, r.dim_hp))
            .collect();
        assert_eq!(hp, [(2, 4, 2, 2), (3, 18, 6, 6), (4, 48, 23, 24)]);
    }
}
