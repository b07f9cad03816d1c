//! Text and JSON file formats.
//!
//! Graph files are plain text: the first line holds `n`, each further line
//! one `i j` pair (1-based, whitespace separated). Repeated and reversed
//! pairs collapse to one edge. Blank lines and lines starting with `#` are
//! skipped.
//!
//! Time-graph files hold `n` on the first line and one edge index per line.

use std::fmt::Write as _;

use hamtg_core::canonical::{CanonicalBasis, PermOrder};
use hamtg_core::gf2::{Gf2Basis, Insertion};
use hamtg_core::permvec::tpn;
use hamtg_core::timegraph::{num_edges, Graph, OracleCaps, Permutation, TimeGraph};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(line: usize, token: &str) -> Result<usize> {
    token.parse().map_err(|_| HarnessError::Parse {
        line,
        message: format!("expected a non-negative integer, found {token:?}"),
    })
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or(HarnessError::Parse {
        line: 1,
        message: "missing vertex count".into(),
    })?;
    let n = parse_usize(line, header)?;
    let mut g = Graph::new(n);
    for (line, l) in lines {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        let [a, b] = tokens[..] else {
            return Err(HarnessError::Parse {
                line,
                message: format!("expected `i j`, found {l:?}"),
            });
        };
        let (i, j) = (parse_usize(line, a)?, parse_usize(line, b)?);
        g.add_edge(i, j).map_err(|e| HarnessError::Parse {
            line,
            message: e.to_string(),
        })?;
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{}\n", g.order());
    for (i, j) in g.edges() {
        writeln!(out, "{i} {j}").expect("writing to a String");
    }
    out
}

pub fn parse_time_graph(text: &str) -> Result<TimeGraph> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or(HarnessError::Parse {
        line: 1,
        message: "missing order".into(),
    })?;
    let n = parse_usize(line, header)?;
    let mut tg = TimeGraph::empty(n);
    for (line, l) in lines {
        let index = parse_usize(line, l)?;
        tg.insert_index(index).map_err(|e| HarnessError::Parse {
            line,
            message: e.to_string(),
        })?;
    }
    Ok(tg)
}

pub fn write_time_graph(tg: &TimeGraph) -> String {
    let mut out = format!("{}\n", tg.order());
    for k in tg.edge_indices() {
        writeln!(out, "{k}").expect("writing to a String");
    }
    out
}

pub fn images(perms: &[Permutation]) -> Vec<Vec<usize>> {
    perms.iter().map(|p| p.image().to_vec()).collect()
}

pub fn permutations(n: usize, images: &[Vec<usize>]) -> Result<Vec<Permutation>> {
    images
        .iter()
        .map(|img| {
            if img.len() != n {
                return Err(HarnessError::Format(format!(
                    "permutation {img:?} does not have order {n}"
                )));
            }
            Ok(Permutation::new(img.clone())?)
        })
        .collect()
}

/// Basis file for one order: `{"n": …, "permutations": [[…], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisFile {
    pub n: usize,
    pub permutations: Vec<Vec<usize>>,
}

impl BasisFile {
    pub fn new(n: usize, perms: &[Permutation]) -> Self {
        Self {
            n,
            permutations: images(perms),
        }
    }

    /// Decodes the permutations, rejecting any whose pair indicators are
    /// linearly dependent.
    pub fn decode(&self) -> Result<Vec<Permutation>> {
        let perms = permutations(self.n, &self.permutations)?;
        if self.n >= 2 {
            let m = num_edges(self.n);
            let mut span = Gf2Basis::new(m * m);
            for p in &perms {
                if let Insertion::Dependent(_) = span.insert(tpn(p).into_bits())? {
                    return Err(HarnessError::Format(format!(
                        "basis file for order {} is linearly dependent",
                        self.n
                    )));
                }
            }
        }
        Ok(perms)
    }
}

/// Serialized canonical basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalBasisFile {
    pub n: usize,
    pub graph_edges: Vec<usize>,
    pub complement_order: Vec<usize>,
    /// Seed of the shuffled basis order; absent for lexicographic order.
    pub basis_seed: Option<u64>,
    pub layers: Vec<Vec<Vec<usize>>>,
}

impl CanonicalBasisFile {
    pub fn new(cb: &CanonicalBasis) -> Self {
        Self {
            n: cb.order(),
            graph_edges: cb.graph().edge_indices().collect(),
            complement_order: cb.complement_order().to_vec(),
            basis_seed: cb.perm_order().seed(),
            layers: cb.layers().iter().map(|l| images(l)).collect(),
        }
    }

    pub fn decode(&self, caps: &OracleCaps) -> Result<CanonicalBasis> {
        let graph = TimeGraph::from_edge_indices(self.n, self.graph_edges.iter().copied())?;
        let layers = self
            .layers
            .iter()
            .map(|l| permutations(self.n, l))
            .collect::<Result<Vec<_>>>()?;
        let perm_order = self
            .basis_seed
            .map_or(PermOrder::Lexicographic, PermOrder::Shuffled);
        Ok(CanonicalBasis::from_layers(
            &graph,
            &self.complement_order,
            perm_order,
            layers,
            caps,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hamtg_core::canonical::build_canonical_basis;
    use hamtg_core::timegraph::reduce_hamp;

    #[test]
    fn graph_file_tolerates_duplicates_and_comments() {
        let g = parse_graph("# triangle\n3\n1 2\n2 1\n\n2 3\n1 2\n3 1\n").unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), [(1, 2), (1, 3), (2, 3)]);
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn graph_file_errors_carry_line_numbers() {
        let err = parse_graph("3\n1 2\n2 2\n").unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 3, .. }), "{err}");
        assert!(matches!(
            parse_graph("3\n1 2 3\n").unwrap_err(),
            HarnessError::Parse { line: 2, .. }
        ));
        assert!(matches!(
            parse_graph("3\n1 4\n").unwrap_err(),
            HarnessError::Parse { line: 2, .. }
        ));
        assert!(parse_graph("").is_err());
        assert!(parse_graph("x\n").is_err());
    }

    #[test]
    fn time_graph_roundtrip() {
        let tg = reduce_hamp(&Graph::cycle(4));
        let text = write_time_graph(&tg);
        assert!(text.starts_with("4\n"));
        assert_eq!(parse_time_graph(&text).unwrap(), tg);
        assert!(parse_time_graph("3\n18\n").is_err());
    }

    #[test]
    fn basis_file_rejects_dependent_sets() {
        let perms = Permutation::all(3);
        let mut all = BasisFile::new(3, &perms);
        assert_eq!(all.decode().unwrap(), perms);
        all.permutations.push(vec![1, 2, 3]);
        assert!(all.decode().is_err());
        let wrong = BasisFile {
            n: 3,
            permutations: vec![vec![1, 2]],
        };
        assert!(wrong.decode().is_err());
    }

    #[test]
    fn canonical_basis_roundtrip() {
        let caps = OracleCaps::default();
        let tg = reduce_hamp(&Graph::star(3));
        let mut order: Vec<_> = tg.complement_indices().collect();
        order.reverse();
        let cb = build_canonical_basis(&tg, &order, PermOrder::Shuffled(5), &caps).unwrap();
        let file = CanonicalBasisFile::new(&cb);
        let json = serde_json::to_string(&file).unwrap();
        let back: CanonicalBasisFile = serde_json::from_str(&json).unwrap();
        let decoded = back.decode(&caps).unwrap();
        assert_eq!(decoded.layers(), cb.layers());
        assert_eq!(decoded.perm_order(), PermOrder::Shuffled(5));
    }
}
