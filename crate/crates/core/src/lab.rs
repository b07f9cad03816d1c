//! Experiment machinery: supported subspaces, the two conjecture checks,
//! instance sampling, cross-validation of the decision procedure against
//! the backtracking oracle, and the dimension table.
//!
//! Everything here is deterministic given its inputs; randomness comes in
//! only through caller-supplied RNGs, so a seeded campaign replays exactly.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::canonical::{
    build_canonical_basis, decompose, first_tail_identity_failure, CanonicalBasis, Decomposition,
    PermOrder,
};
use crate::error::{Error, Result};
use crate::gf2::{self, BitVec, Gf2Basis, Insertion};
use crate::liftbasis::algorithm1;
use crate::permvec::{first_unsupported_row, pmap, tn, tpn, value_pair, EdgeVector, PairVector};
use crate::solver::{algorithm2_with_basis, pair_constraint_rows, span_element, Decision};
use crate::timegraph::{
    find_hamiltonian_path, incident_permutations, num_edges, reduce_hamp, Graph, OracleCaps,
    Permutation, TimeGraph,
};

/// Basis of `{g ∈ H_P^n : support(g) ⊆ G}`, obtained as the solution space
/// of the homogeneous pair constraints over a basis of `H_P^n`.
#[derive(Clone, Debug)]
pub struct SupportedSubspace {
    n: usize,
    /// Coefficients over the `H_P^n` basis, one per subspace basis vector.
    pub alphas: Vec<BitVec>,
    pub vectors: Vec<PairVector>,
}

impl SupportedSubspace {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn order(&self) -> usize {
        self.n
    }
}

pub fn supported_subspace(graph: &TimeGraph, basis: &[Permutation]) -> Result<SupportedSubspace> {
    let n = graph.order();
    let rows: Vec<BitVec> = pair_constraint_rows(graph, basis)?
        .into_iter()
        .map(|(coeffs, _)| coeffs)
        .collect();
    let solution = gf2::solve(basis.len(), &rows, &BitVec::zeros(rows.len()))?.ok_or(
        Error::Inconsistent("homogeneous system reported inconsistent"),
    )?;
    let vectors = solution
        .nullspace
        .iter()
        .map(|alpha| span_element(n, basis, alpha))
        .collect();
    Ok(SupportedSubspace {
        n,
        alphas: solution.nullspace,
        vectors,
    })
}

/// Span of `P(v)` over a supported subspace, able to hand back a supported
/// preimage of any member.
#[derive(Clone, Debug)]
pub struct DiagonalSpan {
    span: Gf2Basis,
    /// Subspace vector index behind each accepted original.
    sources: Vec<usize>,
}

impl DiagonalSpan {
    pub fn new(subspace: &SupportedSubspace) -> Self {
        let mut span = Gf2Basis::new(num_edges(subspace.n));
        let mut sources = Vec::new();
        for (k, v) in subspace.vectors.iter().enumerate() {
            if let Ok(Insertion::Extended { .. }) = span.insert(pmap(v).into_bits()) {
                sources.push(k);
            }
        }
        Self { span, sources }
    }

    pub fn rank(&self) -> usize {
        self.span.rank()
    }

    /// A supported `g'` with `P(g') = f`, as indices into the subspace basis.
    pub fn preimage(&self, f: &EdgeVector) -> Result<Option<Vec<usize>>> {
        Ok(self
            .span
            .coords(f.bits())?
            .map(|c| c.iter_ones().map(|k| self.sources[k]).collect()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Holds,
    Violated,
    Vacuous,
}

/// Which reading of the second conjecture to test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Conjecture2Mode {
    /// Only the largest layer `j` with `f^{(j)} ≠ 0`.
    #[default]
    TopLayer,
    /// Repeatedly cancel the top layer with a supported preimage and
    /// recheck the remainder, down to layer 1.
    Descent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjecture1Outcome {
    pub verdict: Verdict,
    /// Smallest `m` with `⊕_{i > m} f^{(i)}(e_m) = 1`.
    pub failing_m: Option<usize>,
    /// `f^{(m)}(e_m)` for `m = 1, …, k`.
    pub entry_bits: Vec<bool>,
    /// Indices `m` whose layer sum has value one.
    pub odd_layers: Vec<usize>,
    pub decomposition: Decomposition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjecture2Step {
    pub layer: usize,
    /// Subspace basis indices of a supported preimage, when one exists.
    pub preimage: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjecture2Outcome {
    pub verdict: Verdict,
    /// The layer at which no supported preimage exists.
    pub failing_j: Option<usize>,
    pub steps: Vec<Conjecture2Step>,
    pub decomposition: Decomposition,
}

fn ensure_supported(g: &PairVector, graph: &TimeGraph) -> Result<()> {
    match first_unsupported_row(g, graph) {
        Some(e) => Err(Error::NotSupported(e)),
        None => Ok(()),
    }
}

/// Decomposes `g` and enforces the proven tail identity; a failure there is
/// an implementation bug and surfaces as an error.
fn checked_decomposition(g: &PairVector, cb: &CanonicalBasis) -> Result<Decomposition> {
    let dec = decompose(g, cb)?;
    if first_tail_identity_failure(&dec, cb).is_some() {
        return Err(Error::Inconsistent(
            "tail identity failed for a supported element",
        ));
    }
    Ok(dec)
}

/// First conjecture: `⊕_{i > m} f^{(i)}(e_m) = 0` for `m = 1, …, k − 1`.
pub fn test_conjecture1(cb: &CanonicalBasis, g: &PairVector) -> Result<Conjecture1Outcome> {
    ensure_supported(g, cb.graph())?;
    let dec = checked_decomposition(g, cb)?;
    let order = cb.complement_order();
    let k = order.len();
    let entry_bits = (1..=k)
        .map(|m| dec.layer_sums[m].get(order[m - 1]))
        .collect();
    let odd_layers = (0..dec.layer_sums.len())
        .filter(|&m| !dec.layer_sums[m].is_cycle())
        .collect();
    let (verdict, failing_m) = if k <= 1 {
        (Verdict::Vacuous, None)
    } else {
        match (1..k).find(|&m| dec.tail_at(m + 1, order[m - 1])) {
            Some(m) => (Verdict::Violated, Some(m)),
            None => (Verdict::Holds, None),
        }
    };
    Ok(Conjecture1Outcome {
        verdict,
        failing_m,
        entry_bits,
        odd_layers,
        decomposition: dec,
    })
}

/// Second conjecture: the top nonzero layer sum `f^{(j)}` has a supported
/// preimage under `P`.
pub fn test_conjecture2(
    cb: &CanonicalBasis,
    g: &PairVector,
    subspace: &SupportedSubspace,
    diagonals: &DiagonalSpan,
    mode: Conjecture2Mode,
) -> Result<Conjecture2Outcome> {
    ensure_supported(g, cb.graph())?;
    let decomposition = checked_decomposition(g, cb)?;
    let Some(top) = decomposition.top_layer() else {
        return Ok(Conjecture2Outcome {
            verdict: Verdict::Vacuous,
            failing_j: None,
            steps: Vec::new(),
            decomposition,
        });
    };

    let mut steps = Vec::new();
    let mut current = g.clone();
    let mut dec = decomposition.clone();
    let mut layer = top;
    loop {
        let preimage = diagonals.preimage(&dec.layer_sums[layer])?;
        let found = preimage.clone();
        steps.push(Conjecture2Step { layer, preimage });
        let Some(indices) = found else {
            return Ok(Conjecture2Outcome {
                verdict: Verdict::Violated,
                failing_j: Some(layer),
                steps,
                decomposition,
            });
        };
        if mode == Conjecture2Mode::TopLayer || layer <= 1 {
            break;
        }
        for k in indices {
            current.xor_assign(&subspace.vectors[k]);
        }
        dec = checked_decomposition(&current, cb)?;
        match dec.top_layer() {
            Some(next) if next >= 1 => {
                debug_assert!(next < layer);
                layer = next;
            }
            _ => break,
        }
    }
    Ok(Conjecture2Outcome {
        verdict: Verdict::Holds,
        failing_j: None,
        steps,
        decomposition,
    })
}

/// For a non-Hamiltonian `G` and a supported `g` of value one, at least one
/// conjecture check must come back violated. Returns whether that holds
/// (trivially true when the premise fails).
pub fn nonhamiltonian_implication(
    hamiltonian: bool,
    g: &PairVector,
    conjecture1: Verdict,
    conjecture2: Verdict,
) -> bool {
    hamiltonian
        || !value_pair(g)
        || conjecture1 == Verdict::Violated
        || conjecture2 == Verdict::Violated
}

/// How a trial's time-graph was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphSource {
    /// Reduction of the graph with this pair mask.
    Reduction { mask: u64 },
    /// Each edge of `K_T^n` kept independently with this probability, in percent.
    Bernoulli { percent: u32 },
}

/// How a trial's supported element was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// Random xor of indicators of permutations incident on `G`.
    IncidentSum,
    /// Random element of the supported subspace.
    SubspaceSpan,
}

/// Everything needed to replay one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: TimeGraph,
    pub source: GraphSource,
    pub generator: Generator,
    pub complement_order: Vec<usize>,
    pub perm_order: PermOrder,
    /// `g` is the xor of these permutations' pair indicators.
    pub g_perms: Vec<Permutation>,
}

impl Instance {
    pub fn g(&self) -> PairVector {
        PairVector::sum_of(self.graph.order(), &self.g_perms)
    }
}

/// Per-graph data shared by every enumeration of one trial.
#[derive(Clone, Debug)]
pub struct GraphContext {
    pub graph: TimeGraph,
    pub hamiltonian: bool,
    pub incident: Vec<Permutation>,
    pub subspace: SupportedSubspace,
    pub diagonals: DiagonalSpan,
}

impl GraphContext {
    pub fn new(graph: &TimeGraph, basis: &[Permutation], caps: &OracleCaps) -> Result<Self> {
        let incident = incident_permutations(graph, caps)?;
        let subspace = supported_subspace(graph, basis)?;
        let diagonals = DiagonalSpan::new(&subspace);
        Ok(Self {
            graph: graph.clone(),
            hamiltonian: !incident.is_empty(),
            incident,
            subspace,
            diagonals,
        })
    }
}

pub fn random_graph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Graph, u64) {
    let pairs = n * n.saturating_sub(1) / 2;
    let mask = if pairs >= 64 {
        rng.random::<u64>()
    } else {
        rng.random::<u64>() & ((1u64 << pairs) - 1)
    };
    (Graph::from_pair_mask(n, mask), mask)
}

pub fn random_time_graph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (TimeGraph, GraphSource) {
    if rng.random::<bool>() {
        let (g, mask) = random_graph(n, rng);
        (reduce_hamp(&g), GraphSource::Reduction { mask })
    } else {
        let percent = 50 + 10 * rng.random_range(0..5u32);
        let mut tg = TimeGraph::empty(n);
        for e in 0..num_edges(n) {
            if rng.random_range(0..100) < percent {
                tg.insert_index(e).expect("index in range");
            }
        }
        (tg, GraphSource::Bernoulli { percent })
    }
}

pub fn random_enumeration<R: Rng + ?Sized>(graph: &TimeGraph, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = graph.complement_indices().collect();
    order.shuffle(rng);
    order
}

/// Random supported element of `ctx`, as a list of permutations whose pair
/// indicators xor to it.
pub fn sample_supported<R: Rng + ?Sized>(
    ctx: &GraphContext,
    basis: &[Permutation],
    rng: &mut R,
) -> (Generator, Vec<Permutation>) {
    if !ctx.incident.is_empty() && rng.random::<bool>() {
        let picked = ctx
            .incident
            .iter()
            .filter(|_| rng.random::<bool>())
            .cloned()
            .collect();
        return (Generator::IncidentSum, picked);
    }
    let mut alpha = BitVec::zeros(basis.len());
    for a in &ctx.subspace.alphas {
        if rng.random::<bool>() {
            alpha.xor_assign(a);
        }
    }
    let perms = alpha.iter_ones().map(|k| basis[k].clone()).collect();
    (Generator::SubspaceSpan, perms)
}

/// Draws a trial: a time-graph, a supported element and `orders` choices of
/// (complement enumeration, basis order). The first choice is always the
/// default enumeration with lexicographic basis order.
pub fn sample_instances<R: Rng + ?Sized>(
    n: usize,
    orders: usize,
    basis: &[Permutation],
    caps: &OracleCaps,
    rng: &mut R,
) -> Result<(GraphContext, Vec<Instance>)> {
    let (graph, source) = random_time_graph(n, rng);
    let ctx = GraphContext::new(&graph, basis, caps)?;
    let (generator, g_perms) = sample_supported(&ctx, basis, rng);
    let instances = (0..orders.max(1))
        .map(|k| {
            let (complement_order, perm_order) = if k == 0 {
                (
                    graph.complement_indices().collect(),
                    PermOrder::Lexicographic,
                )
            } else {
                (
                    random_enumeration(&graph, rng),
                    PermOrder::Shuffled(rng.random()),
                )
            };
            Instance {
                graph: graph.clone(),
                source,
                generator,
                complement_order,
                perm_order,
                g_perms: g_perms.clone(),
            }
        })
        .collect();
    Ok((ctx, instances))
}

/// Both conjecture checks on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceOutcome {
    pub hamiltonian: bool,
    pub value: bool,
    pub conjecture1: Conjecture1Outcome,
    pub conjecture2: Conjecture2Outcome,
    /// The non-Hamiltonian implication held.
    pub implication_ok: bool,
    /// `d(0), …, d(k)` of the canonical basis used.
    pub layer_sizes: Vec<usize>,
}

pub fn check_instance(
    instance: &Instance,
    ctx: &GraphContext,
    mode: Conjecture2Mode,
    caps: &OracleCaps,
) -> Result<InstanceOutcome> {
    if ctx.graph != instance.graph {
        return Err(Error::Inconsistent(
            "graph context belongs to another time-graph",
        ));
    }
    let cb = build_canonical_basis(
        &instance.graph,
        &instance.complement_order,
        instance.perm_order,
        caps,
    )?;
    let g = instance.g();
    let conjecture1 = test_conjecture1(&cb, &g)?;
    let conjecture2 = test_conjecture2(&cb, &g, &ctx.subspace, &ctx.diagonals, mode)?;
    let value = value_pair(&g);
    let implication_ok = nonhamiltonian_implication(
        ctx.hamiltonian,
        &g,
        conjecture1.verdict,
        conjecture2.verdict,
    );
    Ok(InstanceOutcome {
        hamiltonian: ctx.hamiltonian,
        value,
        conjecture1,
        conjecture2,
        implication_ok,
        layer_sizes: cb.d(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossvalClass {
    AgreeYes,
    AgreeNo,
    FalsePositive,
    FalseNegative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossvalRecord {
    pub graph: Graph,
    pub oracle_path: Option<Vec<usize>>,
    pub decision: Decision,
    pub class: CrossvalClass,
}

pub fn crossval_graph(
    g: &Graph,
    basis: &[Permutation],
    caps: &OracleCaps,
) -> Result<CrossvalRecord> {
    let oracle_path = find_hamiltonian_path(g, caps)?;
    let decision = algorithm2_with_basis(g, basis)?;
    let class = match (oracle_path.is_some(), decision.answer) {
        (true, true) => CrossvalClass::AgreeYes,
        (false, false) => CrossvalClass::AgreeNo,
        (false, true) => CrossvalClass::FalsePositive,
        (true, false) => CrossvalClass::FalseNegative,
    };
    Ok(CrossvalRecord {
        graph: g.clone(),
        oracle_path,
        decision,
        class,
    })
}

/// Conjecture checks on the supported value-one element behind a false
/// positive, under the default enumeration.
pub fn false_positive_forensics(
    record: &CrossvalRecord,
    basis: &[Permutation],
    caps: &OracleCaps,
) -> Result<(Instance, InstanceOutcome)> {
    let alpha = record
        .decision
        .witness
        .as_ref()
        .ok_or(Error::Inconsistent("false positive without a witness"))?;
    let graph = reduce_hamp(&record.graph);
    let ctx = GraphContext::new(&graph, basis, caps)?;
    let instance = Instance {
        complement_order: graph.complement_indices().collect(),
        source: GraphSource::Reduction {
            mask: pair_mask(&record.graph),
        },
        generator: Generator::SubspaceSpan,
        perm_order: PermOrder::Lexicographic,
        g_perms: alpha.iter_ones().map(|k| basis[k].clone()).collect(),
        graph,
    };
    let outcome = check_instance(&instance, &ctx, Conjecture2Mode::Descent, caps)?;
    Ok((instance, outcome))
}

/// Inverse of [`Graph::from_pair_mask`] for graphs with fewer than 64 pairs.
pub fn pair_mask(g: &Graph) -> u64 {
    Graph::pair_list(g.order())
        .into_iter()
        .enumerate()
        .filter(|&(k, (i, j))| k < 64 && g.has_edge(i, j))
        .fold(0, |m, (k, _)| m | 1 << k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimensionRow {
    pub n: usize,
    pub edges: usize,
    pub dim_h: usize,
    pub dim_hp: usize,
    /// Size of the lifted basis.
    pub lifted: usize,
}

/// Brute-force ranks of `{T^n(π)}` and `{T_P^n(π)}` next to the lifted
/// basis size; the latter two must agree.
pub fn dimension_row(n: usize, max_order: usize) -> Result<DimensionRow> {
    if n == 0 || n > max_order {
        return Err(Error::ScaleExceeded { n, cap: max_order });
    }
    let perms = Permutation::all(n);
    let singles: Vec<BitVec> = perms.iter().map(|p| tn(p).into_bits()).collect();
    let pairs: Vec<BitVec> = perms.iter().map(|p| tpn(p).into_bits()).collect();
    let (dim_h, dim_hp) = if n == 1 {
        (1, 1)
    } else {
        (gf2::rank(&singles)?, gf2::rank(&pairs)?)
    };
    let lifted = algorithm1(n, max_order)?.len();
    if lifted != dim_hp {
        return Err(Error::Inconsistent(
            "lifted basis size differs from dim H_P^n",
        ));
    }
    Ok(DimensionRow {
        n,
        edges: num_edges(n),
        dim_h,
        dim_hp,
        lifted,
    })
}

pub fn dimension_table(max_n: usize, max_order: usize) -> Result<Vec<DimensionRow>> {
    (1..=max_n).map(|n| dimension_row(n, max_order)).collect()
}

/// Counts for a cross-validation run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CrossvalCounts {
    pub agree_yes: usize,
    pub agree_no: usize,
    pub false_positive: usize,
    pub false_negative: usize,
}

impl CrossvalCounts {
    pub fn record(&mut self, class: CrossvalClass) {
        match class {
            CrossvalClass::AgreeYes => self.agree_yes += 1,
            CrossvalClass::AgreeNo => self.agree_no += 1,
            CrossvalClass::FalsePositive => self.false_positive += 1,
            CrossvalClass::FalseNegative => self.false_negative += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.agree_yes + self.agree_no + self.false_positive + self.false_negative
    }
}

/// Whether some supported element has value one, which is exactly when the
/// decision procedure answers yes.
pub fn has_supported_value_one(subspace: &SupportedSubspace) -> bool {
    subspace.vectors.iter().any(value_pair)
}
