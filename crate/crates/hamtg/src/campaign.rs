//! Seeded conjecture campaigns and their replay.
//!
//! A campaign draws `trials` time-graphs with one supported element each
//! and checks the selected conjectures under `orders` choices of complement
//! enumeration and basis order. Output is JSON lines: one
//! [`ConjectureReport`] per (trial, order, conjecture) and a closing
//! [`CampaignSummary`]. All randomness flows from one ChaCha8 stream, so
//! equal configurations give byte-identical output.

use std::collections::BTreeMap;
use std::time::Instant;

use hamtg_core::canonical::PermOrder;
use hamtg_core::lab::{
    check_instance, sample_instances, Conjecture2Mode, Generator, GraphContext, GraphSource,
    Instance, InstanceOutcome, Verdict,
};
use hamtg_core::timegraph::{OracleCaps, TimeGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cache::BasisCache;
use crate::error::{HarnessError, Result};
use crate::formats::{images, permutations};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictRecord {
    Holds,
    Violated,
    Vacuous,
}

impl From<Verdict> for VerdictRecord {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Holds => Self::Holds,
            Verdict::Violated => Self::Violated,
            Verdict::Vacuous => Self::Vacuous,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceRecord {
    Reduction { mask: u64 },
    Bernoulli { percent: u32 },
}

impl From<GraphSource> for SourceRecord {
    fn from(s: GraphSource) -> Self {
        match s {
            GraphSource::Reduction { mask } => Self::Reduction { mask },
            GraphSource::Bernoulli { percent } => Self::Bernoulli { percent },
        }
    }
}

impl From<SourceRecord> for GraphSource {
    fn from(s: SourceRecord) -> Self {
        match s {
            SourceRecord::Reduction { mask } => Self::Reduction { mask },
            SourceRecord::Bernoulli { percent } => Self::Bernoulli { percent },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorRecord {
    IncidentSum,
    SubspaceSpan,
}

impl From<Generator> for GeneratorRecord {
    fn from(g: Generator) -> Self {
        match g {
            Generator::IncidentSum => Self::IncidentSum,
            Generator::SubspaceSpan => Self::SubspaceSpan,
        }
    }
}

impl From<GeneratorRecord> for Generator {
    fn from(g: GeneratorRecord) -> Self {
        match g {
            GeneratorRecord::IncidentSum => Self::IncidentSum,
            GeneratorRecord::SubspaceSpan => Self::SubspaceSpan,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeRecord {
    #[default]
    TopLayer,
    Descent,
}

impl From<ModeRecord> for Conjecture2Mode {
    fn from(m: ModeRecord) -> Self {
        match m {
            ModeRecord::TopLayer => Self::TopLayer,
            ModeRecord::Descent => Self::Descent,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub layer: usize,
    /// Supported-subspace basis indices of the preimage; absent when none exists.
    pub preimage: Option<Vec<usize>>,
}

/// One conjecture check, with everything needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub instance: String,
    pub trial: usize,
    pub order_index: usize,
    pub n: usize,
    pub conjecture: u8,
    pub mode: ModeRecord,
    pub graph_edges: Vec<usize>,
    pub graph_source: SourceRecord,
    pub complement_order: Vec<usize>,
    pub basis_seed: Option<u64>,
    pub generator: GeneratorRecord,
    /// `g` is the xor of these permutations' pair indicators.
    pub g_perms: Vec<Vec<usize>>,
    pub hamiltonian: bool,
    pub value: bool,
    pub verdict: VerdictRecord,
    /// The failing `m` (first conjecture) or `j` (second conjecture).
    pub failing: Option<usize>,
    pub layer_sizes: Vec<usize>,
    /// For each layer `i`, the `j` with `α(i, j) = 1`.
    pub alpha: Vec<Vec<usize>>,
    /// The `m` with `f^{(m)}(e_m) = 1`.
    pub entry_ones: Vec<usize>,
    /// Layers whose sum `f^{(i)}` has value one.
    pub odd_layers: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<StepRecord>,
    pub implication_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<u64>,
}

impl ConjectureReport {
    pub fn build(
        trial: usize,
        order_index: usize,
        conjecture: u8,
        mode: ModeRecord,
        instance: &Instance,
        outcome: &InstanceOutcome,
    ) -> Self {
        let c1 = &outcome.conjecture1;
        let dec = &c1.decomposition;
        let (verdict, failing, steps) = match conjecture {
            1 => (c1.verdict.into(), c1.failing_m, Vec::new()),
            _ => {
                let c2 = &outcome.conjecture2;
                let steps = c2
                    .steps
                    .iter()
                    .map(|s| StepRecord {
                        layer: s.layer,
                        preimage: s.preimage.clone(),
                    })
                    .collect();
                (c2.verdict.into(), c2.failing_j, steps)
            }
        };
        Self {
            instance: format!("t{trial}-o{order_index}"),
            trial,
            order_index,
            n: instance.graph.order(),
            conjecture,
            mode,
            graph_edges: instance.graph.edge_indices().collect(),
            graph_source: instance.source.into(),
            complement_order: instance.complement_order.clone(),
            basis_seed: instance.perm_order.seed(),
            generator: instance.generator.into(),
            g_perms: images(&instance.g_perms),
            hamiltonian: outcome.hamiltonian,
            value: outcome.value,
            verdict,
            failing,
            layer_sizes: outcome.layer_sizes.clone(),
            alpha: dec.alpha.iter().map(|a| a.iter_ones().collect()).collect(),
            entry_ones: c1
                .entry_bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(k, _)| k + 1)
                .collect(),
            odd_layers: c1.odd_layers.clone(),
            steps,
            implication_ok: outcome.implication_ok,
            timing_us: None,
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        Ok(Instance {
            graph: TimeGraph::from_edge_indices(self.n, self.graph_edges.iter().copied())?,
            source: self.graph_source.into(),
            generator: self.generator.into(),
            complement_order: self.complement_order.clone(),
            perm_order: self
                .basis_seed
                .map_or(PermOrder::Lexicographic, PermOrder::Shuffled),
            g_perms: permutations(self.n, &self.g_perms)?,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub holds: usize,
    pub violated: usize,
    pub vacuous: usize,
}

impl VerdictCounts {
    pub fn add(&mut self, v: VerdictRecord) {
        match v {
            VerdictRecord::Holds => self.holds += 1,
            VerdictRecord::Violated => self.violated += 1,
            VerdictRecord::Vacuous => self.vacuous += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.holds + self.violated + self.vacuous
    }
}

/// Per-conjecture tallies. Trial verdicts aggregate over orders: violated
/// if any order is violated, otherwise holds if any order holds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureTally {
    pub trials: VerdictCounts,
    pub reports: VerdictCounts,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub orders: usize,
    pub mode: ModeRecord,
    pub basis_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjecture1: Option<ConjectureTally>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjecture2: Option<ConjectureTally>,
    pub reports: usize,
    pub nonhamiltonian_value_one: usize,
    pub implication_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CampaignRecord {
    Report(Box<ConjectureReport>),
    Summary(CampaignSummary),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// `None` checks both conjectures.
    pub conjecture: Option<u8>,
    pub orders: usize,
    pub mode: ModeRecord,
    pub timing: bool,
}

impl CampaignConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        Self {
            n,
            trials,
            seed,
            conjecture: None,
            orders: 1,
            mode: ModeRecord::TopLayer,
            timing: false,
        }
    }

    fn conjectures(&self) -> Vec<u8> {
        match self.conjecture {
            Some(c) => vec![c],
            None => vec![1, 2],
        }
    }
}

fn aggregate(verdicts: &[VerdictRecord]) -> VerdictRecord {
    if verdicts.contains(&VerdictRecord::Violated) {
        VerdictRecord::Violated
    } else if verdicts.contains(&VerdictRecord::Holds) {
        VerdictRecord::Holds
    } else {
        VerdictRecord::Vacuous
    }
}

/// Runs a campaign, handing each record to `sink` as it is produced.
pub fn run_campaign(
    config: &CampaignConfig,
    cache: &mut BasisCache,
    caps: &OracleCaps,
    mut sink: impl FnMut(&CampaignRecord) -> Result<()>,
) -> Result<CampaignSummary> {
    if let Some(c) = config.conjecture {
        if c != 1 && c != 2 {
            return Err(HarnessError::Format(format!("unknown conjecture {c}")));
        }
    }
    let basis = cache.get(config.n)?.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let conjectures = config.conjectures();
    let mut tallies = [ConjectureTally::default(); 2];
    let mut reports = 0;
    let mut nonham_value_one = 0;
    let mut implication_failures = 0;

    for trial in 0..config.trials {
        let (ctx, instances) = sample_instances(config.n, config.orders, &basis, caps, &mut rng)?;
        let mut per_conjecture: [Vec<VerdictRecord>; 2] = Default::default();
        for (order_index, instance) in instances.iter().enumerate() {
            let start = Instant::now();
            let outcome = check_instance(instance, &ctx, config.mode.into(), caps)?;
            let elapsed = start.elapsed().as_micros() as u64;
            if !outcome.hamiltonian && outcome.value {
                nonham_value_one += 1;
            }
            if !outcome.implication_ok {
                implication_failures += 1;
            }
            for &c in &conjectures {
                let mut report =
                    ConjectureReport::build(trial, order_index, c, config.mode, instance, &outcome);
                if config.timing {
                    report.timing_us = Some(elapsed);
                }
                let slot = usize::from(c - 1);
                tallies[slot].reports.add(report.verdict);
                per_conjecture[slot].push(report.verdict);
                reports += 1;
                sink(&CampaignRecord::Report(Box::new(report)))?;
            }
        }
        for &c in &conjectures {
            let slot = usize::from(c - 1);
            tallies[slot].trials.add(aggregate(&per_conjecture[slot]));
        }
    }

    let summary = CampaignSummary {
        n: config.n,
        trials: config.trials,
        seed: config.seed,
        orders: config.orders.max(1),
        mode: config.mode,
        basis_size: basis.len(),
        conjecture1: conjectures.contains(&1).then_some(tallies[0]),
        conjecture2: conjectures.contains(&2).then_some(tallies[1]),
        reports,
        nonhamiltonian_value_one: nonham_value_one,
        implication_failures,
    };
    sink(&CampaignRecord::Summary(summary.clone()))?;
    Ok(summary)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplaySummary {
    pub replayed: usize,
    pub violated_replayed: usize,
    pub mismatches: Vec<String>,
}

/// Re-runs every report and compares the regenerated report field by field
/// (timing excluded).
pub fn replay(
    reports: &[ConjectureReport],
    cache: &mut BasisCache,
    caps: &OracleCaps,
) -> Result<ReplaySummary> {
    let mut contexts: BTreeMap<(usize, Vec<usize>), GraphContext> = BTreeMap::new();
    let mut summary = ReplaySummary::default();
    for report in reports {
        let instance = report.to_instance()?;
        let key = (report.n, report.graph_edges.clone());
        if !contexts.contains_key(&key) {
            let basis = cache.get(report.n)?;
            contexts.insert(
                key.clone(),
                GraphContext::new(&instance.graph, basis, caps)?,
            );
        }
        let outcome = check_instance(&instance, &contexts[&key], report.mode.into(), caps)?;
        let mut again = ConjectureReport::build(
            report.trial,
            report.order_index,
            report.conjecture,
            report.mode,
            &instance,
            &outcome,
        );
        again.timing_us = report.timing_us;
        summary.replayed += 1;
        if report.verdict == VerdictRecord::Violated {
            summary.violated_replayed += 1;
        }
        if &again != report {
            summary.mismatches.push(format!(
                "{} (conjecture {}): stored {:?}, replayed {:?}",
                report.instance, report.conjecture, report.verdict, again.verdict
            ));
        }
    }
    Ok(summary)
}

/// Parses JSON-lines campaign output, returning the reports and the summary.
pub fn parse_records(text: &str) -> Result<(Vec<ConjectureReport>, Option<CampaignSummary>)> {
    let mut reports = Vec::new();
    let mut summary = None;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        match serde_json::from_str::<CampaignRecord>(line)? {
            CampaignRecord::Report(r) => reports.push(*r),
            CampaignRecord::Summary(s) => summary = Some(s),
        }
    }
    Ok((reports, summary))
}
