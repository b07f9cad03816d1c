//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p hamtg --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hamtg::cache::BasisCache;
use hamtg::campaign::{parse_records, CampaignSummary, ConjectureTally};
use hamtg::crossval::{run_crossval, CrossvalSource};
use hamtg_core::canonical::first_tail_identity_failure;
use hamtg_core::gf2::{rank, Gf2Basis, Insertion};
use hamtg_core::lab::{check_instance, sample_instances, Conjecture2Mode};
use hamtg_core::liftbasis::{algorithm1, Lift};
use hamtg_core::permvec::{pe_map_index, pmap, tn, tpn, value, value_pair, EdgeVector, PairVector};
use hamtg_core::timegraph::{
    edge_from_index, hamiltonian_path_oracle, is_hamiltonian_oracle, num_edges, reduce_hamp, Graph,
    OracleCaps, Permutation,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn oracle_equivalence() -> Outcome {
    let caps = OracleCaps::default();
    let mut graphs = 0;
    for n in 3..=5 {
        for g in Graph::all(n) {
            let direct = hamiltonian_path_oracle(&g, &caps).map_err(|e| e.to_string())?;
            let reduced =
                is_hamiltonian_oracle(&reduce_hamp(&g), &caps).map_err(|e| e.to_string())?;
            ensure!(
                direct == reduced,
                "mismatch on {:?}",
                g.edges().collect::<Vec<_>>()
            );
            graphs += 1;
        }
    }
    ensure!(graphs == 8 + 64 + 1024, "enumerated {graphs} graphs");
    Ok(format!("{graphs} graphs, 0 mismatches"))
}

fn check_single(p: &Permutation) -> Result<(), String> {
    let n = p.order();
    let f = tn(p);
    let g = tpn(p);
    ensure!(pmap(&g) == f, "P(T_P(π)) ≠ T(π) for {p:?}");
    ensure!(value(&f) && value_pair(&g), "value of {p:?} is not one");
    for k in 0..num_edges(n) {
        let row = pe_map_index(&g, k);
        let expected = if f.get(k) {
            f.clone()
        } else {
            EdgeVector::zero(n)
        };
        ensure!(row == expected, "row {k} of T_P({p:?})");
    }
    Ok(())
}

fn check_combination(n: usize, subset: &[&Permutation], coeffs_sum: bool) -> Result<(), String> {
    let f = subset
        .iter()
        .fold(EdgeVector::zero(n), |acc, p| acc.xor(&tn(p)));
    let g = PairVector::sum_of(n, subset.iter().copied());
    ensure!(
        value(&f) == coeffs_sum,
        "v(f) differs from the coefficient sum"
    );
    ensure!(
        value_pair(&g) == coeffs_sum,
        "v(g) differs from the coefficient sum"
    );
    ensure!(g.is_symmetric(), "combination is not symmetric");
    ensure!(pmap(&g) == f, "P is not linear on the combination");
    for e in 0..num_edges(n) {
        if subset.iter().all(|p| tn(p).get(e)) {
            ensure!(value(&f) == f.get(e), "v(f) ≠ f(e) at common edge {e}");
            ensure!(
                value_pair(&g) == g.get(e, e),
                "v(g) ≠ g(e, e) at common edge {e}"
            );
        }
    }
    Ok(())
}

fn indicator_properties() -> Outcome {
    let mut checks = 0;
    for n in [3, 4] {
        let all = Permutation::all(n);
        for p in &all {
            check_single(p)?;
            checks += 1;
        }
        for a in &all {
            for b in &all {
                if a != b {
                    check_combination(n, &[a, b], false)?;
                    checks += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let all = Permutation::all(5);
    for trial in 0..1000 {
        let mut pool: Vec<&Permutation> = if trial % 2 == 0 {
            all.iter().collect()
        } else {
            let e = all[rng.random_range(0..all.len())]
                .incident_edge_indices()
                .next()
                .expect("order five has edges");
            all.iter().filter(|p| tn(p).get(e)).collect()
        };
        pool.shuffle(&mut rng);
        let k = rng.random_range(1..=pool.len().min(12));
        check_combination(5, &pool[..k], k % 2 == 1)?;
        checks += 1;
    }
    Ok(format!("{checks} checks, 0 failures"))
}

fn tail_identity() -> Outcome {
    let caps = OracleCaps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut instances = 0;
    for (n, count) in [(4, 1000), (5, 200)] {
        let basis = algorithm1(n, 5).map_err(|e| e.to_string())?;
        for _ in 0..count {
            let (ctx, sampled) =
                sample_instances(n, 2, &basis, &caps, &mut rng).map_err(|e| e.to_string())?;
            // The second instance carries a random enumeration and basis order.
            let instance = &sampled[1];
            let outcome = check_instance(instance, &ctx, Conjecture2Mode::TopLayer, &caps)
                .map_err(|e| format!("instance failed: {e}"))?;
            let dec = &outcome.conjecture1.decomposition;
            let cb = hamtg_core::canonical::build_canonical_basis(
                &instance.graph,
                &instance.complement_order,
                instance.perm_order,
                &caps,
            )
            .map_err(|e| e.to_string())?;
            ensure!(
                first_tail_identity_failure(dec, &cb).is_none(),
                "tail identity fails on {:?}",
                instance.graph.edge_indices().collect::<Vec<_>>()
            );
            instances += 1;
        }
    }
    Ok(format!("{instances} instances, 0 failures"))
}

fn lift_transport() -> Outcome {
    let mut checks = 0usize;
    let mut check =
        |n: usize, i: usize, p: &Permutation, a: usize, b: usize| -> Result<(), String> {
            let lift = Lift::canonical(n, i).map_err(|e| e.to_string())?;
            let (e, e2) = (
                edge_from_index(a, n - 1).unwrap(),
                edge_from_index(b, n - 1).unwrap(),
            );
            let lifted = lift.q_lift(p).map_err(|e| e.to_string())?;
            ensure!(lifted.at(1) == i, "q_lift does not start at the anchor");
            ensure!(
                lift.q_unlift(&lifted).ok().flatten().as_ref() == Some(p),
                "q_lift is not invertible"
            );
            let (re, re2) = (lift.r_lift(e).unwrap(), lift.r_lift(e2).unwrap());
            ensure!(lift.r_unlift(re) == Some(e), "r_lift is not invertible");
            ensure!(
                tpn(p).at(e, e2).unwrap() == tpn(&lifted).at(re, re2).unwrap(),
                "transport fails for i={i} {p:?} {e} {e2}"
            );
            checks += 1;
            Ok(())
        };
    let m3 = num_edges(3);
    for i in 1..=4 {
        for p in Permutation::all(3) {
            for a in 0..m3 {
                for b in 0..m3 {
                    check(4, i, &p, a, b)?;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let s4 = Permutation::all(4);
    for _ in 0..20_000 {
        let p = &s4[rng.random_range(0..s4.len())];
        let (a, b) = (
            rng.random_range(0..num_edges(4)),
            rng.random_range(0..num_edges(4)),
        );
        check(5, rng.random_range(1..=5), p, a, b)?;
    }
    Ok(format!("{checks} transport checks, 0 failures"))
}

fn span_membership() -> Outcome {
    let mut checks = 0;
    for n in 3..=5 {
        let basis = algorithm1(n, 5).map_err(|e| e.to_string())?;
        let m = num_edges(n);
        let mut span = Gf2Basis::new(m * m);
        for p in &basis {
            span.insert(tpn(p).into_bits()).map_err(|e| e.to_string())?;
        }
        for p in Permutation::all(n) {
            ensure!(
                span.contains(tpn(&p).bits()).unwrap(),
                "T_P({p:?}) outside the span at order {n}"
            );
            checks += 1;
        }
    }
    ensure!(checks == 6 + 24 + 120, "made {checks} membership checks");
    Ok(format!("{checks} membership checks, 0 failures"))
}

fn basis_consistency() -> Outcome {
    let mut sizes = Vec::new();
    for n in 3..=5 {
        let basis = algorithm1(n, 5).map_err(|e| e.to_string())?;
        let brute: Vec<_> = Permutation::all(n)
            .iter()
            .map(|p| tpn(p).into_bits())
            .collect();
        let brute_rank = rank(&brute).map_err(|e| e.to_string())?;
        let mut span = Gf2Basis::new(num_edges(n) * num_edges(n));
        for p in &basis {
            ensure!(
                matches!(
                    span.insert(tpn(p).into_bits()),
                    Ok(Insertion::Extended { .. })
                ),
                "lifted basis is dependent at order {n}"
            );
        }
        ensure!(
            basis.len() == brute_rank,
            "order {n}: N = {} but rank = {brute_rank}",
            basis.len()
        );
        sizes.push(format!("N({n}) = {}", basis.len()));
    }
    Ok(sizes.join(", "))
}

fn no_false_negatives() -> Outcome {
    let caps = OracleCaps::default();
    let mut cache = BasisCache::in_memory(6);
    let mut parts = Vec::new();
    for (n, source) in [
        (4, CrossvalSource::Exhaustive),
        (5, CrossvalSource::Exhaustive),
        (
            6,
            CrossvalSource::Random {
                count: 200,
                seed: 42,
            },
        ),
    ] {
        let report = run_crossval(n, source, &mut cache, &caps).map_err(|e| e.to_string())?;
        ensure!(
            report.counts.false_negative == 0,
            "order {n}: {} false negatives",
            report.counts.false_negative
        );
        for fp in &report.false_positives {
            ensure!(
                fp.conjecture1.implication_ok && fp.conjecture2.implication_ok,
                "false positive {:?} breaks the non-Hamiltonian implication",
                fp.edges
            );
            let replayed = hamtg::campaign::replay(
                &[fp.conjecture1.clone(), fp.conjecture2.clone()],
                &mut cache,
                &caps,
            )
            .map_err(|e| e.to_string())?;
            ensure!(
                replayed.mismatches.is_empty(),
                "false positive witness does not replay"
            );
        }
        let c = report.counts;
        parts.push(format!(
            "n={n}: {} yes, {} no, {} false positives",
            c.agree_yes, c.agree_no, c.false_positive
        ));
    }
    Ok(parts.join("; "))
}

fn hamtg(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let output = Command::new(env!("CARGO_BIN_EXE_hamtg"))
        .args(args)
        .env_remove("HAMTG_CACHE_DIR")
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        output.status.success(),
        "hamtg {} exited with {}: {}",
        args.join(" "),
        output.status,
        String::from_utf8_lossy(&output.stderr)
    );
    Ok(output.stdout)
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hamtg-acceptance-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).expect("creating a scratch directory");
    dir
}

fn determinism() -> Outcome {
    let dir = scratch_dir("determinism");
    let runs = [
        vec!["basis", "--order", "5"],
        vec![
            "conjectures",
            "--n",
            "4",
            "--trials",
            "50",
            "--seed",
            "17",
            "--orders",
            "2",
        ],
        vec![
            "conjectures",
            "--n",
            "5",
            "--trials",
            "10",
            "--seed",
            "3",
            "--descent",
        ],
    ];
    for args in &runs {
        let first = hamtg(&dir, args)?;
        let second = hamtg(&dir, args)?;
        ensure!(
            !first.is_empty(),
            "hamtg {} produced no output",
            args.join(" ")
        );
        ensure!(
            first == second,
            "hamtg {} is not deterministic",
            args.join(" ")
        );
    }
    let cached_dir = dir.join("cache");
    let cached = hamtg(
        &dir,
        &[
            "--cache-dir",
            cached_dir.to_str().unwrap(),
            "basis",
            "--order",
            "5",
        ],
    )?;
    let warm = hamtg(
        &dir,
        &[
            "--cache-dir",
            cached_dir.to_str().unwrap(),
            "basis",
            "--order",
            "5",
        ],
    )?;
    ensure!(
        cached == hamtg(&dir, &runs[0])? && warm == cached,
        "cached basis output differs"
    );
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!(
        "{} commands byte-identical across runs",
        runs.len()
    ))
}

fn partitions(tally: Option<ConjectureTally>, trials: usize) -> bool {
    tally.is_some_and(|t| t.trials.total() == trials)
}

fn campaigns() -> Outcome {
    let dir = scratch_dir("campaigns");
    let mut parts = Vec::new();
    for (n, trials) in [(4usize, 500usize), (5, 100)] {
        let file = dir.join(format!("campaign-{n}.jsonl"));
        hamtg(
            &dir,
            &[
                "--out",
                file.to_str().unwrap(),
                "conjectures",
                "--n",
                &n.to_string(),
                "--trials",
                &trials.to_string(),
                "--seed",
                "2024",
            ],
        )?;
        let text = std::fs::read_to_string(&file).map_err(|e| e.to_string())?;
        let (reports, summary) = parse_records(&text).map_err(|e| e.to_string())?;
        let summary: CampaignSummary = summary.ok_or("campaign output has no summary")?;
        ensure!(reports.len() == summary.reports, "report count mismatch");
        ensure!(
            partitions(summary.conjecture1, trials),
            "first conjecture tally does not partition"
        );
        ensure!(
            partitions(summary.conjecture2, trials),
            "second conjecture tally does not partition"
        );
        ensure!(
            summary.implication_failures == 0,
            "implication check failed"
        );
        let replay = hamtg(&dir, &["replay", file.to_str().unwrap()])?;
        let replay: hamtg::campaign::ReplaySummary =
            serde_json::from_slice(&replay).map_err(|e| e.to_string())?;
        ensure!(
            replay.replayed == reports.len() && replay.mismatches.is_empty(),
            "replay mismatch"
        );
        let (c1, c2) = (
            summary.conjecture1.unwrap().trials,
            summary.conjecture2.unwrap().trials,
        );
        parts.push(format!(
            "n={n}: C1 {}/{}/{} C2 {}/{}/{} (holds/violated/vacuous), {} reports replayed",
            c1.holds, c1.violated, c1.vacuous, c2.holds, c2.violated, c2.vacuous, replay.replayed
        ));
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(parts.join("; "))
}

fn run(name: &str, limit: Duration, check: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(check))
        .unwrap_or_else(|_| Err("panicked".to_string()));
    let elapsed = start.elapsed();
    let result = result.and_then(|detail| {
        if elapsed > limit {
            Err(format!("took {elapsed:.1?}, limit {limit:?}"))
        } else {
            Ok(detail)
        }
    });
    match &result {
        Ok(detail) => println!("PASS  {name}: {detail} [{elapsed:.2?}]"),
        Err(detail) => println!("FAIL  {name}: {detail} [{elapsed:.2?}]"),
    }
    result.is_ok()
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|info| eprintln!("  {info}")));
    let minute = Duration::from_secs(60);
    let criteria: [Criterion; 9] = [
        (
            "1 reduction equivalence, n = 3..5",
            minute,
            oracle_equivalence,
        ),
        ("2 indicator identities", minute, indicator_properties),
        ("3 tail identity regression", 5 * minute, tail_identity),
        (
            "4 lift bijections and incidence transport",
            minute,
            lift_transport,
        ),
        ("5 span of the lifted basis", 10 * minute, span_membership),
        (
            "6 lifted basis size equals brute-force rank",
            10 * minute,
            basis_consistency,
        ),
        ("7 no false negatives", 10 * minute, no_false_negatives),
        ("8 deterministic output", 10 * minute, determinism),
        ("9 conjecture campaigns and replay", 10 * minute, campaigns),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        if !run(name, limit, check) {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
