use hamtg_core::canonical::{
    build_canonical_basis, build_canonical_pair_basis, decompose, first_tail_identity_failure,
    PermOrder,
};
use hamtg_core::gf2::rank;
use hamtg_core::permvec::{pmap, tn, tpn, value, PairVector};
use hamtg_core::timegraph::{incident_permutations, num_edges, OracleCaps, Permutation, TimeGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_setup(n: usize, rng: &mut ChaCha8Rng) -> (TimeGraph, Vec<usize>) {
    let density = rng.random_range(0.3..0.95);
    let mut graph = TimeGraph::empty(n);
    for k in 0..num_edges(n) {
        if rng.random_bool(density) {
            graph.insert_index(k).unwrap();
        }
    }
    let mut order: Vec<usize> = graph.complement_indices().collect();
    order.shuffle(rng);
    (graph, order)
}

fn independent_rank(graph: &TimeGraph, caps: &OracleCaps) -> usize {
    let vs: Vec<_> = incident_permutations(graph, caps)
        .unwrap()
        .iter()
        .map(|p| tn(p).into_bits())
        .collect();
    rank(&vs).unwrap()
}

#[test]
fn prefix_ranks_match_growing_graphs() {
    let caps = OracleCaps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [3, 4] {
        for trial in 0..25 {
            let (graph, order) = random_setup(n, &mut rng);
            let perm_order = if trial % 2 == 0 {
                PermOrder::Lexicographic
            } else {
                PermOrder::Shuffled(rng.random())
            };
            let cb = build_canonical_basis(&graph, &order, perm_order, &caps).unwrap();
            assert_eq!(
                cb.len(),
                rank(
                    &Permutation::all(n)
                        .iter()
                        .map(|p| tn(p).into_bits())
                        .collect::<Vec<_>>()
                )
                .unwrap()
            );
            let mut grown = graph.clone();
            let mut previous = 0;
            for l in 0..=order.len() {
                if l > 0 {
                    grown.insert_index(order[l - 1]).unwrap();
                }
                let expected = independent_rank(&grown, &caps);
                assert_eq!(rank(&cb.prefix_vectors(l)).unwrap(), expected);
                assert_eq!(cb.d()[l], expected - previous);
                previous = expected;
                for p in &cb.layers()[l] {
                    assert!(grown.admits(p));
                }
            }
        }
    }
}

#[test]
fn pair_basis_layers_span_everything() {
    let caps = OracleCaps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in [3, 4] {
        let (graph, order) = random_setup(n, &mut rng);
        let pb =
            build_canonical_pair_basis(&graph, &order, PermOrder::Lexicographic, &caps).unwrap();
        let vs: Vec<_> = pb
            .layers
            .iter()
            .flatten()
            .map(|p| tpn(p).into_bits())
            .collect();
        assert_eq!(rank(&vs).unwrap(), vs.len());
        assert_eq!(pb.len(), if n == 3 { 6 } else { 24 });
        assert_eq!(pb.c().len(), order.len() + 1);
    }
}

#[test]
fn decomposition_of_supported_elements() {
    let caps = OracleCaps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for n in [3, 4, 5] {
        let mut checked = 0;
        while checked < 40 {
            let (graph, order) = random_setup(n, &mut rng);
            let incident = incident_permutations(&graph, &caps).unwrap();
            if incident.is_empty() {
                continue;
            }
            let chosen: Vec<_> = incident.iter().filter(|_| rng.random_bool(0.5)).collect();
            let g = PairVector::sum_of(n, chosen.iter().copied());
            let cb =
                build_canonical_basis(&graph, &order, PermOrder::Shuffled(rng.random()), &caps)
                    .unwrap();
            let dec = decompose(&g, &cb).unwrap();

            let mut rebuilt = dec.gc.clone();
            for (i, a) in dec.alpha.iter().enumerate() {
                for j in a.iter_ones() {
                    rebuilt.xor_assign(&cb.pair_element(i, j));
                }
            }
            assert_eq!(rebuilt, g);
            assert!(dec.gc.is_closed_cycle());
            let diag = dec
                .layer_sums
                .iter()
                .fold(pmap(&dec.gc), |acc, f| acc.xor(f));
            assert_eq!(diag, pmap(&g));
            assert_eq!(first_tail_identity_failure(&dec, &cb), None);

            for (m, &e) in order.iter().enumerate().map(|(k, e)| (k + 1, e)) {
                if !dec.layer_sums[m].get(e) {
                    assert!(!value(&dec.layer_sums[m]));
                }
            }
            checked += 1;
        }
    }
}
