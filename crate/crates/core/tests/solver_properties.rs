use hamtg_core::gf2::mul_rows;
use hamtg_core::liftbasis::algorithm1;
use hamtg_core::permvec::{is_supported_in, value_pair};
use hamtg_core::solver::{algorithm2_with_basis, assemble_system, decide, span_element};
use hamtg_core::timegraph::{hamiltonian_path_oracle, reduce_hamp, Graph, OracleCaps};
use proptest::prelude::*;

fn graph_on(n: usize) -> impl Strategy<Value = Graph> {
    let pairs = n * (n - 1) / 2;
    (0u64..1 << pairs).prop_map(move |mask| Graph::from_pair_mask(n, mask))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witnesses_are_supported_value_one_elements(g in graph_on(5)) {
        let basis = algorithm2_basis();
        let system = assemble_system(&reduce_hamp(&g), &basis).unwrap();
        let decision = decide(&system).unwrap();
        if let Some(x) = &decision.witness {
            prop_assert!(system.is_satisfied_by(x));
            prop_assert_eq!(mul_rows(&system.coefficient_rows(), x), system.rhs());
            let element = span_element(5, &basis, x);
            prop_assert!(value_pair(&element));
            prop_assert!(is_supported_in(&element, &reduce_hamp(&g)));
        }
        if hamiltonian_path_oracle(&g, &OracleCaps::default()).unwrap() {
            prop_assert!(decision.answer);
        }
    }

    #[test]
    fn adding_edges_never_turns_yes_into_no(g in graph_on(5), extra in 0u64..1 << 10) {
        let basis = algorithm2_basis();
        let mut bigger = g.clone();
        for (k, (i, j)) in Graph::pair_list(5).into_iter().enumerate() {
            if extra >> k & 1 == 1 {
                bigger.add_edge(i, j).unwrap();
            }
        }
        let small = algorithm2_with_basis(&g, &basis).unwrap();
        let big = algorithm2_with_basis(&bigger, &basis).unwrap();
        prop_assert!(!small.answer || big.answer);
        prop_assert!(big.stats.rows <= small.stats.rows);
    }
}

fn algorithm2_basis() -> Vec<hamtg_core::timegraph::Permutation> {
    use std::sync::OnceLock;
    static BASIS: OnceLock<Vec<hamtg_core::timegraph::Permutation>> = OnceLock::new();
    BASIS.get_or_init(|| algorithm1(5, 5).unwrap()).clone()
}
