use cpq_core::baselines::{coreness, threshold_optimal, CorenessMethod};
use cpq_core::graph::{parse_edgelist, parse_matrix_market, write_edgelist, write_matrix_market};
use cpq_core::{build_q, build_qhat, sample_sbm, ExportedQubo, Partition, SbmSpec};
use proptest::prelude::*;
use std::path::Path;

fn sbm(seed: u64) -> cpq_core::Graph {
    sample_sbm(&SbmSpec::new(30, 8, 0.6, 0.3, 0.05, seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn export_energy_is_negated_quad_form(seed in 0u64..1000, bits in proptest::collection::vec(any::<bool>(), 30)) {
        let g = sbm(seed);
        prop_assume!(g.num_edges() > 0);
        for q in [build_q(&g).unwrap(), build_qhat(&g).unwrap()] {
            let exported = ExportedQubo::from_matrix(&q);
            let mut json = Vec::new();
            exported.write_json(&mut json).unwrap();
            let mut text = Vec::new();
            exported.write_qubo_text(&mut text).unwrap();
            let from_json = ExportedQubo::read_json(json.as_slice()).unwrap();
            let from_text = ExportedQubo::read_qubo_text(text.as_slice()).unwrap();
            let want = -q.quad_form(&Partition::new(bits.clone())).unwrap();
            for e in [from_json, from_text] {
                let got = e.energy(&bits);
                prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn graph_files_round_trip(seed in 0u64..1000) {
        let g = sbm(seed);
        let mut buf = Vec::new();
        write_matrix_market(&g, &mut buf).unwrap();
        let back = parse_matrix_market(std::str::from_utf8(&buf).unwrap(), Path::new("g.mtx")).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());

        let mut buf = Vec::new();
        write_edgelist(&g, &mut buf).unwrap();
        let back = parse_edgelist(std::str::from_utf8(&buf).unwrap(), Path::new("g.txt")).unwrap();
        prop_assert_eq!(back.num_edges(), g.num_edges());
    }

    #[test]
    fn thresholded_values_are_nonnegative(seed in 0u64..1000) {
        // k = 0 is always available and scores zero
        let g = sbm(seed);
        prop_assume!(g.num_edges() > 0);
        for m in [CorenessMethod::Degree, CorenessMethod::HIndex, CorenessMethod::EigA] {
            let c = coreness(&g, m, seed).unwrap();
            let t = threshold_optimal(&g, &c).unwrap();
            prop_assert!(t.value >= 0.0);
            prop_assert_eq!(t.partition.core_size(), t.k);
        }
    }
}
