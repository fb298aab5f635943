mod common;

use common::{dense, hamming_pairs, strip};
use pima::logio::{
    parse_alignment_tsv, parse_csv, parse_traces, write_alignment_tsv, write_csv, write_traces,
    CsvConfig,
};
use pima::*;
use proptest::prelude::*;

fn log_strategy(max_traces: usize, max_len: usize, min_len: usize) -> impl Strategy<Value = Log> {
    prop::collection::vec(
        prop::collection::vec(
            prop::sample::select(vec!["a", "b", "c", "d"]),
            min_len..=max_len,
        ),
        1..=max_traces,
    )
    .prop_map(|traces| Log::from_sequences(traces.into_iter().map(|t| t.join(" "))))
}

fn alignment_strategy() -> impl Strategy<Value = Alignment> {
    (1usize..12, 0usize..16).prop_flat_map(|(n, l)| {
        prop::collection::vec((0u32..4, prop::collection::vec(any::<bool>(), n)), l).prop_map(
            move |cols| {
                Alignment::from_columns(
                    (0..n).collect(),
                    cols.into_iter().map(|(label, bits)| {
                        (
                            ActivityId(label),
                            (0..n).filter(|&p| bits[p]).collect::<Vec<_>>(),
                        )
                    }),
                )
                .unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn columnar_score_matches_pairwise_hamming(m in alignment_strategy()) {
        prop_assert_eq!(sps_columnar(&m), hamming_pairs(&dense(&m)));
        prop_assert_eq!(sps_pairwise(&m), sps_columnar(&m));
    }

    #[test]
    fn compaction_is_idempotent_and_score_preserving(m in alignment_strategy()) {
        let c = m.compact();
        prop_assert!(c.is_compact());
        prop_assert_eq!(c.compact(), c.clone());
        prop_assert_eq!(sps_columnar(&c), sps_columnar(&m));
        for p in 0..m.n_rows() {
            prop_assert_eq!(c.project_row(p).unwrap(), m.project_row(p).unwrap());
        }
    }

    #[test]
    fn column_order_does_not_change_the_score(m in alignment_strategy(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut order: Vec<usize> = (0..m.len()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(sps_columnar(&m.permute_columns(&order)), sps_columnar(&m));
    }

    #[test]
    fn merging_is_symmetric_in_score(log in log_strategy(6, 6, 0), cut in 1usize..6) {
        prop_assume!(log.len() >= 2);
        let cut = cut.min(log.len() - 1);
        let (m, _) = sequential_merge(&log, &init::GuideOrder {
            order: (0..log.len()).collect(),
            method: init::OrderMethod::RandomSequential,
        }).unwrap();
        let subset: Vec<usize> = (0..cut).collect();
        let (a, b) = m.split(&subset).unwrap();
        let ab = align_profiles(&a, &b).unwrap();
        let ba = align_profiles(&b, &a).unwrap();
        prop_assert_eq!(sps_columnar(&ab), sps_columnar(&ba));
    }

    #[test]
    fn split_and_realign_never_worsens(log in log_strategy(8, 6, 0), pick in prop::collection::vec(any::<bool>(), 8)) {
        let (m, _) = Initializer::RandomSequential.run(&log, 1).unwrap();
        let subset: Vec<usize> = (0..m.n_rows()).filter(|&p| pick[p]).collect();
        prop_assume!(!subset.is_empty() && subset.len() < m.n_rows());
        let (a, b) = m.split(&subset).unwrap();
        let merged = align_profiles(&a, &b).unwrap();
        prop_assert!(sps_columnar(&merged) <= sps_columnar(&m));
        prop_assert!(merged.preserves_traces(&log));
    }

    #[test]
    fn every_initializer_preserves_traces(log in log_strategy(8, 6, 0), seed in any::<u64>()) {
        for init in [
            Initializer::RandomSequential,
            Initializer::SortedLength { descending: false },
            Initializer::SortedActivitySum { descending: true },
            Initializer::GuideTree(Linkage::Single),
            Initializer::GuideTree(Linkage::Average),
        ] {
            let (m, _) = init.run(&log, seed).unwrap();
            prop_assert!(m.preserves_traces(&log), "{}", init);
            prop_assert!(m.is_compact());
        }
    }

    #[test]
    fn refinement_is_monotone_and_preserves_traces(log in log_strategy(8, 8, 0), seed in any::<u64>()) {
        let policy = ConvergencePolicy { seed, ..Default::default() };
        let mut ok = true;
        let run = converge_with(&log, Initializer::RandomSequential, &policy, |_, m| ok &= m.preserves_traces(&log)).unwrap();
        prop_assert!(ok);
        prop_assert!(run.records.windows(2).all(|w| w[1].pairs_score <= w[0].pairs_score));
        prop_assert_eq!(run.final_score(), sps_columnar(&run.alignment));
    }

    #[test]
    fn plain_round_trip(log in log_strategy(10, 8, 1)) {
        let text = write_traces(&log);
        let parsed = parse_traces(&text, "-").unwrap();
        prop_assert_eq!(write_traces(&parsed), text);
        prop_assert_eq!(parsed, log);
    }

    #[test]
    fn csv_round_trip(log in log_strategy(10, 8, 1)) {
        let text = write_csv(&log).unwrap();
        prop_assert_eq!(parse_csv(&text, &CsvConfig::default()).unwrap(), log);
    }

    #[test]
    fn tsv_rows_strip_to_traces(log in log_strategy(10, 8, 1), seed in any::<u64>()) {
        let (m, _) = Initializer::RandomSequential.run(&log, seed).unwrap();
        let text = write_alignment_tsv(&m, &log, "-");
        let (parsed_log, parsed) = parse_alignment_tsv(&text, "-").unwrap();
        prop_assert_eq!(sps_columnar(&parsed), sps_columnar(&m));
        let cells = dense(&parsed);
        for t in 0..log.len() {
            let row = strip(&cells[parsed.position_of(t).unwrap()]);
            let labels: Vec<&str> = row.iter().map(|&id| parsed_log.alphabet.label(ActivityId(id))).collect();
            prop_assert_eq!(labels, log.labels_of(t));
        }
    }
}
