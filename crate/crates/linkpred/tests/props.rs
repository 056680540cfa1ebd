//! Property tests of the algebraic invariants.

use linkpred::eval::{auroc, LabeledScores};
use linkpred::graph::NodeId;
use linkpred::metrics::{Pair, ScoreMatrix};
use linkpred::temporal::{decay_aggregate, DecayParams};
use proptest::prelude::*;

fn sparse_matrix(tag: &'static str) -> impl Strategy<Value = ScoreMatrix> {
    prop::collection::vec(((0u32..8, 8u32..16), 0.1f64..10.0), 0..20).prop_map(move |entries| {
        let mut m = ScoreMatrix::new(tag);
        for ((a, b), s) in entries {
            m.insert(Pair::canonical(NodeId(a), NodeId(b)), s);
        }
        m
    })
}

fn axpy(a: f64, m: &ScoreMatrix, b: f64, n: &ScoreMatrix) -> ScoreMatrix {
    let mut keys: Vec<Pair> = m.iter().map(|(p, _)| p).chain(n.iter().map(|(p, _)| p)).collect();
    keys.sort_unstable();
    keys.dedup();
    let mut out = ScoreMatrix::new(m.tag());
    for k in keys {
        out.insert(k, a * m.get(k) + b * n.get(k));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decay_is_linear(
        m1 in sparse_matrix("cn"),
        m2 in sparse_matrix("cn"),
        n1 in sparse_matrix("cn"),
        n2 in sparse_matrix("cn"),
        theta in 0.0f64..=1.0,
        a in 0.1f64..4.0,
        b in 0.1f64..4.0,
    ) {
        let params = DecayParams { theta, window_len: 2 };
        let combined = decay_aggregate(
            &[axpy(a, &m1, b, &n1), axpy(a, &m2, b, &n2)],
            &params,
        ).unwrap();
        let lhs_m = decay_aggregate(&[m1, m2], &params).unwrap();
        let lhs_n = decay_aggregate(&[n1, n2], &params).unwrap();
        let expect = axpy(a, &lhs_m, b, &lhs_n);
        let mut keys: Vec<Pair> = combined.iter().map(|(p, _)| p).collect();
        keys.extend(expect.iter().map(|(p, _)| p));
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            let (got, want) = (combined.get(k), expect.get(k));
            prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0),
                "{k}: {got} vs {want}");
        }
    }

    #[test]
    fn auroc_complement_and_monotone_invariance(
        raw in prop::collection::vec((0u8..20, prop::bool::ANY), 4..60),
        scale in 0.5f64..5.0,
        shift in -4.0f64..4.0,
    ) {
        let entries: Vec<(f64, bool)> = raw.iter().map(|&(s, l)| (s as f64, l)).collect();
        let labeled = LabeledScores::new(entries.clone()).unwrap();
        prop_assume!(labeled.positives() > 0 && labeled.negatives() > 0);
        let a = auroc(&labeled).unwrap();

        let negated = LabeledScores::new(entries.iter().map(|&(s, l)| (-s, l)).collect()).unwrap();
        let a_neg = auroc(&negated).unwrap();
        prop_assert!((a + a_neg - 1.0).abs() < 1e-12);

        // strictly increasing affine transform of integer scores is exact
        let transformed = LabeledScores::new(
            entries.iter().map(|&(s, l)| (s * scale + shift, l)).collect(),
        ).unwrap();
        prop_assert_eq!(a, auroc(&transformed).unwrap());
    }

    #[test]
    fn jaccard_bounded_and_symmetric(
        edges in prop::collection::vec((0u32..10, 0u32..10, 0.5f64..5.0), 1..40),
    ) {
        use linkpred::graph::{NeighborMode, SnapshotGraph};
        use linkpred::metrics::{jaccard, CandidateSet};
        let clean: Vec<(NodeId, NodeId, f64)> = edges
            .into_iter()
            .filter(|&(s, d, _)| s != d)
            .map(|(s, d, w)| (NodeId(s), NodeId(d), w))
            .collect();
        prop_assume!(!clean.is_empty());
        let g = SnapshotGraph::from_edges(10, clean);
        let cands = CandidateSet::new(
            (0..10u32).flat_map(|a| ((a + 1)..10).map(move |b| (NodeId(a), NodeId(b)))),
            NeighborMode::UndirectedUnion,
        );
        let m = jaccard(&g, NeighborMode::UndirectedUnion, &cands);
        for (_, v) in m.iter() {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }
}
