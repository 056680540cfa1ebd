//! End-to-end equivalence of the full predictor against a straight-line
//! reimplementation built from the brute-force oracles. The comparison is
//! bit-for-bit on the final ordering and tally.

use std::collections::HashMap;

use linkpred::graph::{MultiplexSeries, NodeId};
use linkpred::metrics::{MetricKind, Pair};
use linkpred::pipeline::{predict, CandidatePolicy, PredictorSpec, Variant};
use linkpred::temporal::DecayParams;
use linkpred_testkit as oracle;
use oracle::RawGraph;
use rand::SeedableRng;

const NODES: usize = 12;
const LAYERS: usize = 2;
const SNAPSHOTS: usize = 6;
const TARGET: usize = 0;
const T: usize = 3;
const THETA: f64 = 0.4;
const PREDICT_AT: usize = 5;

fn metric_oracle(metric: MetricKind, g: &RawGraph, pr: &[f64], pair: Pair) -> f64 {
    let (x, y) = (pair.src.0, pair.dst.0);
    match metric {
        MetricKind::CommonNeighbors => oracle::oracle_common_neighbors(g, x, y),
        MetricKind::Jaccard => oracle::oracle_jaccard(g, x, y),
        MetricKind::PreferentialAttachment => oracle::oracle_preferential_attachment(g, x, y),
        MetricKind::AdamicAdar => oracle::oracle_adamic_adar(g, x, y),
        MetricKind::ResourceAllocation => oracle::oracle_resource_allocation(g, x, y),
        MetricKind::PageRank => pr[x as usize] * pr[y as usize],
        MetricKind::InversePathDistance => oracle::oracle_ipd(g, x, y, false),
        MetricKind::ClusteringProduct => oracle::oracle_clustering_product(g, x, y),
    }
}

/// The whole predictor rebuilt from first principles: per-snapshot
/// reweighting, metric scoring, decayed sums, Borda pairwise counts.
fn straight_line_hybrid(
    records: &[oracle::RawRecord],
    candidates: &[Pair],
    pr_tolerance: f64,
    pr_max_iter: usize,
) -> (Vec<Pair>, HashMap<Pair, i64>) {
    let window = (PREDICT_AT - T, PREDICT_AT - 1);

    let mut window_graphs: Vec<RawGraph> = Vec::new();
    for s in window.0..=window.1 {
        let pairs = oracle::oracle_distinct_pairs(records, TARGET, (s, s));
        let weighted = oracle::oracle_reweight_pairs(records, LAYERS, TARGET, pairs, window);
        window_graphs.push(RawGraph::new(NODES, weighted));
    }

    let mut scored_lists: Vec<Vec<(Pair, f64)>> = Vec::new();
    for metric in MetricKind::ALL {
        let per_graph: Vec<(Vec<f64>, &RawGraph)> = window_graphs
            .iter()
            .map(|g| {
                let pr = if metric == MetricKind::PageRank {
                    oracle::oracle_pagerank(g, 0.85, pr_tolerance, pr_max_iter)
                } else {
                    Vec::new()
                };
                let scores = candidates
                    .iter()
                    .map(|&p| metric_oracle(metric, g, &pr, p))
                    .collect();
                (scores, g)
            })
            .collect();
        let decayed: Vec<(Pair, f64)> = candidates
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let series: Vec<f64> = per_graph.iter().map(|(scores, _)| scores[i]).collect();
                (p, oracle::oracle_decay(&series, THETA))
            })
            .collect();
        scored_lists.push(decayed);
    }

    let doubled = oracle::oracle_borda_doubled(&scored_lists);
    let order = oracle::oracle_borda_order(&doubled);
    (order, doubled)
}

#[test]
fn hybrid_matches_straight_line_oracle_bit_for_bit() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240817);
    let records = oracle::random_records(&mut rng, NODES, LAYERS, SNAPSHOTS, 0.12);
    assert!(!records.is_empty());

    let labels: Vec<String> = (0..NODES).map(|i| i.to_string()).collect();
    let series = MultiplexSeries::from_parts(labels, &oracle::to_edge_records(&records)).unwrap();
    let candidates = oracle::all_pairs(NODES);

    let spec = PredictorSpec {
        variant: Variant::Hybrid,
        decay: DecayParams { theta: THETA, window_len: T },
        policy: CandidatePolicy::Explicit(
            candidates.iter().map(|p| (p.src, p.dst)).collect(),
        ),
        ..PredictorSpec::default()
    };
    let prediction = predict(&series, TARGET, PREDICT_AT, &spec).unwrap();

    let (oracle_order, oracle_doubled) = straight_line_hybrid(
        &records,
        &candidates,
        spec.pagerank.tolerance,
        spec.pagerank.max_iterations,
    );

    assert_eq!(prediction.ranking.items(), &oracle_order[..], "final ordering diverged");
    let tally = prediction.tally.expect("hybrid aggregates ranked lists");
    for &pair in &candidates {
        assert_eq!(
            tally.doubled_score(pair),
            oracle_doubled.get(&pair).copied().unwrap_or(0),
            "tally diverged at {pair}"
        );
    }
}

#[test]
fn hybrid_is_bit_reproducible_across_runs() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let records = oracle::random_records(&mut rng, NODES, LAYERS, SNAPSHOTS, 0.15);
    let labels: Vec<String> = (0..NODES).map(|i| i.to_string()).collect();
    let series = MultiplexSeries::from_parts(labels, &oracle::to_edge_records(&records)).unwrap();
    let spec = PredictorSpec {
        decay: DecayParams { theta: THETA, window_len: T },
        ..PredictorSpec::default()
    };
    let a = predict(&series, TARGET, PREDICT_AT, &spec).unwrap();
    let b = predict(&series, TARGET, PREDICT_AT, &spec).unwrap();
    assert_eq!(a.ranking, b.ranking);
    assert_eq!(a.scores, b.scores);
    assert_eq!(a.candidates.pairs().first().map(|p| p.src), Some(NodeId(0)));
}
