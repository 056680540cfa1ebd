//! Predictor composition: cross-layer weighting, metric scoring, temporal
//! decay and Borda aggregation, plus every ablated variant of the full
//! predictor and the candidate-pair policies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::aggregate::{self, AggregateError, BordaTally, RankedList};
use crate::crosslayer::{self, CrossLayerError};
use crate::graph::{MultiplexSeries, NeighborMode, NodeId, SnapshotGraph, Window, WindowError};
use crate::metrics::{
    self, CandidateSet, IpdCost, MetricError, MetricKind, Pair, PageRankParams, ScoreMatrix,
};
use crate::temporal::{decay_aggregate, DecayParams, TemporalError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid predictor spec: {0}")]
    InvalidSpec(String),
    #[error("target layer {target} out of range ({layers} layers)")]
    TargetOutOfRange { target: usize, layers: usize },
    #[error("window of length {window_len} extends before snapshot 0 at t={t}")]
    WindowBeforeStart { t: usize, window_len: usize },
    #[error("prediction time {t} needs at least one previous snapshot")]
    NoHistory { t: usize },
    #[error("the oracle variant needs snapshot {t}, but the series ends at {snapshots}")]
    OracleBeyondData { t: usize, snapshots: usize },
    #[error("empty candidate set")]
    EmptyCandidates,
    #[error(
        "candidate set would exceed the pair budget ({budget}); switch to the \
         active-nodes-only or explicit candidate policy, or raise the budget"
    )]
    BudgetExceeded { budget: usize },
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    CrossLayer(#[from] CrossLayerError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Temporal(#[from] TemporalError),
    #[error(transparent)]
    Aggregate(#[from] AggregateError),
}

/// Which predictor to run.
///
/// The first four are the moving-window predictor and its ablations; the
/// static family scores the accumulated history the way the single-layer
/// baselines do; `Oracle` and `Random` exist for harness calibration.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    /// Cross-layer reweighting per window snapshot, all metrics, decay,
    /// Borda.
    Hybrid,
    /// Cross-layer reweighting of the window union, metrics, Borda; no decay.
    LikelihoodRank,
    /// Raw target snapshots, metrics, decay, Borda; no cross-layer weights.
    DecayRank,
    /// Cross-layer likelihood weights used directly as pair scores.
    LikelihoodOnly,
    /// Borda over the metrics scored on the binarized target history.
    RankOnly,
    /// One metric on the binarized target history.
    SingleMetric(MetricKind),
    /// Per-layer metric scores averaged across layers, then Borda.
    AverageAgg,
    /// Per-layer metric scores folded by entropy across layers, then Borda.
    EntropyAgg,
    /// One metric on the multilayer core neighborhood.
    MultilayerMetric(MetricKind),
    /// Ground-truth scores (reads snapshot t); for harness checks.
    Oracle,
    /// Seeded uniform scores; for harness calibration.
    Random,
}

impl Variant {
    pub fn name(&self) -> String {
        match self {
            Variant::Hybrid => "hybrid".into(),
            Variant::LikelihoodRank => "likelihood+rank".into(),
            Variant::DecayRank => "decay+rank".into(),
            Variant::LikelihoodOnly => "likelihood-only".into(),
            Variant::RankOnly => "rank-only".into(),
            Variant::SingleMetric(m) => format!("metric:{}", m.name()),
            Variant::AverageAgg => "average-agg".into(),
            Variant::EntropyAgg => "entropy-agg".into(),
            Variant::MultilayerMetric(m) => format!("multilayer:{}", m.name()),
            Variant::Oracle => "oracle".into(),
            Variant::Random => "random".into(),
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "hybrid" => Some(Variant::Hybrid),
            "likelihood+rank" => Some(Variant::LikelihoodRank),
            "decay+rank" => Some(Variant::DecayRank),
            "likelihood-only" => Some(Variant::LikelihoodOnly),
            "rank-only" => Some(Variant::RankOnly),
            "average-agg" => Some(Variant::AverageAgg),
            "entropy-agg" => Some(Variant::EntropyAgg),
            "oracle" => Some(Variant::Oracle),
            "random" => Some(Variant::Random),
            _ => {
                if let Some(name) = s.strip_prefix("metric:") {
                    MetricKind::parse(name).map(Variant::SingleMetric)
                } else if let Some(name) = s.strip_prefix("multilayer:") {
                    MetricKind::parse(name).map(Variant::MultilayerMetric)
                } else {
                    None
                }
            }
        }
    }

    /// Does this variant use the moving window (vs. the full history)?
    pub fn uses_moving_window(&self) -> bool {
        matches!(
            self,
            Variant::Hybrid | Variant::LikelihoodRank | Variant::DecayRank | Variant::LikelihoodOnly
        )
    }

    /// The full benchmark-table row set: the predictor and its ablations,
    /// the eight single metrics, and the cross-layer aggregation baselines.
    pub fn table_variants() -> Vec<Variant> {
        let mut v = vec![
            Variant::Hybrid,
            Variant::LikelihoodRank,
            Variant::DecayRank,
            Variant::LikelihoodOnly,
            Variant::RankOnly,
        ];
        v.extend(MetricKind::ALL.iter().map(|&m| Variant::SingleMetric(m)));
        v.push(Variant::AverageAgg);
        v.push(Variant::EntropyAgg);
        for m in [
            MetricKind::CommonNeighbors,
            MetricKind::Jaccard,
            MetricKind::PreferentialAttachment,
            MetricKind::AdamicAdar,
        ] {
            v.push(Variant::MultilayerMetric(m));
        }
        v
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

/// How candidate pairs are chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum CandidatePolicy {
    /// Every unordered non-edge of the node universe (quadratic; budgeted).
    AllNonEdges,
    /// Non-edges restricted to nodes with at least one edge in any layer
    /// within the window.
    ActiveNodesOnly,
    /// Caller-provided pairs, echoed minus self-pairs and duplicates.
    Explicit(Vec<(NodeId, NodeId)>),
}

pub const DEFAULT_PAIR_BUDGET: usize = 2_000_000;

/// Everything a prediction run depends on. Identical specs (and series)
/// produce bit-identical output at any thread count.
#[derive(Clone, Debug)]
pub struct PredictorSpec {
    pub variant: Variant,
    /// Metric subset for the Borda-based variants.
    pub metrics: Vec<MetricKind>,
    pub decay: DecayParams,
    pub policy: CandidatePolicy,
    pub pair_budget: usize,
    pub mode: NeighborMode,
    pub pagerank: PageRankParams,
    pub ipd_cost: IpdCost,
    /// Apply cross-layer reweighting once per window snapshot (the default),
    /// or once to the window union (collapses the temporal series).
    pub reweight_per_snapshot: bool,
    pub seed: u64,
}

impl Default for PredictorSpec {
    fn default() -> Self {
        PredictorSpec {
            variant: Variant::Hybrid,
            metrics: MetricKind::ALL.to_vec(),
            decay: DecayParams::default(),
            policy: CandidatePolicy::ActiveNodesOnly,
            pair_budget: DEFAULT_PAIR_BUDGET,
            mode: NeighborMode::UndirectedUnion,
            pagerank: PageRankParams::default(),
            ipd_cost: IpdCost::WeightAsCost,
            reweight_per_snapshot: true,
            seed: 0,
        }
    }
}

impl PredictorSpec {
    pub fn validate(&self) -> Result<(), PipelineError> {
        self.decay
            .validate()
            .map_err(|e| PipelineError::InvalidSpec(e.to_string()))?;
        self.pagerank
            .validate()
            .map_err(|e| PipelineError::InvalidSpec(e.to_string()))?;
        let needs_metrics = matches!(
            self.variant,
            Variant::Hybrid
                | Variant::LikelihoodRank
                | Variant::DecayRank
                | Variant::RankOnly
                | Variant::AverageAgg
                | Variant::EntropyAgg
        );
        if needs_metrics && self.metrics.is_empty() {
            return Err(PipelineError::InvalidSpec(format!(
                "variant {} needs a non-empty metric subset",
                self.variant
            )));
        }
        if let Variant::MultilayerMetric(m) = self.variant {
            if !matches!(
                m,
                MetricKind::CommonNeighbors
                    | MetricKind::Jaccard
                    | MetricKind::PreferentialAttachment
                    | MetricKind::AdamicAdar
            ) {
                return Err(PipelineError::InvalidSpec(format!(
                    "metric {m} has no multilayer form"
                )));
            }
        }
        if self.pair_budget == 0 {
            return Err(PipelineError::InvalidSpec("pair budget is zero".into()));
        }
        Ok(())
    }
}

/// Output of one prediction run.
#[derive(Clone, Debug)]
pub struct Prediction {
    /// Final ordering, best candidate first.
    pub ranking: RankedList,
    /// Final per-pair scores (Borda totals for aggregated variants).
    pub scores: ScoreMatrix,
    /// Borda tally when the variant aggregates ranked lists.
    pub tally: Option<BordaTally>,
    pub candidates: CandidateSet,
}

/// Candidate window for prediction time `t`: the `window_len` snapshots
/// before `t`, clamped at snapshot 0.
pub fn candidate_window(t: usize, window_len: usize) -> Window {
    (t.saturating_sub(window_len), t - 1)
}

/// Builds the candidate set for a prediction at the window, excluding pairs
/// already linked in the target layer within it.
pub fn candidate_pairs(
    series: &MultiplexSeries,
    target: usize,
    window: Window,
    policy: &CandidatePolicy,
    budget: usize,
    mode: NeighborMode,
) -> Result<CandidateSet, PipelineError> {
    if target >= series.layer_count() {
        return Err(PipelineError::TargetOutOfRange { target, layers: series.layer_count() });
    }
    if let CandidatePolicy::Explicit(pairs) = policy {
        return Ok(CandidateSet::new(pairs.iter().copied(), mode));
    }

    let union = series.window_union(target, window)?;
    let n = series.node_count();
    let eligible: Vec<u32> = match policy {
        CandidatePolicy::AllNonEdges => (0..n as u32).collect(),
        CandidatePolicy::ActiveNodesOnly => {
            let active = series.active_nodes(window)?;
            (0..n as u32).filter(|&x| active[x as usize]).collect()
        }
        CandidatePolicy::Explicit(_) => unreachable!(),
    };
    let in_set = {
        let mut flags = vec![false; n];
        for &x in &eligible {
            flags[x as usize] = true;
        }
        flags
    };

    let mut pairs: Vec<Pair> = Vec::new();
    for &u in &eligible {
        let nbrs = union.neighbors(NodeId(u), NeighborMode::UndirectedUnion);
        let nbr_ids: Vec<u32> = nbrs.iter().map(|&(id, _)| id.0).collect();
        for v in (u + 1)..n as u32 {
            if !in_set[v as usize] {
                continue;
            }
            if nbr_ids.binary_search(&v).is_ok() {
                continue;
            }
            pairs.push(Pair::new(NodeId(u), NodeId(v)));
            if pairs.len() > budget {
                return Err(PipelineError::BudgetExceeded { budget });
            }
        }
    }
    Ok(CandidateSet::from_sorted(pairs))
}

/// Scores the metric subset on one graph and Borda-combines the resulting
/// ranked lists. The building block behind the rank-aggregation variants.
pub fn borda_on_graph(
    graph: &SnapshotGraph,
    candidates: &CandidateSet,
    metrics: &[MetricKind],
    mode: NeighborMode,
    pagerank: &PageRankParams,
    ipd_cost: IpdCost,
) -> Result<(RankedList, BordaTally), PipelineError> {
    let matrices = metrics::score_metrics(graph, mode, candidates, metrics, pagerank, ipd_cost)?;
    let lists: Vec<RankedList> = matrices
        .iter()
        .map(|m| RankedList::from_scores(candidates, m))
        .collect();
    Ok(aggregate::borda(&lists)?)
}

fn borda_prediction(
    ranking: RankedList,
    tally: BordaTally,
    candidates: CandidateSet,
) -> Prediction {
    let scores = tally.to_score_matrix();
    Prediction { ranking, scores, tally: Some(tally), candidates }
}

fn matrix_prediction(matrix: ScoreMatrix, candidates: CandidateSet) -> Prediction {
    let ranking = RankedList::from_scores(&candidates, &matrix);
    Prediction { ranking, scores: matrix, tally: None, candidates }
}

/// Runs the predictor described by `spec` for links of `series`'s `target`
/// layer at snapshot `t`, using only snapshots before `t` (the oracle variant
/// excepted).
pub fn predict(
    series: &MultiplexSeries,
    target: usize,
    t: usize,
    spec: &PredictorSpec,
) -> Result<Prediction, PipelineError> {
    spec.validate()?;
    if target >= series.layer_count() {
        return Err(PipelineError::TargetOutOfRange { target, layers: series.layer_count() });
    }
    if t == 0 {
        return Err(PipelineError::NoHistory { t });
    }
    let window_len = spec.decay.window_len;
    if spec.variant.uses_moving_window() && t < window_len {
        return Err(PipelineError::WindowBeforeStart { t, window_len });
    }

    let cand_window = candidate_window(t, window_len);
    let candidates = candidate_pairs(series, target, cand_window, &spec.policy, spec.pair_budget, spec.mode)?;
    if candidates.is_empty() {
        return Err(PipelineError::EmptyCandidates);
    }

    let moving_window: Window = (t.saturating_sub(window_len), t - 1);
    let history_window: Window = (0, t - 1);

    let mut prediction = match spec.variant {
        Variant::Hybrid => {
            let graphs: Vec<SnapshotGraph> = if spec.reweight_per_snapshot {
                (moving_window.0..=moving_window.1)
                    .map(|s| crosslayer::reweight_snapshot(series, target, s, moving_window))
                    .collect::<Result<_, _>>()?
            } else {
                vec![crosslayer::reweight_target_layer(series, target, moving_window)?]
            };
            let lists = decayed_metric_lists(&graphs, &candidates, spec)?;
            let (ranking, tally) = aggregate::borda(&lists)?;
            borda_prediction(ranking, tally, candidates)
        }
        Variant::LikelihoodRank => {
            let g = crosslayer::reweight_target_layer(series, target, moving_window)?;
            let (ranking, tally) =
                borda_on_graph(&g, &candidates, &spec.metrics, spec.mode, &spec.pagerank, spec.ipd_cost)?;
            borda_prediction(ranking, tally, candidates)
        }
        Variant::DecayRank => {
            let graphs: Vec<SnapshotGraph> = (moving_window.0..=moving_window.1)
                .map(|s| series.snapshot(target, s).clone())
                .collect();
            let lists = decayed_metric_lists(&graphs, &candidates, spec)?;
            let (ranking, tally) = aggregate::borda(&lists)?;
            borda_prediction(ranking, tally, candidates)
        }
        Variant::LikelihoodOnly => {
            let matrix =
                crosslayer::likelihood_pair_scores(series, target, moving_window, &candidates, spec.mode)?;
            matrix_prediction(matrix, candidates)
        }
        Variant::RankOnly => {
            let g = series.window_union(target, history_window)?.binarized_undirected();
            let (ranking, tally) =
                borda_on_graph(&g, &candidates, &spec.metrics, spec.mode, &spec.pagerank, spec.ipd_cost)?;
            borda_prediction(ranking, tally, candidates)
        }
        Variant::SingleMetric(metric) => {
            let g = series.window_union(target, history_window)?.binarized_undirected();
            let mut matrices = metrics::score_metrics(
                &g,
                spec.mode,
                &candidates,
                &[metric],
                &spec.pagerank,
                spec.ipd_cost,
            )?;
            matrix_prediction(matrices.pop().expect("one metric"), candidates)
        }
        Variant::AverageAgg | Variant::EntropyAgg => {
            let per_layer: Vec<Vec<ScoreMatrix>> = (0..series.layer_count())
                .map(|layer| {
                    let g = series.window_union(layer, history_window)?.binarized_undirected();
                    Ok(metrics::score_metrics(
                        &g,
                        spec.mode,
                        &candidates,
                        &spec.metrics,
                        &spec.pagerank,
                        spec.ipd_cost,
                    )?)
                })
                .collect::<Result<_, PipelineError>>()?;
            let mut lists = Vec::with_capacity(spec.metrics.len());
            for (mi, metric) in spec.metrics.iter().enumerate() {
                let layer_matrices: Vec<ScoreMatrix> =
                    per_layer.iter().map(|v| v[mi].clone()).collect();
                let folded = match spec.variant {
                    Variant::AverageAgg => aggregate::average_aggregate(&layer_matrices, metric.name())?,
                    _ => aggregate::entropy_aggregate(&layer_matrices, metric.name())?,
                };
                lists.push(RankedList::from_scores(&candidates, &folded));
            }
            let (ranking, tally) = aggregate::borda(&lists)?;
            borda_prediction(ranking, tally, candidates)
        }
        Variant::MultilayerMetric(metric) => {
            let matrix = aggregate::multilayer_metric(
                series,
                history_window,
                metric,
                &candidates,
                &spec.pagerank,
            )?;
            matrix_prediction(matrix, candidates)
        }
        Variant::Oracle => {
            if t >= series.snapshot_count() {
                return Err(PipelineError::OracleBeyondData { t, snapshots: series.snapshot_count() });
            }
            let truth = series.snapshot(target, t);
            let mut matrix = ScoreMatrix::new("oracle");
            for &p in candidates.pairs() {
                if truth.connected(p.src, p.dst) {
                    matrix.insert(p, 1.0);
                }
            }
            matrix_prediction(matrix, candidates)
        }
        Variant::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(
                spec.seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            let mut matrix = ScoreMatrix::new("random");
            for &p in candidates.pairs() {
                matrix.insert(p, rng.random::<f64>());
            }
            matrix_prediction(matrix, candidates)
        }
    };
    match spec.variant {
        Variant::Oracle | Variant::Random => {}
        _ => {
            let scored = if spec.variant.uses_moving_window() {
                moving_window
            } else {
                history_window
            };
            prediction.scores.set_window(scored);
        }
    }
    Ok(prediction)
}

/// Scores the metric subset on each graph of a window series and decays each
/// metric's matrices into one ranked list (oldest graph first). A
/// single-graph series skips the decay.
fn decayed_metric_lists(
    graphs: &[SnapshotGraph],
    candidates: &CandidateSet,
    spec: &PredictorSpec,
) -> Result<Vec<RankedList>, PipelineError> {
    let mut metric_major: Vec<Vec<ScoreMatrix>> =
        (0..spec.metrics.len()).map(|_| Vec::with_capacity(graphs.len())).collect();
    for graph in graphs {
        let matrices = metrics::score_metrics(
            graph,
            spec.mode,
            candidates,
            &spec.metrics,
            &spec.pagerank,
            spec.ipd_cost,
        )?;
        for (mi, m) in matrices.into_iter().enumerate() {
            metric_major[mi].push(m);
        }
    }
    let mut lists = Vec::with_capacity(spec.metrics.len());
    for series_m in metric_major {
        let aggregated = if series_m.len() == 1 {
            series_m.into_iter().next().expect("one matrix")
        } else {
            let params = DecayParams { theta: spec.decay.theta, window_len: series_m.len() };
            decay_aggregate(&series_m, &params)?
        };
        lists.push(RankedList::from_scores(candidates, &aggregated));
    }
    Ok(lists)
}

/// Plain-text key-value run provenance, embedded as `# key=value` header
/// lines in every output file.
#[derive(Clone, Debug, Default)]
pub struct RunManifest {
    entries: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new() -> RunManifest {
        RunManifest::default()
    }

    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn lines(&self) -> Vec<String> {
        self.entries.iter().map(|(k, v)| format!("{k}={v}")).collect()
    }
}
