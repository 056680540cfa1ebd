//! Rank aggregation and cross-layer attribute aggregation.
//!
//! Borda combines full ranked lists over one candidate set into a consensus
//! ordering: each item scores the number of items ranked strictly below it,
//! summed over lists, with tied items sharing the mean of their positions'
//! below-counts. Average/entropy aggregation fold per-layer score matrices
//! of one metric into a single matrix; the multilayer variants score the
//! union neighborhood across all layers.

use std::collections::HashMap;
use std::io::{self, Write};

use thiserror::Error;

use crate::graph::{MultiplexSeries, NeighborMode, NodeId, Window, WindowError};
use crate::metrics::{
    self, BuildPairHasher, CandidateSet, MetricKind, Pair, PageRankParams, ScoreMatrix,
};

#[derive(Debug, Error)]
pub enum AggregateError {
    #[error("no input lists")]
    NoLists,
    #[error("list {0} ranks a different key set than list 0")]
    KeySetMismatch(usize),
    #[error("ranked list contains duplicate pair {0}")]
    DuplicateItem(Pair),
    #[error("no input matrices")]
    NoMatrices,
    #[error("metric {0} has no multilayer form (supported: cn, jc, pa, aa)")]
    UnsupportedMultilayerMetric(MetricKind),
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Metric(#[from] metrics::MetricError),
}

/// Total ordering of candidate pairs, best first, with score-tie groups
/// preserved so rank aggregation can midrank them.
///
/// Ties are laid out in canonical (ascending pair) order, which keeps runs
/// bit-reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedList {
    tag: String,
    items: Vec<Pair>,
    /// Tie-group index per position; nondecreasing, starts at 0.
    groups: Vec<u32>,
}

/// Bit pattern whose unsigned order is descending f64 order. Bijective with
/// the score for the non-NaN, non-negative-zero values matrices hold, so key
/// equality is exactly score equality.
#[inline]
fn descending_score_key(score: f64) -> u64 {
    let bits = score.to_bits();
    let ascending = if bits >> 63 == 1 { !bits } else { bits | (1 << 63) };
    !ascending
}

impl RankedList {
    /// Ranks a candidate set by a score matrix: score descending, ties broken
    /// (and grouped) by ascending pair. Absent pairs score 0.
    pub fn from_scores(candidates: &CandidateSet, scores: &ScoreMatrix) -> RankedList {
        // packed (score, pair) words sort measurably faster than tuples with
        // a comparator; matrices never hold -0.0, so key equality is score
        // equality
        let mut keyed: Vec<(u64, u64)> = candidates
            .pairs()
            .iter()
            .map(|&p| {
                (
                    descending_score_key(scores.get(p)),
                    (u64::from(p.src.0) << 32) | u64::from(p.dst.0),
                )
            })
            .collect();
        keyed.sort_unstable();
        let mut items = Vec::with_capacity(keyed.len());
        let mut groups = Vec::with_capacity(keyed.len());
        let mut group = 0u32;
        for (i, &(key, packed)) in keyed.iter().enumerate() {
            if i > 0 && key != keyed[i - 1].0 {
                group += 1;
            }
            items.push(Pair::new(NodeId((packed >> 32) as u32), NodeId(packed as u32)));
            groups.push(group);
        }
        RankedList { tag: scores.tag().to_string(), items, groups }
    }

    /// Wraps an explicit total order (no ties).
    pub fn from_order(tag: impl Into<String>, items: Vec<Pair>) -> Result<RankedList, AggregateError> {
        let mut seen = items.clone();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0] == w[1] {
                return Err(AggregateError::DuplicateItem(w[0]));
            }
        }
        let groups = (0..items.len() as u32).collect();
        Ok(RankedList { tag: tag.into(), items, groups })
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn items(&self) -> &[Pair] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Tie-group index of the item at `position`.
    pub fn tie_group(&self, position: usize) -> u32 {
        self.groups[position]
    }

    fn sorted_items(&self) -> Vec<Pair> {
        let mut v = self.items.clone();
        v.sort_unstable();
        v
    }
}

/// Accumulated Borda scores. Values are exact: tied items share half-integer
/// means, so twice the score is stored as an integer.
#[derive(Clone, Debug, PartialEq)]
pub struct BordaTally {
    doubled: HashMap<Pair, i64, BuildPairHasher>,
}

impl BordaTally {
    /// Twice the Borda score of a pair (exact integer arithmetic).
    pub fn doubled_score(&self, pair: Pair) -> i64 {
        self.doubled.get(&pair).copied().unwrap_or(0)
    }

    pub fn score(&self, pair: Pair) -> f64 {
        self.doubled_score(pair) as f64 / 2.0
    }

    pub fn len(&self) -> usize {
        self.doubled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doubled.is_empty()
    }

    /// Entries sorted by Borda score descending, pair ascending: the final
    /// aggregation order.
    pub fn sorted(&self) -> Vec<(Pair, i64)> {
        let mut v: Vec<(Pair, i64)> = self.doubled.iter().map(|(&p, &s)| (p, s)).collect();
        v.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        v
    }

    /// Writes `src,dst,borda_score,final_rank` rows in final order. Scores
    /// print exact (`7` or `6.5`).
    pub fn write_csv<W: Write>(&self, mut w: W, labels: &[String], comments: &[String]) -> io::Result<()> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        let mut csv_w = csv::Writer::from_writer(w);
        csv_w.write_record(["src", "dst", "borda_score", "final_rank"])?;
        for (rank, (pair, doubled)) in self.sorted().into_iter().enumerate() {
            let score = if doubled % 2 == 0 {
                (doubled / 2).to_string()
            } else {
                format!("{}", doubled as f64 / 2.0)
            };
            csv_w.write_record([
                labels[pair.src.index()].as_str(),
                labels[pair.dst.index()].as_str(),
                &score,
                &(rank + 1).to_string(),
            ])?;
        }
        csv_w.flush()?;
        Ok(())
    }

    /// Tally as a score matrix tagged `borda`, for downstream export.
    pub fn to_score_matrix(&self) -> ScoreMatrix {
        let mut m = ScoreMatrix::new("borda");
        for (&pair, &doubled) in &self.doubled {
            m.insert(pair, doubled as f64 / 2.0);
        }
        m
    }
}

/// Borda rank aggregation over full lists with identical key sets.
///
/// Per list, an untied item at position `p` of `n` contributes `n - 1 - p`
/// (items strictly below it); a tie group spanning positions `[s, e)` gives
/// each member the mean below-count of those positions. The output is sorted
/// by total score descending, ties broken by ascending pair.
pub fn borda(lists: &[RankedList]) -> Result<(RankedList, BordaTally), AggregateError> {
    if lists.is_empty() {
        return Err(AggregateError::NoLists);
    }
    let reference = lists[0].sorted_items();
    for w in reference.windows(2) {
        if w[0] == w[1] {
            return Err(AggregateError::DuplicateItem(w[0]));
        }
    }
    for (i, list) in lists.iter().enumerate().skip(1) {
        if list.sorted_items() != reference {
            return Err(AggregateError::KeySetMismatch(i));
        }
    }

    let n = reference.len();
    let mut doubled: HashMap<Pair, i64, BuildPairHasher> =
        reference.iter().map(|&p| (p, 0i64)).collect();
    for list in lists {
        let mut start = 0usize;
        while start < n {
            let group = list.groups[start];
            let mut end = start + 1;
            while end < n && list.groups[end] == group {
                end += 1;
            }
            // mean below-count over positions [start, end), doubled:
            // 2(n-1) - (start + end - 1)
            let contribution = 2 * (n as i64 - 1) - (start as i64 + end as i64 - 1);
            for &item in &list.items[start..end] {
                *doubled.get_mut(&item).expect("validated key") += contribution;
            }
            start = end;
        }
    }

    let tally = BordaTally { doubled };
    let sorted = tally.sorted();
    let mut items = Vec::with_capacity(n);
    let mut groups = Vec::with_capacity(n);
    let mut group = 0u32;
    for (i, &(p, s)) in sorted.iter().enumerate() {
        if i > 0 && s != sorted[i - 1].1 {
            group += 1;
        }
        items.push(p);
        groups.push(group);
    }
    Ok((RankedList { tag: "borda".into(), items, groups }, tally))
}

/// Entry-wise arithmetic mean across layers; absent entries count 0; pairs
/// absent everywhere stay absent.
pub fn average_aggregate(per_layer: &[ScoreMatrix], tag: impl Into<String>) -> Result<ScoreMatrix, AggregateError> {
    if per_layer.is_empty() {
        return Err(AggregateError::NoMatrices);
    }
    let m = per_layer.len() as f64;
    let mut keys: Vec<Pair> = per_layer.iter().flat_map(|sm| sm.iter().map(|(p, _)| p)).collect();
    keys.sort_unstable();
    keys.dedup();
    let mut out = ScoreMatrix::new(tag);
    for key in keys {
        let sum: f64 = per_layer.iter().map(|sm| sm.get(key)).sum();
        out.insert(key, sum / m);
    }
    Ok(out)
}

/// Entry-wise entropy of the score distribution across layers:
/// `-Σ (x/total)·ln(x/total)` with zero-valued terms contributing 0 and
/// output 0 (absent) when the total vanishes. Higher means the attribute is
/// spread uniformly over the layers; the range is `[0, ln M]` (clamped
/// against rounding spill at the uniform maximum).
pub fn entropy_aggregate(per_layer: &[ScoreMatrix], tag: impl Into<String>) -> Result<ScoreMatrix, AggregateError> {
    if per_layer.is_empty() {
        return Err(AggregateError::NoMatrices);
    }
    let max_entropy = (per_layer.len() as f64).ln();
    let mut keys: Vec<Pair> = per_layer.iter().flat_map(|sm| sm.iter().map(|(p, _)| p)).collect();
    keys.sort_unstable();
    keys.dedup();
    let mut out = ScoreMatrix::new(tag);
    for key in keys {
        let total: f64 = per_layer.iter().map(|sm| sm.get(key)).sum();
        if total <= 0.0 {
            continue;
        }
        let mut entropy = 0.0;
        for sm in per_layer {
            let x = sm.get(key);
            if x > 0.0 {
                let share = x / total;
                entropy -= share * share.ln();
            }
        }
        out.insert(key, entropy.min(max_entropy));
    }
    Ok(out)
}

/// Scores a metric on the multilayer core neighborhood: `Γ(x)` becomes the
/// union of `x`'s neighbors over every layer of the window, with unit edge
/// weights (a shared neighbor counts once no matter how many layers carry
/// it). Supported for cn, jc, pa and aa.
pub fn multilayer_metric(
    series: &MultiplexSeries,
    window: Window,
    metric: MetricKind,
    pairs: &CandidateSet,
    pagerank: &PageRankParams,
) -> Result<ScoreMatrix, AggregateError> {
    if !matches!(
        metric,
        MetricKind::CommonNeighbors
            | MetricKind::Jaccard
            | MetricKind::PreferentialAttachment
            | MetricKind::AdamicAdar
    ) {
        return Err(AggregateError::UnsupportedMultilayerMetric(metric));
    }
    let union = series.union_all_layers(window)?.binarized_undirected();
    let mut matrices = metrics::score_metrics(
        &union,
        NeighborMode::UndirectedUnion,
        pairs,
        &[metric],
        pagerank,
        metrics::IpdCost::WeightAsCost,
    )?;
    let mut matrix = matrices.pop().expect("one metric");
    matrix = retag(matrix, format!("multilayer-{}", metric.name()));
    Ok(matrix)
}

fn retag(m: ScoreMatrix, tag: String) -> ScoreMatrix {
    let mut out = ScoreMatrix::new(tag);
    for (p, s) in m.iter() {
        out.insert(p, s);
    }
    out
}
