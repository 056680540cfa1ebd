//! Layer likelihood assignment and target-layer edge reweighting.
//!
//! Each non-target layer gets a likelihood weight `w_i`: the fraction of its
//! distinct window edges that also appear in the target layer. Target edges
//! are then reweighted as `rate(src) + Σ_i w_i · linkExist(e, i)`, where
//! `rate` is the source node's mean unweighted out-degree over the window and
//! `linkExist` is 1 iff the pair occurs in layer `i` anywhere in the same
//! window.

use std::collections::HashSet;
use std::io::{self, Write};

use thiserror::Error;

use crate::graph::{MultiplexSeries, NeighborMode, NodeId, SnapshotGraph, Window, WindowError};
use crate::metrics::{CandidateSet, ScoreMatrix};

/// Additive floor for reweighted edges that would otherwise drop to zero;
/// keeps observed structure in the graph for the metric stage.
pub const REWEIGHT_FLOOR: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CrossLayerError {
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error("target layer {0} equals predictor layer")]
    SameLayer(usize),
    #[error("layer {layer} out of range ({count} layers)")]
    LayerOutOfRange { layer: usize, count: usize },
}

/// Likelihood of one predictor layer for a target layer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LikelihoodEntry {
    pub layer: usize,
    /// `|U_target ∩ U_layer| / |U_layer|`, in `[0, 1]`; 0 when the layer has
    /// no window edges.
    pub likelihood: f64,
    pub overlap_count: usize,
    pub other_count: usize,
}

/// Per-layer weights `w_i` for one target layer over one window.
#[derive(Clone, Debug)]
pub struct LayerLikelihoods {
    pub target: usize,
    pub window: Window,
    /// Ascending by layer; the target layer is absent by construction.
    pub entries: Vec<LikelihoodEntry>,
}

impl LayerLikelihoods {
    pub fn weight_of(&self, layer: usize) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.layer == layer)
            .map(|e| e.likelihood)
    }

    /// Writes `target_layer,other_layer,likelihood,overlap_count,other_count`.
    pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> io::Result<()> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        let mut csv_w = csv::Writer::from_writer(w);
        csv_w.write_record(["target_layer", "other_layer", "likelihood", "overlap_count", "other_count"])?;
        for e in &self.entries {
            csv_w.write_record([
                self.target.to_string(),
                e.layer.to_string(),
                format!("{}", e.likelihood),
                e.overlap_count.to_string(),
                e.other_count.to_string(),
            ])?;
        }
        csv_w.flush()?;
        Ok(())
    }
}

fn check_layer(series: &MultiplexSeries, layer: usize) -> Result<(), CrossLayerError> {
    if layer >= series.layer_count() {
        return Err(CrossLayerError::LayerOutOfRange { layer, count: series.layer_count() });
    }
    Ok(())
}

/// Distinct directed `(src, dst)` pairs of one layer anywhere in the window.
pub(crate) fn distinct_pairs(
    series: &MultiplexSeries,
    layer: usize,
    window: Window,
) -> HashSet<(u32, u32)> {
    let mut set = HashSet::new();
    for t in window.0..=window.1 {
        for (s, d, _) in series.snapshot(layer, t).edges() {
            set.insert((s.0, d.0));
        }
    }
    set
}

/// Conditional overlap ratio of `other` for `target`:
/// `|U_target ∩ U_other| / |U_other|` over distinct window pairs; 0 when
/// `other` has no window edges.
pub fn layer_likelihood(
    series: &MultiplexSeries,
    target: usize,
    other: usize,
    window: Window,
) -> Result<LikelihoodEntry, CrossLayerError> {
    if target == other {
        return Err(CrossLayerError::SameLayer(target));
    }
    check_layer(series, target)?;
    check_layer(series, other)?;
    series.window_union(target, window)?; // window validation
    let target_set = distinct_pairs(series, target, window);
    let other_set = distinct_pairs(series, other, window);
    let overlap = other_set.iter().filter(|p| target_set.contains(p)).count();
    let likelihood = if other_set.is_empty() {
        0.0
    } else {
        overlap as f64 / other_set.len() as f64
    };
    Ok(LikelihoodEntry { layer: other, likelihood, overlap_count: overlap, other_count: other_set.len() })
}

/// Likelihood weights of every non-target layer, ascending by layer index.
pub fn layer_likelihoods(
    series: &MultiplexSeries,
    target: usize,
    window: Window,
) -> Result<LayerLikelihoods, CrossLayerError> {
    check_layer(series, target)?;
    let mut entries = Vec::with_capacity(series.layer_count().saturating_sub(1));
    for other in 0..series.layer_count() {
        if other == target {
            continue;
        }
        entries.push(layer_likelihood(series, target, other, window)?);
    }
    Ok(LayerLikelihoods { target, window, entries })
}

/// Mean unweighted out-degree of one node in the target layer over the
/// window snapshots.
pub fn node_rate(
    series: &MultiplexSeries,
    target: usize,
    x: NodeId,
    window: Window,
) -> Result<f64, CrossLayerError> {
    let rates = node_rates(series, target, window)?;
    Ok(rates[x.index()])
}

/// Per-node rates for the whole universe; 0 for nodes with no out-edges in
/// the window.
pub fn node_rates(
    series: &MultiplexSeries,
    target: usize,
    window: Window,
) -> Result<Vec<f64>, CrossLayerError> {
    check_layer(series, target)?;
    series.window_union(target, window)?; // window validation
    let n = series.node_count();
    let len = (window.1 - window.0 + 1) as f64;
    let mut sums = vec![0u64; n];
    for t in window.0..=window.1 {
        let g = series.snapshot(target, t);
        for (x, sum) in sums.iter_mut().enumerate() {
            *sum += g.out_degree(NodeId(x as u32)) as u64;
        }
    }
    Ok(sums.into_iter().map(|s| s as f64 / len).collect())
}

fn reweight_pairs(
    series: &MultiplexSeries,
    target: usize,
    pairs: Vec<(u32, u32)>,
    window: Window,
) -> Result<SnapshotGraph, CrossLayerError> {
    let likelihoods = layer_likelihoods(series, target, window)?;
    let rates = node_rates(series, target, window)?;
    let other_sets: Vec<(f64, HashSet<(u32, u32)>)> = likelihoods
        .entries
        .iter()
        .map(|e| (e.likelihood, distinct_pairs(series, e.layer, window)))
        .collect();

    let edges = pairs.into_iter().map(|(s, d)| {
        let mut w = rates[s as usize];
        for (weight, set) in &other_sets {
            if set.contains(&(s, d)) {
                w += weight;
            }
        }
        if w == 0.0 {
            w = REWEIGHT_FLOOR;
        }
        (NodeId(s), NodeId(d), w)
    });
    Ok(SnapshotGraph::from_edges(series.node_count(), edges))
}

/// Reweights the target layer over a window: the edge set is the union of
/// target edges in the window; each edge `(x, y)` gets weight
/// `rate(x) + Σ_{i != target} w_i · linkExist((x, y), i)`.
pub fn reweight_target_layer(
    series: &MultiplexSeries,
    target: usize,
    window: Window,
) -> Result<SnapshotGraph, CrossLayerError> {
    check_layer(series, target)?;
    series.window_union(target, window)?;
    let mut pairs: Vec<(u32, u32)> = distinct_pairs(series, target, window).into_iter().collect();
    pairs.sort_unstable();
    reweight_pairs(series, target, pairs, window)
}

/// Like [`reweight_target_layer`], but the edge set is a single snapshot `s`
/// of the target layer while rates, likelihoods and `linkExist` still use the
/// full context window. Used to build one weighted graph per window snapshot.
pub fn reweight_snapshot(
    series: &MultiplexSeries,
    target: usize,
    s: usize,
    context: Window,
) -> Result<SnapshotGraph, CrossLayerError> {
    check_layer(series, target)?;
    series.window_union(target, (s, s))?;
    let mut pairs: Vec<(u32, u32)> = series
        .snapshot(target, s)
        .edges()
        .map(|(a, b, _)| (a.0, b.0))
        .collect();
    pairs.sort_unstable();
    reweight_pairs(series, target, pairs, context)
}

/// The reweighting formula applied to arbitrary candidate pairs, used when
/// likelihood weights themselves serve as prediction scores.
///
/// In undirected mode a pair scores the sum of both orientations,
/// `w(u→v) + w(v→u)`, matching how reciprocal edge weights merge in the
/// undirected neighborhood view; in directed modes only the pair's own
/// orientation counts. No floor is applied: a pair with no signal scores 0.
pub fn likelihood_pair_scores(
    series: &MultiplexSeries,
    target: usize,
    window: Window,
    pairs: &CandidateSet,
    mode: NeighborMode,
) -> Result<ScoreMatrix, CrossLayerError> {
    check_layer(series, target)?;
    series.window_union(target, window)?;
    let likelihoods = layer_likelihoods(series, target, window)?;
    let rates = node_rates(series, target, window)?;
    let other_sets: Vec<(f64, HashSet<(u32, u32)>)> = likelihoods
        .entries
        .iter()
        .map(|e| (e.likelihood, distinct_pairs(series, e.layer, window)))
        .collect();

    let directed_score = |s: u32, d: u32| {
        let mut w = rates[s as usize];
        for (weight, set) in &other_sets {
            if set.contains(&(s, d)) {
                w += weight;
            }
        }
        w
    };

    let mut out = ScoreMatrix::new("likelihood");
    for &pair in pairs.pairs() {
        let (u, v) = (pair.src.0, pair.dst.0);
        let score = match mode {
            NeighborMode::UndirectedUnion => directed_score(u, v) + directed_score(v, u),
            NeighborMode::Out => directed_score(u, v),
            NeighborMode::In => directed_score(v, u),
        };
        out.insert(pair, score);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::graph::EdgeRecord;

    fn two_layer_series(rows: &[(usize, usize, &str, &str, f64)]) -> MultiplexSeries {
        let mut labels: Vec<String> = Vec::new();
        let mut records = Vec::new();
        for &(t, layer, s, d, w) in rows {
            let mut intern = |x: &str| {
                if let Some(i) = labels.iter().position(|l| l == x) {
                    i as u32
                } else {
                    labels.push(x.to_string());
                    (labels.len() - 1) as u32
                }
            };
            let si = intern(s);
            let di = intern(d);
            records.push(EdgeRecord::new(t, layer, si, di, w));
        }
        MultiplexSeries::from_parts(labels, &records).unwrap()
    }

    #[test]
    fn identical_layers_have_likelihood_one() {
        let series = two_layer_series(&[
            (0, 0, "a", "b", 1.0),
            (0, 0, "c", "d", 1.0),
            (0, 1, "a", "b", 5.0),
            (0, 1, "c", "d", 2.0),
        ]);
        let e = layer_likelihood(&series, 0, 1, (0, 0)).unwrap();
        assert_eq!(e.likelihood, 1.0);
    }

    #[test]
    fn disjoint_layers_have_likelihood_zero() {
        let series = two_layer_series(&[
            (0, 0, "a", "b", 1.0),
            (0, 1, "c", "d", 1.0),
        ]);
        let e = layer_likelihood(&series, 0, 1, (0, 0)).unwrap();
        assert_eq!(e.likelihood, 0.0);
    }

    #[test]
    fn partial_overlap_ratio() {
        // U_other has four pairs, two of which appear in the target layer.
        let series = two_layer_series(&[
            (0, 0, "a", "b", 1.0),
            (0, 0, "c", "d", 1.0),
            (0, 1, "a", "b", 1.0),
            (1, 1, "c", "d", 1.0),
            (0, 1, "e", "f", 1.0),
            (1, 1, "g", "h", 1.0),
        ]);
        let e = layer_likelihood(&series, 0, 1, (0, 1)).unwrap();
        assert_eq!(e.likelihood, 0.5);
        assert_eq!(e.overlap_count, 2);
        assert_eq!(e.other_count, 4);
        assert!(matches!(
            layer_likelihood(&series, 1, 1, (0, 1)),
            Err(CrossLayerError::SameLayer(1))
        ));
    }

    #[test]
    fn node_rate_is_mean_out_degree() {
        let series = two_layer_series(&[
            (0, 0, "x", "a", 1.0),
            (0, 0, "x", "b", 1.0),
            (1, 0, "x", "a", 1.0),
            (1, 0, "x", "b", 1.0),
            (1, 0, "x", "c", 1.0),
            (1, 0, "x", "d", 1.0),
            (2, 0, "a", "b", 1.0),
        ]);
        let x = series.node_id("x").unwrap();
        assert_eq!(node_rate(&series, 0, x, (0, 2)).unwrap(), 2.0);
        // never-active node
        let c = series.node_id("c").unwrap();
        assert_eq!(node_rate(&series, 0, c, (0, 2)).unwrap(), 0.0);
        // single-snapshot window is the plain out-degree
        assert_eq!(node_rate(&series, 0, x, (1, 1)).unwrap(), 4.0);
    }

    #[test]
    fn single_layer_reweight_is_rate_only() {
        let series = two_layer_series(&[
            (0, 0, "x", "a", 3.0),
            (0, 0, "x", "b", 1.0),
            (1, 0, "x", "a", 2.0),
        ]);
        let g = reweight_target_layer(&series, 0, (0, 1)).unwrap();
        let x = series.node_id("x").unwrap();
        let a = series.node_id("a").unwrap();
        let b = series.node_id("b").unwrap();
        // rate(x) = (2 + 1) / 2
        assert_eq!(g.weight(x, a), Some(1.5));
        assert_eq!(g.weight(x, b), Some(1.5));
    }

    #[test]
    fn cross_layer_edge_adds_likelihood() {
        // layer 1 has two distinct pairs, one overlapping the target layer,
        // so w_1 = 0.5; the overlapping edge src has rate 2.
        let series = two_layer_series(&[
            (0, 0, "x", "a", 1.0),
            (0, 0, "x", "b", 1.0),
            (1, 0, "x", "a", 1.0),
            (1, 0, "x", "b", 1.0),
            (0, 1, "x", "a", 9.0),
            (0, 1, "q", "r", 9.0),
        ]);
        let g = reweight_target_layer(&series, 0, (0, 1)).unwrap();
        let x = series.node_id("x").unwrap();
        let a = series.node_id("a").unwrap();
        let b = series.node_id("b").unwrap();
        assert_eq!(g.weight(x, a), Some(2.5));
        assert_eq!(g.weight(x, b), Some(2.0));
    }

    #[test]
    fn zero_weight_edges_keep_floor() {
        // edge whose source never has out-edges within the context window
        // and no cross-layer support: weight would be 0, floor applies
        let series = two_layer_series(&[
            (0, 0, "x", "a", 1.0),
            (1, 1, "z", "z2", 1.0),
        ]);
        let g = reweight_snapshot(&series, 0, 0, (1, 1)).unwrap();
        let x = series.node_id("x").unwrap();
        let a = series.node_id("a").unwrap();
        assert_eq!(g.weight(x, a), Some(REWEIGHT_FLOOR));
    }

    #[test]
    fn likelihood_recomputation_is_bit_identical() {
        let series = two_layer_series(&[
            (0, 0, "a", "b", 1.0),
            (0, 1, "a", "b", 1.0),
            (1, 1, "b", "c", 2.0),
        ]);
        let l1 = layer_likelihoods(&series, 0, (0, 1)).unwrap();
        let l2 = layer_likelihoods(&series, 0, (0, 1)).unwrap();
        assert_eq!(l1.entries, l2.entries);
    }

    #[test]
    fn co_occurring_edge_never_decreases_weight() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = 6u32;
            let mut rows: Vec<EdgeRecord> = Vec::new();
            for t in 0..2usize {
                for layer in 0..2usize {
                    for s in 0..n {
                        for d in 0..n {
                            if s != d && rng.random::<f64>() < 0.2 {
                                rows.push(EdgeRecord::new(t, layer, s, d, 1.0));
                            }
                        }
                    }
                }
            }
            let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            let series = MultiplexSeries::from_parts(labels.clone(), &rows).unwrap();
            let target_pairs = distinct_pairs(&series, 0, (0, 1));
            let Some(&(s, d)) = target_pairs.iter().min() else { continue };
            if distinct_pairs(&series, 1, (0, 1)).contains(&(s, d)) {
                continue;
            }
            let before = reweight_target_layer(&series, 0, (0, 1))
                .unwrap()
                .weight(NodeId(s), NodeId(d))
                .unwrap();
            let mut rows2 = rows.clone();
            rows2.push(EdgeRecord::new(0, 1, s, d, 1.0));
            let series2 = MultiplexSeries::from_parts(labels, &rows2).unwrap();
            let after = reweight_target_layer(&series2, 0, (0, 1))
                .unwrap()
                .weight(NodeId(s), NodeId(d))
                .unwrap();
            assert!(after >= before, "after {after} < before {before}");
        }
    }

    #[test]
    fn likelihood_csv_format() {
        let series = two_layer_series(&[
            (0, 0, "a", "b", 1.0),
            (0, 1, "a", "b", 1.0),
            (0, 1, "b", "c", 1.0),
        ]);
        let l = layer_likelihoods(&series, 0, (0, 0)).unwrap();
        let mut buf = Vec::new();
        l.write_csv(&mut buf, &[]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "target_layer,other_layer,likelihood,overlap_count,other_count\n0,1,0.5,1,2\n"
        );
    }
}
