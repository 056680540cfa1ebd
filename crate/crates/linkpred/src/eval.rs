//! Moving-window evaluation: exact rank-based AUROC, ROC curves, paired
//! t-tests and the cross-layer descriptive analyses.

use std::collections::{HashMap, HashSet};
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::graph::{MultiplexSeries, Window, WindowError};

use crate::pipeline::{self, PipelineError, PredictorSpec};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("scores must contain at least one positive and one negative")]
    DegenerateLabels,
    #[error("score at index {0} is not finite")]
    NonFiniteScore(usize),
    #[error("paired samples differ in length ({a} vs {b})")]
    LengthMismatch { a: usize, b: usize },
    #[error("need at least two paired samples, got {0}")]
    TooFewSamples(usize),
    #[error("paired differences have zero variance but nonzero mean; t is undefined")]
    DegenerateVariance,
    #[error("need more than window + 1 snapshots, got {have} (window {window})")]
    NotEnoughSnapshots { have: usize, window: usize },
    #[error("every snapshot was skipped (no snapshot had both positives and negatives)")]
    NoEvaluableSnapshots,
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Window(#[from] WindowError),
}

/// Scored binary outcomes; the unit AUROC operates on.
#[derive(Clone, Debug)]
pub struct LabeledScores {
    entries: Vec<(f64, bool)>,
}

impl LabeledScores {
    pub fn new(entries: Vec<(f64, bool)>) -> Result<LabeledScores, EvalError> {
        for (i, &(s, _)) in entries.iter().enumerate() {
            if !s.is_finite() {
                return Err(EvalError::NonFiniteScore(i));
            }
        }
        Ok(LabeledScores { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.entries.iter().filter(|&&(_, l)| l).count()
    }

    pub fn negatives(&self) -> usize {
        self.len() - self.positives()
    }
}

/// Bit pattern whose unsigned order matches ascending f64 order; negative
/// zero is canonicalized so equal scores stay ties.
#[inline]
fn ascending_score_key(score: f64) -> u64 {
    let score = if score == 0.0 { 0.0 } else { score };
    let bits = score.to_bits();
    if bits >> 63 == 1 {
        !bits
    } else {
        bits | (1 << 63)
    }
}

fn sorted_keys(scores: &LabeledScores) -> Vec<(u64, bool)> {
    let mut keyed: Vec<(u64, bool)> = scores
        .entries
        .iter()
        .map(|&(s, l)| (ascending_score_key(s), l))
        .collect();
    keyed.sort_unstable();
    keyed
}

fn auroc_from_sorted(keyed: &[(u64, bool)], n_pos: usize, n_neg: usize) -> f64 {
    let mut rank_sum_pos = 0.0f64;
    let mut i = 0;
    while i < keyed.len() {
        let mut j = i + 1;
        while j < keyed.len() && keyed[j].0 == keyed[i].0 {
            j += 1;
        }
        // 1-based midrank of the tie run [i, j)
        let midrank = (i + j + 1) as f64 / 2.0;
        for &(_, positive) in &keyed[i..j] {
            if positive {
                rank_sum_pos += midrank;
            }
        }
        i = j;
    }
    let n_pos_f = n_pos as f64;
    (rank_sum_pos - n_pos_f * (n_pos_f + 1.0) / 2.0) / (n_pos_f * n_neg as f64)
}

/// Probability that a uniformly random positive outscores a uniformly random
/// negative, ties counted half. Computed exactly from midranks, not from a
/// thresholded curve.
pub fn auroc(scores: &LabeledScores) -> Result<f64, EvalError> {
    let n_pos = scores.positives();
    let n_neg = scores.negatives();
    if n_pos == 0 || n_neg == 0 {
        return Err(EvalError::DegenerateLabels);
    }
    Ok(auroc_from_sorted(&sorted_keys(scores), n_pos, n_neg))
}

/// One point of a ROC curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
}

fn roc_from_sorted(keyed: &[(u64, bool)], n_pos: usize, n_neg: usize) -> Vec<RocPoint> {
    let n_pos = n_pos as f64;
    let n_neg = n_neg as f64;
    let mut points = vec![RocPoint { fpr: 0.0, tpr: 0.0 }];
    let (mut tp, mut fp) = (0usize, 0usize);
    // keys ascend, thresholds descend: walk tie runs from the back
    let mut j = keyed.len();
    while j > 0 {
        let mut i = j;
        while i > 0 && keyed[i - 1].0 == keyed[j - 1].0 {
            if keyed[i - 1].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i -= 1;
        }
        points.push(RocPoint {
            fpr: if n_neg > 0.0 { fp as f64 / n_neg } else { 0.0 },
            tpr: if n_pos > 0.0 { tp as f64 / n_pos } else { 0.0 },
        });
        j = i;
    }
    points
}

/// ROC staircase from (0,0) to (1,1), one point per distinct score
/// threshold, descending; tied scores step jointly.
pub fn roc_points(scores: &LabeledScores) -> Vec<RocPoint> {
    roc_from_sorted(&sorted_keys(scores), scores.positives(), scores.negatives())
}

pub fn write_roc_csv<W: Write>(mut w: W, points: &[RocPoint], comments: &[String]) -> io::Result<()> {
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    let mut csv_w = csv::Writer::from_writer(w);
    csv_w.write_record(["fpr", "tpr"])?;
    for p in points {
        csv_w.write_record([format!("{}", p.fpr), format!("{}", p.tpr)])?;
    }
    csv_w.flush()?;
    Ok(())
}

/// Paired two-sample t-test result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TTestResult {
    pub t: f64,
    /// Two-sided p-value with n-1 degrees of freedom.
    pub p: f64,
    pub df: usize,
}

/// Standard paired t statistic over equal-length samples. Identical samples
/// yield `(t = 0, p = 1)`; zero-variance differences with nonzero mean are
/// degenerate and rejected.
pub fn paired_ttest(a: &[f64], b: &[f64]) -> Result<TTestResult, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch { a: a.len(), b: b.len() });
    }
    let n = a.len();
    if n < 2 {
        return Err(EvalError::TooFewSamples(n));
    }
    let diffs: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
    if diffs.iter().all(|&d| d == 0.0) {
        return Ok(TTestResult { t: 0.0, p: 1.0, df: n - 1 });
    }
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1) as f64;
    if var == 0.0 {
        return Err(EvalError::DegenerateVariance);
    }
    let t = mean / (var / n as f64).sqrt();
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("valid dof");
    let p = 2.0 * dist.cdf(-t.abs());
    Ok(TTestResult { t, p: p.min(1.0), df: n - 1 })
}

/// Pairwise distinct-edge overlap between layers over a window.
#[derive(Clone, Debug)]
pub struct OverlapMatrix {
    pub layers: usize,
    /// Row-major `layers x layers`; entry `(i, j)` is `|U_i ∩ U_j|` (the
    /// diagonal holds `|U_i|`).
    pub counts: Vec<usize>,
    /// Entry `(i, j)` is `|U_i ∩ U_j| / |U_i|`; 0 for an empty layer.
    pub ratios: Vec<f64>,
}

impl OverlapMatrix {
    pub fn count(&self, i: usize, j: usize) -> usize {
        self.counts[i * self.layers + j]
    }

    pub fn ratio(&self, i: usize, j: usize) -> f64 {
        self.ratios[i * self.layers + j]
    }

    /// Mean off-diagonal ratio; a scalar summary of cross-layer coupling.
    pub fn mean_off_diagonal_ratio(&self) -> f64 {
        let m = self.layers;
        if m < 2 {
            return 0.0;
        }
        let mut sum = 0.0;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    sum += self.ratio(i, j);
                }
            }
        }
        sum / (m * (m - 1)) as f64
    }

    pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> io::Result<()> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        let mut csv_w = csv::Writer::from_writer(w);
        csv_w.write_record(["layer_i", "layer_j", "overlap_count", "ratio"])?;
        for i in 0..self.layers {
            for j in 0..self.layers {
                csv_w.write_record([
                    i.to_string(),
                    j.to_string(),
                    self.count(i, j).to_string(),
                    format!("{}", self.ratio(i, j)),
                ])?;
            }
        }
        csv_w.flush()?;
        Ok(())
    }
}

/// Distinct directed pair overlap between every pair of layers.
pub fn overlap_matrix(series: &MultiplexSeries, window: Window) -> Result<OverlapMatrix, EvalError> {
    let m = series.layer_count();
    let sets: Vec<HashSet<(u32, u32)>> = (0..m)
        .map(|layer| {
            series.window_union(layer, window).map(|g| {
                g.edges().map(|(s, d, _)| (s.0, d.0)).collect::<HashSet<_>>()
            })
        })
        .collect::<Result<_, _>>()?;
    let mut counts = vec![0usize; m * m];
    let mut ratios = vec![0.0f64; m * m];
    for i in 0..m {
        for j in 0..m {
            let count = if i == j {
                sets[i].len()
            } else {
                sets[i].iter().filter(|p| sets[j].contains(p)).count()
            };
            counts[i * m + j] = count;
            ratios[i * m + j] = if sets[i].is_empty() {
                0.0
            } else {
                count as f64 / sets[i].len() as f64
            };
        }
    }
    Ok(OverlapMatrix { layers: m, counts, ratios })
}

/// Five-number summary of one group of interaction weights.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupStats {
    pub group: String,
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Interaction-frequency distributions of target-layer pairs, grouped by
/// whether the pair is connected on every layer of the series.
#[derive(Clone, Debug)]
pub struct InteractionStats {
    pub groups: Vec<GroupStats>,
}

impl InteractionStats {
    pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> io::Result<()> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        let mut csv_w = csv::Writer::from_writer(w);
        csv_w.write_record(["group", "count", "min", "q1", "median", "q3", "max"])?;
        for g in &self.groups {
            csv_w.write_record([
                g.group.clone(),
                g.count.to_string(),
                format!("{}", g.min),
                format!("{}", g.q1),
                format!("{}", g.median),
                format!("{}", g.q3),
                format!("{}", g.max),
            ])?;
        }
        csv_w.flush()?;
        Ok(())
    }
}

/// Linear-interpolation quantile of ascending values.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

fn group_stats(group: &str, mut values: Vec<f64>) -> GroupStats {
    values.sort_unstable_by(|a, b| a.total_cmp(b));
    GroupStats {
        group: group.to_string(),
        count: values.len(),
        min: values[0],
        q1: quantile(&values, 0.25),
        median: quantile(&values, 0.5),
        q3: quantile(&values, 0.75),
        max: values[values.len() - 1],
    }
}

/// Partitions target-layer pairs by cross-layer connectivity and summarizes
/// their total interaction weights. Pairs are undirected; weights sum over
/// directions and snapshots. An empty target layer yields an empty report.
pub fn interaction_stats(series: &MultiplexSeries, target: usize) -> Result<InteractionStats, EvalError> {
    if target >= series.layer_count() {
        return Err(EvalError::Pipeline(PipelineError::TargetOutOfRange {
            target,
            layers: series.layer_count(),
        }));
    }
    let m = series.layer_count();
    let full: Window = (0, series.snapshot_count().saturating_sub(1));
    if series.snapshot_count() == 0 {
        return Ok(InteractionStats { groups: Vec::new() });
    }

    let mut weights: HashMap<(u32, u32), f64> = HashMap::new();
    for t in full.0..=full.1 {
        for (s, d, w) in series.snapshot(target, t).edges() {
            let key = if s.0 <= d.0 { (s.0, d.0) } else { (d.0, s.0) };
            *weights.entry(key).or_insert(0.0) += w;
        }
    }
    if weights.is_empty() {
        return Ok(InteractionStats { groups: Vec::new() });
    }

    let layer_pairs: Vec<HashSet<(u32, u32)>> = (0..m)
        .map(|layer| {
            let mut set = HashSet::new();
            for t in full.0..=full.1 {
                for (s, d, _) in series.snapshot(layer, t).edges() {
                    set.insert(if s.0 <= d.0 { (s.0, d.0) } else { (d.0, s.0) });
                }
            }
            set
        })
        .collect();

    let mut keys: Vec<(u32, u32)> = weights.keys().copied().collect();
    keys.sort_unstable();
    let mut all_layers = Vec::new();
    let mut fewer_layers = Vec::new();
    for key in keys {
        let everywhere = layer_pairs.iter().all(|set| set.contains(&key));
        let w = weights[&key];
        if everywhere {
            all_layers.push(w);
        } else {
            fewer_layers.push(w);
        }
    }

    let mut groups = Vec::new();
    if !all_layers.is_empty() {
        groups.push(group_stats("all_layers", all_layers));
    }
    if !fewer_layers.is_empty() {
        groups.push(group_stats("fewer_layers", fewer_layers));
    }
    Ok(InteractionStats { groups })
}

/// Moving-window evaluation report for one variant.
#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub variant: String,
    pub target_layer: usize,
    #[serde(rename = "T")]
    pub window_len: usize,
    pub theta: f64,
    pub per_snapshot_auroc: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation of the per-snapshot AUROCs.
    pub std: f64,
    /// Standard error of the mean (std / sqrt(n)).
    pub stderr: f64,
    pub skipped: Vec<usize>,
    /// Snapshots actually evaluated, aligned with `per_snapshot_auroc`.
    pub evaluated: Vec<usize>,
    /// Run provenance filled in by the caller; CSV outputs carry it as `#`
    /// header lines, which JSON cannot, so here it is a field.
    #[serde(skip_serializing_if = "std::collections::BTreeMap::is_empty")]
    pub manifest: std::collections::BTreeMap<String, String>,
    /// ROC points per evaluated snapshot; exported as CSV, not JSON.
    #[serde(skip)]
    pub roc: Vec<(usize, Vec<RocPoint>)>,
}

impl EvalReport {
    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        Ok(())
    }
}

enum SnapshotOutcome {
    Evaluated { t: usize, auroc: f64, roc: Vec<RocPoint> },
    Skipped { t: usize },
}

/// Evaluates one predictor over every snapshot `t` with `T < t < T_total`:
/// predict from the `T` preceding snapshots, label candidates by edge
/// presence at `t`, and accumulate the exact AUROC. Snapshots without both
/// positives and negatives among the candidates are skipped and logged.
pub fn moving_window_eval(
    series: &MultiplexSeries,
    target: usize,
    spec: &PredictorSpec,
) -> Result<EvalReport, EvalError> {
    spec.validate().map_err(EvalError::Pipeline)?;
    let window_len = spec.decay.window_len;
    if series.snapshot_count() <= window_len + 1 {
        return Err(EvalError::NotEnoughSnapshots {
            have: series.snapshot_count(),
            window: window_len,
        });
    }
    let ts: Vec<usize> = (window_len + 1..series.snapshot_count()).collect();
    let outcomes: Vec<Result<SnapshotOutcome, EvalError>> = ts
        .par_iter()
        .map(|&t| {
            let prediction = match pipeline::predict(series, target, t, spec) {
                Ok(p) => p,
                Err(PipelineError::EmptyCandidates) => {
                    log::warn!("skipping snapshot {t}: no candidate pairs");
                    return Ok(SnapshotOutcome::Skipped { t });
                }
                Err(e) => return Err(e.into()),
            };
            let truth = series.snapshot(target, t);
            let entries: Vec<(f64, bool)> = prediction
                .candidates
                .pairs()
                .iter()
                .map(|&p| (prediction.scores.get(p), truth.connected(p.src, p.dst)))
                .collect();
            let n_pos = entries.iter().filter(|&&(_, l)| l).count();
            if n_pos == 0 || n_pos == entries.len() {
                log::warn!(
                    "skipping snapshot {t}: {} candidates, {n_pos} positives",
                    entries.len()
                );
                return Ok(SnapshotOutcome::Skipped { t });
            }
            let n_neg = entries.len() - n_pos;
            let labeled = LabeledScores::new(entries)?;
            let keyed = sorted_keys(&labeled);
            Ok(SnapshotOutcome::Evaluated {
                t,
                auroc: auroc_from_sorted(&keyed, n_pos, n_neg),
                roc: roc_from_sorted(&keyed, n_pos, n_neg),
            })
        })
        .collect();

    let mut per_snapshot = Vec::new();
    let mut evaluated = Vec::new();
    let mut skipped = Vec::new();
    let mut roc = Vec::new();
    for outcome in outcomes {
        match outcome? {
            SnapshotOutcome::Evaluated { t, auroc, roc: points } => {
                per_snapshot.push(auroc);
                evaluated.push(t);
                roc.push((t, points));
            }
            SnapshotOutcome::Skipped { t } => skipped.push(t),
        }
    }
    if per_snapshot.is_empty() {
        return Err(EvalError::NoEvaluableSnapshots);
    }
    let n = per_snapshot.len() as f64;
    let mean = per_snapshot.iter().sum::<f64>() / n;
    let std = if per_snapshot.len() < 2 {
        0.0
    } else {
        (per_snapshot.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Ok(EvalReport {
        variant: spec.variant.name(),
        target_layer: target,
        window_len,
        theta: spec.decay.theta,
        per_snapshot_auroc: per_snapshot,
        mean,
        std,
        stderr: std / n.sqrt(),
        skipped,
        evaluated,
        manifest: Default::default(),
        roc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled(pos: &[f64], neg: &[f64]) -> LabeledScores {
        let mut entries: Vec<(f64, bool)> = pos.iter().map(|&s| (s, true)).collect();
        entries.extend(neg.iter().map(|&s| (s, false)));
        LabeledScores::new(entries).unwrap()
    }

    #[test]
    fn perfect_separation_is_one() {
        let l = labeled(&[0.9, 0.8, 0.7], &[0.3, 0.2]);
        assert_eq!(auroc(&l).unwrap(), 1.0);
    }

    #[test]
    fn hand_case_three_quarters() {
        let l = labeled(&[0.9, 0.4], &[0.6, 0.1]);
        assert_eq!(auroc(&l).unwrap(), 0.75);
    }

    #[test]
    fn all_ties_give_half() {
        let l = labeled(&[0.5, 0.5], &[0.5, 0.5, 0.5]);
        assert_eq!(auroc(&l).unwrap(), 0.5);
    }

    #[test]
    fn degenerate_labels_error() {
        let l = labeled(&[1.0], &[]);
        assert!(matches!(auroc(&l), Err(EvalError::DegenerateLabels)));
        assert!(LabeledScores::new(vec![(f64::NAN, true)]).is_err());
    }

    #[test]
    fn complement_symmetry() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let entries: Vec<(f64, bool)> = (0..40)
                .map(|_| ((rng.random::<f64>() * 4.0).round() / 4.0, rng.random::<bool>()))
                .collect();
            let Ok(l) = LabeledScores::new(entries.clone()) else { continue };
            if l.positives() == 0 || l.negatives() == 0 {
                continue;
            }
            let neg = LabeledScores::new(entries.iter().map(|&(s, b)| (-s, b)).collect()).unwrap();
            let sum = auroc(&l).unwrap() + auroc(&neg).unwrap();
            assert!((sum - 1.0).abs() < 1e-12, "sum {sum}");
        }
    }

    #[test]
    fn auroc_invariant_under_monotone_transform() {
        let l = labeled(&[0.9, 0.4, 0.4], &[0.6, 0.1, 0.4]);
        let transformed = LabeledScores::new(
            l.entries.iter().map(|&(s, b)| (s * 3.0 + 10.0, b)).collect(),
        )
        .unwrap();
        assert_eq!(auroc(&l).unwrap(), auroc(&transformed).unwrap());
    }

    #[test]
    fn roc_curve_shape() {
        let l = labeled(&[0.9, 0.4], &[0.6, 0.1]);
        let points = roc_points(&l);
        assert_eq!(points.first(), Some(&RocPoint { fpr: 0.0, tpr: 0.0 }));
        assert_eq!(points.last(), Some(&RocPoint { fpr: 1.0, tpr: 1.0 }));
        assert_eq!(points.len(), 5);
    }

    #[test]
    fn ttest_identical_lists() {
        let a = [0.7, 0.8, 0.9];
        let r = paired_ttest(&a, &a).unwrap();
        assert_eq!(r.t, 0.0);
        assert_eq!(r.p, 1.0);
    }

    #[test]
    fn ttest_hand_case() {
        // differences (1, 2, 3): t = 2 / (1/sqrt(3))
        let a = [2.0, 4.0, 6.0];
        let b = [1.0, 2.0, 3.0];
        let r = paired_ttest(&a, &b).unwrap();
        assert!((r.t - 2.0 * 3.0f64.sqrt()).abs() < 1e-12, "t = {}", r.t);
        assert_eq!(r.df, 2);
        assert!(r.p > 0.0 && r.p < 1.0);
    }

    #[test]
    fn ttest_errors() {
        assert!(matches!(
            paired_ttest(&[1.0, 2.0], &[1.0]),
            Err(EvalError::LengthMismatch { .. })
        ));
        assert!(matches!(paired_ttest(&[1.0], &[0.5]), Err(EvalError::TooFewSamples(1))));
        // constant nonzero difference
        assert!(matches!(
            paired_ttest(&[2.0, 3.0], &[1.0, 2.0]),
            Err(EvalError::DegenerateVariance)
        ));
    }

    fn series_rows(rows: &[(usize, usize, u32, u32, f64)], n: u32) -> MultiplexSeries {
        use crate::graph::EdgeRecord;
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let records: Vec<EdgeRecord> = rows
            .iter()
            .map(|&(t, l, s, d, w)| EdgeRecord::new(t, l, s, d, w))
            .collect();
        MultiplexSeries::from_parts(labels, &records).unwrap()
    }

    #[test]
    fn overlap_identical_and_disjoint() {
        let series = series_rows(
            &[
                (0, 0, 0, 1, 1.0),
                (0, 0, 2, 3, 1.0),
                (0, 1, 0, 1, 5.0),
                (0, 1, 2, 3, 5.0),
            ],
            4,
        );
        let o = overlap_matrix(&series, (0, 0)).unwrap();
        assert_eq!(o.ratio(0, 1), 1.0);
        assert_eq!(o.ratio(1, 0), 1.0);
        assert_eq!(o.count(0, 0), 2);

        let series = series_rows(&[(0, 0, 0, 1, 1.0), (0, 1, 2, 3, 1.0)], 4);
        let o = overlap_matrix(&series, (0, 0)).unwrap();
        assert_eq!(o.count(0, 1), 0);
        assert_eq!(o.ratio(0, 1), 0.0);
    }

    #[test]
    fn interaction_groups_split_by_layer_coverage() {
        // pairs on all layers interact with weight 10, others with 1
        let series = series_rows(
            &[
                (0, 0, 0, 1, 10.0),
                (0, 1, 0, 1, 2.0),
                (0, 0, 2, 3, 1.0),
                (0, 0, 3, 4, 1.0),
            ],
            5,
        );
        let stats = interaction_stats(&series, 0).unwrap();
        assert_eq!(stats.groups.len(), 2);
        let all = &stats.groups[0];
        assert_eq!(all.group, "all_layers");
        assert_eq!(all.median, 10.0);
        let fewer = &stats.groups[1];
        assert_eq!(fewer.median, 1.0);
    }

    #[test]
    fn interaction_single_layer_is_one_group() {
        let series = series_rows(&[(0, 0, 0, 1, 3.0), (0, 0, 1, 2, 4.0)], 3);
        let stats = interaction_stats(&series, 0).unwrap();
        assert_eq!(stats.groups.len(), 1);
        assert_eq!(stats.groups[0].group, "all_layers");
    }

    #[test]
    fn interaction_empty_target_is_empty_report() {
        let series = series_rows(&[(0, 1, 0, 1, 3.0)], 2);
        let stats = interaction_stats(&series, 0).unwrap();
        assert!(stats.groups.is_empty());
    }

    #[test]
    fn quantiles_are_linear_interpolated() {
        let vals = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&vals, 0.5), 2.5);
        assert_eq!(quantile(&vals, 0.25), 1.75);
        assert_eq!(quantile(&vals, 0.0), 1.0);
        assert_eq!(quantile(&vals, 1.0), 4.0);
    }
}
