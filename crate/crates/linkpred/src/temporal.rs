//! Exponentially decayed aggregation of score-matrix time series.

use thiserror::Error;

use crate::metrics::{Pair, ScoreMatrix};

#[derive(Debug, Error)]
pub enum TemporalError {
    #[error("decay window is empty")]
    EmptyWindow,
    #[error("expected {expected} matrices for the decay window, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrices mix metric tags {0:?} and {1:?}")]
    TagMismatch(String, String),
    #[error("invalid decay parameters: {0}")]
    InvalidParams(String),
}

/// Decay smoothing weight and window length.
///
/// Defaults are `theta = 0.4` and `window_len = 3`, overridable per run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayParams {
    /// Smoothing weight for previous time periods, in `[0, 1]`.
    pub theta: f64,
    /// Number of snapshots aggregated (`T >= 1`).
    pub window_len: usize,
}

impl Default for DecayParams {
    fn default() -> Self {
        DecayParams { theta: 0.4, window_len: 3 }
    }
}

impl DecayParams {
    pub fn validate(&self) -> Result<(), TemporalError> {
        if !(0.0..=1.0).contains(&self.theta) || self.theta.is_nan() {
            return Err(TemporalError::InvalidParams(format!(
                "theta {} not in [0, 1]",
                self.theta
            )));
        }
        if self.window_len == 0 {
            return Err(TemporalError::InvalidParams("window length is zero".into()));
        }
        Ok(())
    }
}

/// `theta^exponent` with the `0^0 = 1` convention, so the newest matrix
/// always carries full weight even at `theta = 0`.
#[inline]
pub fn decay_weight(theta: f64, exponent: usize) -> f64 {
    if exponent == 0 {
        1.0
    } else {
        theta.powi(exponent as i32)
    }
}

/// Entry-wise `Σ_k theta^(T-1-k) · M_k` over matrices ordered oldest first
/// (`k = T-1` is the most recent, exponent 0). Pairs absent from a matrix
/// contribute 0.
pub fn decay_aggregate(matrices: &[ScoreMatrix], params: &DecayParams) -> Result<ScoreMatrix, TemporalError> {
    params.validate()?;
    if matrices.is_empty() {
        return Err(TemporalError::EmptyWindow);
    }
    if matrices.len() != params.window_len {
        return Err(TemporalError::LengthMismatch {
            expected: params.window_len,
            got: matrices.len(),
        });
    }
    let tag = matrices[0].tag().to_string();
    for m in &matrices[1..] {
        if m.tag() != tag {
            return Err(TemporalError::TagMismatch(tag, m.tag().to_string()));
        }
    }

    // accumulate matrix-major: every key receives its additions in window
    // order, so per-entry rounding is identical no matter how the sparse
    // union is discovered
    let t = matrices.len();
    let mut acc: std::collections::HashMap<Pair, f64, crate::metrics::BuildPairHasher> =
        Default::default();
    for (k, m) in matrices.iter().enumerate() {
        let w = decay_weight(params.theta, t - 1 - k);
        for (pair, v) in m.iter() {
            *acc.entry(pair).or_insert(0.0) += w * v;
        }
    }
    let mut out = ScoreMatrix::new(tag);
    for (pair, v) in acc {
        out.insert(pair, v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeId;

    fn single(tag: &str, score: f64) -> ScoreMatrix {
        let mut m = ScoreMatrix::new(tag);
        m.insert(Pair::canonical(NodeId(0), NodeId(1)), score);
        m
    }

    fn series(scores: [f64; 3]) -> Vec<ScoreMatrix> {
        scores.iter().map(|&s| single("cn", s)).collect()
    }

    #[test]
    fn decay_matches_hand_computation() {
        let p = Pair::canonical(NodeId(0), NodeId(1));
        let out = decay_aggregate(&series([1.0, 2.0, 4.0]), &DecayParams { theta: 0.5, window_len: 3 }).unwrap();
        assert_eq!(out.get(p), 4.0 + 1.0 + 0.25);
    }

    #[test]
    fn unit_decay_is_plain_sum() {
        let p = Pair::canonical(NodeId(0), NodeId(1));
        let out = decay_aggregate(&series([1.0, 2.0, 4.0]), &DecayParams { theta: 1.0, window_len: 3 }).unwrap();
        assert_eq!(out.get(p), 7.0);
    }

    #[test]
    fn zero_decay_keeps_only_newest() {
        let p = Pair::canonical(NodeId(0), NodeId(1));
        let out = decay_aggregate(&series([1.0, 2.0, 4.0]), &DecayParams { theta: 0.0, window_len: 3 }).unwrap();
        assert_eq!(out.get(p), 4.0);
    }

    #[test]
    fn window_of_one_is_identity() {
        let m = single("cn", 3.5);
        let out = decay_aggregate(std::slice::from_ref(&m), &DecayParams { theta: 0.4, window_len: 1 }).unwrap();
        assert_eq!(out, m);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            decay_aggregate(&[], &DecayParams::default()),
            Err(TemporalError::EmptyWindow)
        ));
        assert!(matches!(
            decay_aggregate(&series([1.0, 2.0, 3.0]), &DecayParams { theta: 0.4, window_len: 2 }),
            Err(TemporalError::LengthMismatch { .. })
        ));
        let mixed = vec![single("cn", 1.0), single("jc", 1.0)];
        assert!(matches!(
            decay_aggregate(&mixed, &DecayParams { theta: 0.4, window_len: 2 }),
            Err(TemporalError::TagMismatch(..))
        ));
        assert!(DecayParams { theta: 1.2, window_len: 3 }.validate().is_err());
        assert!(DecayParams { theta: 0.4, window_len: 0 }.validate().is_err());
    }

    #[test]
    fn defaults_match_documented_values() {
        let d = DecayParams::default();
        assert_eq!(d.theta, 0.4);
        assert_eq!(d.window_len, 3);
    }

    #[test]
    fn sparsity_is_subset_of_input_union() {
        let p01 = Pair::canonical(NodeId(0), NodeId(1));
        let p02 = Pair::canonical(NodeId(0), NodeId(2));
        let mut a = ScoreMatrix::new("cn");
        a.insert(p01, 1.0);
        let mut b = ScoreMatrix::new("cn");
        b.insert(p02, 2.0);
        let out = decay_aggregate(&[a, b], &DecayParams { theta: 0.5, window_len: 2 }).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out.get(p01), 0.5);
        assert_eq!(out.get(p02), 2.0);
    }
}
