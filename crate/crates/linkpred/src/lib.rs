//! Temporal link prediction for dynamic multiplex networks.
//!
//! The library predicts future links in one layer of a multiplex network
//! (several edge types over a shared node set, observed as snapshots) by
//! combining:
//!
//! - weighted topological similarity metrics ([`metrics`]),
//! - cross-layer likelihood edge weighting ([`crosslayer`]),
//! - exponentially decayed temporal aggregation ([`temporal`]),
//! - Borda rank aggregation ([`aggregate`]),
//!
//! wired together by [`pipeline::predict`] and its ablated variants, with a
//! moving-window AUROC evaluation harness ([`eval`]) and a seeded coevolving
//! network generator ([`synth`]).
//!
//! All prediction and evaluation entry points are deterministic: the same
//! data, spec and seed produce bit-identical results at any thread count.

pub mod aggregate;
pub mod crosslayer;
pub mod eval;
pub mod graph;
pub mod metrics;
pub mod pipeline;
pub mod synth;
pub mod temporal;

pub use aggregate::{borda, BordaTally, RankedList};
pub use crosslayer::{layer_likelihoods, reweight_target_layer, LayerLikelihoods};
pub use eval::{auroc, moving_window_eval, paired_ttest, EvalReport, LabeledScores};
pub use graph::{MultiplexSeries, NeighborMode, NodeId, SnapshotGraph};
pub use metrics::{CandidateSet, MetricKind, Pair, PageRankParams, ScoreMatrix};
pub use pipeline::{predict, CandidatePolicy, Prediction, PredictorSpec, Variant};
pub use synth::{generate, GenParams};
pub use temporal::{decay_aggregate, DecayParams};
