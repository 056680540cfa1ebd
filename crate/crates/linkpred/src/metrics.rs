//! Weighted node-similarity scorers.
//!
//! Every scorer maps a [`SnapshotGraph`] and a [`CandidateSet`] to a sparse
//! [`ScoreMatrix`]. `Γ(x)` is taken under a [`NeighborMode`] (undirected
//! union by default); scores for pairs absent from a matrix are implicitly
//! zero. All scorers are pure functions of immutable graphs, and candidate
//! partitions are combined in index order, so parallel scheduling cannot
//! change output values.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{NeighborMode, NodeId, SnapshotGraph};

/// The eight similarity metrics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MetricKind {
    CommonNeighbors,
    Jaccard,
    PreferentialAttachment,
    AdamicAdar,
    ResourceAllocation,
    PageRank,
    InversePathDistance,
    ClusteringProduct,
}

impl MetricKind {
    pub const ALL: [MetricKind; 8] = [
        MetricKind::CommonNeighbors,
        MetricKind::Jaccard,
        MetricKind::PreferentialAttachment,
        MetricKind::AdamicAdar,
        MetricKind::ResourceAllocation,
        MetricKind::PageRank,
        MetricKind::InversePathDistance,
        MetricKind::ClusteringProduct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::CommonNeighbors => "cn",
            MetricKind::Jaccard => "jc",
            MetricKind::PreferentialAttachment => "pa",
            MetricKind::AdamicAdar => "aa",
            MetricKind::ResourceAllocation => "ra",
            MetricKind::PageRank => "pr",
            MetricKind::InversePathDistance => "ipd",
            MetricKind::ClusteringProduct => "pcf",
        }
    }

    pub fn parse(s: &str) -> Option<MetricKind> {
        MetricKind::ALL.iter().copied().find(|m| m.name() == s)
    }
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("invalid pagerank parameters: {0}")]
    InvalidPageRankParams(String),
    #[error("pagerank did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        /// Last iterate, for inspection.
        last: Vec<f64>,
    },
    #[error("candidate pair ({0}, {0}) is a self-pair")]
    SelfPair(NodeId),
    #[error("candidate node {node} out of range ({count} nodes)")]
    NodeOutOfRange { node: NodeId, count: usize },
}

/// An ordered node pair. Canonical form (`src < dst`) is used for undirected
/// candidate sets.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Pair {
    pub src: NodeId,
    pub dst: NodeId,
}

/// Pair-keyed maps sit on every scoring hot path; the default SipHash costs
/// more than the arithmetic around it. Pairs pack into one word, so a single
/// 64-bit mix suffices.
#[derive(Default, Clone)]
pub struct PairHasher(u64);

impl std::hash::Hasher for PairHasher {
    #[inline]
    fn finish(&self) -> u64 {
        // splitmix64 finalizer
        let mut x = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^ (x >> 31)
    }

    #[inline]
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = self.0.rotate_left(8) ^ u64::from(b);
        }
    }

    #[inline]
    fn write_u32(&mut self, i: u32) {
        self.0 = (self.0 << 32) | u64::from(i);
    }
}

pub type BuildPairHasher = std::hash::BuildHasherDefault<PairHasher>;
pub(crate) type PairMap<V> = HashMap<Pair, V, BuildPairHasher>;

impl Pair {
    pub fn new(src: NodeId, dst: NodeId) -> Pair {
        Pair { src, dst }
    }

    pub fn canonical(a: NodeId, b: NodeId) -> Pair {
        if a <= b {
            Pair { src: a, dst: b }
        } else {
            Pair { src: b, dst: a }
        }
    }
}

impl std::fmt::Display for Pair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.src, self.dst)
    }
}

/// Explicit list of node pairs to score, kept sorted and deduplicated.
///
/// Restricting scoring to an explicit set keeps the quadratic all-pairs space
/// out of the hot path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    pairs: Vec<Pair>,
}

impl CandidateSet {
    /// Canonicalizes (for undirected mode), drops self-pairs, sorts, dedups.
    pub fn new<I>(pairs: I, mode: NeighborMode) -> CandidateSet
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut v: Vec<Pair> = pairs
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| match mode {
                NeighborMode::UndirectedUnion => Pair::canonical(a, b),
                _ => Pair::new(a, b),
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        CandidateSet { pairs: v }
    }

    /// Wraps pairs already known to be canonical, sorted and deduplicated.
    pub(crate) fn from_sorted(pairs: Vec<Pair>) -> CandidateSet {
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        CandidateSet { pairs }
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Sparse map from node pair to score, tagged with the producing metric.
///
/// Entries are finite and nonzero; pairs absent from the map score 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix {
    tag: String,
    /// Snapshot window the scores were computed over, when known.
    window: Option<(usize, usize)>,
    entries: PairMap<f64>,
}

impl ScoreMatrix {
    pub fn new(tag: impl Into<String>) -> ScoreMatrix {
        ScoreMatrix { tag: tag.into(), window: None, entries: PairMap::default() }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// Records which snapshot window produced these scores.
    pub fn set_window(&mut self, window: (usize, usize)) {
        self.window = Some(window);
    }

    pub fn window(&self) -> Option<(usize, usize)> {
        self.window
    }

    /// Records a score. Zero values are dropped (absent pairs already score
    /// zero); non-finite values violate the matrix invariant and panic.
    pub fn insert(&mut self, pair: Pair, score: f64) {
        assert!(score.is_finite(), "score for {pair} is not finite");
        if score != 0.0 {
            self.entries.insert(pair, score);
        }
    }

    #[inline]
    pub fn get(&self, pair: Pair) -> f64 {
        self.entries.get(&pair).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterates entries in arbitrary order; use [`ScoreMatrix::sorted_pairs`]
    /// or [`ScoreMatrix::sorted_by_score`] when order matters.
    pub fn iter(&self) -> impl Iterator<Item = (Pair, f64)> + '_ {
        self.entries.iter().map(|(&p, &s)| (p, s))
    }

    /// Entry keys in ascending pair order.
    pub fn sorted_pairs(&self) -> Vec<Pair> {
        let mut keys: Vec<Pair> = self.entries.keys().copied().collect();
        keys.sort_unstable();
        keys
    }

    /// Entries sorted by score descending, then pair ascending (the export
    /// order).
    pub fn sorted_by_score(&self) -> Vec<(Pair, f64)> {
        let mut v: Vec<(Pair, f64)> = self.iter().collect();
        v.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        v
    }

    /// Writes `src,dst,score` rows in export order. `comments` lines are
    /// emitted first, prefixed with `# `.
    pub fn write_csv<W: Write>(&self, mut w: W, labels: &[String], comments: &[String]) -> io::Result<()> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        let mut csv_w = csv::Writer::from_writer(w);
        csv_w.write_record(["src", "dst", "score"])?;
        for (pair, score) in self.sorted_by_score() {
            csv_w.write_record([
                labels[pair.src.index()].as_str(),
                labels[pair.dst.index()].as_str(),
                &format!("{score}"),
            ])?;
        }
        csv_w.flush()?;
        Ok(())
    }
}

/// Parameters of the weighted PageRank fixed point.
#[derive(Clone, Copy, Debug)]
pub struct PageRankParams {
    /// Damping factor, in (0, 1).
    pub damping: f64,
    /// L1 convergence threshold, > 0.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PageRankParams {
    fn default() -> Self {
        PageRankParams { damping: 0.85, tolerance: 1e-10, max_iterations: 200 }
    }
}

impl PageRankParams {
    pub fn validate(&self) -> Result<(), MetricError> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(MetricError::InvalidPageRankParams(format!(
                "damping {} not in (0, 1)",
                self.damping
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(MetricError::InvalidPageRankParams(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(MetricError::InvalidPageRankParams("max_iterations is zero".into()));
        }
        Ok(())
    }
}

/// Cost model for the shortest-distance metric: edge weight as cost (the
/// literal reading) or its reciprocal (tie-strength reading).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum IpdCost {
    #[default]
    WeightAsCost,
    InverseWeight,
}

/// Flattened adjacency of a graph under one neighbor mode, shared by the
/// scorers so the merge is built once per graph.
pub(crate) struct NeighborhoodView {
    node_count: usize,
    off: Vec<u32>,
    adj: Vec<(u32, f64)>,
    strength: Vec<f64>,
}

impl NeighborhoodView {
    pub(crate) fn build(graph: &SnapshotGraph, mode: NeighborMode) -> NeighborhoodView {
        let n = graph.node_count();
        let mut off = Vec::with_capacity(n + 1);
        let mut adj = Vec::new();
        off.push(0u32);
        for x in 0..n {
            let nbrs = graph.neighbors(NodeId(x as u32), mode);
            adj.extend(nbrs.iter().map(|&(id, w)| (id.0, w)));
            off.push(adj.len() as u32);
        }
        let strength = (0..n)
            .map(|x| adj[off[x] as usize..off[x + 1] as usize].iter().map(|&(_, w)| w).sum())
            .collect();
        NeighborhoodView { node_count: n, off, adj, strength }
    }

    #[inline]
    pub(crate) fn neighbors(&self, x: u32) -> &[(u32, f64)] {
        &self.adj[self.off[x as usize] as usize..self.off[x as usize + 1] as usize]
    }

    #[inline]
    pub(crate) fn strength(&self, x: u32) -> f64 {
        self.strength[x as usize]
    }

    pub(crate) fn node_count(&self) -> usize {
        self.node_count
    }
}

/// Per-pair accumulator of the four intersection-family metrics.
struct PairScores {
    cn: f64,
    jc: f64,
    pa: f64,
    aa: f64,
    ra: f64,
}

fn intersection_scores(view: &NeighborhoodView, pair: Pair) -> PairScores {
    let (x, y) = (pair.src.0, pair.dst.0);
    let ax = view.neighbors(x);
    let ay = view.neighbors(y);
    let (mut i, mut j) = (0usize, 0usize);
    let (mut cn, mut aa, mut ra) = (0.0f64, 0.0f64, 0.0f64);
    while i < ax.len() && j < ay.len() {
        match ax[i].0.cmp(&ay[j].0) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                let both = ax[i].1 + ay[j].1;
                let sz = view.strength(ax[i].0);
                cn += both;
                aa += both / (1.0 + sz).ln();
                ra += both / sz;
                i += 1;
                j += 1;
            }
        }
    }
    let sx = view.strength(x);
    let sy = view.strength(y);
    let denom = sx + sy;
    // the ratio is <= 1 in exact arithmetic; clamp the last-ulp spill when
    // the intersection sum and the strength sums round differently
    let jc = if denom > 0.0 { (cn / denom).min(1.0) } else { 0.0 };
    PairScores { cn, jc, pa: sx * sy, aa, ra }
}

fn collect_matrix(tag: &str, pairs: &CandidateSet, values: Vec<f64>) -> ScoreMatrix {
    let mut m = ScoreMatrix::new(tag);
    for (&pair, &v) in pairs.pairs().iter().zip(values.iter()) {
        m.insert(pair, v);
    }
    m
}

fn score_intersection_family(
    graph: &SnapshotGraph,
    mode: NeighborMode,
    pairs: &CandidateSet,
    pick: fn(&PairScores) -> f64,
    tag: &str,
) -> ScoreMatrix {
    let view = NeighborhoodView::build(graph, mode);
    let values: Vec<f64> = pairs
        .pairs()
        .par_iter()
        .map(|&p| pick(&intersection_scores(&view, p)))
        .collect();
    collect_matrix(tag, pairs, values)
}

/// `CN(x,y) = Σ_{z ∈ Γ(x)∩Γ(y)} w(x,z) + w(y,z)`
pub fn common_neighbors(graph: &SnapshotGraph, mode: NeighborMode, pairs: &CandidateSet) -> ScoreMatrix {
    score_intersection_family(graph, mode, pairs, |s| s.cn, "cn")
}

/// `JC(x,y) = CN(x,y) / (Σ_{a ∈ Γ(x)} w(x,a) + Σ_{b ∈ Γ(y)} w(y,b))`, 0 when
/// the denominator vanishes (both nodes isolated).
pub fn jaccard(graph: &SnapshotGraph, mode: NeighborMode, pairs: &CandidateSet) -> ScoreMatrix {
    score_intersection_family(graph, mode, pairs, |s| s.jc, "jc")
}

/// `PA(x,y) = (Σ_{z ∈ Γ(x)} w(x,z)) · (Σ_{z ∈ Γ(y)} w(y,z))`
pub fn preferential_attachment(graph: &SnapshotGraph, mode: NeighborMode, pairs: &CandidateSet) -> ScoreMatrix {
    score_intersection_family(graph, mode, pairs, |s| s.pa, "pa")
}

/// `AA(x,y) = Σ_{z ∈ Γ(x)∩Γ(y)} (w(x,z) + w(y,z)) / ln(1 + Σ_{c ∈ Γ(z)} w(z,c))`
///
/// Natural logarithm; the argument is always > 1 for a common neighbor, so
/// the term is finite.
pub fn adamic_adar(graph: &SnapshotGraph, mode: NeighborMode, pairs: &CandidateSet) -> ScoreMatrix {
    score_intersection_family(graph, mode, pairs, |s| s.aa, "aa")
}

/// `RA(x,y) = Σ_{z ∈ Γ(x)∩Γ(y)} (w(x,z) + w(y,z)) / Σ_{c ∈ Γ(z)} w(z,c)`
pub fn resource_allocation(graph: &SnapshotGraph, mode: NeighborMode, pairs: &CandidateSet) -> ScoreMatrix {
    score_intersection_family(graph, mode, pairs, |s| s.ra, "ra")
}

/// Weighted PageRank node scores.
///
/// Walk mass moves along `Γ` edges proportionally to edge weight
/// (`w(k,x)/L(k)` with `L(k)` the weight sum of `k`'s links); dangling nodes
/// redistribute uniformly; the teleport vector is each node's share of total
/// incident weight (uniform when the graph has no weight at all). Scores sum
/// to 1. Converges when the L1 step falls below `tolerance`.
pub fn weighted_pagerank(
    graph: &SnapshotGraph,
    mode: NeighborMode,
    params: &PageRankParams,
) -> Result<Vec<f64>, MetricError> {
    params.validate()?;
    let n = graph.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    // Gather along incoming mass: the undirected adjacency is symmetric, so
    // it serves both roles; directed modes gather along the transpose.
    let walk = NeighborhoodView::build(graph, mode);
    let transpose = match mode {
        NeighborMode::UndirectedUnion => None,
        NeighborMode::Out => Some(NeighborhoodView::build(graph, NeighborMode::In)),
        NeighborMode::In => Some(NeighborhoodView::build(graph, NeighborMode::Out)),
    };
    let gather = transpose.as_ref().unwrap_or(&walk);
    let incident: Vec<f64> = (0..n as u32)
        .map(|x| match mode {
            NeighborMode::UndirectedUnion => walk.strength(x),
            _ => graph.weighted_out_degree(NodeId(x)) + graph.weighted_in_degree(NodeId(x)),
        })
        .collect();
    let total_incident: f64 = incident.iter().sum();
    let teleport: Vec<f64> = if total_incident > 0.0 {
        incident.iter().map(|&w| w / total_incident).collect()
    } else {
        vec![1.0 / n as f64; n]
    };

    let alpha = params.damping;
    let inv_n = 1.0 / n as f64;
    let mut x = teleport.clone();
    let mut residual = f64::INFINITY;
    for _ in 0..params.max_iterations {
        let dangling: f64 = (0..n).filter(|&k| walk.strength(k as u32) == 0.0).map(|k| x[k]).sum();
        let next: Vec<f64> = (0..n as u32)
            .into_par_iter()
            .map(|v| {
                let mut acc = 0.0;
                for &(k, w) in gather.neighbors(v) {
                    let l = walk.strength(k);
                    if l > 0.0 {
                        acc += x[k as usize] * (w / l);
                    }
                }
                (1.0 - alpha) * teleport[v as usize] + alpha * (acc + dangling * inv_n)
            })
            .collect();
        residual = next.iter().zip(x.iter()).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if residual <= params.tolerance {
            return Ok(x);
        }
    }
    Err(MetricError::NonConvergence {
        iterations: params.max_iterations,
        residual,
        last: x,
    })
}

/// PageRank pair scores: `PR(x) · PR(y)`.
pub fn pagerank_scores(
    graph: &SnapshotGraph,
    mode: NeighborMode,
    pairs: &CandidateSet,
    params: &PageRankParams,
) -> Result<ScoreMatrix, MetricError> {
    let pr = weighted_pagerank(graph, mode, params)?;
    let values: Vec<f64> = pairs
        .pairs()
        .iter()
        .map(|p| pr[p.src.index()] * pr[p.dst.index()])
        .collect();
    Ok(collect_matrix("pr", pairs, values))
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra distances from `src` to the `targets` (sorted ids); unreachable
/// targets are reported as infinity. Stops as soon as every target settles.
fn shortest_distances(
    view: &NeighborhoodView,
    src: u32,
    targets: &[u32],
    cost: IpdCost,
    unit_costs: bool,
) -> Vec<f64> {
    let n = view.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut remaining = targets.len();
    let mut found = vec![false; targets.len()];
    dist[src as usize] = 0.0;

    if unit_costs {
        // uniform edge cost: plain BFS
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(src);
        let mut settled = vec![false; n];
        settled[src as usize] = true;
        if let Ok(i) = targets.binary_search(&src) {
            if !found[i] {
                found[i] = true;
                remaining -= 1;
            }
        }
        while let Some(u) = queue.pop_front() {
            if remaining == 0 {
                break;
            }
            for &(v, _) in view.neighbors(u) {
                if !settled[v as usize] {
                    settled[v as usize] = true;
                    dist[v as usize] = dist[u as usize] + 1.0;
                    if let Ok(i) = targets.binary_search(&v) {
                        if !found[i] {
                            found[i] = true;
                            remaining -= 1;
                        }
                    }
                    queue.push_back(v);
                }
            }
        }
        return targets.iter().map(|&t| dist[t as usize]).collect();
    }

    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry { dist: 0.0, node: src });
    while let Some(HeapEntry { dist: d, node: u }) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        if let Ok(i) = targets.binary_search(&u) {
            if !found[i] {
                found[i] = true;
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
        }
        for &(v, w) in view.neighbors(u) {
            let edge_cost = match cost {
                IpdCost::WeightAsCost => w,
                IpdCost::InverseWeight => 1.0 / w,
            };
            let nd = d + edge_cost;
            if nd < dist[v as usize] {
                dist[v as usize] = nd;
                heap.push(HeapEntry { dist: nd, node: v });
            }
        }
    }
    targets.iter().map(|&t| dist[t as usize]).collect()
}

/// `IPD(x,y) = 1 / dist(x,y)` with `dist` the weighted shortest-path cost;
/// 0 for disconnected pairs. With the default cost model the edge weight is
/// the path cost, exactly as defined.
pub fn inverse_path_distance(
    graph: &SnapshotGraph,
    mode: NeighborMode,
    pairs: &CandidateSet,
    cost: IpdCost,
) -> ScoreMatrix {
    let view = NeighborhoodView::build(graph, mode);
    let unit_costs = view.adj.iter().all(|&(_, w)| w == 1.0);

    // one traversal per distinct source; pairs are sorted so sources group
    let mut groups: Vec<(u32, usize, usize)> = Vec::new();
    let ps = pairs.pairs();
    let mut i = 0;
    while i < ps.len() {
        let src = ps[i].src.0;
        let start = i;
        while i < ps.len() && ps[i].src.0 == src {
            i += 1;
        }
        groups.push((src, start, i));
    }

    let chunks: Vec<Vec<f64>> = groups
        .par_iter()
        .map(|&(src, start, end)| {
            let targets: Vec<u32> = ps[start..end].iter().map(|p| p.dst.0).collect();
            let dists = shortest_distances(&view, src, &targets, cost, unit_costs);
            dists
                .into_iter()
                .map(|d| if d.is_finite() && d > 0.0 { 1.0 / d } else { 0.0 })
                .collect()
        })
        .collect();

    let mut values = Vec::with_capacity(ps.len());
    for chunk in chunks {
        values.extend(chunk);
    }
    collect_matrix("ipd", pairs, values)
}

/// Local clustering coefficients `cc(v) = 2·T(v) / (d(v)(d(v)−1))` on the
/// unweighted skeleton of the view; 0 when `d(v) <= 1`.
fn clustering_coefficients(view: &NeighborhoodView) -> Vec<f64> {
    let n = view.node_count();
    let mut triangles = vec![0u64; n];
    // enumerate each triangle once via its ordered vertices u < v < z
    for u in 0..n as u32 {
        for &(v, _) in view.neighbors(u) {
            if v <= u {
                continue;
            }
            let au = view.neighbors(u);
            let av = view.neighbors(v);
            let (mut i, mut j) = (0usize, 0usize);
            while i < au.len() && j < av.len() {
                match au[i].0.cmp(&av[j].0) {
                    Ordering::Less => i += 1,
                    Ordering::Greater => j += 1,
                    Ordering::Equal => {
                        let z = au[i].0;
                        if z > v {
                            triangles[u as usize] += 1;
                            triangles[v as usize] += 1;
                            triangles[z as usize] += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    (0..n)
        .map(|v| {
            // self-loops are not part of the skeleton degree
            let d = view
                .neighbors(v as u32)
                .iter()
                .filter(|&&(id, _)| id != v as u32)
                .count();
            if d <= 1 {
                0.0
            } else {
                2.0 * triangles[v] as f64 / (d as f64 * (d as f64 - 1.0))
            }
        })
        .collect()
}

/// `PCF(x,y) = cc(x) · cc(y)`.
pub fn clustering_product(graph: &SnapshotGraph, mode: NeighborMode, pairs: &CandidateSet) -> ScoreMatrix {
    let view = NeighborhoodView::build(graph, mode);
    let cc = clustering_coefficients(&view);
    let values: Vec<f64> = pairs
        .pairs()
        .iter()
        .map(|p| cc[p.src.index()] * cc[p.dst.index()])
        .collect();
    collect_matrix("pcf", pairs, values)
}

/// Scores all requested metrics on one graph, sharing the adjacency view and
/// the neighbor-intersection pass. Returns matrices in `metrics` order.
pub fn score_metrics(
    graph: &SnapshotGraph,
    mode: NeighborMode,
    pairs: &CandidateSet,
    metrics: &[MetricKind],
    pagerank: &PageRankParams,
    ipd_cost: IpdCost,
) -> Result<Vec<ScoreMatrix>, MetricError> {
    let view = NeighborhoodView::build(graph, mode);
    let need_intersection = metrics.iter().any(|m| {
        matches!(
            m,
            MetricKind::CommonNeighbors
                | MetricKind::Jaccard
                | MetricKind::PreferentialAttachment
                | MetricKind::AdamicAdar
                | MetricKind::ResourceAllocation
        )
    });

    let family: Option<Vec<PairScores>> = if need_intersection {
        Some(
            pairs
                .pairs()
                .par_iter()
                .map(|&p| intersection_scores(&view, p))
                .collect(),
        )
    } else {
        None
    };

    let mut out = Vec::with_capacity(metrics.len());
    for &metric in metrics {
        let matrix = match metric {
            MetricKind::CommonNeighbors
            | MetricKind::Jaccard
            | MetricKind::PreferentialAttachment
            | MetricKind::AdamicAdar
            | MetricKind::ResourceAllocation => {
                let family = family.as_ref().expect("intersection pass");
                let pick: fn(&PairScores) -> f64 = match metric {
                    MetricKind::CommonNeighbors => |s| s.cn,
                    MetricKind::Jaccard => |s| s.jc,
                    MetricKind::PreferentialAttachment => |s| s.pa,
                    MetricKind::AdamicAdar => |s| s.aa,
                    _ => |s| s.ra,
                };
                collect_matrix(metric.name(), pairs, family.iter().map(pick).collect())
            }
            MetricKind::PageRank => pagerank_scores(graph, mode, pairs, pagerank)?,
            MetricKind::InversePathDistance => inverse_path_distance(graph, mode, pairs, ipd_cost),
            MetricKind::ClusteringProduct => clustering_product(graph, mode, pairs),
        };
        out.push(matrix);
    }
    Ok(out)
}
