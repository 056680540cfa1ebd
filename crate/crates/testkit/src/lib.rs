//! Brute-force oracles: literal transcriptions of the scoring definitions,
//! computed from raw edge lists without the library's graph machinery.
//!
//! Every function here exists to check the optimized implementations against
//! an independent route, so none of them may call into the code they verify.
//! Summations run in ascending id order, matching the order the definitions
//! are written in.

use std::collections::HashMap;

use linkpred::graph::NodeId;
use linkpred::metrics::Pair;
use rand::Rng;

/// A directed weighted edge list over nodes `0..n`; the raw material every
/// oracle works from. Edges must be unique per `(src, dst)`.
#[derive(Clone, Debug)]
pub struct RawGraph {
    pub n: usize,
    pub edges: Vec<(u32, u32, f64)>,
}

impl RawGraph {
    pub fn new(n: usize, edges: Vec<(u32, u32, f64)>) -> RawGraph {
        RawGraph { n, edges }
    }

    fn lookup(&self, src: u32, dst: u32) -> f64 {
        self.edges
            .iter()
            .find(|&&(s, d, _)| s == src && d == dst)
            .map(|&(_, _, w)| w)
            .unwrap_or(0.0)
    }

    /// Undirected-union weight: reciprocal edges sum, a self-loop counts once.
    pub fn undirected_weight(&self, a: u32, b: u32) -> f64 {
        if a == b {
            return self.lookup(a, a);
        }
        let fwd = self.lookup(a, b);
        let rev = self.lookup(b, a);
        if fwd == 0.0 && rev == 0.0 {
            0.0
        } else {
            fwd + rev
        }
    }

    /// Σ over z ascending of the undirected weight of (x, z).
    pub fn strength(&self, x: u32) -> f64 {
        let mut sum = 0.0;
        for z in 0..self.n as u32 {
            let w = self.undirected_weight(x, z);
            if w > 0.0 {
                sum += w;
            }
        }
        sum
    }

    fn is_neighbor(&self, x: u32, z: u32) -> bool {
        self.undirected_weight(x, z) > 0.0
    }

    fn neighbor_ids(&self, x: u32) -> Vec<u32> {
        (0..self.n as u32).filter(|&z| self.is_neighbor(x, z)).collect()
    }
}

/// Eq.-by-eq. transcription of the weighted common-neighbors sum.
pub fn oracle_common_neighbors(g: &RawGraph, x: u32, y: u32) -> f64 {
    let mut sum = 0.0;
    for z in 0..g.n as u32 {
        if g.is_neighbor(x, z) && g.is_neighbor(y, z) {
            sum += g.undirected_weight(x, z) + g.undirected_weight(y, z);
        }
    }
    sum
}

pub fn oracle_jaccard(g: &RawGraph, x: u32, y: u32) -> f64 {
    let cn = oracle_common_neighbors(g, x, y);
    let denom = g.strength(x) + g.strength(y);
    if denom > 0.0 {
        // clamped against last-ulp rounding spill, as in the implementation
        (cn / denom).min(1.0)
    } else {
        0.0
    }
}

pub fn oracle_preferential_attachment(g: &RawGraph, x: u32, y: u32) -> f64 {
    g.strength(x) * g.strength(y)
}

pub fn oracle_adamic_adar(g: &RawGraph, x: u32, y: u32) -> f64 {
    let mut sum = 0.0;
    for z in 0..g.n as u32 {
        if g.is_neighbor(x, z) && g.is_neighbor(y, z) {
            let both = g.undirected_weight(x, z) + g.undirected_weight(y, z);
            sum += both / (1.0 + g.strength(z)).ln();
        }
    }
    sum
}

pub fn oracle_resource_allocation(g: &RawGraph, x: u32, y: u32) -> f64 {
    let mut sum = 0.0;
    for z in 0..g.n as u32 {
        if g.is_neighbor(x, z) && g.is_neighbor(y, z) {
            let both = g.undirected_weight(x, z) + g.undirected_weight(y, z);
            sum += both / g.strength(z);
        }
    }
    sum
}

/// Dense power iteration of the weighted PageRank fixed point, mirroring the
/// definition: weight-proportional walk, uniform dangling redistribution,
/// incident-weight teleport, L1 stopping rule. The undirected weight matrix
/// is materialized once; the iteration then reads it in ascending order, so
/// term order matches the definition exactly.
pub fn oracle_pagerank(g: &RawGraph, damping: f64, tolerance: f64, max_iterations: usize) -> Vec<f64> {
    let n = g.n;
    let mut w = vec![vec![0.0f64; n]; n];
    for k in 0..n as u32 {
        for v in 0..n as u32 {
            w[k as usize][v as usize] = g.undirected_weight(k, v);
        }
    }
    let strengths: Vec<f64> = (0..n as u32).map(|x| g.strength(x)).collect();
    let total: f64 = strengths.iter().sum();
    let teleport: Vec<f64> = if total > 0.0 {
        strengths.iter().map(|&s| s / total).collect()
    } else {
        vec![1.0 / n as f64; n]
    };
    let inv_n = 1.0 / n as f64;
    let mut x = teleport.clone();
    for _ in 0..max_iterations {
        let dangling: f64 = (0..n).filter(|&k| strengths[k] == 0.0).map(|k| x[k]).sum();
        let mut next = vec![0.0; n];
        for v in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                let weight = w[k][v];
                if weight > 0.0 {
                    let l = strengths[k];
                    if l > 0.0 {
                        acc += x[k] * (weight / l);
                    }
                }
            }
            next[v] = (1.0 - damping) * teleport[v] + damping * (acc + dangling * inv_n);
        }
        let residual: f64 = next.iter().zip(x.iter()).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if residual <= tolerance {
            break;
        }
    }
    x
}

/// Floyd–Warshall distances on the undirected weights (an independent route
/// to the shortest-path metric).
pub fn oracle_distances_floyd(g: &RawGraph, inverse_cost: bool) -> Vec<Vec<f64>> {
    let n = g.n;
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if a == b {
                continue;
            }
            let w = g.undirected_weight(a, b);
            if w > 0.0 {
                let cost = if inverse_cost { 1.0 / w } else { w };
                if cost < dist[a as usize][b as usize] {
                    dist[a as usize][b as usize] = cost;
                    dist[b as usize][a as usize] = cost;
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    dist
}

pub fn oracle_ipd_floyd(g: &RawGraph, x: u32, y: u32, inverse_cost: bool) -> f64 {
    let d = oracle_distances_floyd(g, inverse_cost)[x as usize][y as usize];
    if d.is_finite() && d > 0.0 {
        1.0 / d
    } else {
        0.0
    }
}

/// Unoptimized Dijkstra (linear-scan minimum, no heap, no early exit) over
/// the undirected weights. Distance values are the unique fixed point of the
/// relaxation, so they agree bitwise with any correct Dijkstra.
pub fn oracle_distances_dijkstra(g: &RawGraph, src: u32, inverse_cost: bool) -> Vec<f64> {
    let n = g.n;
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    dist[src as usize] = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        for i in 0..n {
            if !settled[i] && dist[i].is_finite() && (u == usize::MAX || dist[i] < dist[u]) {
                u = i;
            }
        }
        if u == usize::MAX {
            break;
        }
        settled[u] = true;
        for z in 0..n as u32 {
            let w = g.undirected_weight(u as u32, z);
            if w > 0.0 {
                let cost = if inverse_cost { 1.0 / w } else { w };
                let nd = dist[u] + cost;
                if nd < dist[z as usize] {
                    dist[z as usize] = nd;
                }
            }
        }
    }
    dist
}

pub fn oracle_ipd(g: &RawGraph, x: u32, y: u32, inverse_cost: bool) -> f64 {
    let d = oracle_distances_dijkstra(g, x, inverse_cost)[y as usize];
    if d.is_finite() && d > 0.0 {
        1.0 / d
    } else {
        0.0
    }
}

/// Exhaustive simple-path enumeration; only for fixture-sized graphs.
pub fn oracle_ipd_all_paths(g: &RawGraph, x: u32, y: u32) -> f64 {
    fn dfs(g: &RawGraph, here: u32, goal: u32, visited: &mut Vec<bool>, cost: f64, best: &mut f64) {
        if here == goal {
            if cost < *best {
                *best = cost;
            }
            return;
        }
        for z in 0..g.n as u32 {
            let w = g.undirected_weight(here, z);
            if w > 0.0 && !visited[z as usize] {
                visited[z as usize] = true;
                dfs(g, z, goal, visited, cost + w, best);
                visited[z as usize] = false;
            }
        }
    }
    let mut visited = vec![false; g.n];
    visited[x as usize] = true;
    let mut best = f64::INFINITY;
    dfs(g, x, y, &mut visited, 0.0, &mut best);
    if best.is_finite() && best > 0.0 {
        1.0 / best
    } else {
        0.0
    }
}

/// Local clustering coefficient by triple enumeration over the unweighted
/// skeleton.
pub fn oracle_clustering_coefficient(g: &RawGraph, v: u32) -> f64 {
    let nbrs: Vec<u32> = g.neighbor_ids(v).into_iter().filter(|&z| z != v).collect();
    let d = nbrs.len();
    if d <= 1 {
        return 0.0;
    }
    let mut triangles = 0u64;
    for i in 0..d {
        for j in (i + 1)..d {
            if g.is_neighbor(nbrs[i], nbrs[j]) {
                triangles += 1;
            }
        }
    }
    2.0 * triangles as f64 / (d as f64 * (d as f64 - 1.0))
}

pub fn oracle_clustering_product(g: &RawGraph, x: u32, y: u32) -> f64 {
    oracle_clustering_coefficient(g, x) * oracle_clustering_coefficient(g, y)
}

/// O(k·n²) Borda tally from scored lists: for each list, an item gains 2 per
/// item scored strictly below it and 1 per distinct item with an equal
/// score (doubled arithmetic keeps the half-integer midranks exact).
pub fn oracle_borda_doubled(lists: &[Vec<(Pair, f64)>]) -> HashMap<Pair, i64> {
    let mut doubled: HashMap<Pair, i64> = HashMap::new();
    for list in lists {
        for &(item, score) in list {
            let mut contribution = 0i64;
            for &(other, other_score) in list {
                if other == item {
                    continue;
                }
                if other_score < score {
                    contribution += 2;
                } else if other_score == score {
                    contribution += 1;
                }
            }
            *doubled.entry(item).or_insert(0) += contribution;
        }
    }
    doubled
}

/// Final Borda ordering: doubled score descending, pair ascending.
pub fn oracle_borda_order(doubled: &HashMap<Pair, i64>) -> Vec<Pair> {
    let mut items: Vec<(Pair, i64)> = doubled.iter().map(|(&p, &s)| (p, s)).collect();
    items.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    items.into_iter().map(|(p, _)| p).collect()
}

/// `theta^e` with `0^0 = 1`, matching the decay definition.
pub fn oracle_decay_weight(theta: f64, exponent: usize) -> f64 {
    if exponent == 0 {
        1.0
    } else {
        theta.powi(exponent as i32)
    }
}

/// Direct transcription of the decayed sum for one pair over a window of
/// per-snapshot scores, oldest first.
pub fn oracle_decay(values: &[f64], theta: f64) -> f64 {
    let t = values.len();
    let mut acc = 0.0;
    for (k, &v) in values.iter().enumerate() {
        acc += oracle_decay_weight(theta, t - 1 - k) * v;
    }
    acc
}

/// Raw multiplex records `(t, layer, src, dst, weight)`.
pub type RawRecord = (usize, usize, u32, u32, f64);

/// Conversion into the library's record type, for feeding the same instance
/// to both routes.
pub fn to_edge_records(records: &[RawRecord]) -> Vec<linkpred::graph::EdgeRecord> {
    records
        .iter()
        .map(|&(t, layer, src, dst, w)| linkpred::graph::EdgeRecord::new(t, layer, src, dst, w))
        .collect()
}

/// Distinct directed pairs of one layer within an inclusive window.
pub fn oracle_distinct_pairs(records: &[RawRecord], layer: usize, window: (usize, usize)) -> Vec<(u32, u32)> {
    let mut pairs: Vec<(u32, u32)> = records
        .iter()
        .filter(|&&(t, l, ..)| l == layer && t >= window.0 && t <= window.1)
        .map(|&(_, _, s, d, _)| (s, d))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Straight-line transcription of the likelihood ratio.
pub fn oracle_layer_likelihood(
    records: &[RawRecord],
    target: usize,
    other: usize,
    window: (usize, usize),
) -> f64 {
    let target_pairs = oracle_distinct_pairs(records, target, window);
    let other_pairs = oracle_distinct_pairs(records, other, window);
    if other_pairs.is_empty() {
        return 0.0;
    }
    let overlap = other_pairs.iter().filter(|p| target_pairs.contains(p)).count();
    overlap as f64 / other_pairs.len() as f64
}

/// Mean distinct out-degree of `x` in the target layer over the window.
pub fn oracle_node_rate(records: &[RawRecord], target: usize, x: u32, window: (usize, usize)) -> f64 {
    let len = (window.1 - window.0 + 1) as f64;
    let mut sum = 0u64;
    for t in window.0..=window.1 {
        let mut dsts: Vec<u32> = records
            .iter()
            .filter(|&&(rt, l, s, ..)| rt == t && l == target && s == x)
            .map(|&(_, _, _, d, _)| d)
            .collect();
        dsts.sort_unstable();
        dsts.dedup();
        sum += dsts.len() as u64;
    }
    sum as f64 / len
}

/// Straight-line reweighting: weight of every distinct window edge of the
/// target layer, in ascending edge order, with the 1e-6 floor.
pub fn oracle_reweight(
    records: &[RawRecord],
    layers: usize,
    target: usize,
    window: (usize, usize),
) -> Vec<(u32, u32, f64)> {
    oracle_reweight_pairs(
        records,
        layers,
        target,
        oracle_distinct_pairs(records, target, window),
        window,
    )
}

/// Likelihood weight of one predictor layer plus its distinct window pairs.
type LayerEvidence = (f64, Vec<(u32, u32)>);

/// As [`oracle_reweight`] but over an explicit edge set (e.g. one snapshot).
pub fn oracle_reweight_pairs(
    records: &[RawRecord],
    layers: usize,
    target: usize,
    pairs: Vec<(u32, u32)>,
    window: (usize, usize),
) -> Vec<(u32, u32, f64)> {
    let likelihoods: Vec<LayerEvidence> = (0..layers)
        .filter(|&i| i != target)
        .map(|i| {
            (
                oracle_layer_likelihood(records, target, i, window),
                oracle_distinct_pairs(records, i, window),
            )
        })
        .collect();
    pairs
        .into_iter()
        .map(|(s, d)| {
            let mut w = oracle_node_rate(records, target, s, window);
            for (likelihood, pairs_i) in &likelihoods {
                if pairs_i.binary_search(&(s, d)).is_ok() {
                    w += likelihood;
                }
            }
            if w == 0.0 {
                w = 1e-6;
            }
            (s, d, w)
        })
        .collect()
}

/// Brute-force AUROC: mean over all positive x negative pairs of
/// win = 1, tie = 0.5, loss = 0.
pub fn oracle_auroc(positives: &[f64], negatives: &[f64]) -> f64 {
    let mut sum = 0.0;
    for &p in positives {
        for &n in negatives {
            if p > n {
                sum += 1.0;
            } else if p == n {
                sum += 0.5;
            }
        }
    }
    sum / (positives.len() as f64 * negatives.len() as f64)
}

/// Fixture G1: five nodes {a..e} = {0..4}, undirected weighted edges
/// a-b 1, a-c 2, b-c 1, c-d 3; e isolated.
pub fn g1() -> RawGraph {
    RawGraph::new(
        5,
        vec![(0, 1, 1.0), (0, 2, 2.0), (1, 2, 1.0), (2, 3, 3.0)],
    )
}

/// Random directed graph with distinct `(src, dst)` pairs, no self-loops.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, edge_prob: f64) -> RawGraph {
    let mut edges = Vec::new();
    for s in 0..n as u32 {
        for d in 0..n as u32 {
            if s != d && rng.random::<f64>() < edge_prob {
                edges.push((s, d, rng.random_range(0.5..5.0)));
            }
        }
    }
    RawGraph::new(n, edges)
}

/// Random multiplex records with integer weights and unique
/// `(t, layer, src, dst)` keys.
pub fn random_records<R: Rng>(
    rng: &mut R,
    n: usize,
    layers: usize,
    snapshots: usize,
    edge_prob: f64,
) -> Vec<RawRecord> {
    let mut records = Vec::new();
    for t in 0..snapshots {
        for layer in 0..layers {
            for s in 0..n as u32 {
                for d in 0..n as u32 {
                    if s != d && rng.random::<f64>() < edge_prob {
                        records.push((t, layer, s, d, rng.random_range(1..6) as f64));
                    }
                }
            }
        }
    }
    records
}

/// All unordered pairs of `0..n` as canonical candidate pairs.
pub fn all_pairs(n: usize) -> Vec<Pair> {
    let mut v = Vec::new();
    for a in 0..n as u32 {
        for b in (a + 1)..n as u32 {
            v.push(Pair::new(NodeId(a), NodeId(b)));
        }
    }
    v
}
