//! Data model and ingestion for dynamic multiplex graphs.
//!
//! A [`MultiplexSeries`] holds one weighted directed [`SnapshotGraph`] per
//! (snapshot, layer) cell. All layers share a single node universe; external
//! string labels are mapped to dense [`NodeId`] indexes at construction time.
//! Everything is immutable after construction and safe to share across
//! threads.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::sync::Arc;

use thiserror::Error;

/// Dense node index, contiguous in `0..node_count` within a series.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One interaction record of a series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeRecord {
    pub t: usize,
    pub layer: usize,
    pub src: NodeId,
    pub dst: NodeId,
    /// Interaction count or strength; strictly positive after ingestion.
    pub weight: f64,
}

impl EdgeRecord {
    pub fn new(t: usize, layer: usize, src: u32, dst: u32, weight: f64) -> EdgeRecord {
        EdgeRecord { t, layer, src: NodeId(src), dst: NodeId(dst), weight }
    }
}

/// Which neighbor set `Γ(x)` denotes.
///
/// The default is the undirected union of in- and out-neighbors with
/// reciprocal edge weights summed; `Out`/`In` select pure directed
/// neighborhoods.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum NeighborMode {
    #[default]
    UndirectedUnion,
    Out,
    In,
}

impl NeighborMode {
    pub fn parse(s: &str) -> Option<NeighborMode> {
        match s {
            "undirected" | "undirected-union" => Some(NeighborMode::UndirectedUnion),
            "out" => Some(NeighborMode::Out),
            "in" => Some(NeighborMode::In),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {msg}")]
    Malformed { line: u64, msg: String },
    #[error("line {line}: negative weight {weight}")]
    NegativeWeight { line: u64, weight: f64 },
    #[error("line {line}: zero-weight records are rejected")]
    ZeroWeight { line: u64 },
    #[error("line {line}: weight is not finite")]
    NonFiniteWeight { line: u64 },
    #[error("bad header: {0}")]
    Header(String),
    #[error("duplicate node label {0:?}")]
    DuplicateLabel(String),
    #[error("node index {index} out of range for {count} labels")]
    NodeOutOfRange { index: u32, count: usize },
    #[error("record weight must be positive and finite, got {0}")]
    BadRecordWeight(f64),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum WindowError {
    #[error("empty window: from {from} > to {to}")]
    Empty { from: usize, to: usize },
    #[error("window end {to} out of range ({count} snapshots)")]
    OutOfRange { to: usize, count: usize },
    #[error("layer {layer} out of range ({count} layers)")]
    LayerOutOfRange { layer: usize, count: usize },
}

/// Inclusive snapshot window `(from, to)`.
pub type Window = (usize, usize);

/// Weighted directed adjacency for one (snapshot, layer) cell, in CSR form
/// with both edge directions and cached weighted degrees.
#[derive(Clone, Debug)]
pub struct SnapshotGraph {
    node_count: usize,
    edge_count: usize,
    out_off: Vec<u32>,
    out_adj: Vec<(u32, f64)>,
    in_off: Vec<u32>,
    in_adj: Vec<(u32, f64)>,
    out_strength: Vec<f64>,
    in_strength: Vec<f64>,
}

impl SnapshotGraph {
    pub fn empty(node_count: usize) -> SnapshotGraph {
        SnapshotGraph {
            node_count,
            edge_count: 0,
            out_off: vec![0; node_count + 1],
            out_adj: Vec::new(),
            in_off: vec![0; node_count + 1],
            in_adj: Vec::new(),
            out_strength: vec![0.0; node_count],
            in_strength: vec![0.0; node_count],
        }
    }

    /// Builds a graph from directed edges. Duplicate `(src, dst)` entries sum
    /// their weights; adjacency lists are sorted by neighbor id.
    pub fn from_edges<I>(node_count: usize, edges: I) -> SnapshotGraph
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut dedup: HashMap<(u32, u32), f64> = HashMap::new();
        for (src, dst, w) in edges {
            assert!(src.index() < node_count && dst.index() < node_count, "edge endpoint out of range");
            assert!(w.is_finite() && w > 0.0, "edge weight must be positive and finite");
            *dedup.entry((src.0, dst.0)).or_insert(0.0) += w;
        }
        let mut list: Vec<((u32, u32), f64)> = dedup.into_iter().collect();
        list.sort_unstable_by_key(|&(k, _)| k);
        Self::from_sorted_dedup(node_count, &list)
    }

    fn from_sorted_dedup(node_count: usize, list: &[((u32, u32), f64)]) -> SnapshotGraph {
        let mut g = SnapshotGraph::empty(node_count);
        g.edge_count = list.len();

        let mut out_counts = vec![0u32; node_count];
        let mut in_counts = vec![0u32; node_count];
        for &((s, d), _) in list {
            out_counts[s as usize] += 1;
            in_counts[d as usize] += 1;
        }
        let mut acc = 0u32;
        for (i, &c) in out_counts.iter().enumerate() {
            g.out_off[i] = acc;
            acc += c;
        }
        g.out_off[node_count] = acc;
        g.out_adj = vec![(0, 0.0); acc as usize];
        acc = 0;
        for (i, &c) in in_counts.iter().enumerate() {
            g.in_off[i] = acc;
            acc += c;
        }
        g.in_off[node_count] = acc;
        g.in_adj = vec![(0, 0.0); acc as usize];

        let mut out_cursor = g.out_off.clone();
        for &((s, d), w) in list {
            let slot = out_cursor[s as usize];
            g.out_adj[slot as usize] = (d, w);
            out_cursor[s as usize] += 1;
        }
        // list is sorted by (src, dst); refill in-adjacency sorted by (dst, src)
        let mut by_dst: Vec<((u32, u32), f64)> = list.iter().map(|&((s, d), w)| ((d, s), w)).collect();
        by_dst.sort_unstable_by_key(|&(k, _)| k);
        let mut in_cursor = g.in_off.clone();
        for &((d, s), w) in &by_dst {
            let slot = in_cursor[d as usize];
            g.in_adj[slot as usize] = (s, w);
            in_cursor[d as usize] += 1;
        }

        for x in 0..node_count {
            g.out_strength[x] = g.out_edges_idx(x).iter().map(|&(_, w)| w).sum();
            g.in_strength[x] = g.in_edges_idx(x).iter().map(|&(_, w)| w).sum();
        }
        g
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of distinct directed edges.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    fn out_edges_idx(&self, x: usize) -> &[(u32, f64)] {
        &self.out_adj[self.out_off[x] as usize..self.out_off[x + 1] as usize]
    }

    #[inline]
    fn in_edges_idx(&self, x: usize) -> &[(u32, f64)] {
        &self.in_adj[self.in_off[x] as usize..self.in_off[x + 1] as usize]
    }

    /// Out-edges of `x`, sorted by destination id.
    #[inline]
    pub fn out_edges(&self, x: NodeId) -> &[(u32, f64)] {
        self.out_edges_idx(x.index())
    }

    /// In-edges of `x`, sorted by source id.
    #[inline]
    pub fn in_edges(&self, x: NodeId) -> &[(u32, f64)] {
        self.in_edges_idx(x.index())
    }

    pub fn weight(&self, src: NodeId, dst: NodeId) -> Option<f64> {
        let edges = self.out_edges(src);
        edges
            .binary_search_by_key(&dst.0, |&(d, _)| d)
            .ok()
            .map(|i| edges[i].1)
    }

    pub fn has_edge(&self, src: NodeId, dst: NodeId) -> bool {
        self.weight(src, dst).is_some()
    }

    /// True when `src` and `dst` are connected in either direction.
    pub fn connected(&self, a: NodeId, b: NodeId) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    #[inline]
    pub fn weighted_out_degree(&self, x: NodeId) -> f64 {
        self.out_strength[x.index()]
    }

    #[inline]
    pub fn weighted_in_degree(&self, x: NodeId) -> f64 {
        self.in_strength[x.index()]
    }

    /// Unweighted out-degree (number of distinct out-neighbors).
    #[inline]
    pub fn out_degree(&self, x: NodeId) -> usize {
        (self.out_off[x.index() + 1] - self.out_off[x.index()]) as usize
    }

    /// Sum of all directed edge weights.
    pub fn total_weight(&self) -> f64 {
        self.out_strength.iter().sum()
    }

    /// The neighbor set `Γ(x)` under the given mode, sorted by neighbor id.
    ///
    /// In undirected-union mode, reciprocal edges sum their weights; a
    /// self-loop contributes its weight once.
    pub fn neighbors(&self, x: NodeId, mode: NeighborMode) -> Vec<(NodeId, f64)> {
        match mode {
            NeighborMode::Out => self
                .out_edges(x)
                .iter()
                .map(|&(d, w)| (NodeId(d), w))
                .collect(),
            NeighborMode::In => self
                .in_edges(x)
                .iter()
                .map(|&(s, w)| (NodeId(s), w))
                .collect(),
            NeighborMode::UndirectedUnion => {
                merge_union(x.0, self.out_edges(x), self.in_edges(x))
                    .into_iter()
                    .map(|(id, w)| (NodeId(id), w))
                    .collect()
            }
        }
    }

    /// All directed edges in `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        (0..self.node_count).flat_map(move |s| {
            self.out_edges_idx(s)
                .iter()
                .map(move |&(d, w)| (NodeId(s as u32), NodeId(d), w))
        })
    }

    /// Collapses the graph to its undirected unweighted skeleton: one canonical
    /// `min -> max` edge of weight 1 per connected pair. Self-loops are kept.
    pub fn binarized_undirected(&self) -> SnapshotGraph {
        let mut pairs: Vec<(u32, u32)> = self
            .edges()
            .map(|(s, d, _)| if s.0 <= d.0 { (s.0, d.0) } else { (d.0, s.0) })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let list: Vec<((u32, u32), f64)> = pairs.into_iter().map(|p| (p, 1.0)).collect();
        Self::from_sorted_dedup(self.node_count, &list)
    }
}

/// Merges two sorted adjacency slices, summing weights of shared neighbors.
/// An entry for `x` itself (self-loop) is emitted once with its raw weight.
fn merge_union(x: u32, out: &[(u32, f64)], inn: &[(u32, f64)]) -> Vec<(u32, f64)> {
    let mut merged = Vec::with_capacity(out.len().max(inn.len()));
    let (mut i, mut j) = (0, 0);
    while i < out.len() || j < inn.len() {
        let take_out = j >= inn.len() || (i < out.len() && out[i].0 <= inn[j].0);
        let take_in = i >= out.len() || (j < inn.len() && inn[j].0 <= out[i].0);
        if take_out && take_in {
            // same neighbor in both directions
            let (id, wo) = out[i];
            let w = if id == x { wo } else { wo + inn[j].1 };
            merged.push((id, w));
            i += 1;
            j += 1;
        } else if take_out {
            merged.push(out[i]);
            i += 1;
        } else {
            merged.push(inn[j]);
            j += 1;
        }
    }
    merged
}

/// A dynamic multiplex network: `layer_count x snapshot_count` grid of
/// snapshot graphs over one shared, densely indexed node universe.
#[derive(Clone, Debug)]
pub struct MultiplexSeries {
    layer_count: usize,
    snapshot_count: usize,
    labels: Vec<String>,
    label_index: HashMap<String, NodeId>,
    graphs: Vec<Arc<SnapshotGraph>>,
}

/// Per-layer ingestion bookkeeping.
#[derive(Clone, Debug)]
pub struct LayerSummary {
    pub layer: usize,
    /// Distinct directed edges across all snapshots (after deduplication).
    pub edge_count: usize,
    /// Nodes incident to at least one edge of this layer.
    pub node_count: usize,
}

#[derive(Clone, Debug)]
pub struct IngestSummary {
    pub rows_read: usize,
    pub duplicates_merged: usize,
    pub node_count: usize,
    pub layer_count: usize,
    pub snapshot_count: usize,
    pub layers: Vec<LayerSummary>,
}

/// Expected CSV header columns (`weight` optional; absent means 1.0).
pub const CSV_COLUMNS: [&str; 5] = ["t", "layer", "src", "dst", "weight"];

impl MultiplexSeries {
    /// Builds a series from a node universe and records referencing it.
    ///
    /// Record node ids index into `labels` (so the universe may include
    /// isolated nodes). Duplicate `(t, layer, src, dst)` records sum their
    /// weights. Missing (t, layer) cells become empty graphs.
    pub fn from_parts(
        labels: Vec<String>,
        records: &[EdgeRecord],
    ) -> Result<MultiplexSeries, IngestError> {
        let mut label_index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label_index.insert(label.clone(), NodeId(i as u32)).is_some() {
                return Err(IngestError::DuplicateLabel(label.clone()));
            }
        }
        let n = labels.len();
        let mut layer_count = 0;
        let mut snapshot_count = 0;
        let mut cells: HashMap<(usize, usize), HashMap<(u32, u32), f64>> = HashMap::new();
        for &EdgeRecord { t, layer, src, dst, weight: w } in records {
            for idx in [src, dst] {
                if idx.index() >= n {
                    return Err(IngestError::NodeOutOfRange { index: idx.0, count: n });
                }
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(IngestError::BadRecordWeight(w));
            }
            layer_count = layer_count.max(layer + 1);
            snapshot_count = snapshot_count.max(t + 1);
            *cells
                .entry((t, layer))
                .or_default()
                .entry((src.0, dst.0))
                .or_insert(0.0) += w;
        }

        let empty = Arc::new(SnapshotGraph::empty(n));
        let mut graphs = vec![empty; layer_count * snapshot_count];
        for ((t, layer), edges) in cells {
            let mut list: Vec<((u32, u32), f64)> = edges.into_iter().collect();
            list.sort_unstable_by_key(|&(k, _)| k);
            graphs[t * layer_count + layer] = Arc::new(SnapshotGraph::from_sorted_dedup(n, &list));
        }
        Ok(MultiplexSeries {
            layer_count,
            snapshot_count,
            labels,
            label_index,
            graphs,
        })
    }

    /// Parses the canonical CSV schema (see [`CSV_COLUMNS`]) into a series.
    ///
    /// Lines starting with `#` are skipped. Node labels are assigned dense ids
    /// in order of first appearance. Duplicate records sum weights; layer and
    /// snapshot index gaps yield empty graphs.
    pub fn ingest_csv<R: BufRead>(reader: R) -> Result<(MultiplexSeries, IngestSummary), IngestError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(false)
            .from_reader(reader);

        let headers = rdr
            .headers()
            .map_err(|e| IngestError::Header(e.to_string()))?
            .clone();
        let cols: Vec<&str> = headers.iter().collect();
        let has_weight = match cols.len() {
            5 if cols == CSV_COLUMNS => true,
            4 if cols == CSV_COLUMNS[..4] => false,
            _ => {
                for (i, want) in CSV_COLUMNS.iter().enumerate().take(4) {
                    if cols.get(i) != Some(want) {
                        return Err(IngestError::Header(format!(
                            "missing or misplaced column {:?} (expected {})",
                            want,
                            CSV_COLUMNS.join(",")
                        )));
                    }
                }
                return Err(IngestError::Header(format!(
                    "expected columns {} (weight optional), got {:?}",
                    CSV_COLUMNS.join(","),
                    cols.join(",")
                )));
            }
        };

        let mut labels: Vec<String> = Vec::new();
        let mut label_index: HashMap<String, u32> = HashMap::new();
        let mut records: Vec<EdgeRecord> = Vec::new();
        let mut rows_read = 0usize;

        for rec in rdr.records() {
            let rec = match rec {
                Ok(r) => r,
                Err(e) => {
                    let line = e
                        .position()
                        .map(|p| p.line())
                        .unwrap_or_default();
                    return Err(IngestError::Malformed { line, msg: e.to_string() });
                }
            };
            let line = rec.position().map(|p| p.line()).unwrap_or_default();
            let field = |i: usize| rec.get(i).unwrap_or("");
            let t: usize = field(0).parse().map_err(|_| IngestError::Malformed {
                line,
                msg: format!("bad snapshot index {:?}", field(0)),
            })?;
            let layer: usize = field(1).parse().map_err(|_| IngestError::Malformed {
                line,
                msg: format!("bad layer index {:?}", field(1)),
            })?;
            let src = field(2);
            let dst = field(3);
            if src.is_empty() || dst.is_empty() {
                return Err(IngestError::Malformed { line, msg: "empty node label".into() });
            }
            let weight: f64 = if has_weight {
                field(4).parse().map_err(|_| IngestError::Malformed {
                    line,
                    msg: format!("bad weight {:?}", field(4)),
                })?
            } else {
                1.0
            };
            if weight.is_nan() || weight.is_infinite() {
                return Err(IngestError::NonFiniteWeight { line });
            }
            if weight < 0.0 {
                return Err(IngestError::NegativeWeight { line, weight });
            }
            if weight == 0.0 {
                return Err(IngestError::ZeroWeight { line });
            }
            let mut intern = |label: &str| -> u32 {
                if let Some(&id) = label_index.get(label) {
                    id
                } else {
                    let id = labels.len() as u32;
                    labels.push(label.to_string());
                    label_index.insert(label.to_string(), id);
                    id
                }
            };
            let s = intern(src);
            let d = intern(dst);
            records.push(EdgeRecord { t, layer, src: NodeId(s), dst: NodeId(d), weight });
            rows_read += 1;
        }

        let series = MultiplexSeries::from_parts(labels, &records)?;
        let dedup_edges: usize = series
            .graphs
            .iter()
            .map(|g| g.edge_count())
            .sum();
        let summary = IngestSummary {
            rows_read,
            duplicates_merged: rows_read - dedup_edges,
            node_count: series.node_count(),
            layer_count: series.layer_count,
            snapshot_count: series.snapshot_count,
            layers: series.layer_summaries(),
        };
        Ok((series, summary))
    }

    fn layer_summaries(&self) -> Vec<LayerSummary> {
        (0..self.layer_count)
            .map(|layer| {
                let mut edge_count = 0;
                let mut touched = vec![false; self.node_count()];
                for t in 0..self.snapshot_count {
                    let g = self.snapshot(layer, t);
                    edge_count += g.edge_count();
                    for (s, d, _) in g.edges() {
                        touched[s.index()] = true;
                        touched[d.index()] = true;
                    }
                }
                LayerSummary {
                    layer,
                    edge_count,
                    node_count: touched.iter().filter(|&&b| b).count(),
                }
            })
            .collect()
    }

    #[inline]
    pub fn layer_count(&self) -> usize {
        self.layer_count
    }

    #[inline]
    pub fn snapshot_count(&self) -> usize {
        self.snapshot_count
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: NodeId) -> &str {
        &self.labels[x.index()]
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.label_index.get(label).copied()
    }

    /// The graph at `(layer, t)`. Panics when out of range.
    pub fn snapshot(&self, layer: usize, t: usize) -> &SnapshotGraph {
        assert!(layer < self.layer_count, "layer {layer} out of range");
        assert!(t < self.snapshot_count, "snapshot {t} out of range");
        &self.graphs[t * self.layer_count + layer]
    }

    fn check_window(&self, layer: Option<usize>, window: Window) -> Result<(), WindowError> {
        let (from, to) = window;
        if let Some(layer) = layer {
            if layer >= self.layer_count {
                return Err(WindowError::LayerOutOfRange { layer, count: self.layer_count });
            }
        }
        if from > to {
            return Err(WindowError::Empty { from, to });
        }
        if to >= self.snapshot_count {
            return Err(WindowError::OutOfRange { to, count: self.snapshot_count });
        }
        Ok(())
    }

    /// Edge-wise union of one layer over an inclusive window, weights summed
    /// across snapshots.
    pub fn window_union(&self, layer: usize, window: Window) -> Result<SnapshotGraph, WindowError> {
        self.check_window(Some(layer), window)?;
        let mut dedup: HashMap<(u32, u32), f64> = HashMap::new();
        for t in window.0..=window.1 {
            for (s, d, w) in self.snapshot(layer, t).edges() {
                *dedup.entry((s.0, d.0)).or_insert(0.0) += w;
            }
        }
        let mut list: Vec<((u32, u32), f64)> = dedup.into_iter().collect();
        list.sort_unstable_by_key(|&(k, _)| k);
        Ok(SnapshotGraph::from_sorted_dedup(self.node_count(), &list))
    }

    /// Union over all layers and an inclusive window, weights summed.
    pub fn union_all_layers(&self, window: Window) -> Result<SnapshotGraph, WindowError> {
        self.check_window(None, window)?;
        let mut dedup: HashMap<(u32, u32), f64> = HashMap::new();
        for t in window.0..=window.1 {
            for layer in 0..self.layer_count {
                for (s, d, w) in self.snapshot(layer, t).edges() {
                    *dedup.entry((s.0, d.0)).or_insert(0.0) += w;
                }
            }
        }
        let mut list: Vec<((u32, u32), f64)> = dedup.into_iter().collect();
        list.sort_unstable_by_key(|&(k, _)| k);
        Ok(SnapshotGraph::from_sorted_dedup(self.node_count(), &list))
    }

    /// Nodes with at least one edge (either direction, any layer) within the
    /// window.
    pub fn active_nodes(&self, window: Window) -> Result<Vec<bool>, WindowError> {
        self.check_window(None, window)?;
        let mut active = vec![false; self.node_count()];
        for t in window.0..=window.1 {
            for layer in 0..self.layer_count {
                for (s, d, _) in self.snapshot(layer, t).edges() {
                    active[s.index()] = true;
                    active[d.index()] = true;
                }
            }
        }
        Ok(active)
    }

    /// Writes the canonical CSV export: header, then rows sorted by
    /// `(t, layer, src, dst)` with src/dst compared as label strings.
    /// `comments` lines are emitted first, each prefixed with `# `.
    pub fn write_canonical_csv<W: Write>(&self, mut w: W, comments: &[String]) -> io::Result<()> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        let mut rows: Vec<(usize, usize, &str, &str, f64)> = Vec::new();
        for t in 0..self.snapshot_count {
            for layer in 0..self.layer_count {
                for (s, d, weight) in self.snapshot(layer, t).edges() {
                    rows.push((t, layer, self.label(s), self.label(d), weight));
                }
            }
        }
        rows.sort_by(|a, b| {
            (a.0, a.1, a.2, a.3)
                .partial_cmp(&(b.0, b.1, b.2, b.3))
                .expect("total order")
        });
        let mut csv_w = csv::Writer::from_writer(w);
        csv_w.write_record(CSV_COLUMNS)?;
        for (t, layer, src, dst, weight) in rows {
            csv_w.write_record([
                t.to_string(),
                layer.to_string(),
                src.to_string(),
                dst.to_string(),
                format!("{weight}"),
            ])?;
        }
        csv_w.flush()?;
        Ok(())
    }

    /// Canonical CSV bytes without comments; the stable identity of the
    /// dataset content.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_canonical_csv(&mut buf, &[]).expect("in-memory write");
        buf
    }
}
