//! Community bipartite graphs (CBGs): meta nodes are layer communities with at
//! least two members, meta edges aggregate the inter-layer links between two
//! communities and carry a weight under one of three metrics.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use crate::community::{community_stats, detect_layer_communities, CommunityAssignment, CommunityId, CommunityStats};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::mln::{LayerGraph, MultilayerNetwork};

/// Relative tolerance for comparing real-valued weights.
pub const WEIGHT_RTOL: f64 = 1e-9;

/// Meta-edge weight metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Metric {
    /// Inter-community edge count, max-normalised over the CBG.
    #[default]
    EdgeCount,
    /// Density of both communities times the edge fraction.
    Density,
    /// Participating-hub fractions of both communities times the edge fraction.
    HubParticipation,
}

impl Metric {
    pub fn code(self) -> &'static str {
        match self {
            Metric::EdgeCount => "we",
            Metric::Density => "wd",
            Metric::HubParticipation => "wh",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "we" => Ok(Metric::EdgeCount),
            "wd" => Ok(Metric::Density),
            "wh" => Ok(Metric::HubParticipation),
            _ => Err(format!("unknown metric {s:?} (expected we, wd or wh)")),
        }
    }
}

/// Hub threshold: a member is a hub when its intra-community degree exceeds
/// `factor` times the community's mean intra-community degree. When no
/// member qualifies (e.g. a regular community) every member is a hub.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubRule {
    pub factor: f64,
}

impl Default for HubRule {
    fn default() -> Self {
        HubRule { factor: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HubSet {
    pub community: CommunityId,
    /// Member node indices, ascending.
    pub hubs: Vec<usize>,
}

/// Hub sets of every community of a layer, indexed by `id - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hubs {
    pub sets: Vec<HubSet>,
    is_hub: Vec<bool>,
}

impl Hubs {
    pub fn is_hub(&self, node: usize) -> bool {
        self.is_hub[node]
    }

    pub fn of(&self, id: CommunityId) -> &HubSet {
        &self.sets[id as usize - 1]
    }
}

pub fn detect_hubs(graph: &SimpleGraph, assignment: &CommunityAssignment, rule: HubRule) -> Hubs {
    let mut is_hub = vec![false; graph.node_count()];
    let sets = assignment
        .ids()
        .map(|id| {
            let members = assignment.members(id);
            let degrees: Vec<usize> = members
                .iter()
                .map(|&u| {
                    graph
                        .neighbors(u)
                        .iter()
                        .filter(|&&v| assignment.community_of(v) == id)
                        .count()
                })
                .collect();
            let mean = degrees.iter().sum::<usize>() as f64 / members.len() as f64;
            let mut hubs: Vec<usize> = members
                .iter()
                .zip(&degrees)
                .filter(|(_, &d)| d as f64 > rule.factor * mean)
                .map(|(&u, _)| u)
                .collect();
            if hubs.is_empty() {
                hubs = members.to_vec();
            }
            for &u in &hubs {
                is_hub[u] = true;
            }
            HubSet { community: id, hubs }
        })
        .collect();
    Hubs { sets, is_hub }
}

/// Everything computed once per layer and reused by every composition.
#[derive(Debug, Clone)]
pub struct LayerAnalysis {
    pub assignment: CommunityAssignment,
    pub stats: Vec<CommunityStats>,
    pub hubs: Hubs,
}

impl LayerAnalysis {
    pub fn from_assignment(layer: &LayerGraph, assignment: CommunityAssignment, rule: HubRule) -> Self {
        let stats = community_stats(&layer.graph, &assignment);
        let hubs = detect_hubs(&layer.graph, &assignment, rule);
        LayerAnalysis {
            assignment,
            stats,
            hubs,
        }
    }

    pub fn detect(layer: &LayerGraph, seed: u64, rule: HubRule) -> Self {
        Self::from_assignment(layer, detect_layer_communities(layer, seed), rule)
    }

    pub fn stat(&self, id: CommunityId) -> &CommunityStats {
        &self.stats[id as usize - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetaNode {
    pub community: CommunityId,
    pub size: usize,
}

/// Inter-layer links between two communities, `(left node, right node)` as
/// node indices into the respective layers, sorted.
pub type EdgeSet = Arc<[(usize, usize)]>;

#[derive(Debug, Clone, PartialEq)]
pub struct MetaEdge {
    /// Index into [`CommunityBipartiteGraph::left`].
    pub left: usize,
    /// Index into [`CommunityBipartiteGraph::right`].
    pub right: usize,
    pub expanded: EdgeSet,
    pub weight: f64,
}

impl MetaEdge {
    pub fn edge_count(&self) -> usize {
        self.expanded.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommunityBipartiteGraph {
    pub left_layer: String,
    pub right_layer: String,
    pub metric: Metric,
    pub left: Vec<MetaNode>,
    pub right: Vec<MetaNode>,
    /// Sorted by `(left, right)`; at most one per meta-node pair.
    pub edges: Vec<MetaEdge>,
}

impl CommunityBipartiteGraph {
    /// A CBG from explicit meta edges `(left index, right index, expanded links, weight)`,
    /// mostly for tests and tools. Edges are sorted; weights are taken as given.
    pub fn from_parts(
        left_layer: impl Into<String>,
        right_layer: impl Into<String>,
        metric: Metric,
        left: Vec<MetaNode>,
        right: Vec<MetaNode>,
        mut edges: Vec<MetaEdge>,
    ) -> Self {
        edges.sort_by_key(|e| (e.left, e.right));
        CommunityBipartiteGraph {
            left_layer: left_layer.into(),
            right_layer: right_layer.into(),
            metric,
            left,
            right,
            edges,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// The quantity pairing algorithms maximise: the raw link count under
    /// [`Metric::EdgeCount`] (an exact integer, rank-equivalent to the
    /// normalised weight), the weight itself otherwise.
    pub fn score(&self, e: &MetaEdge) -> f64 {
        match self.metric {
            Metric::EdgeCount => e.edge_count() as f64,
            _ => e.weight,
        }
    }

    /// Whether two scores are equal: exactly for counts, within
    /// [`WEIGHT_RTOL`] otherwise.
    pub fn ties(&self, a: f64, b: f64) -> bool {
        match self.metric {
            Metric::EdgeCount => a == b,
            _ => (a - b).abs() <= WEIGHT_RTOL * a.abs().max(b.abs()),
        }
    }

    /// Strictly heavier and not a tie.
    pub fn heavier(&self, a: f64, b: f64) -> bool {
        a > b && !self.ties(a, b)
    }

    /// Swaps the sides.
    pub fn transposed(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut expanded: Vec<(usize, usize)> =
                    e.expanded.iter().map(|&(a, b)| (b, a)).collect();
                expanded.sort_unstable();
                MetaEdge {
                    left: e.right,
                    right: e.left,
                    expanded: expanded.into(),
                    weight: e.weight,
                }
            })
            .collect();
        Self::from_parts(
            self.right_layer.clone(),
            self.left_layer.clone(),
            self.metric,
            self.right.clone(),
            self.left.clone(),
            edges,
        )
    }

    /// `left-comm <tab> right-comm <tab> weight <tab> edge-count` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "#{}\t{}\tweight\tedge_count\n",
            self.left_layer, self.right_layer
        );
        for e in &self.edges {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                self.left[e.left].community,
                self.right[e.right].community,
                e.weight,
                e.edge_count()
            );
        }
        out
    }
}

fn counting_sort<T: Copy>(items: Vec<T>, buckets: usize, key: impl Fn(&T) -> usize) -> Vec<T> {
    let mut start = vec![0usize; buckets + 1];
    for it in &items {
        start[key(it) + 1] += 1;
    }
    for b in 0..buckets {
        start[b + 1] += start[b];
    }
    let Some(&first) = items.first() else {
        return items;
    };
    let mut out = vec![first; items.len()];
    for it in items {
        let b = &mut start[key(&it)];
        out[*b] = it;
        *b += 1;
    }
    out
}

/// Meta nodes and expanded edge sets, before any weights are assigned.
///
/// `left_filter` / `right_filter` restrict which communities may appear;
/// singleton communities never do.
#[allow(clippy::too_many_arguments)]
pub fn build_unweighted(
    mln: &MultilayerNetwork,
    left_layer: &str,
    right_layer: &str,
    left: &CommunityAssignment,
    right: &CommunityAssignment,
    metric: Metric,
    left_filter: Option<&BTreeSet<CommunityId>>,
    right_filter: Option<&BTreeSet<CommunityId>>,
) -> Result<CommunityBipartiteGraph> {
    if !mln.has_interlayer(left_layer, right_layer) {
        return Err(Error::NoInterLayer(left_layer.to_owned(), right_layer.to_owned()));
    }
    for name in [left_layer, right_layer] {
        if mln.layer(name).is_none() {
            return Err(Error::UnknownLayer(name.to_owned()));
        }
    }
    let links = mln
        .resolved_links(left_layer, right_layer)
        .ok_or_else(|| Error::NoInterLayer(left_layer.to_owned(), right_layer.to_owned()))?;

    let side = |a: &CommunityAssignment, filter: Option<&BTreeSet<CommunityId>>| {
        let mut slot = vec![usize::MAX; a.community_count() + 1];
        let mut nodes = Vec::new();
        for id in a.non_singleton_ids() {
            if filter.is_some_and(|f| !f.contains(&id)) {
                continue;
            }
            slot[id as usize] = nodes.len();
            nodes.push(MetaNode {
                community: id,
                size: a.size(id),
            });
        }
        (nodes, slot)
    };
    let (left_nodes, left_slot) = side(left, left_filter);
    let (right_nodes, right_slot) = side(right, right_filter);

    // Links arrive sorted by node pair; two stable counting passes group them
    // by (left slot, right slot) while keeping each group sorted.
    let keyed: Vec<(u32, u32, usize, usize)> = links
        .iter()
        .filter_map(|&(u, v)| {
            let li = left_slot[left.community_of(u) as usize];
            let ri = right_slot[right.community_of(v) as usize];
            (li != usize::MAX && ri != usize::MAX).then_some((li as u32, ri as u32, u, v))
        })
        .collect();
    let by_right = counting_sort(keyed, right_nodes.len(), |k| k.1 as usize);
    let grouped = counting_sort(by_right, left_nodes.len(), |k| k.0 as usize);
    let edges = grouped
        .chunk_by(|a, b| (a.0, a.1) == (b.0, b.1))
        .map(|run| MetaEdge {
            left: run[0].0 as usize,
            right: run[0].1 as usize,
            expanded: run.iter().map(|k| (k.2, k.3)).collect(),
            weight: 0.0,
        })
        .collect();
    Ok(CommunityBipartiteGraph::from_parts(
        left_layer,
        right_layer,
        metric,
        left_nodes,
        right_nodes,
        edges,
    ))
}

/// `|x| / max |x|` over the CBG's meta edges.
pub fn weight_edge_count(cbg: &mut CommunityBipartiteGraph) {
    let max = cbg.edges.iter().map(MetaEdge::edge_count).max().unwrap_or(0);
    if max == 0 {
        return;
    }
    for e in &mut cbg.edges {
        e.weight = e.edge_count() as f64 / max as f64;
    }
}

fn edge_fraction(cbg: &CommunityBipartiteGraph, e: &MetaEdge) -> f64 {
    e.edge_count() as f64 / (cbg.left[e.left].size as f64 * cbg.right[e.right].size as f64)
}

/// `density_left × |x|/(|v_left|·|v_right|) × density_right`. Zero-weight
/// meta edges are removed.
pub fn weight_density_fraction(
    cbg: &mut CommunityBipartiteGraph,
    left_stats: &[CommunityStats],
    right_stats: &[CommunityStats],
) {
    let weights: Vec<f64> = cbg
        .edges
        .iter()
        .map(|e| {
            let dl = left_stats[cbg.left[e.left].community as usize - 1].density;
            let dr = right_stats[cbg.right[e.right].community as usize - 1].density;
            dl * edge_fraction(cbg, e) * dr
        })
        .collect();
    assign_and_prune(cbg, weights);
}

/// `|H_lr|/|H_l| × |x|/(|v_left|·|v_right|) × |H_rl|/|H_r|`, where `H_lr`
/// are the left community's hubs with at least one link into the right
/// community. Zero-weight meta edges are removed.
pub fn weight_hub_participation(
    cbg: &mut CommunityBipartiteGraph,
    left_hubs: &Hubs,
    right_hubs: &Hubs,
) {
    let weights: Vec<f64> = cbg
        .edges
        .iter()
        .map(|e| {
            let hl = left_hubs.of(cbg.left[e.left].community);
            let hr = right_hubs.of(cbg.right[e.right].community);
            let mut part_l: Vec<usize> = e
                .expanded
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| left_hubs.is_hub(u))
                .collect();
            part_l.sort_unstable();
            part_l.dedup();
            let mut part_r: Vec<usize> = e
                .expanded
                .iter()
                .map(|&(_, v)| v)
                .filter(|&v| right_hubs.is_hub(v))
                .collect();
            part_r.sort_unstable();
            part_r.dedup();
            part_l.len() as f64 / hl.hubs.len() as f64
                * edge_fraction(cbg, e)
                * (part_r.len() as f64 / hr.hubs.len() as f64)
        })
        .collect();
    assign_and_prune(cbg, weights);
}

fn assign_and_prune(cbg: &mut CommunityBipartiteGraph, weights: Vec<f64>) {
    for (e, w) in cbg.edges.iter_mut().zip(weights) {
        e.weight = w;
    }
    cbg.edges.retain(|e| e.weight > 0.0);
}

/// Builds the CBG between two layers' non-singleton communities, weighted
/// under `metric`.
pub fn build_cbg(
    mln: &MultilayerNetwork,
    left_layer: &str,
    right_layer: &str,
    left: &LayerAnalysis,
    right: &LayerAnalysis,
    metric: Metric,
) -> Result<CommunityBipartiteGraph> {
    build_cbg_restricted(mln, left_layer, right_layer, left, right, metric, None, None)
}

/// [`build_cbg`] restricted to the given community subsets.
#[allow(clippy::too_many_arguments)]
pub fn build_cbg_restricted(
    mln: &MultilayerNetwork,
    left_layer: &str,
    right_layer: &str,
    left: &LayerAnalysis,
    right: &LayerAnalysis,
    metric: Metric,
    left_filter: Option<&BTreeSet<CommunityId>>,
    right_filter: Option<&BTreeSet<CommunityId>>,
) -> Result<CommunityBipartiteGraph> {
    let mut cbg = build_unweighted(
        mln,
        left_layer,
        right_layer,
        &left.assignment,
        &right.assignment,
        metric,
        left_filter,
        right_filter,
    )?;
    match metric {
        Metric::EdgeCount => weight_edge_count(&mut cbg),
        Metric::Density => weight_density_fraction(&mut cbg, &left.stats, &right.stats),
        Metric::HubParticipation => weight_hub_participation(&mut cbg, &left.hubs, &right.hubs),
    }
    Ok(cbg)
}
