//! Per-layer community detection and community-level statistics.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::louvain;
use crate::mln::LayerGraph;

/// Community ids are positive; 0 is reserved as the "no community" sentinel
/// inside k-community tuples.
pub type CommunityId = u32;

/// A disjoint, complete partition of one layer's nodes.
///
/// Ids run `1..=k` in decreasing community size; equal sizes are ordered by
/// their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityAssignment {
    pub layer_name: String,
    membership: Vec<CommunityId>,
    communities: Vec<Vec<usize>>,
}

impl CommunityAssignment {
    /// Canonicalises an arbitrary labelling (one label per node index).
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(
        layer_name: impl Into<String>,
        labels: &[L],
    ) -> Self {
        let mut groups: HashMap<L, Vec<usize>> = HashMap::new();
        for (u, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(u);
        }
        let mut communities: Vec<Vec<usize>> = groups.into_values().collect();
        communities.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let mut membership = vec![0; labels.len()];
        for (i, members) in communities.iter().enumerate() {
            for &u in members {
                membership[u] = i as CommunityId + 1;
            }
        }
        CommunityAssignment {
            layer_name: layer_name.into(),
            membership,
            communities,
        }
    }

    pub fn node_count(&self) -> usize {
        self.membership.len()
    }

    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    pub fn community_of(&self, node: usize) -> CommunityId {
        self.membership[node]
    }

    pub fn membership(&self) -> &[CommunityId] {
        &self.membership
    }

    /// Member node indices (ascending) of a community.
    pub fn members(&self, id: CommunityId) -> &[usize] {
        &self.communities[id as usize - 1]
    }

    pub fn size(&self, id: CommunityId) -> usize {
        self.members(id).len()
    }

    pub fn ids(&self) -> impl Iterator<Item = CommunityId> {
        1..=self.communities.len() as CommunityId
    }

    /// Communities with at least two members.
    pub fn non_singleton_ids(&self) -> impl Iterator<Item = CommunityId> + '_ {
        self.ids().filter(|&c| self.size(c) >= 2)
    }

    pub fn by_name(&self, graph: &SimpleGraph) -> BTreeMap<String, CommunityId> {
        graph
            .nodes()
            .iter()
            .cloned()
            .zip(self.membership.iter().copied())
            .collect()
    }

    /// `node-id <tab> community-id` lines in node order.
    pub fn to_tsv(&self, graph: &SimpleGraph) -> String {
        let mut out = String::new();
        for (name, c) in graph.nodes().iter().zip(&self.membership) {
            let _ = writeln!(out, "{name}\t{c}");
        }
        out
    }

    pub fn write_tsv(&self, graph: &SimpleGraph, path: &Path) -> Result<()> {
        fs::write(path, self.to_tsv(graph))?;
        Ok(())
    }

    /// Reads a dump written by [`CommunityAssignment::write_tsv`]. Every node
    /// of the layer must be covered.
    pub fn read_tsv(layer: &LayerGraph, path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_owned(),
            source,
        })?;
        let graph = &layer.graph;
        let mut labels: Vec<Option<u64>> = vec![None; graph.node_count()];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| Error::Parse {
                path: path.to_owned(),
                line: i + 1,
                content: raw.to_owned(),
                message: message.to_owned(),
            };
            let mut parts = line.split('\t');
            let (Some(node), Some(comm), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err("expected `node <tab> community`"));
            };
            let comm: u64 = comm
                .trim()
                .parse()
                .map_err(|_| err("community id is not an integer"))?;
            let u = graph
                .index_of(node.trim())
                .ok_or_else(|| err("node not in layer"))?;
            labels[u] = Some(comm);
        }
        let labels: Vec<u64> = labels
            .into_iter()
            .enumerate()
            .map(|(u, l)| l.ok_or_else(|| Error::MissingMembership(graph.node_name(u).to_owned())))
            .collect::<Result<_>>()?;
        Ok(Self::from_labels(layer.name.clone(), &labels))
    }
}

/// Louvain (resolution 1.0) on one layer.
pub fn detect_layer_communities(layer: &LayerGraph, seed: u64) -> CommunityAssignment {
    detect_with_trace(layer, seed).0
}

/// Like [`detect_layer_communities`], also returning the modularity after
/// every aggregation level.
pub fn detect_with_trace(layer: &LayerGraph, seed: u64) -> (CommunityAssignment, Vec<f64>) {
    let out = louvain::louvain(&layer.graph, seed, 1.0);
    (
        CommunityAssignment::from_labels(layer.name.clone(), &out.labels),
        out.level_modularity,
    )
}

/// Newman modularity of a name-keyed membership map.
pub fn newman_modularity<C: Copy + Eq + std::hash::Hash>(
    graph: &SimpleGraph,
    membership: &HashMap<String, C>,
) -> Result<f64> {
    let mut ids: HashMap<C, usize> = HashMap::new();
    let mut labels = Vec::with_capacity(graph.node_count());
    for name in graph.nodes() {
        let c = *membership
            .get(name)
            .ok_or_else(|| Error::MissingMembership(name.clone()))?;
        let next = ids.len();
        labels.push(*ids.entry(c).or_insert(next));
    }
    Ok(louvain::modularity(graph, &labels))
}

/// Modularity of an assignment on its own layer.
pub fn assignment_modularity(graph: &SimpleGraph, assignment: &CommunityAssignment) -> f64 {
    let labels: Vec<usize> = assignment.membership().iter().map(|&c| c as usize).collect();
    louvain::modularity(graph, &labels)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommunityStats {
    pub id: CommunityId,
    pub size: usize,
    pub internal_edges: usize,
    /// `2e / (n(n-1))`, and 0 for singletons.
    pub density: f64,
}

/// One record per community, indexed by `id - 1`.
pub fn community_stats(graph: &SimpleGraph, assignment: &CommunityAssignment) -> Vec<CommunityStats> {
    let mut internal = vec![0usize; assignment.community_count()];
    for &(u, v) in graph.edges() {
        let cu = assignment.community_of(u);
        if cu == assignment.community_of(v) {
            internal[cu as usize - 1] += 1;
        }
    }
    assignment
        .ids()
        .map(|id| {
            let size = assignment.size(id);
            let e = internal[id as usize - 1];
            let density = if size < 2 {
                0.0
            } else {
                2.0 * e as f64 / (size as f64 * (size as f64 - 1.0))
            };
            CommunityStats {
                id,
                size,
                internal_edges: e,
                density,
            }
        })
        .collect()
}
