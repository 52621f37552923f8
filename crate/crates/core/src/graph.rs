//! Simple undirected graphs over opaque string node ids.
//!
//! Nodes are kept in lexicographic order of their ids and addressed by their
//! position in that order, so a graph built from the same node and edge sets
//! is identical no matter what order the input arrived in.

use std::collections::HashMap;

/// Counts of input edges that were discarded while building a simple graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DropCounts {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl DropCounts {
    pub fn total(&self) -> usize {
        self.self_loops + self.duplicates
    }
}

impl std::ops::AddAssign for DropCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.self_loops += rhs.self_loops;
        self.duplicates += rhs.duplicates;
    }
}

/// Simple undirected graph with compressed adjacency.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimpleGraph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    /// `(u, v)` with `u < v`, sorted.
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl SimpleGraph {
    /// Builds a graph from explicit nodes plus edges. Edge endpoints are added
    /// to the node set. Self-loops and repeated edges are dropped and counted.
    pub fn build<N, E, S>(nodes: N, edges: E) -> (Self, DropCounts)
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut names: Vec<String> = nodes.into_iter().map(Into::into).collect();
        let raw: Vec<(String, String)> = edges
            .into_iter()
            .map(|(a, b)| (a.into(), b.into()))
            .collect();
        for (a, b) in &raw {
            names.push(a.clone());
            names.push(b.clone());
        }
        names.sort_unstable();
        names.dedup();
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();

        let mut drops = DropCounts::default();
        let mut pairs = Vec::with_capacity(raw.len());
        for (a, b) in &raw {
            let (u, v) = (index[a], index[b]);
            if u == v {
                drops.self_loops += 1;
                continue;
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        drops.duplicates = before - pairs.len();

        (Self::from_parts(names, index, pairs), drops)
    }

    fn from_parts(
        nodes: Vec<String>,
        index: HashMap<String, usize>,
        edges: Vec<(usize, usize)>,
    ) -> Self {
        let n = nodes.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; offsets[n]];
        for &(u, v) in &edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        SimpleGraph {
            nodes,
            index,
            edges,
            offsets,
            targets,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids in index order.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_name(&self, u: usize) -> &str {
        &self.nodes[u]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Edges as index pairs `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as name pairs.
    pub fn named_edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges
            .iter()
            .map(|&(u, v)| (self.nodes[u].as_str(), self.nodes[v].as_str()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_loops_and_duplicates() {
        let (g, drops) = SimpleGraph::build(
            Vec::<&str>::new(),
            vec![("a", "b"), ("b", "a"), ("c", "c"), ("b", "c"), ("a", "b")],
        );
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(drops.self_loops, 1);
        assert_eq!(drops.duplicates, 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn isolated_nodes_kept() {
        let (g, _) = SimpleGraph::build(vec!["z", "y"], vec![("a", "b")]);
        assert_eq!(g.nodes(), &["a", "b", "y", "z"]);
        assert_eq!(g.degree(3), 0);
    }

    #[test]
    fn input_order_does_not_matter() {
        let (g1, _) = SimpleGraph::build(Vec::<&str>::new(), vec![("a", "b"), ("c", "b")]);
        let (g2, _) = SimpleGraph::build(Vec::<&str>::new(), vec![("b", "c"), ("b", "a")]);
        assert_eq!(g1, g2);
    }
}
