//! Louvain modularity optimisation: greedy local moves followed by community
//! aggregation, repeated until no node changes community.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::SimpleGraph;

const GAIN_EPS: f64 = 1e-12;
const MAX_PASSES: usize = 1_000;

/// Raw Louvain output.
#[derive(Debug, Clone)]
pub struct LouvainOutcome {
    /// Community label per node, `0..community_count`.
    pub labels: Vec<usize>,
    /// Modularity of the starting singleton partition followed by the
    /// partition after each level's local-move phase.
    pub level_modularity: Vec<f64>,
}

/// Weighted graph with self-loops, used for the aggregated levels.
struct WeightedGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    /// Self-loop weight per node (each internal edge counted once).
    self_weight: Vec<f64>,
}

impl WeightedGraph {
    fn from_simple(g: &SimpleGraph) -> Self {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(2 * g.edge_count());
        for u in 0..n {
            targets.extend_from_slice(g.neighbors(u));
            offsets.push(targets.len());
        }
        let weights = vec![1.0; targets.len()];
        WeightedGraph {
            offsets,
            targets,
            weights,
            self_weight: vec![0.0; n],
        }
    }

    fn len(&self) -> usize {
        self.self_weight.len()
    }

    fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[u]..self.offsets[u + 1];
        self.targets[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }

    fn strength(&self, u: usize) -> f64 {
        self.neighbors(u).map(|(_, w)| w).sum::<f64>() + 2.0 * self.self_weight[u]
    }

    /// Collapses each community into one node.
    fn aggregate(&self, labels: &[usize], count: usize) -> WeightedGraph {
        let mut self_weight = vec![0.0; count];
        let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
        for u in 0..self.len() {
            let cu = labels[u];
            self_weight[cu] += self.self_weight[u];
            for (v, w) in self.neighbors(u) {
                if v <= u {
                    continue;
                }
                let cv = labels[v];
                if cu == cv {
                    self_weight[cu] += w;
                } else {
                    pairs.push((cu.min(cv), cu.max(cv), w));
                }
            }
        }
        pairs.sort_unstable_by_key(|a| (a.0, a.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(pairs.len());
        for (a, b, w) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += w,
                _ => merged.push((a, b, w)),
            }
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); count];
        for (a, b, w) in merged {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        let mut offsets = Vec::with_capacity(count + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        for list in adj {
            for (t, w) in list {
                targets.push(t);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        WeightedGraph {
            offsets,
            targets,
            weights,
            self_weight,
        }
    }
}

/// Local-move phase. Returns community labels compacted to `0..count` (in
/// order of first appearance by node index), the count, and whether any node moved.
fn local_moves(
    g: &WeightedGraph,
    order: &[usize],
    resolution: f64,
) -> (Vec<usize>, usize, bool) {
    let n = g.len();
    let strength: Vec<f64> = (0..n).map(|u| g.strength(u)).collect();
    let two_m: f64 = strength.iter().sum();
    let mut comm: Vec<usize> = (0..n).collect();
    let mut total = strength.clone();
    let mut to_comm = vec![0.0f64; n];
    let mut seen = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut any_move = false;

    if two_m > 0.0 {
        for _ in 0..MAX_PASSES {
            let mut moved = 0usize;
            for &u in order {
                let cu = comm[u];
                let ku = strength[u];
                for (v, w) in g.neighbors(u) {
                    let c = comm[v];
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    to_comm[c] += w;
                }
                total[cu] -= ku;
                let mut best = cu;
                let mut best_gain = to_comm[cu] - resolution * total[cu] * ku / two_m;
                for &c in &touched {
                    let gain = to_comm[c] - resolution * total[c] * ku / two_m;
                    if gain > best_gain + GAIN_EPS {
                        best = c;
                        best_gain = gain;
                    }
                }
                total[best] += ku;
                comm[u] = best;
                if best != cu {
                    moved += 1;
                }
                for &c in &touched {
                    to_comm[c] = 0.0;
                    seen[c] = false;
                }
                touched.clear();
            }
            if moved == 0 {
                break;
            }
            any_move = true;
        }
    }

    let mut relabel = vec![usize::MAX; n];
    let mut count = 0;
    let labels = comm
        .iter()
        .map(|&c| {
            if relabel[c] == usize::MAX {
                relabel[c] = count;
                count += 1;
            }
            relabel[c]
        })
        .collect();
    (labels, count, any_move)
}

/// Runs Louvain on a simple graph. Node visit order at every level is the
/// ascending index order shuffled by `seed`.
pub fn louvain(graph: &SimpleGraph, seed: u64, resolution: f64) -> LouvainOutcome {
    let n = graph.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut level_modularity = vec![modularity(graph, &labels)];
    let mut current = WeightedGraph::from_simple(graph);

    loop {
        let mut order: Vec<usize> = (0..current.len()).collect();
        order.shuffle(&mut rng);
        let (level_labels, count, moved) = local_moves(&current, &order, resolution);
        if !moved {
            break;
        }
        for l in labels.iter_mut() {
            *l = level_labels[*l];
        }
        level_modularity.push(modularity(graph, &labels));
        if count == current.len() {
            break;
        }
        current = current.aggregate(&level_labels, count);
    }

    LouvainOutcome {
        labels,
        level_modularity,
    }
}

/// Newman modularity `Σ_c [e_c/m − (d_c/2m)²]` of a labelling on an
/// unweighted simple graph. Labels may be arbitrary values; an edgeless graph
/// scores 0.
pub fn modularity(graph: &SimpleGraph, labels: &[usize]) -> f64 {
    let m = graph.edge_count();
    if m == 0 {
        return 0.0;
    }
    let mut index = std::collections::HashMap::new();
    for &l in labels {
        let next = index.len();
        index.entry(l).or_insert(next);
    }
    let k = index.len();
    let mut internal = vec![0usize; k];
    let mut degree = vec![0usize; k];
    for &(u, v) in graph.edges() {
        let (cu, cv) = (index[&labels[u]], index[&labels[v]]);
        degree[cu] += 1;
        degree[cv] += 1;
        if cu == cv {
            internal[cu] += 1;
        }
    }
    let m = m as f64;
    internal
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(&str, &str)]) -> SimpleGraph {
        SimpleGraph::build(Vec::<&str>::new(), edges.iter().copied()).0
    }

    #[test]
    fn k2_singletons_is_minus_half() {
        let g = graph(&[("a", "b")]);
        assert_eq!(modularity(&g, &[0, 1]), -0.5);
        assert_eq!(modularity(&g, &[7, 7]), 0.0);
    }

    #[test]
    fn disconnected_components_never_merge() {
        let g = graph(&[("a", "b"), ("b", "c"), ("a", "c"), ("x", "y"), ("y", "z"), ("x", "z")]);
        let out = louvain(&g, 3, 1.0);
        assert_eq!(out.labels[0], out.labels[1]);
        assert_eq!(out.labels[1], out.labels[2]);
        assert_ne!(out.labels[0], out.labels[3]);
        assert!((out.level_modularity.last().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn edgeless_stays_singletons() {
        let g = SimpleGraph::build(vec!["a", "b", "c"], Vec::<(&str, &str)>::new()).0;
        let out = louvain(&g, 1, 1.0);
        assert_eq!(out.labels, vec![0, 1, 2]);
    }
}
