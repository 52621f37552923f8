//! Modularity comparison of k-community results against Louvain on the
//! type-independent aggregate graph.

use crate::community::{assignment_modularity, detect_layer_communities, CommunityAssignment};
use crate::compose::{KCommunityResult, LayerStore};
use crate::error::Result;
use crate::louvain::modularity;
use crate::mln::{collapse_type_independent, AggregateGraph, LayerGraph, MultilayerNetwork};

pub const AGGREGATE_LAYER: &str = "aggregate";

/// Louvain partition of the aggregate graph and its modularity.
pub fn baseline_modularity(mln: &MultilayerNetwork, seed: u64) -> (AggregateGraph, CommunityAssignment, f64) {
    let agg = LayerGraph::new(AGGREGATE_LAYER, collapse_type_independent(mln));
    let assignment = detect_layer_communities(&agg, seed);
    let q = assignment_modularity(&agg.graph, &assignment);
    (agg.graph, assignment, q)
}

/// Projects tuples onto the aggregate graph: every tuple becomes one block
/// holding all members of its communities. A node claimed by several tuples
/// goes to the tuple with the largest link total (ties to the earlier tuple
/// in canonical order); unclaimed nodes become singletons.
///
/// Returns one block label per aggregate node.
pub fn project_tuples(
    agg: &AggregateGraph,
    mln: &MultilayerNetwork,
    store: &LayerStore,
    result: &KCommunityResult,
) -> Result<Vec<usize>> {
    let layers = result.expression.distinct_layers();
    let mut order: Vec<usize> = (0..result.tuples.len()).collect();
    order.sort_by(|&a, &b| {
        result.tuples[b]
            .link_total()
            .cmp(&result.tuples[a].link_total())
            .then(a.cmp(&b))
    });

    let mut label = vec![usize::MAX; agg.node_count()];
    for &t in &order {
        let tuple = &result.tuples[t];
        for (slot, &c) in tuple.community_ids.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let layer = mln
                .layer(layers[slot])
                .expect("expression layers exist in the network");
            let analysis = store.get(layers[slot])?;
            for &u in analysis.assignment.members(c) {
                let a = agg
                    .index_of(layer.graph.node_name(u))
                    .expect("layer node present in aggregate");
                if label[a] == usize::MAX {
                    label[a] = t;
                }
            }
        }
    }
    let mut next = result.tuples.len();
    for l in label.iter_mut() {
        if *l == usize::MAX {
            *l = next;
            next += 1;
        }
    }
    Ok(label)
}

/// Modularity of the projected k-community partition on the aggregate graph.
pub fn hemln_modularity(mln: &MultilayerNetwork, store: &LayerStore, result: &KCommunityResult) -> Result<f64> {
    let agg = collapse_type_independent(mln);
    let labels = project_tuples(&agg, mln, store, result)?;
    Ok(modularity(&agg, &labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mln::InterLayerEdges;

    #[test]
    fn disjoint_triangles_baseline() {
        let mut mln = MultilayerNetwork::new();
        mln.add_layer(LayerGraph::from_edges("A", Vec::<&str>::new(), vec![("a1", "a2"), ("a2", "a3"), ("a1", "a3")]).0);
        mln.add_layer(LayerGraph::from_edges("B", Vec::<&str>::new(), vec![("b1", "b2"), ("b2", "b3"), ("b1", "b3")]).0);
        let (_, a, q) = baseline_modularity(&mln, 42);
        assert_eq!(a.community_count(), 2);
        assert!((q - 0.5).abs() < 1e-12);
        mln.add_interlayer(InterLayerEdges::new("A", "B", Vec::<(&str, &str)>::new()).0);
        assert!((baseline_modularity(&mln, 1).2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_network_baseline_is_zero() {
        let (agg, _, q) = baseline_modularity(&MultilayerNetwork::new(), 42);
        assert!(agg.is_empty());
        assert_eq!(q, 0.0);
    }
}
