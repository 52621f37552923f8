#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;

use hemln::meta::{weight_edge_count, CommunityBipartiteGraph, MetaEdge, MetaNode, Metric};
use hemln::mln::{InterLayerEdges, LayerGraph, MultilayerNetwork};

fn nodes(n: usize) -> Vec<MetaNode> {
    (0..n)
        .map(|i| MetaNode {
            community: i as u32 + 1,
            size: 64,
        })
        .collect()
}

/// A CBG under the edge-count metric whose raw counts are `(l, r, count)`.
pub fn count_cbg(nl: usize, nr: usize, edges: &[(usize, usize, usize)]) -> CommunityBipartiteGraph {
    let edges = edges
        .iter()
        .map(|&(l, r, c)| MetaEdge {
            left: l,
            right: r,
            expanded: (0..c).map(|k| (l * 4096 + k, r)).collect::<Vec<_>>().into(),
            weight: 0.0,
        })
        .collect();
    let mut g = CommunityBipartiteGraph::from_parts("L", "R", Metric::EdgeCount, nodes(nl), nodes(nr), edges);
    weight_edge_count(&mut g);
    g
}

/// A CBG under the density metric with the given real weights.
pub fn weighted_cbg(nl: usize, nr: usize, edges: &[(usize, usize, f64)]) -> CommunityBipartiteGraph {
    let edges = edges
        .iter()
        .map(|&(l, r, w)| MetaEdge {
            left: l,
            right: r,
            expanded: Arc::from(vec![(l, r)]),
            weight: w,
        })
        .collect();
    CommunityBipartiteGraph::from_parts("L", "R", Metric::Density, nodes(nl), nodes(nr), edges)
}

/// Random meta edges over `nl x nr` with the given density; at most one per pair.
pub fn random_edges<R: Rng>(rng: &mut R, nl: usize, nr: usize, density: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for l in 0..nl {
        for r in 0..nr {
            if rng.gen_bool(density) {
                out.push((l, r));
            }
        }
    }
    out
}

pub fn random_count_cbg<R: Rng>(rng: &mut R, max_side: usize, max_count: usize) -> CommunityBipartiteGraph {
    let nl = rng.gen_range(1..=max_side);
    let nr = rng.gen_range(1..=max_side);
    let density = rng.gen_range(0.05..=1.0);
    let edges: Vec<_> = random_edges(rng, nl, nr, density)
        .into_iter()
        .map(|(l, r)| (l, r, rng.gen_range(1..=max_count)))
        .collect();
    count_cbg(nl, nr, &edges)
}

pub fn random_weighted_cbg<R: Rng>(rng: &mut R, max_side: usize) -> CommunityBipartiteGraph {
    let nl = rng.gen_range(1..=max_side);
    let nr = rng.gen_range(1..=max_side);
    let density = rng.gen_range(0.05..=1.0);
    let edges: Vec<_> = random_edges(rng, nl, nr, density)
        .into_iter()
        .map(|(l, r)| (l, r, rng.gen_range(1..=1000) as f64 / 1000.0))
        .collect();
    weighted_cbg(nl, nr, &edges)
}

/// Node `i` of `layer`, zero padded so that name order is index order.
pub fn node(layer: &str, i: usize) -> String {
    format!("{layer}_{i:03}")
}

/// Layers whose communities are disjoint triangles: community `c` (1-based)
/// of layer `X` holds nodes `3(c-1) .. 3c` of `X`, so Louvain recovers the
/// triangles and numbers them in order.
///
/// `couplings` are `(left layer, left community, right layer, right
/// community, links)` with `links <= 9`; every pair of layers gets an
/// inter-layer set, possibly empty.
pub fn triangle_mln(layers: &[(&str, usize)], couplings: &[(&str, u32, &str, u32, usize)]) -> MultilayerNetwork {
    let mut mln = MultilayerNetwork::new();
    for &(name, k) in layers {
        let mut edges = Vec::new();
        for c in 0..k {
            let b = 3 * c;
            edges.push((node(name, b), node(name, b + 1)));
            edges.push((node(name, b + 1), node(name, b + 2)));
            edges.push((node(name, b), node(name, b + 2)));
        }
        mln.add_layer(LayerGraph::from_edges(name, Vec::<String>::new(), edges).0);
    }
    for (i, &(a, _)) in layers.iter().enumerate() {
        for &(b, _) in &layers[i + 1..] {
            mln.add_interlayer(InterLayerEdges::new(a, b, Vec::<(String, String)>::new()).0);
        }
    }
    for &(a, ca, b, cb, n) in couplings {
        assert!(n <= 9);
        let (ba, bb) = (3 * (ca as usize - 1), 3 * (cb as usize - 1));
        let links: Vec<(String, String)> = (0..n)
            .map(|t| (node(a, ba + t / 3), node(b, bb + t % 3)))
            .collect();
        mln.add_interlayer(InterLayerEdges::new(a, b, links).0);
    }
    mln
}
