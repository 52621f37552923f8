//! Planted-partition multilayer networks for tests and benchmarks.
//!
//! Every layer is a planted-partition graph; block `b` of every layer is
//! coupled to block `b` of every other layer with the given link density,
//! plus uniformly random noise links numbering 10% of the signal links.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::compose::{KCommunityResult, LayerStore};
use crate::error::{Error, Result};
use crate::mln::{InterLayerEdges, LayerGraph, MultilayerNetwork};

/// Noise links as a fraction of signal links.
pub const NOISE_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedParams {
    pub layers: usize,
    pub blocks_per_layer: usize,
    pub block_size: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub coupling_density: f64,
}

impl PlantedParams {
    fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_owned()));
        if self.layers == 0 || self.blocks_per_layer == 0 || self.block_size == 0 {
            return bad("layers, blocks_per_layer and block_size must be positive");
        }
        if !(0.0 <= self.p_out && self.p_out < self.p_in && self.p_in <= 1.0) {
            return bad("need 0 <= p_out < p_in <= 1");
        }
        if !(0.0..=1.0).contains(&self.coupling_density) {
            return bad("coupling_density must lie in [0, 1]");
        }
        Ok(())
    }

    pub fn nodes_per_layer(&self) -> usize {
        self.blocks_per_layer * self.block_size
    }
}

/// What the generator planted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedTruth {
    pub layers: Vec<String>,
    /// Planted block of every node, keyed by node id.
    pub block_of: BTreeMap<String, usize>,
    /// `(left layer, right layer, block)` for every coupling with at least one signal link.
    pub couplings: Vec<(String, String, usize)>,
}

pub fn layer_name(i: usize) -> String {
    format!("L{}", i + 1)
}

pub fn node_name(layer: &str, index: usize) -> String {
    format!("{layer}_{index:07}")
}

/// Indices in `0..total` each kept independently with probability `p`, by
/// geometric skipping.
fn bernoulli_indices(rng: &mut impl Rng, total: u64, p: f64) -> Vec<u64> {
    if p <= 0.0 || total == 0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..total).collect();
    }
    let log_q = (1.0 - p).ln();
    let mut out = Vec::new();
    let mut idx: i128 = -1;
    loop {
        let r: f64 = 1.0 - rng.gen::<f64>();
        let skip = (r.ln() / log_q).floor() as i128;
        idx += 1 + skip;
        if idx >= total as i128 {
            break;
        }
        out.push(idx as u64);
    }
    out
}

/// One planted-partition layer with node indices `0..blocks*size`; block of
/// node `u` is `u / size`.
pub fn planted_layer_edges(
    rng: &mut impl Rng,
    blocks: usize,
    size: usize,
    p_in: f64,
    p_out: f64,
) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let s = size as u64;
    for b in 0..blocks {
        let base = b * size;
        for t in bernoulli_indices(rng, s * s, p_in) {
            let (i, j) = ((t / s) as usize, (t % s) as usize);
            if i < j {
                edges.push((base + i, base + j));
            }
        }
    }
    for b1 in 0..blocks {
        for b2 in b1 + 1..blocks {
            for t in bernoulli_indices(rng, s * s, p_out) {
                let (i, j) = ((t / s) as usize, (t % s) as usize);
                edges.push((b1 * size + i, b2 * size + j));
            }
        }
    }
    edges
}

pub fn planted_layer(
    name: &str,
    blocks: usize,
    size: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> LayerGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = planted_layer_edges(&mut rng, blocks, size, p_in, p_out);
    let nodes = (0..blocks * size).map(|u| node_name(name, u));
    let named = edges
        .into_iter()
        .map(|(u, v)| (node_name(name, u), node_name(name, v)));
    LayerGraph::from_edges(name, nodes, named).0
}

pub fn gen_planted_mln(params: PlantedParams, seed: u64) -> Result<(MultilayerNetwork, PlantedTruth)> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (nb, s) = (params.blocks_per_layer, params.block_size);
    let n = params.nodes_per_layer();
    let names: Vec<String> = (0..params.layers).map(layer_name).collect();

    let mut mln = MultilayerNetwork::new();
    let mut block_of = BTreeMap::new();
    for name in &names {
        let edges = planted_layer_edges(&mut rng, nb, s, params.p_in, params.p_out);
        let nodes: Vec<String> = (0..n).map(|u| node_name(name, u)).collect();
        for (u, node) in nodes.iter().enumerate() {
            block_of.insert(node.clone(), u / s);
        }
        let named = edges
            .into_iter()
            .map(|(u, v)| (nodes[u].clone(), nodes[v].clone()));
        mln.add_layer(LayerGraph::from_edges(name.clone(), nodes.clone(), named).0);
    }

    let mut couplings = Vec::new();
    let ss = (s * s) as u64;
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let mut links: HashSet<(usize, usize)> = HashSet::new();
            for b in 0..nb {
                let picked = bernoulli_indices(&mut rng, ss, params.coupling_density);
                if !picked.is_empty() {
                    couplings.push((names[i].clone(), names[j].clone(), b));
                }
                for t in picked {
                    links.insert((b * s + (t / s as u64) as usize, b * s + (t % s as u64) as usize));
                }
            }
            let noise = (links.len() as f64 * NOISE_FRACTION).round() as usize;
            let target = (links.len() + noise).min(n * n);
            while links.len() < target {
                links.insert((rng.gen_range(0..n), rng.gen_range(0..n)));
            }
            let mut sorted: Vec<(usize, usize)> = links.into_iter().collect();
            sorted.sort_unstable();
            let named = sorted
                .into_iter()
                .map(|(u, v)| (node_name(&names[i], u), node_name(&names[j], v)));
            mln.add_interlayer(InterLayerEdges::new(names[i].clone(), names[j].clone(), named).0);
        }
    }

    Ok((
        mln,
        PlantedTruth {
            layers: names,
            block_of,
            couplings,
        },
    ))
}

/// Planted block holding the majority of a community's members, if any
/// block holds more than half.
pub fn majority_block(
    truth: &PlantedTruth,
    mln: &MultilayerNetwork,
    store: &LayerStore,
    layer: &str,
    community: u32,
) -> Option<usize> {
    let graph = &mln.layer(layer)?.graph;
    let members = store.get(layer).ok()?.assignment.members(community);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &u in members {
        *counts.entry(truth.block_of[graph.node_name(u)]).or_default() += 1;
    }
    counts
        .into_iter()
        .find(|&(_, c)| 2 * c > members.len())
        .map(|(b, _)| b)
}

/// Fraction of planted couplings between the expression's layers that show up
/// as a total tuple whose every community is dominated by the coupled block.
pub fn coupling_recovery(
    truth: &PlantedTruth,
    mln: &MultilayerNetwork,
    store: &LayerStore,
    result: &KCommunityResult,
) -> f64 {
    let layers = result.expression.distinct_layers();
    let wanted: Vec<usize> = truth
        .couplings
        .iter()
        .filter(|(a, b, _)| layers.contains(&a.as_str()) && layers.contains(&b.as_str()))
        .map(|c| c.2)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    if wanted.is_empty() {
        return 1.0;
    }
    let mut found = std::collections::BTreeSet::new();
    for t in result.tuples.iter().filter(|t| t.is_total()) {
        let blocks: Vec<Option<usize>> = t
            .community_ids
            .iter()
            .enumerate()
            .map(|(slot, &c)| majority_block(truth, mln, store, layers[slot], c))
            .collect();
        if let Some(Some(b)) = blocks.first() {
            if blocks.iter().all(|x| *x == Some(*b)) {
                found.insert(*b);
            }
        }
    }
    wanted.iter().filter(|b| found.contains(b)).count() as f64 / wanted.len() as f64
}
