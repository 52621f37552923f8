//! Evaluation of k-community expressions over a multilayer network.
//!
//! Results are sets of tuples `<c_1, …, c_k ; x_1, …, x_s>`: one community id
//! per distinct layer (0 when no community was paired) and one expanded
//! inter-layer edge set per composition step (`None` for the empty set φ).
//! Each composition builds a CBG restricted to the communities present in the
//! current tuples, pairs it, and then extends (new right layer) or updates
//! (both layers already present) every tuple.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::community::CommunityId;
use crate::error::{Error, Result};
use crate::expr::{classify_steps, CompositionStep, KCommunityExpression, StepCase};
use crate::meta::{build_cbg_restricted, EdgeSet, HubRule, LayerAnalysis, Metric};
use crate::mln::MultilayerNetwork;
use crate::pairing::{pair, Algorithm};
use crate::par::{self, ExecMode};

/// One-time per-layer results shared by every composition.
#[derive(Debug, Clone, Default)]
pub struct LayerStore {
    layers: BTreeMap<String, LayerAnalysis>,
}

impl LayerStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Detects communities on the named layers, one layer per task.
    pub fn detect(
        mln: &MultilayerNetwork,
        names: &[&str],
        seed: u64,
        rule: HubRule,
        mode: ExecMode,
    ) -> Result<Self> {
        let layers = names
            .iter()
            .map(|n| mln.layer(n).ok_or_else(|| Error::UnknownLayer((*n).to_owned())))
            .collect::<Result<Vec<_>>>()?;
        let analyses = par::map(mode, &layers, |l| LayerAnalysis::detect(l, seed, rule));
        let mut store = LayerStore::new();
        for (l, a) in layers.iter().zip(analyses) {
            store.insert(l.name.clone(), a);
        }
        Ok(store)
    }

    pub fn insert(&mut self, layer: impl Into<String>, analysis: LayerAnalysis) {
        self.layers.insert(layer.into(), analysis);
    }

    pub fn get(&self, layer: &str) -> Result<&LayerAnalysis> {
        self.layers
            .get(layer)
            .ok_or_else(|| Error::UnknownLayer(layer.to_owned()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LayerAnalysis)> {
        self.layers.iter().map(|(k, v)| (k.as_str(), v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KCommunityTuple {
    /// One per distinct layer composed so far, in first-appearance order; 0 is
    /// the null community.
    pub community_ids: Vec<CommunityId>,
    /// One per applied step; `None` is the empty set.
    pub edge_sets: Vec<Option<EdgeSet>>,
}

impl KCommunityTuple {
    pub fn is_total(&self) -> bool {
        self.community_ids.iter().all(|&c| c != 0) && self.edge_sets.iter().all(Option::is_some)
    }

    pub fn edge_counts(&self) -> Vec<usize> {
        self.edge_sets
            .iter()
            .map(|s| s.as_ref().map_or(0, |x| x.len()))
            .collect()
    }

    pub fn link_total(&self) -> usize {
        self.edge_counts().iter().sum()
    }
}

/// What happened at one composition step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSummary {
    pub position: usize,
    pub left_layer: String,
    pub right_layer: String,
    pub case: StepCase,
    pub left_meta_nodes: usize,
    pub right_meta_nodes: usize,
    pub meta_edges: usize,
    pub pairs: usize,
    pub total_weight: f64,
    pub total_score: f64,
    pub link_total: usize,
    pub consistent: usize,
    pub no_match: usize,
    pub inconsistent: usize,
    pub tuples_after: usize,
}

#[derive(Debug, Clone)]
pub struct KCommunityResult {
    pub expression: KCommunityExpression,
    pub algorithm: Algorithm,
    pub metric: Metric,
    /// Distinct, sorted.
    pub tuples: Vec<KCommunityTuple>,
    pub steps: Vec<StepSummary>,
    /// Number of layers currently represented in the tuples.
    pub k: usize,
}

impl KCommunityResult {
    pub fn classify_tuples(&self) -> (Vec<&KCommunityTuple>, Vec<&KCommunityTuple>) {
        self.tuples.iter().partition(|t| t.is_total())
    }

    pub fn total_count(&self) -> usize {
        self.tuples.iter().filter(|t| t.is_total()).count()
    }

    pub fn partial_count(&self) -> usize {
        self.tuples.len() - self.total_count()
    }

    /// Tuples ordered by descending link total, ties in canonical order.
    pub fn ranked_by_link_total(&self) -> Vec<&KCommunityTuple> {
        let mut v: Vec<&KCommunityTuple> = self.tuples.iter().collect();
        v.sort_by(|a, b| b.link_total().cmp(&a.link_total()).then_with(|| a.cmp(b)));
        v
    }
}

/// Splits tuples into (total, partial).
pub fn classify_tuples(result: &KCommunityResult) -> (Vec<&KCommunityTuple>, Vec<&KCommunityTuple>) {
    result.classify_tuples()
}

fn finalize(mut tuples: Vec<KCommunityTuple>) -> Vec<KCommunityTuple> {
    tuples.sort();
    tuples.dedup();
    tuples
}

/// First composition: one tuple per selected meta edge.
pub fn initialize_result(
    mln: &MultilayerNetwork,
    store: &LayerStore,
    expr: &KCommunityExpression,
    metric: Metric,
    algorithm: Algorithm,
) -> Result<KCommunityResult> {
    let step = expr
        .steps
        .first()
        .ok_or_else(|| Error::InvalidParams("expression has no composition".into()))?;
    let (la, ra) = (store.get(&step.left_layer)?, store.get(&step.right_layer)?);
    let cbg = build_cbg_restricted(
        mln,
        &step.left_layer,
        &step.right_layer,
        la,
        ra,
        metric,
        None,
        None,
    )?;
    if cbg.is_empty() {
        log::warn!(
            "empty community bipartite graph for {} and {}",
            step.left_layer,
            step.right_layer
        );
    }
    let pairing = pair(&cbg, algorithm);
    let tuples: Vec<KCommunityTuple> = pairing
        .selected
        .iter()
        .map(|&i| {
            let e = &cbg.edges[i];
            KCommunityTuple {
                community_ids: vec![cbg.left[e.left].community, cbg.right[e.right].community],
                edge_sets: vec![Some(e.expanded.clone())],
            }
        })
        .collect();
    let tuples = finalize(tuples);
    let summary = StepSummary {
        position: step.position,
        left_layer: step.left_layer.clone(),
        right_layer: step.right_layer.clone(),
        case: StepCase::Initial,
        left_meta_nodes: cbg.left.len(),
        right_meta_nodes: cbg.right.len(),
        meta_edges: cbg.edges.len(),
        pairs: pairing.len(),
        total_weight: pairing.total_weight,
        total_score: pairing.total_score,
        link_total: pairing.link_total(&cbg),
        consistent: pairing.len(),
        no_match: 0,
        inconsistent: 0,
        tuples_after: tuples.len(),
    };
    Ok(KCommunityResult {
        expression: expr.clone(),
        algorithm,
        metric,
        tuples,
        steps: vec![summary],
        k: 2,
    })
}

#[derive(Default, Clone, Copy)]
struct Outcomes {
    consistent: usize,
    no_match: usize,
    inconsistent: usize,
}

/// Applies one later composition step (`index >= 1` into `expr.steps`).
pub fn apply_composition(
    result: &mut KCommunityResult,
    index: usize,
    mln: &MultilayerNetwork,
    store: &LayerStore,
) -> Result<()> {
    let expr = &result.expression;
    let step: &CompositionStep = expr
        .steps
        .get(index)
        .ok_or_else(|| Error::InvalidParams(format!("no composition step {}", index + 1)))?;
    let case = classify_steps(expr)[index];
    let layers = expr.distinct_layers();
    let slot = |name: &str| layers.iter().position(|&l| l == name).expect("layer in expression");
    let left_slot = slot(&step.left_layer);
    let right_slot = slot(&step.right_layer);

    let present = |s: usize| -> BTreeSet<CommunityId> {
        result
            .tuples
            .iter()
            .map(|t| t.community_ids[s])
            .filter(|&c| c != 0)
            .collect()
    };
    let left_filter = present(left_slot);
    let right_filter = match case {
        StepCase::BothProcessed => Some(present(right_slot)),
        _ => None,
    };

    let (la, ra) = (store.get(&step.left_layer)?, store.get(&step.right_layer)?);
    let cbg = build_cbg_restricted(
        mln,
        &step.left_layer,
        &step.right_layer,
        la,
        ra,
        result.metric,
        Some(&left_filter),
        right_filter.as_ref(),
    )?;
    let pairing = pair(&cbg, result.algorithm);

    let mut partners: HashMap<CommunityId, Vec<(CommunityId, EdgeSet)>> = HashMap::new();
    let mut pair_set: HashMap<(CommunityId, CommunityId), EdgeSet> = HashMap::new();
    for &i in &pairing.selected {
        let e = &cbg.edges[i];
        let (l, r) = (cbg.left[e.left].community, cbg.right[e.right].community);
        partners.entry(l).or_default().push((r, e.expanded.clone()));
        pair_set.insert((l, r), e.expanded.clone());
    }
    for list in partners.values_mut() {
        list.sort_by_key(|p| p.0);
    }

    let per_tuple: Vec<(Vec<KCommunityTuple>, Outcomes)> =
        par::map(ExecMode::Parallel, &result.tuples, |t| {
            let mut out = Outcomes::default();
            let c_left = t.community_ids[left_slot];
            let next = match case {
                StepCase::BothProcessed => {
                    let c_right = t.community_ids[right_slot];
                    let mut u = t.clone();
                    let hit = (c_left != 0 && c_right != 0)
                        .then(|| pair_set.get(&(c_left, c_right)))
                        .flatten();
                    match hit {
                        Some(x) => {
                            out.consistent += 1;
                            u.edge_sets.push(Some(x.clone()));
                        }
                        None => {
                            if c_left != 0 && partners.contains_key(&c_left) {
                                out.inconsistent += 1;
                            } else {
                                out.no_match += 1;
                            }
                            u.edge_sets.push(None);
                        }
                    }
                    vec![u]
                }
                _ => match partners.get(&c_left).filter(|_| c_left != 0) {
                    Some(list) => {
                        out.consistent += 1;
                        list.iter()
                            .map(|(r, x)| {
                                let mut u = t.clone();
                                u.community_ids.push(*r);
                                u.edge_sets.push(Some(x.clone()));
                                u
                            })
                            .collect()
                    }
                    None => {
                        out.no_match += 1;
                        let mut u = t.clone();
                        u.community_ids.push(0);
                        u.edge_sets.push(None);
                        vec![u]
                    }
                },
            };
            (next, out)
        });

    let mut totals = Outcomes::default();
    let mut tuples = Vec::new();
    for (ts, o) in per_tuple {
        totals.consistent += o.consistent;
        totals.no_match += o.no_match;
        totals.inconsistent += o.inconsistent;
        tuples.extend(ts);
    }
    let tuples = finalize(tuples);

    result.steps.push(StepSummary {
        position: step.position,
        left_layer: step.left_layer.clone(),
        right_layer: step.right_layer.clone(),
        case,
        left_meta_nodes: cbg.left.len(),
        right_meta_nodes: cbg.right.len(),
        meta_edges: cbg.edges.len(),
        pairs: pairing.len(),
        total_weight: pairing.total_weight,
        total_score: pairing.total_score,
        link_total: pairing.link_total(&cbg),
        consistent: totals.consistent,
        no_match: totals.no_match,
        inconsistent: totals.inconsistent,
        tuples_after: tuples.len(),
    });
    result.tuples = tuples;
    if case == StepCase::NewLayer {
        result.k += 1;
    }
    Ok(())
}

/// Evaluates every step of `expr` using precomputed layer results.
pub fn evaluate_with_store(
    mln: &MultilayerNetwork,
    store: &LayerStore,
    expr: &KCommunityExpression,
    metric: Metric,
    algorithm: Algorithm,
) -> Result<KCommunityResult> {
    let mut result = initialize_result(mln, store, expr, metric, algorithm)?;
    for i in 1..expr.steps.len() {
        apply_composition(&mut result, i, mln, store)?;
    }
    Ok(result)
}

/// Detects 1-communities on every layer of the expression (concurrently) and
/// evaluates it.
pub fn evaluate_k_community(
    mln: &MultilayerNetwork,
    expr: &KCommunityExpression,
    metric: Metric,
    algorithm: Algorithm,
    seed: u64,
) -> Result<KCommunityResult> {
    let store = LayerStore::detect(mln, &expr.distinct_layers(), seed, HubRule::default(), ExecMode::Parallel)?;
    evaluate_with_store(mln, &store, expr, metric, algorithm)
}
