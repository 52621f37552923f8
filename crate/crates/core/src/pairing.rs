//! Weighted bipartite pairings on a community bipartite graph.
//!
//! * MWM: maximum-weight matching (any cardinality).
//! * MWPM: maximum-cardinality matching of maximum weight.
//! * MWRM: MWM with each matched edge, lightest first, swapped for the
//!   heaviest strictly heavier unselected edge sharing one of its endpoints.
//! * MWMT: MWM plus every edge at a matched meta node that ties the weight of
//!   that node's matched edge.
//!
//! All four maximise [`CommunityBipartiteGraph::score`]. Every algorithm runs
//! on the side ordering fixed by layer name, so swapping the two sides of a
//! CBG never changes the selected edge set.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use crate::community::CommunityId;
use crate::error::{Error, Result};
use crate::meta::CommunityBipartiteGraph;
use crate::par::{self, ExecMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Algorithm {
    #[default]
    Mwm,
    Mwpm,
    Mwrm,
    Mwmt,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Mwm, Algorithm::Mwpm, Algorithm::Mwrm, Algorithm::Mwmt];

    pub fn code(self) -> &'static str {
        match self {
            Algorithm::Mwm => "mwm",
            Algorithm::Mwpm => "mwpm",
            Algorithm::Mwrm => "mwrm",
            Algorithm::Mwmt => "mwmt",
        }
    }

    /// Whether selections may share meta nodes.
    pub fn is_relaxed(self) -> bool {
        matches!(self, Algorithm::Mwrm | Algorithm::Mwmt)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "mwm" => Ok(Algorithm::Mwm),
            "mwpm" => Ok(Algorithm::Mwpm),
            "mwrm" => Ok(Algorithm::Mwrm),
            "mwmt" => Ok(Algorithm::Mwmt),
            _ => Err(format!("unknown algorithm {s:?} (expected mwm, mwpm, mwrm or mwmt)")),
        }
    }
}

/// A set of selected meta edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    pub algorithm: Algorithm,
    /// Indices into the CBG's `edges`, ascending.
    pub selected: Vec<usize>,
    /// Sum of selected meta-edge weights.
    pub total_weight: f64,
    /// Sum of selected scores (raw link counts under the edge-count metric).
    pub total_score: f64,
}

impl Pairing {
    fn new(algorithm: Algorithm, cbg: &CommunityBipartiteGraph, mut selected: Vec<usize>) -> Self {
        selected.sort_unstable();
        selected.dedup();
        let total_weight = selected.iter().map(|&i| cbg.edges[i].weight).sum();
        let total_score = selected.iter().map(|&i| cbg.score(&cbg.edges[i])).sum();
        Pairing {
            algorithm,
            selected,
            total_weight,
            total_score,
        }
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    /// Selected community pairs `(left id, right id)`.
    pub fn community_pairs(&self, cbg: &CommunityBipartiteGraph) -> Vec<(CommunityId, CommunityId)> {
        self.selected
            .iter()
            .map(|&i| {
                let e = &cbg.edges[i];
                (cbg.left[e.left].community, cbg.right[e.right].community)
            })
            .collect()
    }

    /// Total number of inter-layer links behind the selection.
    pub fn link_total(&self, cbg: &CommunityBipartiteGraph) -> usize {
        self.selected.iter().map(|&i| cbg.edges[i].edge_count()).sum()
    }

    /// True when no meta node is touched twice.
    pub fn is_matching(&self, cbg: &CommunityBipartiteGraph) -> bool {
        let mut l = vec![false; cbg.left.len()];
        let mut r = vec![false; cbg.right.len()];
        for &i in &self.selected {
            let e = &cbg.edges[i];
            if std::mem::replace(&mut l[e.left], true) || std::mem::replace(&mut r[e.right], true) {
                return false;
            }
        }
        true
    }
}

/// The CBG seen in canonical side order. `edges[k] = (l, r, score, original index)`,
/// sorted by `(l, r)`.
struct View {
    n_left: usize,
    n_right: usize,
    edges: Vec<(usize, usize, f64, usize)>,
    by_left: Vec<Vec<usize>>,
    by_right: Vec<Vec<usize>>,
}

impl View {
    fn new(cbg: &CommunityBipartiteGraph) -> Self {
        let flip = cbg.left_layer > cbg.right_layer;
        let (n_left, n_right) = if flip {
            (cbg.right.len(), cbg.left.len())
        } else {
            (cbg.left.len(), cbg.right.len())
        };
        let mut edges: Vec<(usize, usize, f64, usize)> = cbg
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let s = cbg.score(e);
                if flip {
                    (e.right, e.left, s, i)
                } else {
                    (e.left, e.right, s, i)
                }
            })
            .collect();
        edges.sort_by_key(|e| (e.0, e.1));
        let mut by_left = vec![Vec::new(); n_left];
        let mut by_right = vec![Vec::new(); n_right];
        for (k, &(l, r, _, _)) in edges.iter().enumerate() {
            by_left[l].push(k);
            by_right[r].push(k);
        }
        View {
            n_left,
            n_right,
            edges,
            by_left,
            by_right,
        }
    }

    fn score(&self, k: usize) -> f64 {
        self.edges[k].2
    }

    fn original(&self, ks: impl IntoIterator<Item = usize>) -> Vec<usize> {
        ks.into_iter().map(|k| self.edges[k].3).collect()
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Successive shortest augmenting paths with Dijkstra on reduced costs.
/// Each augmentation yields a maximum-weight matching of one more edge; with
/// `stop_when_unprofitable` the search ends as soon as the next path would
/// not increase the total weight.
fn augmenting_matching(view: &View, stop_when_unprofitable: bool) -> Vec<usize> {
    let (nl, nr) = (view.n_left, view.n_right);
    let mut match_l: Vec<Option<usize>> = vec![None; nl];
    let mut match_r: Vec<Option<usize>> = vec![None; nr];
    if view.edges.is_empty() {
        return Vec::new();
    }
    let max_score = view.edges.iter().map(|e| e.2).fold(0.0f64, f64::max);
    let tol = 1e-12 * max_score;

    // Potentials: left nodes 0..nl, right nodes nl..nl+nr. Source has
    // potential 0; sink potential is tracked separately. Initial costs on
    // left→right arcs are -score, so feasible potentials are 0 on the left
    // and the cheapest incoming arc on the right.
    let n = nl + nr;
    let mut pot = vec![0.0f64; n];
    for r in 0..nr {
        pot[nl + r] = view.by_right[r]
            .iter()
            .map(|&k| -view.score(k))
            .fold(0.0f64, f64::min);
    }
    let mut pot_sink = (0..nr).map(|r| pot[nl + r]).fold(0.0f64, f64::min);

    let mut dist = vec![f64::INFINITY; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];

    loop {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        parent.iter_mut().for_each(|p| *p = None);
        done.iter_mut().for_each(|d| *d = false);
        let mut heap = BinaryHeap::new();
        for l in 0..nl {
            if match_l[l].is_none() {
                // source→l arc has cost 0, source potential 0.
                let rc = (0.0 - pot[l]).max(0.0);
                if rc < dist[l] {
                    dist[l] = rc;
                    heap.push(HeapItem(rc, l));
                }
            }
        }
        let mut best_sink = f64::INFINITY;
        let mut sink_from: Option<usize> = None;
        while let Some(HeapItem(d, u)) = heap.pop() {
            if d >= best_sink {
                break;
            }
            if done[u] || d > dist[u] {
                continue;
            }
            done[u] = true;
            if u < nl {
                for &k in &view.by_left[u] {
                    if match_l[u] == Some(k) {
                        continue;
                    }
                    let v = nl + view.edges[k].1;
                    let rc = (-view.score(k) + pot[u] - pot[v]).max(0.0);
                    if d + rc < dist[v] {
                        dist[v] = d + rc;
                        parent[v] = Some(k);
                        heap.push(HeapItem(dist[v], v));
                    }
                }
            } else {
                let r = u - nl;
                match match_r[r] {
                    Some(k) => {
                        let v = view.edges[k].0;
                        let rc = (view.score(k) + pot[u] - pot[v]).max(0.0);
                        if d + rc < dist[v] {
                            dist[v] = d + rc;
                            parent[v] = Some(k);
                            heap.push(HeapItem(dist[v], v));
                        }
                    }
                    None => {
                        let rc = (pot[u] - pot_sink).max(0.0);
                        if d + rc < best_sink {
                            best_sink = d + rc;
                            sink_from = Some(r);
                        }
                    }
                }
            }
        }
        let Some(end) = sink_from else { break };
        let path_cost = best_sink + pot_sink;
        if stop_when_unprofitable && path_cost >= -tol {
            break;
        }
        for u in 0..n {
            if dist[u].is_finite() {
                pot[u] += dist[u].min(best_sink);
            } else {
                pot[u] += best_sink;
            }
        }
        pot_sink += best_sink;

        // Walk back from the free right node, flipping matched/unmatched arcs.
        let mut r = end;
        loop {
            let k = parent[nl + r].expect("reached right node has a parent arc");
            let l = view.edges[k].0;
            match_r[r] = Some(k);
            let prev = match_l[l].replace(k);
            match prev {
                None => break,
                Some(pk) => r = view.edges[pk].1,
            }
        }
    }
    match_l.into_iter().flatten().collect()
}

pub fn mwm(cbg: &CommunityBipartiteGraph) -> Pairing {
    let view = View::new(cbg);
    let sel = augmenting_matching(&view, true);
    Pairing::new(Algorithm::Mwm, cbg, view.original(sel))
}

pub fn mwpm(cbg: &CommunityBipartiteGraph) -> Pairing {
    let view = View::new(cbg);
    let sel = augmenting_matching(&view, false);
    Pairing::new(Algorithm::Mwpm, cbg, view.original(sel))
}

fn incident<'v>(view: &'v View, k: usize) -> impl Iterator<Item = usize> + 'v {
    let (l, r, _, _) = view.edges[k];
    let mut all: Vec<usize> = view.by_left[l]
        .iter()
        .chain(&view.by_right[r])
        .copied()
        .filter(|&m| m != k)
        .collect();
    all.sort_unstable();
    all.dedup();
    all.into_iter()
}

pub fn mwrm(cbg: &CommunityBipartiteGraph) -> Pairing {
    let view = View::new(cbg);
    let mut base = augmenting_matching(&view, true);
    base.sort_by(|&a, &b| view.score(a).total_cmp(&view.score(b)).then(a.cmp(&b)));
    let mut selected = vec![false; view.edges.len()];
    for &k in &base {
        selected[k] = true;
    }
    for &k in &base {
        let mut best: Option<usize> = None;
        for m in incident(&view, k) {
            if selected[m] || !cbg.heavier(view.score(m), view.score(k)) {
                continue;
            }
            if best.is_none_or(|b| cbg.heavier(view.score(m), view.score(b))) {
                best = Some(m);
            }
        }
        if let Some(m) = best {
            selected[k] = false;
            selected[m] = true;
        }
    }
    let ks = (0..view.edges.len()).filter(|&k| selected[k]);
    Pairing::new(Algorithm::Mwrm, cbg, view.original(ks))
}

pub fn mwmt(cbg: &CommunityBipartiteGraph) -> Pairing {
    let view = View::new(cbg);
    let base = augmenting_matching(&view, true);
    let mut selected = vec![false; view.edges.len()];
    for &k in &base {
        selected[k] = true;
    }
    for &k in &base {
        let (l, r, s, _) = view.edges[k];
        for &m in view.by_left[l].iter().chain(&view.by_right[r]) {
            if cbg.ties(view.score(m), s) {
                selected[m] = true;
            }
        }
    }
    let ks = (0..view.edges.len()).filter(|&k| selected[k]);
    Pairing::new(Algorithm::Mwmt, cbg, view.original(ks))
}

pub fn pair(cbg: &CommunityBipartiteGraph, algorithm: Algorithm) -> Pairing {
    match algorithm {
        Algorithm::Mwm => mwm(cbg),
        Algorithm::Mwpm => mwpm(cbg),
        Algorithm::Mwrm => mwrm(cbg),
        Algorithm::Mwmt => mwmt(cbg),
    }
}

/// Pairs many CBGs, in parallel when enabled. Output order follows input order.
pub fn pair_batch(
    cbgs: &[CommunityBipartiteGraph],
    algorithm: Algorithm,
    mode: ExecMode,
) -> Vec<Pairing> {
    par::map(mode, cbgs, |c| pair(c, algorithm))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    MaxWeight,
    MaxCardinalityThenWeight,
}

/// Largest `|left| + |right|` the exhaustive oracle accepts.
pub const ORACLE_NODE_LIMIT: usize = 16;

/// Exact optimum by enumerating every matching of the CBG.
pub fn brute_force_pairing_oracle(cbg: &CommunityBipartiteGraph, mode: OracleMode) -> Result<Pairing> {
    let nodes = cbg.node_count();
    if nodes > ORACLE_NODE_LIMIT {
        return Err(Error::TooLarge {
            nodes,
            limit: ORACLE_NODE_LIMIT,
        });
    }
    let mut by_left = vec![Vec::new(); cbg.left.len()];
    for (i, e) in cbg.edges.iter().enumerate() {
        by_left[e.left].push(i);
    }

    struct Search<'a> {
        cbg: &'a CommunityBipartiteGraph,
        by_left: Vec<Vec<usize>>,
        mode: OracleMode,
        used_right: Vec<bool>,
        current: Vec<usize>,
        best: Vec<usize>,
        best_key: (usize, f64),
    }

    impl Search<'_> {
        fn better(&self, card: usize, score: f64) -> bool {
            match self.mode {
                OracleMode::MaxWeight => score > self.best_key.1,
                OracleMode::MaxCardinalityThenWeight => {
                    card > self.best_key.0 || (card == self.best_key.0 && score > self.best_key.1)
                }
            }
        }

        fn go(&mut self, l: usize, score: f64) {
            if l == self.by_left.len() {
                if self.better(self.current.len(), score) {
                    self.best = self.current.clone();
                    self.best_key = (self.current.len(), score);
                }
                return;
            }
            self.go(l + 1, score);
            for idx in 0..self.by_left[l].len() {
                let i = self.by_left[l][idx];
                let r = self.cbg.edges[i].right;
                if self.used_right[r] {
                    continue;
                }
                self.used_right[r] = true;
                self.current.push(i);
                let s = self.cbg.score(&self.cbg.edges[i]);
                self.go(l + 1, score + s);
                self.current.pop();
                self.used_right[r] = false;
            }
        }
    }

    let mut search = Search {
        cbg,
        by_left,
        mode,
        used_right: vec![false; cbg.right.len()],
        current: Vec::new(),
        best: Vec::new(),
        best_key: (0, 0.0),
    };
    search.go(0, 0.0);
    let algorithm = match mode {
        OracleMode::MaxWeight => Algorithm::Mwm,
        OracleMode::MaxCardinalityThenWeight => Algorithm::Mwpm,
    };
    Ok(Pairing::new(algorithm, cbg, search.best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meta::{MetaEdge, MetaNode, Metric};

    /// `edges` are `(left index, right index, integer weight)`; weights become
    /// link counts under the edge-count metric.
    pub(crate) fn cbg(nl: usize, nr: usize, edges: &[(usize, usize, usize)]) -> CommunityBipartiteGraph {
        let max = edges.iter().map(|e| e.2).max().unwrap_or(1) as f64;
        let node = |i: usize| MetaNode {
            community: i as u32 + 1,
            size: 100,
        };
        let edges = edges
            .iter()
            .map(|&(l, r, w)| MetaEdge {
                left: l,
                right: r,
                expanded: (0..w).map(|k| (l * 1000 + k, r)).collect::<Vec<_>>().into(),
                weight: w as f64 / max,
            })
            .collect();
        CommunityBipartiteGraph::from_parts(
            "L",
            "R",
            Metric::EdgeCount,
            (0..nl).map(node).collect(),
            (0..nr).map(node).collect(),
            edges,
        )
    }

    fn pairs(c: &CommunityBipartiteGraph, p: &Pairing) -> Vec<(u32, u32)> {
        p.community_pairs(c)
    }

    #[test]
    fn mwm_examples() {
        let c = cbg(2, 2, &[(0, 0, 10), (0, 1, 1), (1, 0, 1)]);
        let p = mwm(&c);
        assert_eq!(pairs(&c, &p), vec![(1, 1)]);
        assert_eq!(p.total_score, 10.0);

        let c = cbg(2, 2, &[(0, 0, 5), (0, 1, 5), (1, 0, 2)]);
        let p = mwm(&c);
        assert_eq!(pairs(&c, &p), vec![(1, 2), (2, 1)]);
        assert_eq!(p.total_score, 7.0);

        let single = cbg(1, 1, &[(0, 0, 3)]);
        for a in Algorithm::ALL {
            assert_eq!(pair(&single, a).selected, vec![0]);
        }
        let empty = cbg(0, 0, &[]);
        for a in Algorithm::ALL {
            assert!(pair(&empty, a).is_empty());
        }
    }

    #[test]
    fn mwpm_examples() {
        let c = cbg(2, 2, &[(0, 0, 10), (0, 1, 1), (1, 0, 1)]);
        let p = mwpm(&c);
        assert_eq!(pairs(&c, &p), vec![(1, 2), (2, 1)]);
        assert_eq!(p.total_score, 2.0);

        let c = cbg(2, 2, &[(0, 0, 4), (0, 1, 3), (1, 0, 3), (1, 1, 1)]);
        let p = mwpm(&c);
        assert_eq!(pairs(&c, &p), vec![(1, 2), (2, 1)]);
        assert_eq!(p.total_score, 6.0);
    }

    #[test]
    fn mwrm_and_mwmt_examples() {
        let c = cbg(2, 2, &[(0, 0, 5), (0, 1, 5), (1, 0, 2)]);
        let r = mwrm(&c);
        assert_eq!(pairs(&c, &r), vec![(1, 1), (1, 2)]);
        assert_eq!(r.total_score, 10.0);

        let t = mwmt(&c);
        assert_eq!(pairs(&c, &t), vec![(1, 1), (1, 2), (2, 1)]);
        assert_eq!(t.total_score, 12.0);

        let no_ties = cbg(2, 2, &[(0, 0, 5), (1, 1, 3)]);
        assert_eq!(mwmt(&no_ties).selected, mwm(&no_ties).selected);
    }

    #[test]
    fn oracle_bounds() {
        let big = cbg(9, 8, &[(0, 0, 1)]);
        assert!(matches!(
            brute_force_pairing_oracle(&big, OracleMode::MaxWeight),
            Err(Error::TooLarge { nodes: 17, .. })
        ));
        let empty = cbg(0, 0, &[]);
        assert!(brute_force_pairing_oracle(&empty, OracleMode::MaxWeight)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn parse_names() {
        assert_eq!("MWRM".parse::<Algorithm>().unwrap(), Algorithm::Mwrm);
        assert!("foo".parse::<Algorithm>().is_err());
    }
}
