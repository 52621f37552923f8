//! Heterogeneous multilayer networks: typed layers plus inter-layer bipartite
//! edge sets, loading from edge-list files, validation, and the
//! type-independent aggregate graph used as the modularity baseline.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DropCounts, SimpleGraph};
use crate::par::{self, ExecMode};

/// One layer: a simple undirected graph over a single entity type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerGraph {
    pub name: String,
    pub graph: SimpleGraph,
}

impl LayerGraph {
    pub fn new(name: impl Into<String>, graph: SimpleGraph) -> Self {
        LayerGraph {
            name: name.into(),
            graph,
        }
    }

    /// Builds a layer from edge pairs; dropped loops/duplicates are reported.
    pub fn from_edges<S: Into<String>>(
        name: impl Into<String>,
        isolated: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (S, S)>,
    ) -> (Self, DropCounts) {
        let (graph, drops) = SimpleGraph::build(isolated, edges);
        (LayerGraph::new(name, graph), drops)
    }
}

/// Bipartite links between two layers. Each link is `(node in left, node in right)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterLayerEdges {
    pub left: String,
    pub right: String,
    links: Vec<(String, String)>,
}

impl InterLayerEdges {
    /// Links are sorted and deduplicated; the number of duplicates removed is returned.
    pub fn new<S: Into<String>>(
        left: impl Into<String>,
        right: impl Into<String>,
        links: impl IntoIterator<Item = (S, S)>,
    ) -> (Self, usize) {
        let mut links: Vec<(String, String)> =
            links.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        links.sort_unstable();
        let before = links.len();
        links.dedup();
        let dups = before - links.len();
        (
            InterLayerEdges {
                left: left.into(),
                right: right.into(),
                links,
            },
            dups,
        )
    }

    pub fn links(&self) -> &[(String, String)] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    fn flipped(&self) -> InterLayerEdges {
        let mut links: Vec<(String, String)> =
            self.links.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        links.sort_unstable();
        InterLayerEdges {
            left: self.right.clone(),
            right: self.left.clone(),
            links,
        }
    }
}

fn pair_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

/// A problem found by [`MultilayerNetwork::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A node id occurs in more than one layer.
    NodeOverlap {
        node: String,
        first: String,
        second: String,
    },
    /// An inter-layer set references a layer that was never declared.
    UndeclaredLayer { pair: (String, String), layer: String },
    /// An inter-layer set connects a layer with itself.
    SelfPair { layer: String },
    /// A link endpoint is missing from the layer it should belong to.
    DanglingLink {
        left: String,
        right: String,
        link: (String, String),
        missing: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NodeOverlap {
                node,
                first,
                second,
            } => write!(f, "node {node:?} appears in layers {first} and {second}"),
            Violation::UndeclaredLayer { pair, layer } => write!(
                f,
                "inter-layer set {}-{} references undeclared layer {layer}",
                pair.0, pair.1
            ),
            Violation::SelfPair { layer } => {
                write!(f, "inter-layer set connects layer {layer} with itself")
            }
            Violation::DanglingLink {
                left,
                right,
                link,
                missing,
            } => write!(
                f,
                "link ({}, {}) in {left}-{right}: node {missing:?} not found",
                link.0, link.1
            ),
        }
    }
}

/// Layers keyed by name plus inter-layer edge sets keyed by unordered layer pair.
///
/// Construction through [`MultilayerNetwork::add_layer`] and
/// [`MultilayerNetwork::add_interlayer`] is unchecked; call
/// [`MultilayerNetwork::validate`] (or use [`load_mln`], which does) before
/// analysis.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultilayerNetwork {
    layers: BTreeMap<String, LayerGraph>,
    inter: BTreeMap<(String, String), InterLayerEdges>,
    resolved: ResolvedLinks,
}

/// Inter-layer links resolved to node indices, keyed by oriented layer pair.
/// Derived data: ignored by equality, dropped on clone and on every mutation.
type IndexedLinks = Arc<[(usize, usize)]>;

#[derive(Default)]
struct ResolvedLinks(Mutex<HashMap<(String, String), IndexedLinks>>);

impl ResolvedLinks {
    fn clear(&mut self) {
        self.0.get_mut().unwrap_or_else(|e| e.into_inner()).clear();
    }
}

impl Clone for ResolvedLinks {
    fn clone(&self) -> Self {
        ResolvedLinks::default()
    }
}

impl PartialEq for ResolvedLinks {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for ResolvedLinks {}

impl fmt::Debug for ResolvedLinks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ResolvedLinks")
    }
}

impl MultilayerNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_layer(&mut self, layer: LayerGraph) {
        self.resolved.clear();
        self.layers.insert(layer.name.clone(), layer);
    }

    /// Adds links, merging with any set already present for the same pair.
    pub fn add_interlayer(&mut self, edges: InterLayerEdges) {
        self.resolved.clear();
        let key = pair_key(&edges.left, &edges.right);
        match self.inter.get_mut(&key) {
            None => {
                self.inter.insert(key, edges);
            }
            Some(existing) => {
                let incoming = if existing.left == edges.left {
                    edges
                } else {
                    edges.flipped()
                };
                existing.links.extend(incoming.links);
                existing.links.sort_unstable();
                existing.links.dedup();
            }
        }
    }

    pub fn layer(&self, name: &str) -> Option<&LayerGraph> {
        self.layers.get(name)
    }

    pub fn layers(&self) -> impl Iterator<Item = &LayerGraph> {
        self.layers.values()
    }

    pub fn layer_names(&self) -> Vec<&str> {
        self.layers.keys().map(String::as_str).collect()
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn interlayer_sets(&self) -> impl Iterator<Item = &InterLayerEdges> {
        self.inter.values()
    }

    /// Whether an inter-layer set is declared for the pair (in either orientation).
    pub fn has_interlayer(&self, a: &str, b: &str) -> bool {
        self.inter.contains_key(&pair_key(a, b))
    }

    pub fn interlayer(&self, a: &str, b: &str) -> Option<&InterLayerEdges> {
        self.inter.get(&pair_key(a, b))
    }

    /// Links between `a` and `b`, oriented as `(node in a, node in b)`.
    pub fn links_between<'s>(
        &'s self,
        a: &str,
        b: &str,
    ) -> Option<Box<dyn Iterator<Item = (&'s str, &'s str)> + 's>> {
        let set = self.interlayer(a, b)?;
        if set.left == a {
            Some(Box::new(
                set.links.iter().map(|(x, y)| (x.as_str(), y.as_str())),
            ))
        } else {
            Some(Box::new(
                set.links.iter().map(|(x, y)| (y.as_str(), x.as_str())),
            ))
        }
    }

    /// Links between `a` and `b` as `(index in a, index in b)`, sorted; links
    /// with an endpoint missing from its layer are skipped. Resolved once and
    /// cached.
    pub fn resolved_links(&self, a: &str, b: &str) -> Option<Arc<[(usize, usize)]>> {
        let key = (a.to_owned(), b.to_owned());
        if let Some(hit) = self.resolved.0.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Some(hit.clone());
        }
        let (ga, gb) = (&self.layer(a)?.graph, &self.layer(b)?.graph);
        let mut v: Vec<(usize, usize)> = self
            .links_between(a, b)?
            .filter_map(|(x, y)| Some((ga.index_of(x)?, gb.index_of(y)?)))
            .collect();
        v.sort_unstable();
        let v: Arc<[(usize, usize)]> = v.into();
        self.resolved
            .0
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(key, v.clone());
        Some(v)
    }

    /// Checks every structural invariant; an empty report means the network is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();

        let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
        for layer in self.layers.values() {
            for node in layer.graph.nodes() {
                if let Some(first) = owner.insert(node, &layer.name) {
                    report.push(Violation::NodeOverlap {
                        node: node.clone(),
                        first: first.to_owned(),
                        second: layer.name.clone(),
                    });
                }
            }
        }

        for set in self.inter.values() {
            let pair = (set.left.clone(), set.right.clone());
            if set.left == set.right {
                report.push(Violation::SelfPair {
                    layer: set.left.clone(),
                });
                continue;
            }
            let left = self.layers.get(&set.left);
            let right = self.layers.get(&set.right);
            for (name, layer) in [(&set.left, left), (&set.right, right)] {
                if layer.is_none() {
                    report.push(Violation::UndeclaredLayer {
                        pair: pair.clone(),
                        layer: name.clone(),
                    });
                }
            }
            let (Some(left), Some(right)) = (left, right) else {
                continue;
            };
            for (a, b) in &set.links {
                for (node, layer) in [(a, left), (b, right)] {
                    if !layer.graph.contains(node) {
                        report.push(Violation::DanglingLink {
                            left: set.left.clone(),
                            right: set.right.clone(),
                            link: (a.clone(), b.clone()),
                            missing: node.clone(),
                        });
                    }
                }
            }
        }
        report
    }

    pub fn total_nodes(&self) -> usize {
        self.layers.values().map(|l| l.graph.node_count()).sum()
    }

    pub fn total_intra_edges(&self) -> usize {
        self.layers.values().map(|l| l.graph.edge_count()).sum()
    }

    pub fn total_inter_edges(&self) -> usize {
        self.inter.values().map(InterLayerEdges::len).sum()
    }
}

/// The type-independent aggregation: every node and edge of the network in
/// one untyped simple graph.
pub type AggregateGraph = SimpleGraph;

/// Collapses all layers and inter-layer sets into a single graph.
pub fn collapse_type_independent(mln: &MultilayerNetwork) -> AggregateGraph {
    let nodes = mln
        .layers()
        .flat_map(|l| l.graph.nodes().iter().map(String::as_str));
    let intra = mln.layers().flat_map(|l| l.graph.named_edges());
    let inter = mln
        .interlayer_sets()
        .flat_map(|s| s.links().iter().map(|(a, b)| (a.as_str(), b.as_str())));
    let (graph, _) = SimpleGraph::build(nodes, intra.chain(inter));
    graph
}

// ---------------------------------------------------------------------------
// Config and file loading

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub name: String,
    pub edges_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterLayerSpec {
    pub left: String,
    pub right: String,
    pub edges_path: PathBuf,
}

/// TOML network description. Relative paths resolve against the config
/// file's directory.
///
/// ```toml
/// [[layers]]
/// name = "A"
/// edges_path = "actor.txt"
///
/// [[interlayer]]
/// left = "A"
/// right = "D"
/// edges_path = "actor_director.txt"
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlnConfig {
    #[serde(default)]
    pub layers: Vec<LayerSpec>,
    #[serde(default)]
    pub interlayer: Vec<InterLayerSpec>,
}

impl MlnConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_owned(),
            source,
        })?;
        let mut config = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        for l in &mut config.layers {
            l.edges_path = base.join(&l.edges_path);
        }
        for s in &mut config.interlayer {
            s.edges_path = base.join(&s.edges_path);
        }
        Ok(config)
    }
}

/// One parsed line of an edge file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeLine {
    Node(String),
    Edge(String, String),
}

/// Parses edge-list text: `u v` per line, `#` comments, blank lines ignored.
/// A single token declares an isolated node when `allow_isolated` is set.
pub fn parse_edge_text(path: &Path, text: &str, allow_isolated: bool) -> Result<Vec<EdgeLine>> {
    let mut out = Vec::new();
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
        if line.contains("->") || line.contains("<-") {
            return Err(err("directed edges are not supported"));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [a, b] => out.push(EdgeLine::Edge((*a).to_owned(), (*b).to_owned())),
            [a] if allow_isolated => out.push(EdgeLine::Node((*a).to_owned())),
            [_] => return Err(err("expected two node ids")),
            _ => return Err(err("expected two whitespace-separated node ids")),
        }
    }
    Ok(out)
}

fn read_edge_file(path: &Path, allow_isolated: bool) -> Result<Vec<EdgeLine>> {
    let text = fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_owned(),
        source,
    })?;
    parse_edge_text(path, &text, allow_isolated)
}

/// Input lines discarded during loading.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadWarnings {
    /// Per layer.
    pub layer_drops: BTreeMap<String, DropCounts>,
    /// Per inter-layer set, keyed `left-right`.
    pub duplicate_links: BTreeMap<String, usize>,
}

impl LoadWarnings {
    pub fn total(&self) -> usize {
        self.layer_drops.values().map(DropCounts::total).sum::<usize>()
            + self.duplicate_links.values().sum::<usize>()
    }
}

/// Reads every file named by the config and returns a validated network.
pub fn load_mln(config: &MlnConfig) -> Result<(MultilayerNetwork, LoadWarnings)> {
    if config.layers.is_empty() {
        return Err(Error::Config("config declares no layers".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for l in &config.layers {
        if !seen.insert(l.name.as_str()) {
            return Err(Error::Config(format!("layer {} declared twice", l.name)));
        }
    }
    let mut pairs = std::collections::BTreeSet::new();
    for s in &config.interlayer {
        if !pairs.insert(pair_key(&s.left, &s.right)) {
            return Err(Error::Config(format!(
                "inter-layer set {}-{} declared twice",
                s.left, s.right
            )));
        }
    }

    let layer_files = par::map(ExecMode::Parallel, &config.layers, |l| {
        read_edge_file(&l.edges_path, true)
    });
    let inter_files = par::map(ExecMode::Parallel, &config.interlayer, |s| {
        read_edge_file(&s.edges_path, false)
    });

    let mut mln = MultilayerNetwork::new();
    let mut warnings = LoadWarnings::default();
    for (spec, lines) in config.layers.iter().zip(layer_files) {
        let mut isolated = Vec::new();
        let mut edges = Vec::new();
        for line in lines? {
            match line {
                EdgeLine::Node(n) => isolated.push(n),
                EdgeLine::Edge(a, b) => edges.push((a, b)),
            }
        }
        let (layer, drops) = LayerGraph::from_edges(spec.name.clone(), isolated, edges);
        if drops.total() > 0 {
            log::warn!(
                "layer {}: dropped {} self-loops and {} duplicate edges",
                spec.name,
                drops.self_loops,
                drops.duplicates
            );
        }
        warnings.layer_drops.insert(spec.name.clone(), drops);
        mln.add_layer(layer);
    }
    for (spec, lines) in config.interlayer.iter().zip(inter_files) {
        let links = lines?.into_iter().filter_map(|l| match l {
            EdgeLine::Edge(a, b) => Some((a, b)),
            EdgeLine::Node(_) => None,
        });
        let (set, dups) = InterLayerEdges::new(spec.left.clone(), spec.right.clone(), links);
        if dups > 0 {
            log::warn!(
                "inter-layer {}-{}: dropped {dups} duplicate links",
                spec.left,
                spec.right
            );
        }
        warnings
            .duplicate_links
            .insert(format!("{}-{}", spec.left, spec.right), dups);
        mln.add_interlayer(set);
    }

    let report = mln.validate();
    if !report.is_empty() {
        return Err(Error::Validation(report));
    }
    Ok((mln, warnings))
}

/// Reads a config file and loads the network it describes.
pub fn load_mln_from_path(path: &Path) -> Result<(MultilayerNetwork, LoadWarnings)> {
    load_mln(&MlnConfig::read(path)?)
}

/// Writes the network as edge files plus `network.toml` into `dir`, returning
/// the config path.
pub fn dump_mln(mln: &MultilayerNetwork, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut config = MlnConfig::default();
    for layer in mln.layers() {
        let file = format!("layer_{}.txt", layer.name);
        let mut text = format!("# layer {}\n", layer.name);
        for (u, name) in layer.graph.nodes().iter().enumerate() {
            if layer.graph.degree(u) == 0 {
                text.push_str(name);
                text.push('\n');
            }
        }
        for (a, b) in layer.graph.named_edges() {
            text.push_str(a);
            text.push(' ');
            text.push_str(b);
            text.push('\n');
        }
        fs::write(dir.join(&file), text)?;
        config.layers.push(LayerSpec {
            name: layer.name.clone(),
            edges_path: PathBuf::from(file),
        });
    }
    for set in mln.interlayer_sets() {
        let file = format!("inter_{}_{}.txt", set.left, set.right);
        let mut text = format!("# links {} {}\n", set.left, set.right);
        for (a, b) in set.links() {
            text.push_str(a);
            text.push(' ');
            text.push_str(b);
            text.push('\n');
        }
        fs::write(dir.join(&file), text)?;
        config.interlayer.push(InterLayerSpec {
            left: set.left.clone(),
            right: set.right.clone(),
            edges_path: PathBuf::from(file),
        });
    }
    let path = dir.join("network.toml");
    fs::write(&path, config.to_toml())?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layer(name: &str, edges: &[(&str, &str)]) -> LayerGraph {
        LayerGraph::from_edges(name, Vec::<&str>::new(), edges.iter().copied()).0
    }

    fn two_layers() -> MultilayerNetwork {
        let mut mln = MultilayerNetwork::new();
        mln.add_layer(layer("A", &[("a1", "a2"), ("a2", "a3")]));
        mln.add_layer(layer("B", &[("b1", "b2"), ("b2", "b3")]));
        mln.add_interlayer(InterLayerEdges::new("A", "B", [("a1", "b1")]).0);
        mln
    }

    #[test]
    fn valid_network_has_empty_report() {
        assert!(two_layers().validate().is_empty());
    }

    #[test]
    fn dangling_link_reported_once() {
        let mut mln = two_layers();
        mln.add_interlayer(InterLayerEdges::new("A", "B", [("a1", "zz")]).0);
        let report = mln.validate();
        assert_eq!(report.len(), 1);
        assert!(matches!(
            &report[0],
            Violation::DanglingLink { missing, .. } if missing == "zz"
        ));
    }

    #[test]
    fn overlapping_node_ids_reported() {
        let mut mln = two_layers();
        mln.add_layer(layer("C", &[("x", "a1")]));
        let report = mln.validate();
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::NodeOverlap { node, .. } if node == "a1")));
    }

    #[test]
    fn undeclared_layer_and_self_pair() {
        let mut mln = two_layers();
        mln.add_interlayer(InterLayerEdges::new("A", "Q", [("a1", "q")]).0);
        mln.add_interlayer(InterLayerEdges::new("B", "B", [("b1", "b2")]).0);
        let report = mln.validate();
        assert_eq!(report.len(), 2);
    }

    #[test]
    fn links_oriented_on_request() {
        let mln = two_layers();
        let fwd: Vec<_> = mln.links_between("A", "B").unwrap().collect();
        let back: Vec<_> = mln.links_between("B", "A").unwrap().collect();
        assert_eq!(fwd, vec![("a1", "b1")]);
        assert_eq!(back, vec![("b1", "a1")]);
        assert!(mln.links_between("A", "C").is_none());
    }

    #[test]
    fn merge_flipped_interlayer() {
        let mut mln = two_layers();
        mln.add_interlayer(InterLayerEdges::new("B", "A", [("b2", "a2"), ("b1", "a1")]).0);
        let set = mln.interlayer("A", "B").unwrap();
        assert_eq!(set.links(), &[("a1".into(), "b1".into()), ("a2".into(), "b2".into())]);
    }

    #[test]
    fn collapse_counts() {
        let agg = collapse_type_independent(&two_layers());
        assert_eq!(agg.node_count(), 6);
        assert_eq!(agg.edge_count(), 5);
        let empty = collapse_type_independent(&MultilayerNetwork::new());
        assert!(empty.is_empty());
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn parse_rules() {
        let p = Path::new("t.txt");
        let lines = parse_edge_text(p, "# c\n\na b\n  c\td \nsolo\n", true).unwrap();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2], EdgeLine::Node("solo".into()));
        assert!(matches!(
            parse_edge_text(p, "a b\na b c\n", true),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_text(p, "a -> b\n", true),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_edge_text(p, "solo\n", false).is_err());
    }

    #[test]
    fn config_round_trip() {
        let config = MlnConfig {
            layers: vec![LayerSpec {
                name: "A".into(),
                edges_path: "a.txt".into(),
            }],
            interlayer: vec![InterLayerSpec {
                left: "A".into(),
                right: "B".into(),
                edges_path: "ab.txt".into(),
            }],
        };
        let back = MlnConfig::from_toml(&config.to_toml()).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn load_from_files() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("a.txt"), "a b\nb c\nb a\nc c\n").unwrap();
        fs::write(
            dir.path().join("net.toml"),
            "[[layers]]\nname = \"A\"\nedges_path = \"a.txt\"\n",
        )
        .unwrap();
        let (mln, warnings) = load_mln_from_path(&dir.path().join("net.toml")).unwrap();
        let a = mln.layer("A").unwrap();
        assert_eq!(a.graph.node_count(), 3);
        assert_eq!(a.graph.edge_count(), 2);
        assert_eq!(warnings.total(), 2);
        assert!(mln.validate().is_empty());
    }

    #[test]
    fn load_rejects_overlap_and_missing_file() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("a.txt"), "x y\n").unwrap();
        fs::write(dir.path().join("b.txt"), "x z\n").unwrap();
        let config = MlnConfig {
            layers: vec![
                LayerSpec {
                    name: "A".into(),
                    edges_path: dir.path().join("a.txt"),
                },
                LayerSpec {
                    name: "B".into(),
                    edges_path: dir.path().join("b.txt"),
                },
            ],
            interlayer: vec![],
        };
        assert!(matches!(load_mln(&config), Err(Error::Validation(_))));

        let mut missing = config.clone();
        missing.layers[1].edges_path = dir.path().join("nope.txt");
        assert!(matches!(load_mln(&missing), Err(Error::File { .. })));
        assert!(matches!(
            load_mln(&MlnConfig::default()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn dump_then_load_is_identity() {
        let mut mln = two_layers();
        mln.add_layer(LayerGraph::from_edges("C", vec!["lonely"], Vec::<(&str, &str)>::new()).0);
        let dir = tempfile::tempdir().unwrap();
        let path = dump_mln(&mln, dir.path()).unwrap();
        let (back, _) = load_mln_from_path(&path).unwrap();
        assert_eq!(back, mln);
    }
}
