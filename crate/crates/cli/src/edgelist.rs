//! Whitespace-separated multiplex edge lists.
//!
//! One edge per line: `layer node_a node_b [weight]`. Lines starting with `#`
//! and blank lines are skipped. Layer and node ids are arbitrary strings,
//! numbered in order of first appearance unless a node list pins the order.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use mplx_core::{LayerGraph, MultiplexNetwork};

#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub network: MultiplexNetwork,
    pub node_names: Vec<String>,
    /// Set when at least one line carried a weight column.
    pub had_weights: bool,
}

#[derive(Default)]
struct Interner {
    ids: HashMap<String, usize>,
    names: Vec<String>,
}

impl Interner {
    fn get_or_insert(&mut self, name: &str) -> usize {
        if let Some(&i) = self.ids.get(name) {
            return i;
        }
        let i = self.names.len();
        self.ids.insert(name.to_string(), i);
        self.names.push(name.to_string());
        i
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// One node id per line; fixes node numbering and admits isolated nodes.
pub fn parse_node_list(text: &str) -> Result<Vec<String>> {
    let mut seen = HashMap::new();
    let mut names = Vec::new();
    for (line, l) in content_lines(text) {
        let mut tokens = l.split_whitespace();
        let name = tokens.next().expect("nonempty line");
        if tokens.next().is_some() {
            bail!("node list line {line}: expected a single node id");
        }
        if seen.insert(name.to_string(), line).is_some() {
            bail!("node list line {line}: duplicate node `{name}`");
        }
        names.push(name.to_string());
    }
    Ok(names)
}

pub fn parse_edge_list(text: &str, node_list: Option<&[String]>) -> Result<Loaded> {
    let mut nodes = Interner::default();
    let pinned = node_list.is_some();
    if let Some(list) = node_list {
        for name in list {
            nodes.get_or_insert(name);
        }
    }
    let mut layers = Interner::default();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut had_weights = false;
    for (line, l) in content_lines(text) {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        if !(3..=4).contains(&tokens.len()) {
            bail!("line {line}: expected `layer node_a node_b [weight]`, found {} fields", tokens.len());
        }
        if let Some(w) = tokens.get(3) {
            w.parse::<f64>()
                .with_context(|| format!("line {line}: weight `{w}` is not a number"))?;
            had_weights = true;
        }
        if tokens[1] == tokens[2] {
            bail!("line {line}: self-loop on node `{}`", tokens[1]);
        }
        let mut node = |name: &str| -> Result<usize> {
            if pinned && !nodes.ids.contains_key(name) {
                bail!("line {line}: node `{name}` is missing from the node list");
            }
            Ok(nodes.get_or_insert(name))
        };
        let (u, v) = (node(tokens[1])?, node(tokens[2])?);
        edges.push((layers.get_or_insert(tokens[0]), u, v));
    }
    if layers.names.is_empty() {
        bail!("edge list contains no edges");
    }
    let n = nodes.names.len();
    let mut per_layer = vec![Vec::new(); layers.names.len()];
    for (l, u, v) in edges {
        per_layer[l].push((u, v));
    }
    let graphs = per_layer
        .into_iter()
        .map(|es| LayerGraph::from_edges(n, es))
        .collect::<mplx_core::Result<Vec<_>>>()?;
    let network = MultiplexNetwork::new(graphs)?.with_names(layers.names)?;
    Ok(Loaded {
        network,
        node_names: nodes.names,
        had_weights,
    })
}

/// Read an edge list (and optional node list) from disk, warning once on
/// stderr if weights were dropped.
pub fn load(path: &Path, node_list: Option<&Path>) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let list = node_list
        .map(|p| {
            let t = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            parse_node_list(&t)
        })
        .transpose()?;
    let loaded = parse_edge_list(&text, list.as_deref()).with_context(|| format!("in {}", path.display()))?;
    if loaded.had_weights {
        eprintln!("warning: edge weights in {} are ignored", path.display());
    }
    Ok(loaded)
}

/// Edge list sorted by layer, then pair.
pub fn emit_edge_list(net: &MultiplexNetwork, node_names: &[String]) -> String {
    let mut out = String::new();
    for (i, layer) in net.layers().iter().enumerate() {
        for (u, v) in layer.edges() {
            writeln!(out, "{} {} {}", net.names()[i], node_names[u], node_names[v]).expect("write to string");
        }
    }
    out
}

pub fn emit_node_list(node_names: &[String]) -> String {
    node_names.iter().map(|n| format!("{n}\n")).collect()
}

pub fn default_node_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use mplx_core::synth::{generate_with_p, SynthSpec};

    #[test]
    fn first_appearance_order() {
        let text = "# airports\nAF JFK LAX\nAF LAX ORD 3.5\n\nUA ORD JFK\n";
        let l = parse_edge_list(text, None).unwrap();
        assert_eq!(l.node_names, vec!["JFK", "LAX", "ORD"]);
        assert_eq!(l.network.names(), &["AF".to_string(), "UA".to_string()]);
        assert_eq!(l.network.edge_counts(), vec![2, 1]);
        assert!(l.network.layer(1).has_edge(0, 2));
        assert!(l.had_weights);
    }

    #[test]
    fn duplicates_collapse() {
        let l = parse_edge_list("1 a b\n1 b a\n1 a b 2\n", None).unwrap();
        assert_eq!(l.network.edge_counts(), vec![1]);
    }

    #[test]
    fn errors_name_the_line() {
        let err = |t: &str| format!("{:#}", parse_edge_list(t, None).unwrap_err());
        assert!(err("1 a b\n1 a\n").contains("line 2"));
        assert!(err("1 a b\n# c\n1 x x\n").contains("line 3"));
        assert!(err("1 a b w\n").contains("line 1"));
        assert!(err("1 a b 1 2\n").contains("line 1"));
        assert!(err("# nothing\n").contains("no edges"));
    }

    #[test]
    fn node_list_pins_order_and_isolates() {
        let list = parse_node_list("z\ny\nx\nlonely\n").unwrap();
        let l = parse_edge_list("1 x y\n", Some(&list)).unwrap();
        assert_eq!(l.network.node_count(), 4);
        assert!(l.network.layer(0).has_edge(1, 2));
        let e = parse_edge_list("1 x q\n", Some(&list)).unwrap_err();
        assert!(format!("{e:#}").contains("node list"));
        assert!(parse_node_list("a\na\n").is_err());
    }

    #[test]
    fn round_trip_generated() {
        let spec = SynthSpec {
            n: 40,
            k: 3,
            ..Default::default()
        };
        for seed in 0..5 {
            let net = generate_with_p(&spec, 0.5, seed).unwrap();
            let names = default_node_names(net.node_count());
            let text = emit_edge_list(&net, &names);
            let list = parse_node_list(&emit_node_list(&names)).unwrap();
            assert_eq!(parse_edge_list(&text, Some(&list)).unwrap().network, net);
        }
    }
}
