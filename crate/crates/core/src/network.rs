//! Multiplex graph representation, pair indexing and property matrices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::Scalar;

/// Dense node index in `0..n`, shared by every layer.
pub type NodeId = usize;

/// Bijection between unordered node pairs `{u, v}` (u != v) and `0..n(n-1)/2`.
///
/// Pairs are stored as `(min, max)` and laid out row-major over the strict
/// upper triangle: `(0,1), (0,2), .., (0,n-1), (1,2), ..`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairIndex {
    n: usize,
}

impl PairIndex {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of unordered pairs.
    pub fn len(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn row_start(&self, a: usize) -> usize {
        a * (2 * self.n - a - 1) / 2
    }

    pub fn index(&self, u: NodeId, v: NodeId) -> Result<usize> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        for node in [u, v] {
            if node >= self.n {
                return Err(Error::NodeOutOfRange { node, n: self.n });
            }
        }
        Ok(self.index_unchecked(u, v))
    }

    /// Caller guarantees `u != v` and both are in range.
    #[inline]
    pub fn index_unchecked(&self, u: NodeId, v: NodeId) -> usize {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.row_start(a) + (b - a - 1)
    }

    pub fn pair(&self, index: usize) -> Result<(NodeId, NodeId)> {
        if index >= self.len() {
            return Err(Error::PairOutOfRange { index, n: self.n });
        }
        Ok(self.pair_unchecked(index))
    }

    pub fn pair_unchecked(&self, index: usize) -> (NodeId, NodeId) {
        // Invert row_start(a) <= index with a float estimate, then correct.
        let b = (2 * self.n - 1) as f64;
        let est = ((b - (b * b - 8.0 * index as f64).max(0.0).sqrt()) / 2.0).floor();
        let mut a = (est.max(0.0) as usize).min(self.n.saturating_sub(2));
        while a > 0 && self.row_start(a) > index {
            a -= 1;
        }
        while a + 1 < self.n - 1 && self.row_start(a + 1) <= index {
            a += 1;
        }
        (a, a + 1 + index - self.row_start(a))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, (NodeId, NodeId))> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
            .enumerate()
    }
}

pub fn pair_to_index(u: NodeId, v: NodeId, n: usize) -> Result<usize> {
    PairIndex::new(n).index(u, v)
}

pub fn index_to_pair(j: usize, n: usize) -> Result<(NodeId, NodeId)> {
    PairIndex::new(n).pair(j)
}

/// One undirected simple graph over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerGraph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl LayerGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Duplicate edges collapse; self-loops and out-of-range ids are errors.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut sets = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            check_edge(u, v, n)?;
            sets[u].insert(v);
            sets[v].insert(u);
        }
        Ok(Self::from_sets(sets))
    }

    fn from_sets(sets: Vec<BTreeSet<NodeId>>) -> Self {
        let adjacency: Vec<Vec<NodeId>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Self {
            adjacency,
            edge_count,
        }
    }

    /// Builds a layer from a boolean indicator over pair indices.
    pub fn from_indicator(n: usize, indicator: &[bool]) -> Self {
        let pairs = PairIndex::new(n);
        debug_assert_eq!(indicator.len(), pairs.len());
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (j, (u, v)) in pairs.iter() {
            if indicator[j] {
                adjacency[u].push(v);
                adjacency[v].push(u);
                edge_count += 1;
            }
        }
        // u-major iteration keeps both endpoint lists sorted.
        Self {
            adjacency,
            edge_count,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u != v && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in pair-index order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_indicator(&self) -> Vec<bool> {
        let pairs = PairIndex::new(self.node_count());
        let mut out = vec![false; pairs.len()];
        for (u, v) in self.edges() {
            out[pairs.index_unchecked(u, v)] = true;
        }
        out
    }

    /// Copy of this layer with the given edges removed. Absent edges are ignored.
    pub fn without_edges(&self, removed: &[(NodeId, NodeId)]) -> Self {
        let mut sets: Vec<BTreeSet<NodeId>> = self
            .adjacency
            .iter()
            .map(|ns| ns.iter().copied().collect())
            .collect();
        for &(u, v) in removed {
            sets[u].remove(&v);
            sets[v].remove(&u);
        }
        Self::from_sets(sets)
    }

    /// Copy of this layer with extra edges inserted.
    pub fn with_edges(&self, added: &[(NodeId, NodeId)]) -> Result<Self> {
        let n = self.node_count();
        Self::from_edges(n, self.edges().chain(added.iter().copied()))
    }
}

fn check_edge(u: NodeId, v: NodeId, n: usize) -> Result<()> {
    for node in [u, v] {
        if node >= n {
            return Err(Error::NodeOutOfRange { node, n });
        }
    }
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    Ok(())
}

/// Ordered layers over one shared node set. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplexNetwork {
    n: usize,
    layers: Vec<LayerGraph>,
    names: Vec<String>,
}

impl MultiplexNetwork {
    /// Layers are named `1..=k` unless renamed with [`Self::with_names`].
    pub fn new(layers: Vec<LayerGraph>) -> Result<Self> {
        let Some(first) = layers.first() else {
            return Err(Error::InvalidParameter("a multiplex network needs at least one layer".into()));
        };
        let n = first.node_count();
        if let Some(bad) = layers.iter().find(|l| l.node_count() != n) {
            return Err(Error::InvalidParameter(format!(
                "layers disagree on node count ({} vs {})",
                n,
                bad.node_count()
            )));
        }
        let names = (1..=layers.len()).map(|i| i.to_string()).collect();
        Ok(Self { n, layers, names })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.layers.len() {
            return Err(Error::LengthMismatch(names.len(), self.layers.len()));
        }
        self.names = names;
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, i: usize) -> &LayerGraph {
        &self.layers[i]
    }

    pub fn layers(&self) -> &[LayerGraph] {
        &self.layers
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn pairs(&self) -> PairIndex {
        PairIndex::new(self.n)
    }

    pub fn edge_counts(&self) -> Vec<usize> {
        self.layers.iter().map(LayerGraph::edge_count).collect()
    }

    pub fn check_layer(&self, layer: usize) -> Result<()> {
        if layer >= self.layers.len() {
            return Err(Error::LayerOutOfRange {
                layer,
                k: self.layers.len(),
            });
        }
        Ok(())
    }

    /// Replace layers, keeping names and node count.
    pub fn map_layers<F>(&self, mut f: F) -> Self
    where
        F: FnMut(usize, &LayerGraph) -> LayerGraph,
    {
        let layers: Vec<LayerGraph> = self.layers.iter().enumerate().map(|(i, l)| f(i, l)).collect();
        debug_assert!(layers.iter().all(|l| l.node_count() == self.n));
        Self {
            n: self.n,
            layers,
            names: self.names.clone(),
        }
    }
}

/// Build a network from `(layer, u, v)` triples.
pub fn build_network<I>(edges: I, n: usize, k: usize) -> Result<MultiplexNetwork>
where
    I: IntoIterator<Item = (usize, NodeId, NodeId)>,
{
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut sets = vec![vec![BTreeSet::new(); n]; k];
    for (layer, u, v) in edges {
        if layer >= k {
            return Err(Error::LayerOutOfRange { layer, k });
        }
        check_edge(u, v, n)?;
        sets[layer][u].insert(v);
        sets[layer][v].insert(u);
    }
    MultiplexNetwork::new(sets.into_iter().map(LayerGraph::from_sets).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropertyKind {
    /// One column per node pair, entries 0/1.
    Edge,
    /// One column per node, entries are degrees.
    Degree,
}

/// `k x x` matrix of per-layer property vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyMatrix {
    kind: PropertyKind,
    rows: Vec<Vec<u32>>,
}

impl PropertyMatrix {
    pub fn edges(net: &MultiplexNetwork) -> Self {
        let rows = net
            .layers()
            .iter()
            .map(|l| l.edge_indicator().into_iter().map(u32::from).collect())
            .collect();
        Self {
            kind: PropertyKind::Edge,
            rows,
        }
    }

    pub fn degrees(net: &MultiplexNetwork) -> Self {
        let rows = net
            .layers()
            .iter()
            .map(|l| (0..l.node_count()).map(|v| l.degree(v) as u32).collect())
            .collect();
        Self {
            kind: PropertyKind::Degree,
            rows,
        }
    }

    pub fn of_kind(net: &MultiplexNetwork, kind: PropertyKind) -> Self {
        match kind {
            PropertyKind::Edge => Self::edges(net),
            PropertyKind::Degree => Self::degrees(net),
        }
    }

    /// Wrap raw rows. Rows must share one length.
    pub fn from_rows(kind: PropertyKind, rows: Vec<Vec<u32>>) -> Result<Self> {
        if let Some(first) = rows.first() {
            if let Some(bad) = rows.iter().find(|r| r.len() != first.len()) {
                return Err(Error::LengthMismatch(first.len(), bad.len()));
            }
        }
        Ok(Self { kind, rows })
    }

    pub fn kind(&self) -> PropertyKind {
        self.kind
    }

    pub fn layer_count(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    pub fn get(&self, layer: usize, column: usize) -> u32 {
        self.rows[layer][column]
    }

    pub fn row_as<T: Scalar>(&self, i: usize) -> Vec<T> {
        self.rows[i].iter().map(|&x| T::from_count(x as usize)).collect()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.rows[i].iter().map(|&x| u64::from(x)).sum()
    }
}

pub fn edge_property_matrix(net: &MultiplexNetwork) -> PropertyMatrix {
    PropertyMatrix::edges(net)
}

pub fn degree_property_matrix(net: &MultiplexNetwork) -> PropertyMatrix {
    PropertyMatrix::degrees(net)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn example_shape() {
        let net = example();
        assert_eq!(net.layer_count(), 3);
        assert_eq!(net.node_count(), 9);
        assert_eq!(net.edge_counts(), vec![10, 8, 8]);
    }

    #[test]
    fn empty_network() {
        let net = build_network(std::iter::empty(), 5, 2).unwrap();
        assert_eq!(net.edge_counts(), vec![0, 0]);
        let deg = degree_property_matrix(&net);
        assert!((0..2).all(|i| deg.row(i).iter().all(|&d| d == 0)));
        assert!(edge_property_matrix(&net).row(0).iter().all(|&e| e == 0));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let net = build_network([(0, 1, 2), (0, 2, 1), (0, 1, 2)], 3, 1).unwrap();
        assert_eq!(net.layer(0).edge_count(), 1);
    }

    #[test]
    fn bad_input_rejected() {
        assert_eq!(build_network([(0, 1, 1)], 3, 1), Err(Error::SelfLoop(1)));
        assert_eq!(
            build_network([(0, 1, 3)], 3, 1),
            Err(Error::NodeOutOfRange { node: 3, n: 3 })
        );
        assert_eq!(
            build_network([(2, 0, 1)], 3, 2),
            Err(Error::LayerOutOfRange { layer: 2, k: 2 })
        );
        assert!(build_network(std::iter::empty(), 3, 0).is_err());
    }

    #[test]
    fn pair_index_n9() {
        let pi = PairIndex::new(9);
        assert_eq!(pi.len(), 36);
        let mut seen = std::collections::HashSet::new();
        for u in 0..9 {
            for v in u + 1..9 {
                assert!(seen.insert(pi.index(u, v).unwrap()));
            }
        }
        assert_eq!(seen.len(), 36);
        assert!(seen.iter().all(|&j| j < 36));
        for j in 0..36 {
            let (u, v) = pi.pair(j).unwrap();
            assert!(u < v);
            assert_eq!(pi.index(u, v).unwrap(), j);
        }
        assert_eq!(pi.index(0, 1), pi.index(1, 0));
        assert_eq!(pi.index(2, 2), Err(Error::SelfLoop(2)));
        assert!(pi.pair(36).is_err());
        assert_eq!(pair_to_index(0, 1, 9), Ok(0));
        assert_eq!(index_to_pair(35, 9), Ok((7, 8)));
    }

    #[test]
    fn iter_matches_index() {
        let pi = PairIndex::new(7);
        for (j, (u, v)) in pi.iter() {
            assert_eq!(pi.index_unchecked(u, v), j);
        }
    }

    #[test]
    fn example_edge_property_matrix() {
        let net = example();
        let pm = edge_property_matrix(&net);
        let pi = net.pairs();
        let cols = [pi.index(X, Y).unwrap(), pi.index(X, U).unwrap(), pi.index(X, V).unwrap()];
        let got: Vec<Vec<u32>> = (0..3).map(|i| cols.iter().map(|&c| pm.get(i, c)).collect()).collect();
        assert_eq!(got, vec![vec![1, 1, 1], vec![1, 1, 0], vec![1, 0, 0]]);
        assert_eq!(pm.width(), 36);
        assert_eq!((0..3).map(|i| pm.row_sum(i)).collect::<Vec<_>>(), vec![10, 8, 8]);
    }

    #[test]
    fn example_degrees() {
        let net = example();
        let pm = degree_property_matrix(&net);
        assert_eq!(pm.get(1, U), 3);
        assert_eq!(pm.width(), 9);
        for i in 0..3 {
            assert_eq!(pm.row_sum(i), 2 * net.layer(i).edge_count() as u64);
        }
    }

    #[test]
    fn indicator_round_trip() {
        let net = example();
        for layer in net.layers() {
            let back = LayerGraph::from_indicator(9, &layer.edge_indicator());
            assert_eq!(&back, layer);
        }
    }

    fn arb_edges(n: usize) -> impl Strategy<Value = Vec<(usize, usize, usize)>> {
        prop::collection::vec((0..3usize, 0..n, 0..n), 0..80)
            .prop_map(|v| v.into_iter().filter(|&(_, a, b)| a != b).collect())
    }

    proptest! {
        #[test]
        fn pair_index_round_trip(n in 2usize..200, seed in any::<u64>()) {
            let pi = PairIndex::new(n);
            let j = (seed as usize) % pi.len();
            let (u, v) = pi.pair(j).unwrap();
            prop_assert!(u < v && v < n);
            prop_assert_eq!(pi.index(v, u).unwrap(), j);
        }

        #[test]
        fn layer_invariants(edges in arb_edges(12)) {
            let net = build_network(edges, 12, 3).unwrap();
            let epm = edge_property_matrix(&net);
            let dpm = degree_property_matrix(&net);
            let pi = net.pairs();
            for (i, layer) in net.layers().iter().enumerate() {
                let half: usize = (0..12).map(|v| layer.degree(v)).sum::<usize>() / 2;
                prop_assert_eq!(half, layer.edge_count());
                prop_assert_eq!(epm.row_sum(i), layer.edge_count() as u64);
                prop_assert_eq!(dpm.row_sum(i), 2 * layer.edge_count() as u64);
                for (j, (u, v)) in pi.iter() {
                    prop_assert_eq!(layer.has_edge(u, v), layer.has_edge(v, u));
                    prop_assert_eq!(layer.has_edge(u, v), epm.get(i, j) == 1);
                }
                for v in 0..12 {
                    prop_assert!(!layer.has_edge(v, v));
                }
            }
        }
    }
}
