//! Single-layer similarity heuristics and per-layer batch scoring.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::network::{LayerGraph, MultiplexNetwork, NodeId, PairIndex};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HeuristicKind {
    CommonNeighbors,
    Jaccard,
    ResourceAllocation,
    AdamicAdar,
    PreferentialAttachment,
    ClusteringProduct,
    Katz,
    RootedPageRank,
}

impl HeuristicKind {
    pub const ALL: [HeuristicKind; 8] = [
        HeuristicKind::CommonNeighbors,
        HeuristicKind::Jaccard,
        HeuristicKind::ResourceAllocation,
        HeuristicKind::AdamicAdar,
        HeuristicKind::PreferentialAttachment,
        HeuristicKind::ClusteringProduct,
        HeuristicKind::Katz,
        HeuristicKind::RootedPageRank,
    ];

    pub fn abbrev(self) -> &'static str {
        match self {
            HeuristicKind::CommonNeighbors => "CN",
            HeuristicKind::Jaccard => "JC",
            HeuristicKind::ResourceAllocation => "RA",
            HeuristicKind::AdamicAdar => "AA",
            HeuristicKind::PreferentialAttachment => "PA",
            HeuristicKind::ClusteringProduct => "PCC",
            HeuristicKind::Katz => "KS",
            HeuristicKind::RootedPageRank => "RPR",
        }
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbrev())
    }
}

impl FromStr for HeuristicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        HeuristicKind::ALL
            .into_iter()
            .find(|h| h.abbrev().eq_ignore_ascii_case(&lower))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown monoplex heuristic `{s}`")))
    }
}

/// Tuning knobs for the path-based heuristics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicParams<T> {
    /// Katz damping per walk step.
    pub beta: T,
    /// Longest walk counted by Katz.
    pub max_walk_len: usize,
    /// Rooted PageRank probability of continuing the walk.
    pub alpha: T,
    /// L1 convergence tolerance for rooted PageRank.
    pub rpr_tol: T,
    pub rpr_max_iter: usize,
}

impl<T: Scalar> Default for HeuristicParams<T> {
    fn default() -> Self {
        Self {
            beta: T::lit(0.05),
            max_walk_len: 5,
            alpha: T::lit(0.85),
            rpr_tol: T::lit(1e-8),
            rpr_max_iter: 10_000,
        }
    }
}

impl<T: Scalar> HeuristicParams<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |x: T| x > T::zero() && x < T::one();
        if !unit(self.beta) {
            return Err(Error::InvalidParameter(format!("beta must lie in (0,1), got {}", self.beta)));
        }
        if self.max_walk_len < 2 {
            return Err(Error::InvalidParameter("max_walk_len must be at least 2".into()));
        }
        if !unit(self.alpha) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0,1), got {}", self.alpha)));
        }
        if !(self.rpr_tol > T::zero()) {
            return Err(Error::InvalidParameter("rpr_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonoplexHeuristic<T> {
    pub kind: HeuristicKind,
    pub params: HeuristicParams<T>,
}

impl<T: Scalar> MonoplexHeuristic<T> {
    pub fn new(kind: HeuristicKind) -> Self {
        Self {
            kind,
            params: HeuristicParams::default(),
        }
    }

    pub fn with_params(kind: HeuristicKind, params: HeuristicParams<T>) -> Self {
        Self { kind, params }
    }
}

fn common_count(a: &[NodeId], b: &[NodeId]) -> usize {
    common_neighbors(a, b).count()
}

/// Merge-walk over two sorted neighbor lists.
fn common_neighbors<'a>(a: &'a [NodeId], b: &'a [NodeId]) -> impl Iterator<Item = NodeId> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let z = a[i];
                    i += 1;
                    j += 1;
                    return Some(z);
                }
            }
        }
        None
    })
}

pub fn cn(layer: &LayerGraph, u: NodeId, v: NodeId) -> usize {
    common_count(layer.neighbors(u), layer.neighbors(v))
}

/// Jaccard coefficient; 0 when both neighborhoods are empty.
pub fn jc<T: Scalar>(layer: &LayerGraph, u: NodeId, v: NodeId) -> T {
    let inter = cn(layer, u, v);
    let union = layer.degree(u) + layer.degree(v) - inter;
    if union == 0 {
        T::zero()
    } else {
        T::from_count(inter) / T::from_count(union)
    }
}

pub fn ra<T: Scalar>(layer: &LayerGraph, u: NodeId, v: NodeId) -> T {
    common_neighbors(layer.neighbors(u), layer.neighbors(v))
        .map(|z| T::one() / T::from_count(layer.degree(z)))
        .fold(T::zero(), |acc, x| acc + x)
}

/// Adamic-Adar with natural log. Common neighbors of degree 1 are skipped
/// (log 1 = 0); they cannot occur in a simple graph.
pub fn aa<T: Scalar>(layer: &LayerGraph, u: NodeId, v: NodeId) -> T {
    common_neighbors(layer.neighbors(u), layer.neighbors(v))
        .filter(|&z| layer.degree(z) > 1)
        .map(|z| T::one() / T::from_count(layer.degree(z)).ln())
        .fold(T::zero(), |acc, x| acc + x)
}

pub fn pa(layer: &LayerGraph, u: NodeId, v: NodeId) -> usize {
    layer.degree(u) * layer.degree(v)
}

/// Local clustering coefficient; 0 below degree 2.
pub fn clustering_coefficient<T: Scalar>(layer: &LayerGraph, w: NodeId) -> T {
    let ns = layer.neighbors(w);
    let d = ns.len();
    if d < 2 {
        return T::zero();
    }
    // each neighbor-neighbor edge is seen from both ends
    let twice_links: usize = ns.iter().map(|&a| common_count(layer.neighbors(a), ns)).sum();
    T::from_count(twice_links) / T::from_count(d * (d - 1))
}

pub fn pcc<T: Scalar>(layer: &LayerGraph, u: NodeId, v: NodeId) -> T {
    clustering_coefficient::<T>(layer, u) * clustering_coefficient::<T>(layer, v)
}

/// `sum_{L=1..max_walk_len} beta^L * walks_L(root, .)` for every target node.
pub fn katz_vector<T: Scalar>(layer: &LayerGraph, root: NodeId, beta: T, max_walk_len: usize) -> Vec<T> {
    let n = layer.node_count();
    let mut walks = vec![T::zero(); n];
    walks[root] = T::one();
    let mut acc = vec![T::zero(); n];
    let mut next = vec![T::zero(); n];
    let mut weight = T::one();
    for _ in 0..max_walk_len {
        for (x, slot) in next.iter_mut().enumerate() {
            *slot = layer
                .neighbors(x)
                .iter()
                .fold(T::zero(), |s, &y| s + walks[y]);
        }
        std::mem::swap(&mut walks, &mut next);
        weight = weight * beta;
        for (a, &w) in acc.iter_mut().zip(&walks) {
            *a = *a + weight * w;
        }
    }
    acc
}

/// Truncated Katz index counting walks (not simple paths).
pub fn katz<T: Scalar>(layer: &LayerGraph, u: NodeId, v: NodeId, beta: T, max_walk_len: usize) -> T {
    katz_vector(layer, u, beta, max_walk_len)[v]
}

/// Stationary distribution of the walk restarting at `root` with probability
/// `1 - alpha`. Walkers on isolated nodes restart at the root.
pub fn rooted_pagerank_vector<T: Scalar>(
    layer: &LayerGraph,
    root: NodeId,
    alpha: T,
    tol: T,
    max_iter: usize,
) -> Result<Vec<T>> {
    let n = layer.node_count();
    let restart = T::one() - alpha;
    let mut x = vec![T::zero(); n];
    x[root] = T::one();
    let mut next = vec![T::zero(); n];
    let mut residual = T::infinity();
    for _ in 0..max_iter {
        next.iter_mut().for_each(|s| *s = T::zero());
        let mut dangling = T::zero();
        for (v, &mass) in x.iter().enumerate() {
            if mass == T::zero() {
                continue;
            }
            let ns = layer.neighbors(v);
            if ns.is_empty() {
                dangling = dangling + mass;
                continue;
            }
            let share = alpha * mass / T::from_count(ns.len());
            for &w in ns {
                next[w] = next[w] + share;
            }
        }
        next[root] = next[root] + restart + alpha * dangling;
        residual = x
            .iter()
            .zip(&next)
            .fold(T::zero(), |s, (&a, &b)| s + (a - b).abs());
        std::mem::swap(&mut x, &mut next);
        if residual < tol {
            return Ok(x);
        }
    }
    Err(Error::IterationLimit {
        iterations: max_iter,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// `[pi_u]_v + [pi_v]_u`.
pub fn rooted_pagerank<T: Scalar>(
    layer: &LayerGraph,
    u: NodeId,
    v: NodeId,
    alpha: T,
    tol: T,
    max_iter: usize,
) -> Result<T> {
    let pu = rooted_pagerank_vector(layer, u, alpha, tol, max_iter)?;
    let pv = rooted_pagerank_vector(layer, v, alpha, tol, max_iter)?;
    Ok(pu[v] + pv[u])
}

/// Score a single pair with any heuristic.
pub fn score_pair<T: Scalar>(
    layer: &LayerGraph,
    heuristic: &MonoplexHeuristic<T>,
    u: NodeId,
    v: NodeId,
) -> Result<T> {
    let p = &heuristic.params;
    Ok(match heuristic.kind {
        HeuristicKind::CommonNeighbors => T::from_count(cn(layer, u, v)),
        HeuristicKind::Jaccard => jc(layer, u, v),
        HeuristicKind::ResourceAllocation => ra(layer, u, v),
        HeuristicKind::AdamicAdar => aa(layer, u, v),
        HeuristicKind::PreferentialAttachment => T::from_count(pa(layer, u, v)),
        HeuristicKind::ClusteringProduct => pcc(layer, u, v),
        HeuristicKind::Katz => katz(layer, u, v, p.beta, p.max_walk_len),
        HeuristicKind::RootedPageRank => {
            rooted_pagerank(layer, u, v, p.alpha, p.rpr_tol, p.rpr_max_iter)?
        }
    })
}

/// Raw and min-max normalized scores for a set of candidate pairs in one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable<T> {
    layer: usize,
    pairs: Vec<usize>,
    raw: Vec<T>,
    normalized: Vec<T>,
}

impl<T: Scalar> ScoreTable<T> {
    /// Sorts by pair index; normalization is min-max over the given entries and
    /// maps a constant score set to all zeros.
    pub fn from_raw(layer: usize, mut entries: Vec<(usize, T)>) -> Self {
        entries.sort_by_key(|&(p, _)| p);
        entries.dedup_by_key(|&mut (p, _)| p);
        let (pairs, raw): (Vec<usize>, Vec<T>) = entries.into_iter().unzip();
        let normalized = min_max(&raw);
        Self {
            layer,
            pairs,
            raw,
            normalized,
        }
    }

    pub fn layer(&self) -> usize {
        self.layer
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Candidate pair indices, ascending.
    pub fn pairs(&self) -> &[usize] {
        &self.pairs
    }

    pub fn raw_scores(&self) -> &[T] {
        &self.raw
    }

    pub fn normalized_scores(&self) -> &[T] {
        &self.normalized
    }

    fn position(&self, pair: usize) -> Option<usize> {
        self.pairs.binary_search(&pair).ok()
    }

    pub fn raw(&self, pair: usize) -> Option<T> {
        self.position(pair).map(|i| self.raw[i])
    }

    pub fn normalized(&self, pair: usize) -> Option<T> {
        self.position(pair).map(|i| self.normalized[i])
    }

    /// `(pair, raw, normalized)` in ascending pair order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, T, T)> + '_ {
        self.pairs
            .iter()
            .zip(&self.raw)
            .zip(&self.normalized)
            .map(|((&p, &r), &z)| (p, r, z))
    }
}

fn min_max<T: Scalar>(raw: &[T]) -> Vec<T> {
    let Some(&first) = raw.first() else {
        return Vec::new();
    };
    let (lo, hi) = raw
        .iter()
        .fold((first, first), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let span = hi - lo;
    if !(span > T::zero()) || !span.is_finite() {
        return vec![T::zero(); raw.len()];
    }
    raw.iter()
        .map(|&x| ((x - lo) / span).max(T::zero()).min(T::one()))
        .collect()
}

/// Score every candidate pair of one layer.
///
/// Katz and rooted PageRank vectors are computed once per root node and
/// shared across the candidates that need them.
pub fn score_layer<T: Scalar>(
    net: &MultiplexNetwork,
    layer: usize,
    heuristic: &MonoplexHeuristic<T>,
    candidates: &[usize],
) -> Result<ScoreTable<T>> {
    net.check_layer(layer)?;
    let graph = net.layer(layer);
    let pairs = net.pairs();
    if let Some(&bad) = candidates.iter().find(|&&j| j >= pairs.len()) {
        return Err(Error::PairOutOfRange {
            index: bad,
            n: net.node_count(),
        });
    }
    let raw = score_pairs(graph, pairs, heuristic, candidates)?;
    Ok(ScoreTable::from_raw(layer, candidates.iter().copied().zip(raw).collect()))
}

fn score_pairs<T: Scalar>(
    graph: &LayerGraph,
    pairs: PairIndex,
    heuristic: &MonoplexHeuristic<T>,
    candidates: &[usize],
) -> Result<Vec<T>> {
    let p = &heuristic.params;
    let n = graph.node_count();
    let endpoints = candidates.iter().map(|&j| pairs.pair_unchecked(j));
    match heuristic.kind {
        HeuristicKind::ClusteringProduct => {
            let cc: Vec<T> = (0..n).map(|w| clustering_coefficient(graph, w)).collect();
            Ok(endpoints.map(|(u, v)| cc[u] * cc[v]).collect())
        }
        HeuristicKind::Katz => {
            // walk counts are symmetric, so the smaller endpoint is enough
            let roots = roots_needed(n, candidates.iter().map(|&j| pairs.pair_unchecked(j).0));
            let vectors: Vec<Option<Vec<T>>> = roots
                .par_iter()
                .enumerate()
                .map(|(r, &need)| need.then(|| katz_vector(graph, r, p.beta, p.max_walk_len)))
                .collect();
            Ok(endpoints
                .map(|(u, v)| vectors[u].as_ref().expect("root computed")[v])
                .collect())
        }
        HeuristicKind::RootedPageRank => {
            let roots = roots_needed(
                n,
                candidates.iter().flat_map(|&j| {
                    let (u, v) = pairs.pair_unchecked(j);
                    [u, v]
                }),
            );
            let vectors: Vec<Option<Vec<T>>> = roots
                .par_iter()
                .enumerate()
                .map(|(r, &need)| {
                    need.then(|| rooted_pagerank_vector(graph, r, p.alpha, p.rpr_tol, p.rpr_max_iter))
                        .transpose()
                })
                .collect::<Result<_>>()?;
            let at = |r: usize, t: usize| vectors[r].as_ref().expect("root computed")[t];
            Ok(endpoints.map(|(u, v)| at(u, v) + at(v, u)).collect())
        }
        _ => endpoints.map(|(u, v)| score_pair(graph, heuristic, u, v)).collect(),
    }
}

fn roots_needed(n: usize, nodes: impl Iterator<Item = NodeId>) -> Vec<bool> {
    let mut need = vec![false; n];
    nodes.for_each(|r| need[r] = true);
    need
}

/// Pair indices of every non-edge in a layer.
pub fn non_edges(net: &MultiplexNetwork, layer: usize) -> Vec<usize> {
    let graph = net.layer(layer);
    net.pairs()
        .iter()
        .filter(|&(_, (u, v))| !graph.has_edge(u, v))
        .map(|(j, _)| j)
        .collect()
}
