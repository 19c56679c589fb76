//! Downsample-and-recover evaluation and supervised feature export.
//!
//! A replicate removes a fixed fraction of every layer's edges, recomputes
//! correlations on what remains, scores every remaining non-edge and predicts
//! as many links as were removed. Accuracy is the fraction of removed edges
//! among the predictions.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use crate::correlation::{layer_correlations, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::monoplex::{non_edges, score_layer, HeuristicKind, HeuristicParams, MonoplexHeuristic, ScoreTable};
use crate::mplx::{score_pairs, CcwhReading, Family, MplxConfig};
use crate::network::{MultiplexNetwork, PropertyKind, PropertyMatrix};
use crate::synth::{calibrate, generate_with_p, rng_for, SynthSpec};
use crate::Scalar;

/// Remove `floor(frac * m)` uniformly chosen edges from every layer.
/// Returns the observed network and the removed pair indices per layer
/// (ascending).
pub fn downsample<R: Rng + ?Sized>(
    net: &MultiplexNetwork,
    frac: f64,
    rng: &mut R,
) -> Result<(MultiplexNetwork, Vec<Vec<usize>>)> {
    if !(frac > 0.0 && frac < 1.0) {
        return Err(Error::InvalidParameter(format!("downsample fraction must lie in (0,1), got {frac}")));
    }
    let pairs = net.pairs();
    let mut removed = Vec::with_capacity(net.layer_count());
    let mut observed = Vec::with_capacity(net.layer_count());
    for layer in net.layers() {
        let edges: Vec<(usize, usize)> = layer.edges().collect();
        let count = (frac * edges.len() as f64).floor() as usize;
        let picked: Vec<(usize, usize)> = sample(rng, edges.len(), count).into_iter().map(|i| edges[i]).collect();
        let mut idx: Vec<usize> = picked.iter().map(|&(u, v)| pairs.index_unchecked(u, v)).collect();
        idx.sort_unstable();
        observed.push(layer.without_edges(&picked));
        removed.push(idx);
    }
    let observed = net.map_layers(|i, _| observed[i].clone());
    Ok((observed, removed))
}

/// Top-x selection from a score table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopX {
    /// Selected pairs in rank order.
    pub pairs: Vec<usize>,
    /// Set when fewer than `x` candidates existed.
    pub truncated: bool,
}

/// Highest raw scores first, ties by ascending pair index.
pub fn predict_topx<T: Scalar>(scores: &ScoreTable<T>, x: usize) -> TopX {
    let mut order: Vec<(usize, T)> = scores.pairs().iter().copied().zip(scores.raw_scores().iter().copied()).collect();
    order.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });
    let truncated = x > order.len();
    order.truncate(x);
    TopX {
        pairs: order.into_iter().map(|(p, _)| p).collect(),
        truncated,
    }
}

/// `|predicted ∩ removed| / |removed|`; `None` when nothing was removed.
pub fn accuracy(predicted: &[usize], removed: &[usize]) -> Option<f64> {
    if removed.is_empty() {
        return None;
    }
    let mut truth = removed.to_vec();
    truth.sort_unstable();
    let hits = predicted.iter().filter(|p| truth.binary_search(p).is_ok()).count();
    Some(hits as f64 / truth.len() as f64)
}

/// A scorer compared in an experiment: a monoplex baseline at the target
/// layer, or a multiplex family over edge (`e`) or degree (`d`) correlations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HeuristicSpec {
    pub family: Option<Family>,
    pub inner: Option<HeuristicKind>,
    pub kind: PropertyKind,
}

impl HeuristicSpec {
    pub fn mono(inner: HeuristicKind) -> Self {
        Self {
            family: None,
            inner: Some(inner),
            kind: PropertyKind::Edge,
        }
    }

    pub fn cwc(kind: PropertyKind) -> Self {
        Self {
            family: Some(Family::Cwc),
            inner: None,
            kind,
        }
    }

    pub fn weighted(family: Family, kind: PropertyKind, inner: HeuristicKind) -> Self {
        Self {
            family: Some(family),
            inner: Some(inner),
            kind,
        }
    }

    fn validate(&self) -> Result<()> {
        match (self.family, self.inner) {
            (None, None) => Err(Error::InvalidParameter("a monoplex baseline needs a heuristic".into())),
            (Some(f), None) if f.needs_inner() => Err(Error::InvalidParameter(format!("{f} needs an inner heuristic"))),
            _ => Ok(()),
        }
    }
}

fn suffix(kind: PropertyKind) -> char {
    match kind {
        PropertyKind::Edge => 'e',
        PropertyKind::Degree => 'd',
    }
}

impl fmt::Display for HeuristicSpec {
    /// `CN`, `CWCe`, `CWHd-RA`, `CCWHe-CN`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.family, self.inner) {
            (None, Some(h)) => write!(f, "{h}"),
            (Some(fam), None) => write!(f, "{fam}{}", suffix(self.kind)),
            (Some(fam), Some(_)) if !fam.needs_inner() => write!(f, "{fam}{}", suffix(self.kind)),
            (Some(fam), Some(h)) => write!(f, "{fam}{}-{h}", suffix(self.kind)),
            (None, None) => f.write_str("?"),
        }
    }
}

impl FromStr for HeuristicSpec {
    type Err = Error;

    /// Accepts `cn`, `cwc-e`, `cwh-d-ra`, `ccwh-e-cn` and the display form
    /// (`CWCe`, `CWHd-RA`), case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown heuristic `{s}`"));
        let lower = s.trim().to_ascii_lowercase();
        let parts: Vec<&str> = lower.split('-').collect();
        let kind_of = |c: &str| match c {
            "e" => Ok(PropertyKind::Edge),
            "d" => Ok(PropertyKind::Degree),
            _ => Err(bad()),
        };
        // split "cwce" into ("cwc", "e")
        let family_kind = |head: &str| -> Result<(Family, PropertyKind)> {
            let (fam, k) = head.split_at(head.len().saturating_sub(1));
            Ok((fam.parse().map_err(|_| bad())?, kind_of(k)?))
        };
        let spec = match parts.as_slice() {
            [name] => match name.parse::<HeuristicKind>() {
                Ok(h) => HeuristicSpec::mono(h),
                Err(_) => {
                    let (fam, kind) = family_kind(name)?;
                    HeuristicSpec {
                        family: Some(fam),
                        inner: None,
                        kind,
                    }
                }
            },
            [fam, k] if fam.parse::<Family>().is_ok() => HeuristicSpec {
                family: Some(fam.parse()?),
                inner: None,
                kind: kind_of(k)?,
            },
            [head, h] => {
                let (fam, kind) = family_kind(head)?;
                HeuristicSpec {
                    family: Some(fam),
                    inner: Some(h.parse().map_err(|_| bad())?),
                    kind,
                }
            }
            [fam, k, h] => HeuristicSpec {
                family: Some(fam.parse().map_err(|_| bad())?),
                inner: Some(h.parse().map_err(|_| bad())?),
                kind: kind_of(k)?,
            },
            _ => return Err(bad()),
        };
        spec.validate().map_err(|_| bad())?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Thresholding {
    #[default]
    Off,
    /// Admit layers whose overlap exceeds mean + num_sd standard deviations.
    NumSd(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub downsample_frac: f64,
    pub reps: usize,
    pub heuristics: Vec<HeuristicSpec>,
    pub thresholding: Thresholding,
    pub seed: u64,
    pub params: HeuristicParams<f64>,
    pub ccwh_reading: CcwhReading,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            downsample_frac: 0.25,
            reps: 10,
            heuristics: vec![
                HeuristicSpec::mono(HeuristicKind::CommonNeighbors),
                HeuristicSpec::cwc(PropertyKind::Edge),
                HeuristicSpec::weighted(Family::Cwh, PropertyKind::Edge, HeuristicKind::CommonNeighbors),
                HeuristicSpec::weighted(Family::Ccwh, PropertyKind::Edge, HeuristicKind::CommonNeighbors),
            ],
            thresholding: Thresholding::Off,
            seed: 0,
            params: HeuristicParams::default(),
            ccwh_reading: CcwhReading::default(),
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.downsample_frac > 0.0 && self.downsample_frac < 1.0) {
            return Err(Error::InvalidParameter("downsample_frac must lie in (0,1)".into()));
        }
        if self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be at least 1".into()));
        }
        if self.heuristics.is_empty() {
            return Err(Error::InvalidParameter("no heuristics to evaluate".into()));
        }
        if let Thresholding::NumSd(sd) = self.thresholding {
            if !(sd >= 0.0) {
                return Err(Error::InvalidParameter("threshold must be nonnegative".into()));
            }
        }
        self.heuristics.iter().try_for_each(HeuristicSpec::validate)?;
        self.params.validate()
    }
}

/// Where replicate networks come from.
#[derive(Debug, Clone)]
pub enum NetworkSource {
    /// Calibrated once; replicate `r` uses seed `spec.seed + r`.
    Synthetic(SynthSpec),
    /// The same network for every replicate; only the downsampling varies.
    Fixed(MultiplexNetwork),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRecord {
    pub heuristic: String,
    pub layer: usize,
    pub replicate: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub heuristic: String,
    /// Mean over replicates of the per-replicate layer average.
    pub mean: f64,
    pub std_error: f64,
    pub replicates: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub layer_names: Vec<String>,
    pub records: Vec<AccuracyRecord>,
    pub aggregates: Vec<Aggregate>,
    /// Copy probability used for synthetic sources.
    pub p_copy: Option<f64>,
}

impl EvalResult {
    pub fn aggregate(&self, heuristic: &str) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| a.heuristic == heuristic)
    }

    /// Mean accuracy of one heuristic on one layer across replicates.
    pub fn layer_mean(&self, heuristic: &str, layer: usize) -> Option<f64> {
        let xs: Vec<f64> = self
            .records
            .iter()
            .filter(|r| r.heuristic == heuristic && r.layer == layer)
            .map(|r| r.accuracy)
            .collect();
        (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
    }

    /// Per-record rows, a blank line, then the per-heuristic summary.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "heuristic,layer,replicate,accuracy")?;
        for r in &self.records {
            let layer = self.layer_names.get(r.layer).map_or_else(|| r.layer.to_string(), Clone::clone);
            writeln!(w, "{},{},{},{}", r.heuristic, layer, r.replicate, r.accuracy)?;
        }
        writeln!(w)?;
        writeln!(w, "heuristic,mean_accuracy,std_error,replicates")?;
        for a in &self.aggregates {
            writeln!(w, "{},{},{},{}", a.heuristic, a.mean, a.std_error, a.replicates)?;
        }
        Ok(())
    }
}

/// Normalized monoplex tables shared by every scorer of one target layer.
struct TableCache<'a> {
    net: &'a MultiplexNetwork,
    params: HeuristicParams<f64>,
    pairs: &'a [usize],
    tables: HashMap<(HeuristicKind, usize), ScoreTable<f64>>,
}

impl<'a> TableCache<'a> {
    fn get(&mut self, kind: HeuristicKind, layer: usize) -> Result<&ScoreTable<f64>> {
        if !self.tables.contains_key(&(kind, layer)) {
            let h = MonoplexHeuristic::with_params(kind, self.params);
            let t = score_layer(self.net, layer, &h, self.pairs)?;
            self.tables.insert((kind, layer), t);
        }
        Ok(&self.tables[&(kind, layer)])
    }

    fn layers(&mut self, kind: HeuristicKind, layers: &[usize]) -> Result<Vec<Option<ScoreTable<f64>>>> {
        let mut out = vec![None; self.net.layer_count()];
        for &l in layers {
            out[l] = Some(self.get(kind, l)?.clone());
        }
        Ok(out)
    }
}

fn layers_read(cfg: &MplxConfig<f64>, family: Family, target: usize) -> Vec<usize> {
    match (family, cfg.ccwh_reading) {
        (Family::Cwc, _) => Vec::new(),
        (Family::Ccwh, CcwhReading::TargetLayer) => vec![target],
        _ => cfg.admitted(target).to_vec(),
    }
}

/// Score table for one heuristic at one target layer over `candidates`.
fn score_with(
    observed: &MultiplexNetwork,
    configs: &HashMap<PropertyKind, MplxConfig<f64>>,
    cache: &mut TableCache<'_>,
    spec: &HeuristicSpec,
    target: usize,
    candidates: &[usize],
) -> Result<ScoreTable<f64>> {
    match spec.family {
        None => {
            let kind = spec.inner.expect("validated");
            Ok(cache.get(kind, target)?.clone())
        }
        Some(family) => {
            let cfg = &configs[&spec.kind];
            let tables = match spec.inner {
                Some(kind) if family.needs_inner() => cache.layers(kind, &layers_read(cfg, family, target))?,
                _ => vec![None; observed.layer_count()],
            };
            let values = score_pairs(observed, cfg, target, family, candidates, &tables)?;
            Ok(ScoreTable::from_raw(target, candidates.iter().copied().zip(values).collect()))
        }
    }
}

fn run_replicate(
    net: &MultiplexNetwork,
    spec: &ExperimentSpec,
    replicate: usize,
) -> Result<Vec<AccuracyRecord>> {
    let mut rng = rng_for(spec.seed.wrapping_add(replicate as u64), 1);
    let (observed, removed) = downsample(net, spec.downsample_frac, &mut rng)?;
    let edge_pm = PropertyMatrix::edges(&observed);

    let mut configs = HashMap::new();
    for h in spec.heuristics.iter().filter(|h| h.family.is_some()) {
        if configs.contains_key(&h.kind) {
            continue;
        }
        let c: CorrelationMatrix<f64> = layer_correlations(&observed, h.kind);
        let mut cfg = MplxConfig::new(c).with_ccwh_reading(spec.ccwh_reading);
        if let Thresholding::NumSd(sd) = spec.thresholding {
            cfg = cfg.with_threshold(&observed, &edge_pm, sd)?;
        }
        configs.insert(h.kind, cfg);
    }

    let mut records = Vec::new();
    for (target, truth) in removed.iter().enumerate() {
        if truth.is_empty() {
            continue;
        }
        let candidates = non_edges(&observed, target);
        let mut cache = TableCache {
            net: &observed,
            params: spec.params,
            pairs: &candidates,
            tables: HashMap::new(),
        };
        for h in &spec.heuristics {
            let table = score_with(&observed, &configs, &mut cache, h, target, &candidates)?;
            let top = predict_topx(&table, truth.len());
            records.push(AccuracyRecord {
                heuristic: h.to_string(),
                layer: target,
                replicate,
                accuracy: accuracy(&top.pairs, truth).expect("nonempty truth"),
            });
        }
    }
    Ok(records)
}

/// Run every replicate (in parallel) and aggregate. Deterministic for a
/// fixed seed regardless of thread count.
pub fn run_experiment(source: &NetworkSource, spec: &ExperimentSpec) -> Result<EvalResult> {
    spec.validate()?;
    let (p_copy, layer_names) = match source {
        NetworkSource::Synthetic(s) => {
            let p = calibrate(s)?;
            let names = (1..=s.k).map(|i| i.to_string()).collect();
            (Some(p), names)
        }
        NetworkSource::Fixed(net) => (None, net.names().to_vec()),
    };
    let per_rep: Vec<Vec<AccuracyRecord>> = (0..spec.reps)
        .into_par_iter()
        .map(|r| {
            let net = match source {
                NetworkSource::Synthetic(s) => generate_with_p(s, p_copy.unwrap_or(0.0), s.seed.wrapping_add(r as u64))?,
                NetworkSource::Fixed(net) => net.clone(),
            };
            run_replicate(&net, spec, r)
        })
        .collect::<Result<_>>()?;

    let aggregates = spec
        .heuristics
        .iter()
        .map(|h| {
            let name = h.to_string();
            let rep_means: Vec<f64> = per_rep
                .iter()
                .filter_map(|recs| {
                    let xs: Vec<f64> = recs.iter().filter(|r| r.heuristic == name).map(|r| r.accuracy).collect();
                    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
                })
                .collect();
            let (mean, std_error) = mean_se(&rep_means);
            Aggregate {
                heuristic: name,
                mean,
                std_error,
                replicates: rep_means.len(),
            }
        })
        .collect();

    Ok(EvalResult {
        layer_names,
        records: per_rep.into_iter().flatten().collect(),
        aggregates,
        p_copy,
    })
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureSet {
    MonoplexOnly,
    MultiplexOnly,
    All,
}

impl FromStr for FeatureSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mono" | "monoplex" | "monoplex_only" => Ok(FeatureSet::MonoplexOnly),
            "mplx" | "multiplex" | "multiplex_only" => Ok(FeatureSet::MultiplexOnly),
            "all" => Ok(FeatureSet::All),
            _ => Err(Error::InvalidParameter(format!("unknown feature set `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow<T> {
    pub layer: usize,
    pub pair: usize,
    pub label: u8,
    pub values: Vec<T>,
}

/// Labelled examples, one per retained `(layer, pair)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix<T> {
    pub feature_set: FeatureSet,
    pub feature_names: Vec<String>,
    pub rows: Vec<FeatureRow<T>>,
}

impl<T: Scalar> FeatureMatrix<T> {
    pub fn label_counts(&self) -> (usize, usize) {
        let pos = self.rows.iter().filter(|r| r.label == 1).count();
        (pos, self.rows.len() - pos)
    }

    /// Header `layer,node_a,node_b,label,<features>`.
    pub fn write_csv<W: Write>(
        &self,
        mut w: W,
        net: &MultiplexNetwork,
        node_names: &[String],
    ) -> io::Result<()> {
        write!(w, "layer,node_a,node_b,label")?;
        for name in &self.feature_names {
            write!(w, ",{name}")?;
        }
        writeln!(w)?;
        let pairs = net.pairs();
        for row in &self.rows {
            let (u, v) = pairs.pair_unchecked(row.pair);
            write!(w, "{},{},{},{}", net.names()[row.layer], node_names[u], node_names[v], row.label)?;
            for x in &row.values {
                write!(w, ",{x}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Label every pair of every layer (1 = edge) and balance each layer by
/// subsampling the larger class down to the smaller one.
///
/// Monoplex features are every heuristic at every layer (`8k` columns).
/// Multiplex features are CWC plus CWH and CCWH for each inner heuristic,
/// each under edge and degree correlations. Monoplex scores are min-max
/// normalized over all pairs of their layer.
pub fn export_features<T: Scalar>(
    net: &MultiplexNetwork,
    feature_set: FeatureSet,
    inner: &[HeuristicKind],
    params: HeuristicParams<T>,
    balance_seed: u64,
) -> Result<FeatureMatrix<T>> {
    params.validate()?;
    let k = net.layer_count();
    let all_pairs: Vec<usize> = (0..net.pairs().len()).collect();
    let want_mono = matches!(feature_set, FeatureSet::MonoplexOnly | FeatureSet::All);
    let want_mplx = matches!(feature_set, FeatureSet::MultiplexOnly | FeatureSet::All);

    let mut needed: Vec<HeuristicKind> = Vec::new();
    if want_mono {
        needed.extend(HeuristicKind::ALL);
    }
    if want_mplx {
        for &h in inner {
            if !needed.contains(&h) {
                needed.push(h);
            }
        }
    }
    let mut tables: HashMap<HeuristicKind, Vec<Option<ScoreTable<T>>>> = HashMap::new();
    for &h in &needed {
        let heuristic = MonoplexHeuristic::with_params(h, params);
        let per_layer = (0..k)
            .map(|l| score_layer(net, l, &heuristic, &all_pairs).map(Some))
            .collect::<Result<Vec<_>>>()?;
        tables.insert(h, per_layer);
    }

    let mut names = Vec::new();
    if want_mono {
        for l in 0..k {
            for h in HeuristicKind::ALL {
                names.push(format!("{h}@{}", net.names()[l]));
            }
        }
    }
    let kinds = [PropertyKind::Edge, PropertyKind::Degree];
    let mut configs = Vec::new();
    let mut mplx_specs: Vec<HeuristicSpec> = Vec::new();
    if want_mplx {
        for kind in kinds {
            configs.push((kind, MplxConfig::new(layer_correlations::<T>(net, kind))));
            mplx_specs.push(HeuristicSpec::cwc(kind));
        }
        for &h in inner {
            for family in [Family::Cwh, Family::Ccwh] {
                for kind in kinds {
                    mplx_specs.push(HeuristicSpec::weighted(family, kind, h));
                }
            }
        }
        names.extend(mplx_specs.iter().map(ToString::to_string));
    }

    let mut rng = rng_for(balance_seed, 2);
    let mut rows = Vec::new();
    for target in 0..k {
        let graph = net.layer(target);
        let (mut pos, mut neg): (Vec<usize>, Vec<usize>) = net
            .pairs()
            .iter()
            .map(|(j, (u, v))| (j, graph.has_edge(u, v)))
            .partition_map_pairs();
        let keep = pos.len().min(neg.len());
        subsample(&mut pos, keep, &mut rng);
        subsample(&mut neg, keep, &mut rng);
        let mut chosen: Vec<(usize, u8)> = pos.into_iter().map(|j| (j, 1)).chain(neg.into_iter().map(|j| (j, 0))).collect();
        chosen.sort_unstable();
        let pairs: Vec<usize> = chosen.iter().map(|&(j, _)| j).collect();

        let mut columns: Vec<Vec<T>> = Vec::new();
        if want_mono {
            for l in 0..k {
                for h in HeuristicKind::ALL {
                    let t = tables[&h][l].as_ref().expect("scored");
                    columns.push(pairs.iter().map(|&j| t.normalized(j).expect("all pairs")).collect());
                }
            }
        }
        for spec in &mplx_specs {
            let cfg = &configs.iter().find(|(kind, _)| *kind == spec.kind).expect("config").1;
            let family = spec.family.expect("multiplex");
            let layer_tables: &[Option<ScoreTable<T>>] = match spec.inner {
                Some(h) => &tables[&h],
                None => &[],
            };
            let empty: Vec<Option<ScoreTable<T>>> = vec![None; k];
            let layer_tables = if layer_tables.is_empty() { &empty[..] } else { layer_tables };
            columns.push(score_pairs(net, cfg, target, family, &pairs, layer_tables)?);
        }
        for (r, &(pair, label)) in chosen.iter().enumerate() {
            rows.push(FeatureRow {
                layer: target,
                pair,
                label,
                values: columns.iter().map(|c| c[r]).collect(),
            });
        }
    }
    Ok(FeatureMatrix {
        feature_set,
        feature_names: names,
        rows,
    })
}

fn subsample<R: Rng + ?Sized>(items: &mut Vec<usize>, keep: usize, rng: &mut R) {
    if items.len() <= keep {
        return;
    }
    let mut idx: Vec<usize> = sample(rng, items.len(), keep).into_vec();
    idx.sort_unstable();
    *items = idx.into_iter().map(|i| items[i]).collect();
}

trait PartitionPairs {
    fn partition_map_pairs(self) -> (Vec<usize>, Vec<usize>);
}

impl<I: Iterator<Item = (usize, bool)>> PartitionPairs for I {
    fn partition_map_pairs(self) -> (Vec<usize>, Vec<usize>) {
        let (mut yes, mut no) = (Vec::new(), Vec::new());
        for (j, flag) in self {
            if flag {
                yes.push(j);
            } else {
                no.push(j);
            }
        }
        (yes, no)
    }
}
