//! Correlation-weighted multiplex heuristics.
//!
//! For a target layer `i`, candidate pair `j` and correlation matrix `C`,
//! every admitted layer `l` contributes a term weighted by `|c_il|`:
//!
//! | family | `c_il > 0`          | `c_il < 0`                  | `l = i`  |
//! |--------|---------------------|-----------------------------|----------|
//! | CWC    | `e^l_j`             | `1 - e^l_j`                 | (none)   |
//! | CWH    | `h^l_j`             | `1 - h^l_j`                 | `h^i_j`  |
//! | CCWH   | `e^l_j h_j`         | `(1 - e^l_j)(1 - h_j)`      | `h^i_j`  |
//!
//! and the sum is divided by `Z = sum_l |c_il|` over the admitted layers,
//! so scores stay in `[0, 1]`. `h` is a min-max normalized monoplex score;
//! in CCWH it is read at the target layer by default (see [`CcwhReading`]).

use std::fmt;
use std::str::FromStr;

use crate::correlation::{admissible_layers, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::monoplex::{non_edges, score_layer, MonoplexHeuristic, ScoreTable};
use crate::network::{MultiplexNetwork, PropertyMatrix};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Cwc,
    Cwh,
    Ccwh,
}

impl Family {
    pub fn abbrev(self) -> &'static str {
        match self {
            Family::Cwc => "CWC",
            Family::Cwh => "CWH",
            Family::Ccwh => "CCWH",
        }
    }

    pub fn needs_inner(self) -> bool {
        !matches!(self, Family::Cwc)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbrev())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cwc" => Ok(Family::Cwc),
            "cwh" => Ok(Family::Cwh),
            "ccwh" => Ok(Family::Ccwh),
            _ => Err(Error::InvalidParameter(format!("unknown multiplex family `{s}`"))),
        }
    }
}

/// Which layer's heuristic value enters the cross-layer CCWH terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CcwhReading {
    /// `h^i_j`, the target layer's value, gated by `e^l_j`.
    #[default]
    TargetLayer,
    /// `h^l_j`, the value at the contributing layer.
    EachLayer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MplxConfig<T> {
    pub correlation: CorrelationMatrix<T>,
    pub inner: Option<MonoplexHeuristic<T>>,
    /// `|c|` at or below this counts as zero correlation.
    pub zero_weight_epsilon: T,
    pub ccwh_reading: CcwhReading,
    admitted: Vec<Vec<usize>>,
}

impl<T: Scalar> MplxConfig<T> {
    /// Every layer admitted for every target.
    pub fn new(correlation: CorrelationMatrix<T>) -> Self {
        let k = correlation.dim();
        Self {
            correlation,
            inner: None,
            zero_weight_epsilon: T::zero(),
            ccwh_reading: CcwhReading::default(),
            admitted: vec![(0..k).collect(); k],
        }
    }

    pub fn with_inner(mut self, inner: MonoplexHeuristic<T>) -> Self {
        self.inner = Some(inner);
        self
    }

    pub fn with_ccwh_reading(mut self, reading: CcwhReading) -> Self {
        self.ccwh_reading = reading;
        self
    }

    pub fn with_zero_weight_epsilon(mut self, eps: T) -> Result<Self> {
        if !(eps >= T::zero()) {
            return Err(Error::InvalidParameter("zero_weight_epsilon must be nonnegative".into()));
        }
        self.zero_weight_epsilon = eps;
        Ok(self)
    }

    /// Explicit admitted sets, one per target. Each set must contain its target.
    pub fn with_admitted(mut self, admitted: Vec<Vec<usize>>) -> Result<Self> {
        let k = self.correlation.dim();
        if admitted.len() != k {
            return Err(Error::LengthMismatch(admitted.len(), k));
        }
        for (target, set) in admitted.iter().enumerate() {
            if !set.contains(&target) {
                return Err(Error::InvalidParameter(format!("admitted set of layer {target} lacks the layer itself")));
            }
            if let Some(&bad) = set.iter().find(|&&l| l >= k) {
                return Err(Error::LayerOutOfRange { layer: bad, k });
            }
        }
        self.admitted = admitted
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        Ok(self)
    }

    /// Restrict each target to the layers passing the overlap threshold.
    pub fn with_threshold(self, net: &MultiplexNetwork, edge_pm: &PropertyMatrix, num_sd: T) -> Result<Self> {
        let admitted = (0..net.layer_count())
            .map(|t| admissible_layers(net, t, edge_pm, num_sd))
            .collect::<Result<Vec<_>>>()?;
        self.with_admitted(admitted)
    }

    pub fn admitted(&self, target: usize) -> &[usize] {
        &self.admitted[target]
    }

    fn check(&self, net: &MultiplexNetwork, target: usize) -> Result<()> {
        net.check_layer(target)?;
        if self.correlation.dim() != net.layer_count() {
            return Err(Error::LengthMismatch(self.correlation.dim(), net.layer_count()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MplxScore<T> {
    pub value: T,
    pub target_layer: usize,
    pub pair: usize,
}

/// `Z = sum over admitted l of |c_{target,l}|`.
pub fn z_norm<T: Scalar>(correlation: &CorrelationMatrix<T>, target: usize, admitted: &[usize]) -> T {
    admitted
        .iter()
        .fold(T::zero(), |z, &l| z + correlation.get(target, l).abs())
}

/// Signed-case term: `pos * c` for positive `c`, `neg * |c|` for negative.
#[inline]
fn weighted<T: Scalar>(c: T, eps: T, pos: T, neg: T) -> T {
    if c.abs() <= eps {
        T::zero()
    } else if c > T::zero() {
        pos * c
    } else {
        neg * c.abs()
    }
}

/// Per-layer score tables, indexed by layer. `None` for layers not needed.
pub type LayerScores<T> = [Option<ScoreTable<T>>];

fn lookup<T: Scalar>(scores: &LayerScores<T>, layer: usize, pair: usize) -> Result<T> {
    scores
        .get(layer)
        .and_then(Option::as_ref)
        .and_then(|t| t.normalized(pair))
        .ok_or(Error::MissingScores(layer))
}

/// Accumulate numerator and `Z` in the same order so that `num <= Z` holds
/// in floating point as well.
fn weigh<T, F>(cfg: &MplxConfig<T>, target: usize, mut term: F) -> Result<T>
where
    T: Scalar,
    F: FnMut(usize, T) -> Result<T>,
{
    let (mut num, mut z) = (T::zero(), T::zero());
    for &l in cfg.admitted(target) {
        let c = cfg.correlation.get(target, l);
        z = z + c.abs();
        num = num + term(l, c)?;
    }
    Ok(if z > T::zero() { num / z } else { T::zero() })
}

fn cwc_value<T: Scalar>(net: &MultiplexNetwork, cfg: &MplxConfig<T>, target: usize, pair: usize) -> Result<T> {
    let (u, v) = net.pairs().pair(pair)?;
    let eps = cfg.zero_weight_epsilon;
    weigh(cfg, target, |l, c| {
        if l == target {
            return Ok(T::zero());
        }
        let e = if net.layer(l).has_edge(u, v) { T::one() } else { T::zero() };
        Ok(weighted(c, eps, e, T::one() - e))
    })
}

fn cwh_value<T: Scalar>(cfg: &MplxConfig<T>, target: usize, pair: usize, scores: &LayerScores<T>) -> Result<T> {
    let eps = cfg.zero_weight_epsilon;
    weigh(cfg, target, |l, c| {
        let h = lookup(scores, l, pair)?;
        Ok(if l == target { h } else { weighted(c, eps, h, T::one() - h) })
    })
}

fn ccwh_value<T: Scalar>(
    net: &MultiplexNetwork,
    cfg: &MplxConfig<T>,
    target: usize,
    pair: usize,
    scores: &LayerScores<T>,
) -> Result<T> {
    let (u, v) = net.pairs().pair(pair)?;
    let eps = cfg.zero_weight_epsilon;
    let own = lookup(scores, target, pair)?;
    weigh(cfg, target, |l, c| {
        if l == target {
            return Ok(own);
        }
        let h = match cfg.ccwh_reading {
            CcwhReading::TargetLayer => own,
            CcwhReading::EachLayer => lookup(scores, l, pair)?,
        };
        let e = if net.layer(l).has_edge(u, v) { T::one() } else { T::zero() };
        Ok(weighted(c, eps, e * h, (T::one() - e) * (T::one() - h)))
    })
}

fn require_candidate(net: &MultiplexNetwork, target: usize, pair: usize) -> Result<()> {
    let (u, v) = net.pairs().pair(pair)?;
    if net.layer(target).has_edge(u, v) {
        return Err(Error::NotACandidate { layer: target, pair });
    }
    Ok(())
}

/// Count and Weight by Correlation for a non-edge of the target layer.
pub fn cwc<T: Scalar>(net: &MultiplexNetwork, cfg: &MplxConfig<T>, target: usize, pair: usize) -> Result<MplxScore<T>> {
    cfg.check(net, target)?;
    require_candidate(net, target, pair)?;
    Ok(MplxScore {
        value: cwc_value(net, cfg, target, pair)?,
        target_layer: target,
        pair,
    })
}

/// Correlation Weighted Heuristic. `scores` must hold normalized tables for
/// every admitted layer covering `pair`.
pub fn cwh<T: Scalar>(
    net: &MultiplexNetwork,
    cfg: &MplxConfig<T>,
    target: usize,
    pair: usize,
    scores: &LayerScores<T>,
) -> Result<MplxScore<T>> {
    cfg.check(net, target)?;
    net.pairs().pair(pair)?;
    Ok(MplxScore {
        value: cwh_value(cfg, target, pair, scores)?,
        target_layer: target,
        pair,
    })
}

/// Count Correlation-Weighted Heuristics.
pub fn ccwh<T: Scalar>(
    net: &MultiplexNetwork,
    cfg: &MplxConfig<T>,
    target: usize,
    pair: usize,
    scores: &LayerScores<T>,
) -> Result<MplxScore<T>> {
    cfg.check(net, target)?;
    Ok(MplxScore {
        value: ccwh_value(net, cfg, target, pair, scores)?,
        target_layer: target,
        pair,
    })
}

/// Score arbitrary pairs (edges included) without the candidate check.
/// CWC never reads the target layer itself, so existing edges get no credit
/// for being present there.
pub fn score_pairs<T: Scalar>(
    net: &MultiplexNetwork,
    cfg: &MplxConfig<T>,
    target: usize,
    family: Family,
    pairs: &[usize],
    scores: &LayerScores<T>,
) -> Result<Vec<T>> {
    cfg.check(net, target)?;
    pairs
        .iter()
        .map(|&j| match family {
            Family::Cwc => cwc_value(net, cfg, target, j),
            Family::Cwh => cwh_value(cfg, target, j, scores),
            Family::Ccwh => ccwh_value(net, cfg, target, j, scores),
        })
        .collect()
}

/// Normalized inner-heuristic tables over `pairs` for every layer the
/// family reads when predicting `target`.
pub fn inner_scores<T: Scalar>(
    net: &MultiplexNetwork,
    cfg: &MplxConfig<T>,
    target: usize,
    family: Family,
    inner: &MonoplexHeuristic<T>,
    pairs: &[usize],
) -> Result<Vec<Option<ScoreTable<T>>>> {
    let mut tables = vec![None; net.layer_count()];
    let layers: Vec<usize> = match (family, cfg.ccwh_reading) {
        (Family::Cwc, _) => Vec::new(),
        (Family::Ccwh, CcwhReading::TargetLayer) => vec![target],
        _ => cfg.admitted(target).to_vec(),
    };
    for l in layers {
        tables[l] = Some(score_layer(net, l, inner, pairs)?);
    }
    Ok(tables)
}

/// Score every non-edge of the target layer.
pub fn score_candidates<T: Scalar>(
    net: &MultiplexNetwork,
    cfg: &MplxConfig<T>,
    target: usize,
    family: Family,
) -> Result<ScoreTable<T>> {
    cfg.check(net, target)?;
    let candidates = non_edges(net, target);
    let tables = if family.needs_inner() {
        let inner = cfg
            .inner
            .ok_or_else(|| Error::InvalidParameter(format!("{family} needs an inner monoplex heuristic")))?;
        inner.params.validate()?;
        inner_scores(net, cfg, target, family, &inner, &candidates)?
    } else {
        vec![None; net.layer_count()]
    };
    let values = score_pairs(net, cfg, target, family, &candidates, &tables)?;
    Ok(ScoreTable::from_raw(target, candidates.into_iter().zip(values).collect()))
}
