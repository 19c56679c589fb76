//! Synthetic multiplex networks with a calibrated median cross-layer edge
//! correlation.
//!
//! Each layer starts as an independent Barabási–Albert graph whose node labels
//! are shuffled, so independent layers share no hub positions. Coupling then
//! draws, for every node pair, one source layer uniformly at random; every
//! other layer adopts the source's pristine edge state with probability
//! `p_copy`. With `p_copy = 1` all layers coincide, with `p_copy = 0` they are
//! untouched. The copy probability is found by bisection against the Monte
//! Carlo median correlation, using common random numbers across probes.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::correlation::{correlation_matrix, CorrelationMetric};
use crate::error::{Error, Result};
use crate::network::{LayerGraph, MultiplexNetwork, PairIndex, PropertyMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n: usize,
    pub k: usize,
    /// Edges attached by each arriving node.
    pub ba_m: usize,
    pub target_median_corr: f64,
    pub seed: u64,
    /// Networks averaged per calibration probe.
    pub calib_samples: usize,
    pub calib_tol: f64,
    pub calib_max_steps: usize,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n: 100,
            k: 10,
            ba_m: 3,
            target_median_corr: 0.5,
            seed: 0,
            calib_samples: 10,
            calib_tol: 0.05,
            calib_max_steps: 20,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.ba_m == 0 || self.ba_m >= self.n {
            return Err(Error::InvalidParameter(format!(
                "ba_m must satisfy 1 <= ba_m < n (ba_m={}, n={})",
                self.ba_m, self.n
            )));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.target_median_corr) {
            return Err(Error::InvalidParameter(format!(
                "target median correlation must lie in [0,1), got {}",
                self.target_median_corr
            )));
        }
        if self.calib_samples == 0 || !(self.calib_tol > 0.0) {
            return Err(Error::InvalidParameter("calibration needs samples >= 1 and tol > 0".into()));
        }
        Ok(())
    }
}

/// Deterministic RNG for `(seed, stream)`. Stream 0 builds the returned
/// network, streams `1..` feed calibration samples.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Preferential attachment graph: a clique on nodes `0..=ba_m`, then each new
/// node links to `ba_m` distinct earlier nodes chosen proportionally to degree.
pub fn ba_layer<R: Rng + ?Sized>(n: usize, ba_m: usize, rng: &mut R) -> Result<LayerGraph> {
    if ba_m == 0 || ba_m >= n {
        return Err(Error::InvalidParameter(format!(
            "ba_m must satisfy 1 <= ba_m < n (ba_m={ba_m}, n={n})"
        )));
    }
    let mut edges = Vec::with_capacity(ba_m * n);
    // every endpoint once per incident edge, so uniform picks are degree-weighted
    let mut endpoints = Vec::with_capacity(2 * ba_m * n);
    for u in 0..=ba_m {
        for v in u + 1..=ba_m {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut picked = Vec::with_capacity(ba_m);
    for t in ba_m + 1..n {
        picked.clear();
        while picked.len() < ba_m {
            let cand = endpoints[rng.gen_range(0..endpoints.len())];
            if !picked.contains(&cand) {
                picked.push(cand);
            }
        }
        for &v in &picked {
            edges.push((v, t));
            endpoints.extend([v, t]);
        }
    }
    LayerGraph::from_edges(n, edges)
}

/// Apply a uniformly random node relabeling.
pub fn shuffle_labels<R: Rng + ?Sized>(layer: &LayerGraph, rng: &mut R) -> LayerGraph {
    let n = layer.node_count();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    LayerGraph::from_edges(n, layer.edges().map(|(u, v)| (perm[u], perm[v]))).expect("relabeling keeps a simple graph")
}

/// Fresh pristine layers: shuffled BA graphs.
fn pristine_layers<R: Rng + ?Sized>(n: usize, k: usize, ba_m: usize, rng: &mut R) -> Result<Vec<LayerGraph>> {
    (0..k)
        .map(|_| ba_layer(n, ba_m, rng).map(|g| shuffle_labels(&g, rng)))
        .collect()
}

/// Couple layers through per-pair shared sources (see the module docs).
/// All copies read the pristine input states.
pub fn couple_layers<R: Rng + ?Sized>(layers: &[LayerGraph], p_copy: f64, rng: &mut R) -> Result<MultiplexNetwork> {
    if !(0.0..=1.0).contains(&p_copy) {
        return Err(Error::InvalidParameter(format!("p_copy must lie in [0,1], got {p_copy}")));
    }
    let Some(first) = layers.first() else {
        return Err(Error::InvalidParameter("no layers to couple".into()));
    };
    let n = first.node_count();
    let k = layers.len();
    let pristine: Vec<Vec<bool>> = layers.iter().map(LayerGraph::edge_indicator).collect();
    if pristine.iter().any(|p| p.len() != pristine[0].len()) {
        return Err(Error::InvalidParameter("layers disagree on node count".into()));
    }
    let mut coupled = pristine.clone();
    let slots = PairIndex::new(n).len();
    for j in 0..slots {
        let source = rng.gen_range(0..k);
        for (i, layer) in coupled.iter_mut().enumerate() {
            // draw for every layer so the stream does not depend on p_copy
            let u: f64 = rng.gen();
            if i != source && u < p_copy {
                layer[j] = pristine[source][j];
            }
        }
    }
    MultiplexNetwork::new(coupled.iter().map(|ind| LayerGraph::from_indicator(n, ind)).collect())
}

/// Median of the off-diagonal Pearson edge correlations.
pub fn median_cross_correlation(net: &MultiplexNetwork) -> Result<f64> {
    if net.layer_count() < 2 {
        return Err(Error::InvalidParameter("median cross-layer correlation needs k >= 2".into()));
    }
    let c = correlation_matrix::<f64>(&PropertyMatrix::edges(net), CorrelationMetric::Pearson);
    Ok(median(c.upper_triangle()))
}

pub(crate) fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

/// Outcome of a calibration run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub p_copy: f64,
    /// Mean median correlation over the calibration samples at `p_copy`.
    pub achieved: f64,
    pub steps: usize,
}

/// Find `p_copy` whose Monte Carlo median correlation is within `calib_tol`
/// of the target.
pub fn calibrate(spec: &SynthSpec) -> Result<f64> {
    calibrate_detailed(spec).map(|c| c.p_copy)
}

/// Bisection on `[0, 1]`. Stops early once within a quarter of the
/// tolerance; otherwise keeps the best probe of the step budget.
pub fn calibrate_detailed(spec: &SynthSpec) -> Result<Calibration> {
    spec.validate()?;
    if spec.k < 2 {
        return Ok(Calibration {
            p_copy: 0.0,
            achieved: f64::NAN,
            steps: 0,
        });
    }
    let samples = (0..spec.calib_samples)
        .map(|s| {
            let mut rng = rng_for(spec.seed, 1 + s as u64);
            pristine_layers(spec.n, spec.k, spec.ba_m, &mut rng).map(|layers| (layers, rng))
        })
        .collect::<Result<Vec<_>>>()?;
    let estimate = |p: f64| -> Result<f64> {
        let mut total = 0.0;
        for (layers, rng) in &samples {
            let net = couple_layers(layers, p, &mut rng.clone())?;
            total += median_cross_correlation(&net)?;
        }
        Ok(total / samples.len() as f64)
    };

    let target = spec.target_median_corr;
    let fine = spec.calib_tol / 4.0;
    let mut best = Calibration {
        p_copy: 0.0,
        achieved: estimate(0.0)?,
        steps: 0,
    };
    if (best.achieved - target).abs() <= fine || best.achieved > target + spec.calib_tol {
        return finish(best, target, spec.calib_tol);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for step in 1..=spec.calib_max_steps {
        let mid = 0.5 * (lo + hi);
        let achieved = estimate(mid)?;
        if (achieved - target).abs() < (best.achieved - target).abs() {
            best = Calibration {
                p_copy: mid,
                achieved,
                steps: step,
            };
        }
        if (achieved - target).abs() <= fine {
            break;
        }
        if achieved < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    finish(best, target, spec.calib_tol)
}

fn finish(best: Calibration, target: f64, tol: f64) -> Result<Calibration> {
    if (best.achieved - target).abs() <= tol {
        Ok(best)
    } else {
        Err(Error::Calibration {
            target,
            best: best.achieved,
            steps: best.steps,
        })
    }
}

/// One network for `seed` at a fixed copy probability (stream 0).
pub fn generate_with_p(spec: &SynthSpec, p_copy: f64, seed: u64) -> Result<MultiplexNetwork> {
    spec.validate()?;
    let mut rng = rng_for(seed, 0);
    let layers = pristine_layers(spec.n, spec.k, spec.ba_m, &mut rng)?;
    if spec.k == 1 {
        return MultiplexNetwork::new(layers);
    }
    couple_layers(&layers, p_copy, &mut rng)
}

/// Calibrate, then build the network for `spec.seed`.
pub fn generate(spec: &SynthSpec) -> Result<MultiplexNetwork> {
    let p = calibrate(spec)?;
    generate_with_p(spec, p, spec.seed)
}
