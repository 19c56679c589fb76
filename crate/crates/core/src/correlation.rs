//! Cross-layer correlation matrices and the random-graph overlap threshold.
//!
//! For a fixed observed layer with `m_i` edges and a `G(n, m_j)` random graph,
//! the cosine overlap of their edge indicator vectors has closed-form first
//! and second moments. A layer is admitted as evidence for a target layer
//! only when its observed overlap clears `mean + num_sd * sd`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::network::{MultiplexNetwork, PropertyKind, PropertyMatrix};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrelationMetric {
    Pearson,
    Spearman,
}

impl CorrelationMetric {
    /// Pearson for edge indicators, Spearman for degree vectors.
    pub fn default_for(kind: PropertyKind) -> Self {
        match kind {
            PropertyKind::Edge => CorrelationMetric::Pearson,
            PropertyKind::Degree => CorrelationMetric::Spearman,
        }
    }
}

fn check_lengths<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "correlation needs at least two observations, got {}",
            a.len()
        )));
    }
    Ok(())
}

/// Centered Pearson coefficient. Returns 0 if either input is constant.
pub fn pearson<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    check_lengths(a, b)?;
    let len = T::from_count(a.len());
    let mean_a = a.iter().fold(T::zero(), |s, &x| s + x) / len;
    let mean_b = b.iter().fold(T::zero(), |s, &x| s + x) / len;
    let (mut sab, mut saa, mut sbb) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        sab = sab + dx * dy;
        saa = saa + dx * dx;
        sbb = sbb + dy * dy;
    }
    if saa == T::zero() || sbb == T::zero() {
        return Ok(T::zero());
    }
    let r = sab / (saa * sbb).sqrt();
    Ok(r.max(-T::one()).min(T::one()))
}

/// 1-based ranks with ties assigned their mean rank.
pub fn average_ranks<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![T::zero(); values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let mean = T::from_count(start + 1 + end) / T::lit(2.0);
        for &i in &order[start..end] {
            ranks[i] = mean;
        }
        start = end;
    }
    ranks
}

/// Pearson on average ranks.
pub fn spearman<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    check_lengths(a, b)?;
    pearson(&average_ranks(a), &average_ranks(b))
}

pub fn correlate<T: Scalar>(metric: CorrelationMetric, a: &[T], b: &[T]) -> Result<T> {
    match metric {
        CorrelationMetric::Pearson => pearson(a, b),
        CorrelationMetric::Spearman => spearman(a, b),
    }
}

/// Symmetric `k x k` matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix<T> {
    k: usize,
    entries: Vec<T>,
    metric: CorrelationMetric,
    kind: PropertyKind,
}

impl<T: Scalar> CorrelationMatrix<T> {
    /// Build from a full row-major matrix; the diagonal is forced to 1 and
    /// off-diagonals must be symmetric and within [-1, 1].
    pub fn from_entries(
        k: usize,
        mut entries: Vec<T>,
        metric: CorrelationMetric,
        kind: PropertyKind,
    ) -> Result<Self> {
        if entries.len() != k * k {
            return Err(Error::LengthMismatch(entries.len(), k * k));
        }
        for i in 0..k {
            entries[i * k + i] = T::one();
            for j in 0..k {
                let c = entries[i * k + j];
                if !(c >= -T::one() && c <= T::one()) {
                    return Err(Error::InvalidParameter(format!("correlation ({i},{j}) = {c} outside [-1,1]")));
                }
                if c != entries[j * k + i] {
                    return Err(Error::InvalidParameter(format!("correlation matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self {
            k,
            entries,
            metric,
            kind,
        })
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.k + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.k..(i + 1) * self.k]
    }

    pub fn metric(&self) -> CorrelationMetric {
        self.metric
    }

    pub fn kind(&self) -> PropertyKind {
        self.kind
    }

    /// Off-diagonal entries `(i, j)` with `i < j`.
    pub fn upper_triangle(&self) -> Vec<T> {
        (0..self.k)
            .flat_map(|i| (i + 1..self.k).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }
}

pub fn correlation_matrix<T: Scalar>(pm: &PropertyMatrix, metric: CorrelationMetric) -> CorrelationMatrix<T> {
    let k = pm.layer_count();
    let rows: Vec<Vec<T>> = (0..k).map(|i| pm.row_as(i)).collect();
    let mut entries = vec![T::zero(); k * k];
    for i in 0..k {
        entries[i * k + i] = T::one();
        for j in i + 1..k {
            // rows of one matrix always share a length; a single column gives 0
            let c = correlate(metric, &rows[i], &rows[j]).unwrap_or(T::zero());
            entries[i * k + j] = c;
            entries[j * k + i] = c;
        }
    }
    CorrelationMatrix {
        k,
        entries,
        metric,
        kind: pm.kind(),
    }
}

/// Correlation matrix with the default metric for the property kind.
pub fn layer_correlations<T: Scalar>(net: &MultiplexNetwork, kind: PropertyKind) -> CorrelationMatrix<T> {
    correlation_matrix(&PropertyMatrix::of_kind(net, kind), CorrelationMetric::default_for(kind))
}

/// Cosine similarity of two 0/1 vectors; 0 if either is all zero.
pub fn cosine_overlap<T: Scalar>(a: &[u32], b: &[u32]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let dot: u64 = a.iter().zip(b).map(|(&x, &y)| u64::from(x * y)).sum();
    let na: u64 = a.iter().map(|&x| u64::from(x * x)).sum();
    let nb: u64 = b.iter().map(|&x| u64::from(x * x)).sum();
    if na == 0 || nb == 0 {
        return Ok(T::zero());
    }
    let f = |x: u64| T::from_u64(x).expect("count fits");
    Ok(f(dot) / (f(na) * f(nb)).sqrt())
}

fn slots(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn check_edge_count(n: usize, m: usize) -> Result<()> {
    if m > slots(n) {
        return Err(Error::InvalidParameter(format!(
            "{m} edges exceed the {} node pairs of a {n}-node graph",
            slots(n)
        )));
    }
    Ok(())
}

/// `P(slot occupied)` in `G(n, m)`: `2m / (n(n-1))`.
pub fn er_first_moment<T: Scalar>(n: usize, m: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 nodes".into()));
    }
    check_edge_count(n, m)?;
    Ok(T::from_count(2 * m) / T::from_count(n * (n - 1)))
}

/// `P(two given distinct slots both occupied)` in `G(n, m)`:
/// `4m(m-1) / (n(n-2)(n^2-1))`.
pub fn er_second_cross_moment<T: Scalar>(n: usize, m: usize) -> Result<T> {
    if n < 3 {
        return Err(Error::InvalidParameter("need at least 3 nodes".into()));
    }
    check_edge_count(n, m)?;
    let nf = T::from_count(n);
    let num = T::lit(4.0) * T::from_count(m) * T::from_count(m.saturating_sub(1));
    Ok(num / (nf * (nf - T::lit(2.0)) * (nf * nf - T::one())))
}

fn check_overlap_args(n: usize, m_i: usize, m_j: usize) -> Result<()> {
    if m_i == 0 || m_j == 0 {
        return Err(Error::InvalidParameter("overlap is undefined for an empty layer".into()));
    }
    check_edge_count(n, m_i)?;
    check_edge_count(n, m_j)
}

/// Expected cosine overlap between a fixed `m_i`-edge graph and `G(n, m_j)`.
pub fn expected_overlap<T: Scalar>(n: usize, m_i: usize, m_j: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 nodes".into()));
    }
    check_overlap_args(n, m_i, m_j)?;
    Ok(T::lit(2.0) * (T::from_count(m_i) * T::from_count(m_j)).sqrt() / T::from_count(n * (n - 1)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapStats<T> {
    pub n: usize,
    pub m_i: usize,
    pub m_j: usize,
    pub mean: T,
    pub second_moment: T,
    pub variance: T,
}

impl<T: Scalar> OverlapStats<T> {
    /// Standard deviation, with round-off negatives clamped to zero.
    pub fn sd(&self) -> T {
        self.variance.max(T::zero()).sqrt()
    }

    pub fn threshold(&self, num_sd: T) -> T {
        self.mean + num_sd * self.sd()
    }
}

pub fn overlap_stats<T: Scalar>(n: usize, m_i: usize, m_j: usize) -> Result<OverlapStats<T>> {
    if n < 3 {
        return Err(Error::InvalidParameter("need at least 3 nodes".into()));
    }
    check_overlap_args(n, m_i, m_j)?;
    let nf = T::from_count(n);
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let pairs2 = nf * (nf - T::one());
    let cross = four * T::from_count(m_i - 1) * T::from_count(m_j - 1) / (nf * (nf - two) * (nf * nf - T::one()));
    let mean = expected_overlap(n, m_i, m_j)?;
    let second_moment = two / pairs2 + cross;
    let product = T::from_count(m_i) * T::from_count(m_j);
    let variance = (two * pairs2 - four * product) / (pairs2 * pairs2) + cross;
    Ok(OverlapStats {
        n,
        m_i,
        m_j,
        mean,
        second_moment,
        variance,
    })
}

/// Layers whose overlap with `target` beats the random-graph threshold.
///
/// The result is sorted and always contains `target`. Empty layers are never
/// admitted. With fewer than 3 nodes no threshold exists and every nonempty
/// layer is admitted.
pub fn admissible_layers<T: Scalar>(
    net: &MultiplexNetwork,
    target: usize,
    edge_pm: &PropertyMatrix,
    num_sd: T,
) -> Result<Vec<usize>> {
    net.check_layer(target)?;
    if edge_pm.kind() != PropertyKind::Edge {
        return Err(Error::InvalidParameter("admission needs an edge property matrix".into()));
    }
    if !(num_sd >= T::zero()) {
        return Err(Error::InvalidParameter("num_sd must be nonnegative".into()));
    }
    let n = net.node_count();
    let m_target = net.layer(target).edge_count();
    let mut admitted = Vec::new();
    for l in 0..net.layer_count() {
        if l == target {
            admitted.push(l);
            continue;
        }
        let m_l = net.layer(l).edge_count();
        if m_l == 0 || m_target == 0 {
            continue;
        }
        if n < 3 {
            admitted.push(l);
            continue;
        }
        let stats = overlap_stats::<T>(n, m_target, m_l)?;
        let observed: T = cosine_overlap(edge_pm.row(target), edge_pm.row(l))?;
        if observed > stats.threshold(num_sd) {
            admitted.push(l);
        }
    }
    Ok(admitted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::network::{build_network, edge_property_matrix};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Textbook two-pass Pearson written independently of `pearson`.
    fn reference_pearson(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let sx: f64 = a.iter().sum();
        let sy: f64 = b.iter().sum();
        let sxy: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        let sxx: f64 = a.iter().map(|x| x * x).sum();
        let syy: f64 = b.iter().map(|y| y * y).sum();
        (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
    }

    /// Rank by counting, no sorting.
    fn reference_ranks(a: &[f64]) -> Vec<f64> {
        a.iter()
            .map(|&x| {
                let less = a.iter().filter(|&&y| y < x).count() as f64;
                let equal = a.iter().filter(|&&y| y == x).count() as f64;
                less + (equal + 1.0) / 2.0
            })
            .collect()
    }

    #[test]
    fn pearson_basics() {
        let a = [1.0, 3.0, 2.0, 5.0];
        assert_relative_eq!(pearson(&a, &a).unwrap(), 1.0);
        let bits = [1.0, 0.0, 0.0, 1.0, 1.0];
        let comp: Vec<f64> = bits.iter().map(|x| 1.0 - x).collect();
        assert_relative_eq!(pearson(&bits, &comp).unwrap(), -1.0);
        assert_eq!(pearson(&[1.0, 1.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(pearson(&[1.0], &[1.0]).unwrap_err().to_string().contains("two"), true);
        assert_eq!(pearson(&[1.0, 2.0], &[1.0]), Err(Error::LengthMismatch(2, 1)));
    }

    #[test]
    fn example_pearson_rows() {
        let pm = edge_property_matrix(&example());
        let a: Vec<f64> = pm.row_as(0);
        let b: Vec<f64> = pm.row_as(1);
        let r = pearson(&a, &b).unwrap();
        assert!(r > 0.0 && r < 1.0);
        assert_relative_eq!(r, reference_pearson(&a, &b), epsilon = 1e-12);
    }

    #[test]
    fn spearman_basics() {
        let a = [0.5, -1.0, 2.0, 3.5];
        let cubed: Vec<f64> = a.iter().map(|x| x * x * x).collect();
        assert_relative_eq!(spearman(&a, &cubed).unwrap(), 1.0);
        assert_relative_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), -1.0);
        assert_eq!(average_ranks(&[1.0, 1.0, 2.0]), vec![1.5, 1.5, 3.0]);
    }

    #[test]
    fn correlation_matrix_shapes() {
        let one = build_network([(0, 0, 1)], 3, 1).unwrap();
        let c: CorrelationMatrix<f64> = layer_correlations(&one, PropertyKind::Edge);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.get(0, 0), 1.0);

        let twin = build_network([(0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 2)], 4, 2).unwrap();
        let c: CorrelationMatrix<f64> = layer_correlations(&twin, PropertyKind::Edge);
        assert_relative_eq!(c.get(0, 1), 1.0);

        let c: CorrelationMatrix<f64> = layer_correlations(&example(), PropertyKind::Edge);
        for i in 0..3 {
            assert_eq!(c.get(i, i), 1.0);
            for j in 0..3 {
                assert_eq!(c.get(i, j), c.get(j, i));
            }
        }
        assert_eq!(c.metric(), CorrelationMetric::Pearson);
        let d: CorrelationMatrix<f64> = layer_correlations(&example(), PropertyKind::Degree);
        assert_eq!(d.metric(), CorrelationMetric::Spearman);
    }

    #[test]
    fn from_entries_validates() {
        let ok = CorrelationMatrix::<f64>::from_entries(2, vec![0.0, 0.5, 0.5, 0.0], CorrelationMetric::Pearson, PropertyKind::Edge)
            .unwrap();
        assert_eq!(ok.get(1, 1), 1.0);
        assert!(CorrelationMatrix::<f64>::from_entries(2, vec![1.0, 0.5, 0.4, 1.0], CorrelationMetric::Pearson, PropertyKind::Edge)
            .is_err());
        assert!(CorrelationMatrix::<f64>::from_entries(2, vec![1.0, 1.5, 1.5, 1.0], CorrelationMetric::Pearson, PropertyKind::Edge)
            .is_err());
    }

    #[test]
    fn cosine_examples() {
        assert_relative_eq!(cosine_overlap::<f64>(&[1, 0, 1], &[1, 0, 1]).unwrap(), 1.0);
        assert_eq!(cosine_overlap::<f64>(&[1, 0, 0], &[0, 1, 1]).unwrap(), 0.0);
        assert_eq!(cosine_overlap::<f64>(&[0, 0, 0], &[0, 1, 1]).unwrap(), 0.0);
        let pm = edge_property_matrix(&example());
        let c: f64 = cosine_overlap(pm.row(0), pm.row(1)).unwrap();
        assert_relative_eq!(c, 6.0 / 80f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn er_moments_closed_form() {
        assert_eq!(er_first_moment::<f64>(10, 0).unwrap(), 0.0);
        assert_eq!(er_first_moment::<f64>(10, 45).unwrap(), 1.0);
        assert_relative_eq!(er_first_moment::<f64>(10, 15).unwrap(), 1.0 / 3.0);
        assert!(er_first_moment::<f64>(10, 46).is_err());

        assert_eq!(er_second_cross_moment::<f64>(10, 1).unwrap(), 0.0);
        assert_eq!(er_second_cross_moment::<f64>(3, 3).unwrap(), 1.0);
        assert_relative_eq!(er_second_cross_moment::<f64>(10, 15).unwrap(), 840.0 / 7920.0, epsilon = 1e-15);
        assert!(er_second_cross_moment::<f64>(2, 1).is_err());

        assert_relative_eq!(expected_overlap::<f64>(9, 36, 36).unwrap(), 1.0);
        assert_relative_eq!(expected_overlap::<f64>(9, 10, 8).unwrap(), 2.0 * 80f64.sqrt() / 72.0, epsilon = 1e-15);
        assert!(expected_overlap::<f64>(9, 0, 8).is_err());
    }

    #[test]
    fn overlap_with_complete_layer_is_deterministic() {
        let s = overlap_stats::<f64>(3, 1, 3).unwrap();
        assert!(s.variance.abs() < 1e-15);
    }

    #[test]
    fn variance_identity_scan() {
        for n in 3..=12 {
            let max = n * (n - 1) / 2;
            for m_i in 1..=max {
                for m_j in 1..=max {
                    let s = overlap_stats::<f64>(n, m_i, m_j).unwrap();
                    assert!(s.variance >= -1e-12, "n={n} m_i={m_i} m_j={m_j}: {}", s.variance);
                    assert!((s.variance - (s.second_moment - s.mean * s.mean)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn admission_examples() {
        // layer 1 duplicates layer 0, layer 2 is disjoint from it
        let base = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)];
        let other = [(0, 5), (1, 6), (2, 7), (3, 8), (0, 8)];
        let edges = base
            .iter()
            .flat_map(|&(a, b)| [(0, a, b), (1, a, b)])
            .chain(other.iter().map(|&(a, b)| (2, a, b)));
        let net = build_network(edges, 12, 4).unwrap();
        let pm = edge_property_matrix(&net);
        for sd in [0.0, 1.0, 2.0, 5.0] {
            assert_eq!(admissible_layers(&net, 0, &pm, sd).unwrap(), vec![0, 1]);
        }
        assert_eq!(admissible_layers(&net, 3, &pm, 2.0).unwrap(), vec![3]);
        assert!(admissible_layers(&net, 0, &pm, -1.0).is_err());
    }

    #[test]
    fn admission_monotone_in_num_sd() {
        let net = example();
        let pm = edge_property_matrix(&net);
        for target in 0..3 {
            let mut prev = admissible_layers(&net, target, &pm, 0.0).unwrap();
            for sd in [0.5, 1.0, 2.0, 3.0, 10.0] {
                let cur = admissible_layers(&net, target, &pm, sd).unwrap();
                assert!(cur.iter().all(|l| prev.contains(l)));
                prev = cur;
            }
        }
    }

    proptest! {
        #[test]
        fn matches_reference(a in prop::collection::vec(-5i32..5, 3..40), seed in any::<u64>()) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = a.iter().enumerate().map(|(i, x)| ((seed >> (i % 60)) & 7) as f64 - x * 0.5).collect();
            let constant = |v: &[f64]| v.iter().all(|&x| x == v[0]);
            prop_assume!(!constant(&a) && !constant(&b));
            prop_assert!((pearson(&a, &b).unwrap() - reference_pearson(&a, &b)).abs() < 1e-12);
            let rs = reference_pearson(&reference_ranks(&a), &reference_ranks(&b));
            prop_assert!((spearman(&a, &b).unwrap() - rs).abs() < 1e-12);
        }

        #[test]
        fn matrix_invariants(rows in prop::collection::vec(prop::collection::vec(0u32..4, 12), 1..6)) {
            let pm = PropertyMatrix::from_rows(PropertyKind::Degree, rows).unwrap();
            for metric in [CorrelationMetric::Pearson, CorrelationMetric::Spearman] {
                let c: CorrelationMatrix<f64> = correlation_matrix(&pm, metric);
                for i in 0..c.dim() {
                    prop_assert_eq!(c.get(i, i), 1.0);
                    for j in 0..c.dim() {
                        prop_assert_eq!(c.get(i, j), c.get(j, i));
                        prop_assert!(c.get(i, j).abs() <= 1.0);
                    }
                }
            }
        }
    }
}
