//! Random-graph overlap moments against exhaustive enumeration and sampling.

use mplx_core::correlation::{er_first_moment, er_second_cross_moment, expected_overlap, overlap_stats};
use mplx_core::synth::rng_for;
use rand::seq::index::sample;

/// All m-subsets of 0..slots.
fn subsets(slots: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, slots: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for s in start..slots {
            cur.push(s);
            rec(s + 1, slots, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, slots, m, &mut Vec::new(), &mut out);
    out
}

fn shared(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.contains(x)).count()
}

#[test]
fn exact_enumeration_small_graphs() {
    for n in [4usize, 5] {
        let slots = n * (n - 1) / 2;
        for m in 1..=slots {
            let graphs = subsets(slots, m);
            let total = graphs.len() as f64;
            let p0 = graphs.iter().filter(|g| g.contains(&0)).count() as f64 / total;
            let p01 = graphs.iter().filter(|g| g.contains(&0) && g.contains(&1)).count() as f64 / total;
            assert!((er_first_moment::<f64>(n, m).unwrap() - p0).abs() < 1e-12);
            assert!((er_second_cross_moment::<f64>(n, m).unwrap() - p01).abs() < 1e-12);
        }
        for mi in 1..=slots {
            for mj in 1..=slots {
                let (gi, gj) = (subsets(slots, mi), subsets(slots, mj));
                let norm = ((mi * mj) as f64).sqrt();
                let (mut s1, mut s2) = (0.0, 0.0);
                for a in &gi {
                    for b in &gj {
                        let oe = shared(a, b) as f64 / norm;
                        s1 += oe;
                        s2 += oe * oe;
                    }
                }
                let count = (gi.len() * gj.len()) as f64;
                let stats = overlap_stats::<f64>(n, mi, mj).unwrap();
                assert!((stats.mean - s1 / count).abs() < 1e-12, "n={n} mi={mi} mj={mj}");
                assert!((stats.second_moment - s2 / count).abs() < 1e-12, "n={n} mi={mi} mj={mj}");
                assert!((stats.variance - (s2 / count - (s1 / count).powi(2))).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn sampled_moments_agree() {
    let mut rng = rng_for(2024, 0);
    for (n, mi, mj) in [(7usize, 6usize, 9usize), (12, 20, 30)] {
        let slots = n * (n - 1) / 2;
        let draws = 20_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..draws {
            let a = sample(&mut rng, slots, mi).into_vec();
            let b = sample(&mut rng, slots, mj).into_vec();
            let oe = shared(&a, &b) as f64 / ((mi * mj) as f64).sqrt();
            s += oe;
            s2 += oe * oe;
        }
        let mean = s / draws as f64;
        let var = s2 / draws as f64 - mean * mean;
        let se = (var / draws as f64).sqrt();
        assert!((mean - expected_overlap::<f64>(n, mi, mj).unwrap()).abs() < 4.0 * se);
    }
}
