//! Dense-matrix transcriptions of the monoplex heuristics.

use mplx_core::monoplex::{HeuristicKind, HeuristicParams};
use mplx_core::LayerGraph;
use nalgebra::{DMatrix, DVector};

fn adjacency(g: &LayerGraph) -> DMatrix<f64> {
    let n = g.node_count();
    DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 })
}

pub struct Dense {
    a: DMatrix<f64>,
    deg: Vec<f64>,
}

impl Dense {
    pub fn new(g: &LayerGraph) -> Self {
        let a = adjacency(g);
        let deg = (0..a.nrows()).map(|i| a.row(i).sum()).collect();
        Self { a, deg }
    }

    pub fn common(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.a.nrows()).filter(|&z| self.a[(u, z)] == 1.0 && self.a[(v, z)] == 1.0).collect()
    }

    pub fn score(&self, kind: HeuristicKind, u: usize, v: usize, p: &HeuristicParams<f64>) -> f64 {
        let a2 = &self.a * &self.a;
        match kind {
            HeuristicKind::CommonNeighbors => a2[(u, v)],
            HeuristicKind::Jaccard => {
                let n = self.a.nrows();
                let union = (0..n).filter(|&z| self.a[(u, z)] == 1.0 || self.a[(v, z)] == 1.0).count();
                if union == 0 {
                    0.0
                } else {
                    self.common(u, v).len() as f64 / union as f64
                }
            }
            HeuristicKind::ResourceAllocation => self.common(u, v).iter().map(|&z| 1.0 / self.deg[z]).sum(),
            HeuristicKind::AdamicAdar => self
                .common(u, v)
                .iter()
                .filter(|&&z| self.deg[z] > 1.0)
                .map(|&z| 1.0 / self.deg[z].ln())
                .sum(),
            HeuristicKind::PreferentialAttachment => self.deg[u] * self.deg[v],
            HeuristicKind::ClusteringProduct => {
                let a3 = &a2 * &self.a;
                let cc = |w: usize| {
                    let d = self.deg[w];
                    if d < 2.0 {
                        0.0
                    } else {
                        a3[(w, w)] / (d * (d - 1.0))
                    }
                };
                cc(u) * cc(v)
            }
            HeuristicKind::Katz => {
                let mut power = self.a.clone();
                let mut total = 0.0;
                for l in 1..=p.max_walk_len {
                    total += p.beta.powi(l as i32) * power[(u, v)];
                    power = &power * &self.a;
                }
                total
            }
            HeuristicKind::RootedPageRank => self.stationary(u, p.alpha)[v] + self.stationary(v, p.alpha)[u],
        }
    }

    /// Solve `(I - alpha M) pi = (1 - alpha) e_root`, dangling columns
    /// sending their mass to the root.
    pub fn stationary(&self, root: usize, alpha: f64) -> DVector<f64> {
        let n = self.a.nrows();
        let mut m = DMatrix::zeros(n, n);
        for v in 0..n {
            if self.deg[v] == 0.0 {
                m[(root, v)] = 1.0;
            } else {
                for w in 0..n {
                    m[(w, v)] = self.a[(w, v)] / self.deg[v];
                }
            }
        }
        let lhs = DMatrix::identity(n, n) - m * alpha;
        let mut rhs = DVector::zeros(n);
        rhs[root] = 1.0 - alpha;
        lhs.lu().solve(&rhs).expect("nonsingular")
    }
}
