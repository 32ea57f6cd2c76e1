use serde::Serialize;

use super::distance::{recognize_with, require_connected};
use super::spectral::numeric_idempotents;
use super::{is_homomorphism, DistanceData, Graph, GraphError, VertexMap};

/// Split of `Γ_1(v)` by distance from `u` (`a`) and image distance from
/// `φu` (`b`), for a geodetic pair `u, v` at distance `e`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiPartition {
    pub u: usize,
    pub v: usize,
    pub e: usize,
    /// `cells[a − e + 1][b − e + 1]` for `a, b ∈ {e−1, e, e+1}`. The `b = e+1`
    /// column is empty whenever `e` is the diameter of the image.
    pub cells: [[usize; 3]; 3],
    /// `Σ |C_{a,b}| (w(b, d) − w(a, d))`, which vanishes for distance-regular graphs.
    pub residual: f64,
}

impl PhiPartition {
    /// `|C_{a,b}|`, zero outside the stored window.
    pub fn cell(&self, a: usize, b: usize) -> usize {
        let (Some(i), Some(j)) = ((a + 1).checked_sub(self.e), (b + 1).checked_sub(self.e)) else {
            return 0;
        };
        if i < 3 && j < 3 {
            self.cells[i][j]
        } else {
            0
        }
    }

    /// `(|C_{e,e−1}|, |C_{e+1,e−1}|, |C_{e+1,e}|)`, comparable with the
    /// triples of the parameter-side search.
    pub fn triple(&self) -> (usize, usize, usize) {
        let e = self.e;
        (self.cell(e, e - 1), self.cell(e + 1, e - 1), self.cell(e + 1, e))
    }

    pub fn total(&self) -> usize {
        self.cells.iter().flatten().sum()
    }
}

/// Reusable context for partitions under one endomorphism.
pub struct PhiAnalyzer<'a> {
    x: &'a Graph,
    phi: &'a VertexMap,
    dist: DistanceData,
    /// `w(i, d)` for `i = 0..=d+1`, with `w(d+1, d) = 0`.
    w_last: Vec<f64>,
}

impl<'a> PhiAnalyzer<'a> {
    pub fn new(x: &'a Graph, phi: &'a VertexMap) -> Result<PhiAnalyzer<'a>, GraphError> {
        let dist = require_connected(x)?;
        phi.check_into(x.n(), x.n())?;
        if !is_homomorphism(x, x, phi) {
            return Err(GraphError::NotHomomorphism);
        }
        recognize_with(x, &dist)?.ok_or(GraphError::NotDistanceRegular)?;
        let d = dist.diameter.expect("connected");
        let ns = numeric_idempotents(x)?;
        let ed = &ns.idempotents[d];
        let mut w_last: Vec<f64> = (0..=d)
            .map(|i| {
                let v = dist.row(0).iter().position(|&t| t == i).expect("layer");
                ed[(0, v)] / ed[(0, 0)]
            })
            .collect();
        w_last.push(0.0);
        Ok(PhiAnalyzer { x, phi, dist, w_last })
    }

    pub fn distances(&self) -> &DistanceData {
        &self.dist
    }

    pub fn is_geodetic(&self, u: usize, v: usize) -> bool {
        self.dist.get(u, v) == self.dist.get(self.phi.apply(u), self.phi.apply(v))
    }

    pub fn partition(&self, u: usize, v: usize) -> Result<PhiPartition, GraphError> {
        let n = self.x.n();
        if u >= n || v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: u.max(v), n });
        }
        let e = self.dist.get(u, v);
        let image = self.dist.get(self.phi.apply(u), self.phi.apply(v));
        if e != image || e == 0 {
            return Err(GraphError::NotGeodetic { u, v, distance: e, image_distance: image });
        }
        let fu = self.phi.apply(u);
        let mut cells = [[0usize; 3]; 3];
        let mut residual = 0.0;
        for &w in self.x.neighbors(v) {
            let a = self.dist.get(u, w);
            let b = self.dist.get(fu, self.phi.apply(w));
            cells[a + 1 - e][b + 1 - e] += 1;
            residual += self.w_last[b] - self.w_last[a];
        }
        Ok(PhiPartition { u, v, e, cells, residual })
    }

    /// Partitions of every geodetic pair at distance `e ≥ 1`, in order of
    /// `(u, v)`, stopping after `cap` pairs.
    pub fn all_geodetic(&self, cap: usize) -> Vec<PhiPartition> {
        let n = self.x.n();
        (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && self.is_geodetic(u, v))
            .take(cap)
            .map(|(u, v)| self.partition(u, v).expect("pair is geodetic"))
            .collect()
    }
}

pub fn phi_partition(x: &Graph, phi: &VertexMap, u: usize, v: usize) -> Result<PhiPartition, GraphError> {
    PhiAnalyzer::new(x, phi)?.partition(u, v)
}
