use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::distance::{recognize_with, require_connected};
use super::{is_homomorphism, DistanceData, Graph, GraphError, VertexMap};
use crate::params::{derive_parameters, IntersectionArray, SpectralData};

/// Eigenvalues closer than this are treated as one.
pub const EIGEN_GROUPING_TOLERANCE: f64 = 1e-9;
/// Tolerance for the identities checked on explicit matrices.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

/// Spectral decomposition of an adjacency matrix into idempotents.
#[derive(Clone, Debug)]
pub struct NumericSpectral {
    /// Distinct eigenvalues, decreasing.
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// Orthogonal projections onto the eigenspaces, in eigenvalue order.
    pub idempotents: Vec<DMatrix<f64>>,
    pub tolerance: f64,
    /// For distance-regular graphs, the largest entrywise deviation of each
    /// `E_r` from `(m_r / n) Σ_i w(i, r) A_i` built from the exact cosines;
    /// `None` when the exact engine does not handle the array.
    pub cosine_residual: Option<f64>,
}

impl NumericSpectral {
    /// Largest deviation of `Σ E_r` from `I` and of `E_r E_s` from `δ_rs E_r`.
    pub fn projection_residual(&self) -> f64 {
        let n = self.idempotents.first().map_or(0, DMatrix::nrows);
        let mut worst = {
            let sum = self.idempotents.iter().fold(DMatrix::zeros(n, n), |acc, e| acc + e);
            (sum - DMatrix::identity(n, n)).amax()
        };
        for (r, er) in self.idempotents.iter().enumerate() {
            for (s, es) in self.idempotents.iter().enumerate() {
                let prod = er * es;
                let dev = if r == s { (prod - er).amax() } else { prod.amax() };
                worst = worst.max(dev);
            }
        }
        worst
    }
}

pub fn numeric_idempotents(g: &Graph) -> Result<NumericSpectral, GraphError> {
    let dd = require_connected(g)?;
    let mut spectral = decompose(g);
    if let Some(arr) = recognize_with(g, &dd)? {
        spectral.cosine_residual = cosine_residual(&spectral, &arr, &dd);
    }
    Ok(spectral)
}

fn decompose(g: &Graph) -> NumericSpectral {
    let eig = SymmetricEigen::new(g.adjacency_matrix());
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(grp) if (eig.eigenvalues[grp[0]] - eig.eigenvalues[i]).abs() <= EIGEN_GROUPING_TOLERANCE => {
                grp.push(i)
            }
            _ => groups.push(vec![i]),
        }
    }
    let n = g.n();
    let mut eigenvalues = Vec::new();
    let mut idempotents = Vec::new();
    for grp in &groups {
        eigenvalues.push(grp.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / grp.len() as f64);
        let mut e = DMatrix::zeros(n, n);
        for &i in grp {
            let v = eig.eigenvectors.column(i);
            e += v * v.transpose();
        }
        idempotents.push(e);
    }
    NumericSpectral {
        eigenvalues,
        multiplicities: groups.iter().map(Vec::len).collect(),
        idempotents,
        tolerance: EIGEN_GROUPING_TOLERANCE,
        cosine_residual: None,
    }
}

fn cosine_residual(ns: &NumericSpectral, arr: &IntersectionArray, dd: &DistanceData) -> Option<f64> {
    let ps = derive_parameters(arr).ok()?;
    let sd = SpectralData::compute(&ps).ok()?;
    if sd.theta.len() != ns.eigenvalues.len() {
        return Some(f64::INFINITY);
    }
    let n = ps.n as f64;
    let mut worst = 0f64;
    for (r, e) in ns.idempotents.iter().enumerate() {
        let scale = sd.m[r] as f64 / n;
        let w: Vec<f64> = (0..=ps.diameter()).map(|i| sd.cosine(i, r).to_f64()).collect();
        for u in 0..e.nrows() {
            for v in 0..e.ncols() {
                worst = worst.max((e[(u, v)] - scale * w[dd.get(u, v)]).abs());
            }
        }
    }
    Some(worst)
}

/// Data shared by the homomorphism matrices of one map `φ: X → Y` between
/// distance-regular graphs with the same intersection array.
pub struct HomSetup<'a> {
    pub x: &'a Graph,
    pub phi: &'a VertexMap,
    pub array: IntersectionArray,
    /// Idempotents of the source.
    pub source: NumericSpectral,
    /// `entries[r][i] = Q(i, r) / n`, read off the idempotents of the target.
    pub entries: Vec<Vec<f64>>,
    dist_y: DistanceData,
}

impl<'a> HomSetup<'a> {
    pub fn new(x: &'a Graph, y: &Graph, phi: &'a VertexMap) -> Result<HomSetup<'a>, GraphError> {
        let dx = require_connected(x)?;
        let dist_y = require_connected(y)?;
        let ax = recognize_with(x, &dx)?.ok_or(GraphError::NotDistanceRegular)?;
        let ay = recognize_with(y, &dist_y)?.ok_or(GraphError::NotDistanceRegular)?;
        if ax != ay {
            return Err(GraphError::ArrayMismatch { expected: ax.to_string(), found: ay.to_string() });
        }
        phi.check_into(x.n(), y.n())?;
        if !is_homomorphism(x, y, phi) {
            return Err(GraphError::NotHomomorphism);
        }
        let target = decompose(y);
        let d = ax.diameter();
        if target.eigenvalues.len() != d + 1 {
            return Err(GraphError::Spectral(format!(
                "expected {} distinct eigenvalues, found {}",
                d + 1,
                target.eigenvalues.len()
            )));
        }
        // One representative pair per distance is enough in a distance-regular graph.
        let reps: Vec<usize> = (0..=d).map(|i| dist_y.row(0).iter().position(|&t| t == i).expect("layer")).collect();
        let entries = target.idempotents.iter().map(|e| reps.iter().map(|&v| e[(0, v)]).collect()).collect();
        let source = if std::ptr::eq(x, y) { target } else { decompose(x) };
        Ok(HomSetup { x, phi, array: ax, source, entries, dist_y })
    }

    pub fn diameter(&self) -> usize {
        self.array.diameter()
    }

    pub fn theta(&self, r: usize) -> f64 {
        self.source.eigenvalues[r]
    }

    /// `M_r(u, v) = Q(d_Y(φu, φv), r) / n`
    pub fn matrix(&self, r: usize) -> DMatrix<f64> {
        let n = self.x.n();
        DMatrix::from_fn(n, n, |u, v| self.entries[r][self.dist_y.get(self.phi.apply(u), self.phi.apply(v))])
    }
}

pub fn hom_matrix(x: &Graph, y: &Graph, phi: &VertexMap, r: usize) -> Result<DMatrix<f64>, GraphError> {
    let setup = HomSetup::new(x, y, phi)?;
    if r > setup.diameter() {
        return Err(GraphError::InvalidParameters(format!("eigen-index {r} exceeds the diameter")));
    }
    Ok(setup.matrix(r))
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenCheck {
    pub r: usize,
    pub theta: f64,
    pub min_eigenvalue: f64,
    /// `|tr(M_r (A − θ_r I))|`
    pub trace_residual: f64,
    /// Largest entry of `|M_r − E_r|`; zero exactly when `φ` is an isometry.
    pub distance_from_idempotent: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub checks: Vec<EigenCheck>,
    /// `max |M_d (A − θ_d I)|`
    pub kernel_residual: f64,
    pub neighbour_sum_samples: usize,
    /// Largest `|θ_d (M_d − E_d)(u,v) − Σ_{w ~ v} (M_d − E_d)(u,w)|` over the samples.
    pub neighbour_sum_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Number of random `(u, v)` pairs used for the neighbour-sum check.
pub const NEIGHBOUR_SUM_SAMPLES: usize = 100;

/// Checks positive semidefiniteness, the trace identity and the kernel
/// relation of every homomorphism matrix, and spot-checks the neighbour-sum
/// relation on pseudo-random pairs drawn from a fixed seed.
pub fn verify_identities(x: &Graph, y: &Graph, phi: &VertexMap) -> Result<IdentityReport, GraphError> {
    let setup = HomSetup::new(x, y, phi)?;
    let n = x.n();
    let d = setup.diameter();
    let a = x.adjacency_matrix();
    let shifted = |r: usize| &a - DMatrix::identity(n, n) * setup.theta(r);
    let tol = IDENTITY_TOLERANCE;

    let mut checks = Vec::new();
    let mut md = None;
    for r in 0..=d {
        let m = setup.matrix(r);
        let prod = &m * shifted(r);
        let min_eigenvalue = SymmetricEigen::new(m.clone()).eigenvalues.min();
        checks.push(EigenCheck {
            r,
            theta: setup.theta(r),
            min_eigenvalue,
            trace_residual: prod.trace().abs(),
            distance_from_idempotent: (&m - &setup.source.idempotents[r]).amax(),
        });
        if r == d {
            md = Some((m, prod));
        }
    }
    let (md, kernel) = md.expect("d >= 1");
    let kernel_residual = kernel.amax();

    let diff = md - &setup.source.idempotents[d];
    let theta_d = setup.theta(d);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut neighbour_sum_residual = 0f64;
    for _ in 0..NEIGHBOUR_SUM_SAMPLES {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        let sum: f64 = x.neighbors(v).iter().map(|&w| diff[(u, w)]).sum();
        neighbour_sum_residual = neighbour_sum_residual.max((theta_d * diff[(u, v)] - sum).abs());
    }

    let passed = checks.iter().all(|c| c.min_eigenvalue >= -tol && c.trace_residual <= tol * n as f64)
        && kernel_residual <= tol
        && neighbour_sum_residual <= tol;
    Ok(IdentityReport {
        n,
        checks,
        kernel_residual,
        neighbour_sum_samples: NEIGHBOUR_SUM_SAMPLES,
        neighbour_sum_residual,
        tolerance: tol,
        passed,
    })
}
