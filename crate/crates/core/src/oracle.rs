//! Independent spectral oracles that share no numerics with the secular solver.

use std::f64::consts::PI;

use crate::conditions::{ConditionKind, ConditionSpec};
use crate::error::{Error, Result};
use crate::graph::{analyze, MetricGraph};
use crate::spectrum::{Eigenvalue, Spectrum};

/// Dense symmetric matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Checks symmetry to `1e-12` relative to the largest entry.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter {
                name: "matrix".into(),
                reason: "rows must form a square matrix".into(),
            });
        }
        let scale = rows.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((rows[i][j] - rows[j][i]).abs());
            }
        }
        if worst > 1e-12 * scale {
            return Err(Error::NotSymmetric(worst));
        }
        Ok(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Adds `x` at `(i, j)` and, off the diagonal, at `(j, i)`.
    pub fn add_sym(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.n + j] += x;
        if i != j {
            self.data[j * self.n + i] += x;
        }
    }
}

/// Sorted eigenvalues by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(m: &SymmetricMatrix) -> Vec<f64> {
    let n = m.n;
    let mut a = m.data.clone();
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-12 * frob.max(1.0);
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off < tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Normalized discrete Laplacian; loops count twice in degrees and adjacency.
pub fn normalized_laplacian(g: &MetricGraph) -> Result<SymmetricMatrix> {
    if !analyze(g).connected {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let mut m = SymmetricMatrix::zeros(n);
    let deg: Vec<f64> = g.vertex_ids().map(|v| g.degree(v) as f64).collect();
    for i in 0..n {
        m.add_sym(i, i, 1.0);
    }
    for e in g.edges() {
        let (v, w) = (e.low.0, e.high.0);
        if v == w {
            m.add_sym(v, v, -2.0 / deg[v]);
        } else {
            m.add_sym(v, w, -1.0 / (deg[v] * deg[w]).sqrt());
        }
    }
    Ok(m)
}

pub fn discrete_spectrum(g: &MetricGraph) -> Result<Vec<f64>> {
    Ok(symmetric_eigenvalues(&normalized_laplacian(g)?))
}

/// Standard-condition spectrum of a connected equilateral graph from the
/// normalized Laplacian via `1 - cos(kℓ) = μ`.
pub fn von_below_metric_spectrum(g: &MetricGraph, lambda_max: f64) -> Result<Spectrum> {
    let ell = g.equilateral_length().ok_or(Error::NotEquilateral)?;
    let a = analyze(g);
    if !a.connected {
        return Err(Error::Disconnected);
    }
    let mu = discrete_spectrum(g)?;
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for m in mu {
        match clusters.last_mut() {
            Some(c) if (m - c.0).abs() <= 1e-9 => c.1 += 1,
            _ => clusters.push((m, 1)),
        }
    }
    let generic: Vec<(f64, usize)> = clusters
        .into_iter()
        .filter(|&(m, _)| m > 1e-9 && m < 2.0 - 1e-9)
        .map(|(m, c)| ((1.0 - m).clamp(-1.0, 1.0).acos(), c))
        .collect();
    let odd = if a.bipartite { a.betti + 1 } else { a.betti.saturating_sub(1) };
    let even = a.betti + 1;
    let kmax = lambda_max.max(0.0).sqrt();
    let theta_max = kmax * ell * (1.0 + 1e-14);
    let mut phases: Vec<(f64, usize)> = vec![(0.0, 1)];
    let mut period = 0;
    while 2.0 * PI * period as f64 <= theta_max {
        let base = 2.0 * PI * period as f64;
        for &(t, c) in &generic {
            phases.push((base + t, c));
            phases.push((base + 2.0 * PI - t, c));
        }
        phases.push((base + PI, odd));
        phases.push((base + 2.0 * PI, even));
        period += 1;
    }
    phases.retain(|&(t, c)| c > 0 && t <= theta_max);
    phases.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for (t, c) in phases {
        match merged.last_mut() {
            Some(r) if t - r.0 <= 1e-9 => r.1 += c,
            _ => merged.push((t, c)),
        }
    }
    let records = merged.into_iter().map(|(t, c)| Eigenvalue::new(t / ell, c)).collect();
    Ok(Spectrum::new(records, lambda_max))
}

/// Lowest `count` eigenvalues of a three-point finite-difference model with `ρ`
/// nodes per unit length and lumped mass. Eigenvalues are located by bisection
/// on the inertia of `K - σM`: each edge chain contributes a closed-form count
/// and the vertex unknowns a small Schur complement.
pub fn finite_difference_spectrum(g: &MetricGraph, spec: &ConditionSpec, rho: f64, count: usize) -> Result<Vec<f64>> {
    let dirichlet: Vec<bool> = match spec.kind {
        ConditionKind::Standard => vec![false; g.vertex_count()],
        ConditionKind::AllDirichlet => vec![true; g.vertex_count()],
        ConditionKind::StandardDirichletB => {
            spec.validate(g)?;
            g.vertex_ids().map(|v| spec.boundary.contains(&v)).collect()
        }
        other => {
            return Err(Error::UnsupportedCondition(format!(
                "finite differences support standard, Dirichlet and standard-Dirichlet conditions, not {other:?}"
            )))
        }
    };
    let min_len = g.edges().iter().map(|e| e.length).fold(f64::INFINITY, f64::min);
    if !(rho.is_finite() && rho * min_len >= 8.0) {
        return Err(Error::InvalidParameter {
            name: "rho".into(),
            reason: format!("need at least 8 nodes on the shortest edge, got ρ·ℓ_min = {}", rho * min_len),
        });
    }
    let model = FdModel::new(g, &dirichlet, rho);
    let mut out = Vec::with_capacity(count);
    let mut hi = 1.0;
    for j in 1..=count {
        while model.negatives(hi) < j {
            hi *= 2.0;
            if hi > model.sigma_cap {
                return Err(Error::Numerical("finite-difference model has fewer eigenvalues than requested".into()));
            }
        }
        let mut lo = out.last().copied().unwrap_or(0.0);
        let mut top = hi;
        for _ in 0..200 {
            let mid = 0.5 * (lo + top);
            if mid <= lo || mid >= top {
                break;
            }
            if model.negatives(mid) < j {
                lo = mid;
            } else {
                top = mid;
            }
        }
        out.push(0.5 * (lo + top));
    }
    Ok(out)
}

struct FdChain {
    low: usize,
    high: usize,
    h: f64,
    interior: usize,
}

struct FdModel {
    chains: Vec<FdChain>,
    free: Vec<Option<usize>>,
    free_count: usize,
    sigma_cap: f64,
}

impl FdModel {
    fn new(g: &MetricGraph, dirichlet: &[bool], rho: f64) -> Self {
        let mut free = vec![None; g.vertex_count()];
        let mut free_count = 0;
        for (v, d) in dirichlet.iter().enumerate() {
            if !d {
                free[v] = Some(free_count);
                free_count += 1;
            }
        }
        let chains: Vec<FdChain> = g
            .edges()
            .iter()
            .map(|e| {
                let segments = (rho * e.length).ceil() as usize;
                FdChain {
                    low: e.low.0,
                    high: e.high.0,
                    h: e.length / segments as f64,
                    interior: segments - 1,
                }
            })
            .collect();
        let hmin = chains.iter().map(|c| c.h).fold(f64::INFINITY, f64::min);
        Self {
            chains,
            free,
            free_count,
            sigma_cap: 3.9 / (hmin * hmin),
        }
    }

    /// Number of negative eigenvalues of `K - σM`.
    fn negatives(&self, sigma: f64) -> usize {
        let mut total = 0;
        let mut schur = SymmetricMatrix::zeros(self.free_count);
        for c in &self.chains {
            let theta = 2.0 * (c.h * sigma.sqrt() / 2.0).min(1.0).asin();
            let m = c.interior;
            let n1 = (m + 1) as f64;
            total += (1..=m).filter(|&j| (j as f64) * PI / n1 < theta).count();
            let denom = (n1 * theta).sin();
            let g11 = (m as f64 * theta).sin() / denom;
            let g1m = theta.sin() / denom;
            let diag = 1.0 / c.h - sigma * c.h / 2.0;
            let (lo, hi) = (self.free[c.low], self.free[c.high]);
            if let Some(i) = lo {
                schur.add_sym(i, i, diag - g11 / c.h);
            }
            if let Some(j) = hi {
                schur.add_sym(j, j, diag - g11 / c.h);
            }
            if let (Some(i), Some(j)) = (lo, hi) {
                // a loop puts both couplings on the diagonal
                let scale = if i == j { 2.0 } else { 1.0 };
                schur.add_sym(i, j, -scale * g1m / c.h);
            }
        }
        total + symmetric_eigenvalues(&schur).iter().filter(|&&x| x < 0.0).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin::builtin;

    #[test]
    fn jacobi_small() {
        let id = SymmetricMatrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(symmetric_eigenvalues(&id), vec![1.0; 3]);
        let d = SymmetricMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(symmetric_eigenvalues(&d), vec![0.0, 2.0]);
        let r = SymmetricMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let ev = symmetric_eigenvalues(&r);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
        assert!(matches!(
            SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn loop_laplacian_entry() {
        let g = builtin("flower", &[1.0, 1.0]).unwrap();
        let m = normalized_laplacian(&g).unwrap();
        assert!(m.get(0, 0).abs() < 1e-15);
    }

    #[test]
    fn fd_neumann_interval() {
        let g = builtin("path", &[1.0]).unwrap();
        let ev = finite_difference_spectrum(&g, &ConditionSpec::standard(), 2000.0, 3).unwrap();
        assert!(ev[0].abs() < 1e-9);
        assert!((ev[1] - PI * PI).abs() < 1e-4 * PI * PI);
        assert!((ev[2] - 4.0 * PI * PI).abs() < 1e-4 * 4.0 * PI * PI);
    }

    #[test]
    fn fd_rejects_coarse_grid_and_ast() {
        let g = builtin("path", &[1.0]).unwrap();
        assert!(finite_difference_spectrum(&g, &ConditionSpec::standard(), 4.0, 1).is_err());
        assert!(matches!(
            finite_difference_spectrum(&g, &ConditionSpec::anti_standard(), 2000.0, 1),
            Err(Error::UnsupportedCondition(_))
        ));
    }
}
