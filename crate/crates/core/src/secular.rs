//! Secular-matrix root finding.
//!
//! On edge `n` an eigenfunction is `a_n cos(kx) + b_n sin(kx)` (or `a_n + b_n x`
//! at `k = 0`). Stacking the vertex condition rows against the endpoint traces
//! gives a `2E x 2E` real matrix whose nullity at `k` is the multiplicity of
//! `k²`. Roots are located on a `σ_min` grid, then checked against an exact
//! eigenvalue count taken from the eigenphases of the unitary bond matrix
//! `W(k) = S R U(k)` with `S = ⊕ (2 P_v - I)`.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::conditions::{all_condition_rows, ConditionRows, ConditionSpec};
use crate::error::{Error, Result};
use crate::graph::{analyze, Endpoint, MetricGraph, Side};
use crate::spectrum::Spectrum;

/// Per-edge coefficients `(a_n, b_n)` of a solution of `-f'' = k² f`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWave {
    pub k: f64,
    pub coeffs: Vec<(f64, f64)>,
}

impl EdgeWave {
    pub fn value(&self, edge: usize, x: f64) -> f64 {
        let (a, b) = self.coeffs[edge];
        if self.k == 0.0 {
            a + b * x
        } else {
            a * (self.k * x).cos() + b * (self.k * x).sin()
        }
    }

    /// `L²` inner product over the whole graph, in closed form.
    pub fn inner(&self, other: &EdgeWave, g: &MetricGraph) -> f64 {
        let k = self.k;
        g.edges()
            .iter()
            .zip(self.coeffs.iter().zip(&other.coeffs))
            .map(|(e, (&(a1, b1), &(a2, b2)))| {
                let (icc, iss, ics) = basis_integrals(k, e.length);
                a1 * a2 * icc + b1 * b2 * iss + (a1 * b2 + b1 * a2) * ics
            })
            .sum()
    }

    pub fn norm(&self, g: &MetricGraph) -> f64 {
        self.inner(self, g).sqrt()
    }
}

/// `(∫c², ∫s², ∫cs)` over `[0, L]` for the basis pair of the wave at `k`.
fn basis_integrals(k: f64, len: f64) -> (f64, f64, f64) {
    if k == 0.0 {
        (len, len.powi(3) / 3.0, len * len / 2.0)
    } else {
        let s2 = (2.0 * k * len).sin() / (4.0 * k);
        let s = (k * len).sin();
        (len / 2.0 + s2, len / 2.0 - s2, s * s / (2.0 * k))
    }
}

/// Value trace and inward derivative trace (divided by `k` when `k > 0`) at an
/// endpoint, each as coefficients of `(a, b)`.
fn traces(side: Side, k: f64, len: f64) -> ([f64; 2], [f64; 2]) {
    match side {
        Side::Low => ([1.0, 0.0], [0.0, 1.0]),
        Side::High if k == 0.0 => ([1.0, len], [0.0, -1.0]),
        Side::High => {
            let (s, c) = (k * len).sin_cos();
            ([c, s], [s, -c])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Grid samples per mean eigenvalue gap `π / L(Γ)`.
    pub samples_per_gap: usize,
    /// Weyl-triggered rescans at halved step.
    pub max_rescans: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            samples_per_gap: 20,
            max_rescans: 4,
        }
    }
}

const ACCEPT_SIGMA: f64 = 1e-9;
const NULLITY_REL: f64 = 1e-7;
const MERGE_TOL: f64 = 1e-8;

/// Vertex conditions of one graph, ready for repeated assembly at different `k`.
#[derive(Debug, Clone)]
pub struct SecularSystem {
    lengths: Vec<f64>,
    vertex_endpoints: Vec<Vec<Endpoint>>,
    rows: Vec<ConditionRows>,
    /// `S R` in the global endpoint ordering.
    scatter_swap: DMatrix<f64>,
    unit_phases_at_zero: usize,
}

impl SecularSystem {
    pub fn new(g: &MetricGraph, spec: &ConditionSpec) -> Result<Self> {
        let rows = all_condition_rows(g, spec)?;
        let n = 2 * g.edge_count();
        let mut scatter = DMatrix::zeros(n, n);
        for (v, r) in g.vertices().iter().zip(&rows) {
            let p = r.positive_projector();
            for (i, ei) in v.endpoints.iter().enumerate() {
                for (j, ej) in v.endpoints.iter().enumerate() {
                    let id = if i == j { 1.0 } else { 0.0 };
                    scatter[(ei.index(), ej.index())] = 2.0 * p[(i, j)] - id;
                }
            }
        }
        let scatter_swap = DMatrix::from_fn(n, n, |i, j| scatter[(i, j ^ 1)]);
        let fixed = DMatrix::identity(n, n) - &scatter_swap;
        let unit_phases_at_zero = fixed.singular_values().iter().filter(|&&s| s < 1e-8).count();
        Ok(Self {
            lengths: g.edges().iter().map(|e| e.length).collect(),
            vertex_endpoints: g.vertices().iter().map(|v| v.endpoints.clone()).collect(),
            rows,
            scatter_swap,
            unit_phases_at_zero,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// Secular matrix at `k ≥ 0`, columns `(a_1, b_1, a_2, b_2, ...)`.
    pub fn matrix(&self, k: f64) -> DMatrix<f64> {
        let n = 2 * self.edge_count();
        let mut m = DMatrix::zeros(n, n);
        let mut row = 0;
        for (eps, r) in self.vertex_endpoints.iter().zip(&self.rows) {
            let tr: Vec<_> = eps
                .iter()
                .map(|ep| traces(ep.side, k, self.lengths[ep.edge.0]))
                .collect();
            for (block, pick) in [(&r.value_rows, 0usize), (&r.derivative_rows, 1)] {
                for i in 0..block.nrows() {
                    for (j, ep) in eps.iter().enumerate() {
                        let w = block[(i, j)];
                        if w == 0.0 {
                            continue;
                        }
                        let t = if pick == 0 { tr[j].0 } else { tr[j].1 };
                        let col = 2 * ep.edge.0;
                        m[(row, col)] += w * t[0];
                        m[(row, col + 1)] += w * t[1];
                    }
                    row += 1;
                }
            }
        }
        m
    }

    pub fn singular_values(&self, k: f64) -> Vec<f64> {
        self.matrix(k).singular_values().iter().copied().collect()
    }

    pub fn sigma_min(&self, k: f64) -> f64 {
        self.matrix(k).singular_values().min()
    }

    /// Number of singular values below `1e-7 max(σ_max, 1)`.
    pub fn nullity(&self, k: f64) -> usize {
        nullity_of(&self.singular_values(k))
    }

    /// Exact number of eigenvalues `k_j² ` with `0 < k_j < t`, counted with
    /// multiplicity, from the winding of the eigenphases of `W(k)`.
    pub fn count_below(&self, t: f64) -> Result<usize> {
        let n = 2 * self.edge_count();
        let phase: Vec<Complex<f64>> = (0..n)
            .map(|j| Complex::from_polar(1.0, t * self.lengths[j / 2]))
            .collect();
        let w = DMatrix::from_fn(n, n, |i, j| phase[j] * self.scatter_swap[(i, j)]);
        let phases = unitary_phases(&w)
            .ok_or_else(|| Error::Numerical(format!("bond matrix eigenphases did not converge at k = {t}")))?;
        let eta = 1e-12;
        let phase_sum: f64 = phases.iter().map(|&p| if p < -eta { p + 2.0 * PI } else { p }).sum();
        let winding = PI * (n - self.unit_phases_at_zero) as f64 + 2.0 * t * self.total_length() - phase_sum;
        Ok((winding / (2.0 * PI)).round().max(0.0) as usize)
    }
}

/// Eigenphases in `(-π, π]` of a unitary matrix. The Hermitian part is
/// diagonalized first; within each cluster of equal cosines the skew part
/// separates `±φ`, and each phase is read off a Rayleigh quotient.
fn unitary_phases(w: &DMatrix<Complex<f64>>) -> Option<Vec<f64>> {
    let n = w.nrows();
    let adj = w.adjoint();
    let herm = (w + &adj).map(|z| z * 0.5);
    let skew = (w - &adj).map(|z| z * Complex::new(0.0, -0.5));
    let outer = SymmetricEigen::try_new(herm, f64::EPSILON, 100_000)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| outer.eigenvalues[a].total_cmp(&outer.eigenvalues[b]));
    let mut phases = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && outer.eigenvalues[order[end]] - outer.eigenvalues[order[end - 1]] <= 1e-8 {
            end += 1;
        }
        let q = DMatrix::from_fn(n, end - start, |i, j| outer.eigenvectors[(i, order[start + j])]);
        let restricted = q.adjoint() * &skew * &q;
        let restricted = (&restricted + restricted.adjoint()).map(|z| z * 0.5);
        let inner = SymmetricEigen::try_new(restricted, f64::EPSILON, 100_000)?;
        let z = &q * &inner.eigenvectors;
        for col in z.column_iter() {
            phases.push((col.adjoint() * w * col)[(0, 0)].arg());
        }
        start = end;
    }
    Some(phases)
}

fn nullity_of(sv: &[f64]) -> usize {
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s < NULLITY_REL * top.max(1.0)).count()
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a) <= 4.0 * f64::EPSILON * b.abs().max(1e-300) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Secular matrix at `k > 0`.
pub fn assemble(g: &MetricGraph, spec: &ConditionSpec, k: f64) -> Result<DMatrix<f64>> {
    Ok(SecularSystem::new(g, spec)?.matrix(k))
}

fn orthonormalize_waves(g: &MetricGraph, waves: Vec<EdgeWave>) -> Vec<EdgeWave> {
    let mut out: Vec<EdgeWave> = Vec::new();
    for mut w in waves {
        for _ in 0..2 {
            for q in &out {
                let dot = w.inner(q, g);
                for (c, qc) in w.coeffs.iter_mut().zip(&q.coeffs) {
                    c.0 -= dot * qc.0;
                    c.1 -= dot * qc.1;
                }
            }
        }
        let n = w.norm(g);
        if n > 1e-12 {
            for c in &mut w.coeffs {
                c.0 /= n;
                c.1 /= n;
            }
            out.push(w);
        }
    }
    out
}

fn null_waves(g: &MetricGraph, m: DMatrix<f64>, k: f64) -> (Vec<EdgeWave>, f64) {
    let svd = m.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let top = sv.iter().copied().fold(0.0, f64::max);
    let sigma_min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let waves = sv
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < NULLITY_REL * top.max(1.0))
        .map(|(i, _)| EdgeWave {
            k,
            coeffs: (0..g.edge_count())
                .map(|e| (v_t[(i, 2 * e)], v_t[(i, 2 * e + 1)]))
                .collect(),
        })
        .collect();
    (orthonormalize_waves(g, waves), sigma_min)
}

/// Dimension and `L²`-orthonormal basis of the kernel (piecewise linear functions).
pub fn solve_zero_modes(g: &MetricGraph, spec: &ConditionSpec) -> Result<(usize, Vec<EdgeWave>)> {
    let sys = SecularSystem::new(g, spec)?;
    let (waves, _) = null_waves(g, sys.matrix(0.0), 0.0);
    Ok((waves.len(), waves))
}

/// `L²`-orthonormal eigenfunctions at a root `k > 0`.
pub fn eigenfunctions(g: &MetricGraph, spec: &ConditionSpec, k: f64) -> Result<Vec<EdgeWave>> {
    let sys = SecularSystem::new(g, spec)?;
    let (waves, sigma_min) = null_waves(g, sys.matrix(k), k);
    if waves.is_empty() {
        return Err(Error::NotARoot { k, sigma_min });
    }
    Ok(waves)
}

/// Largest violation `|row · trace|` of the vertex conditions by `f`, at `f.k`.
pub fn residual(g: &MetricGraph, spec: &ConditionSpec, f: &EdgeWave) -> Result<f64> {
    let sys = SecularSystem::new(g, spec)?;
    let m = sys.matrix(f.k);
    let x = DMatrix::from_fn(2 * g.edge_count(), 1, |i, _| {
        let (a, b) = f.coeffs[i / 2];
        if i % 2 == 0 {
            a
        } else {
            b
        }
    });
    Ok((m * x).abs().max())
}

/// Momentum operator `(1/i) d/dx` with edges oriented from colour class 0 to
/// colour class 1: `(a, b) -> ±(b, -a)`, up to the global factor `-ik`.
pub fn apply_momentum(g: &MetricGraph, f: &EdgeWave) -> Result<EdgeWave> {
    let colours = analyze(g).bipartition.ok_or(Error::NotBipartite)?;
    if f.k <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "k".into(),
            reason: "momentum map needs k > 0".into(),
        });
    }
    Ok(EdgeWave {
        k: f.k,
        coeffs: g
            .edges()
            .iter()
            .zip(&f.coeffs)
            .map(|(e, &(a, b))| {
                let s = if colours[e.low.0] == 0 { 1.0 } else { -1.0 };
                (s * b, -s * a)
            })
            .collect(),
    })
}

struct Scan<'a> {
    sys: &'a SecularSystem,
}

impl Scan<'_> {
    fn refine(&self, a: f64, b: f64) -> (f64, f64) {
        golden_min(|k| self.sys.sigma_min(k), a, b)
    }

    /// Accepted `σ_min` minima on the grid, merged at `MERGE_TOL`.
    fn grid_roots(&self, step: f64, kmax: f64) -> Vec<f64> {
        let mut ks = vec![0.01 * step];
        let mut i = 1;
        while (i as f64) * step < kmax {
            ks.push(i as f64 * step);
            i += 1;
        }
        ks.push(kmax);
        let sig: Vec<f64> = ks.iter().map(|&k| self.sys.sigma_min(k)).collect();
        let mut roots: Vec<f64> = Vec::new();
        for i in 0..ks.len() {
            let left = i == 0 || sig[i] <= sig[i - 1];
            let right = i + 1 == ks.len() || sig[i] <= sig[i + 1];
            if !(left && right) {
                continue;
            }
            let a = ks[i.saturating_sub(1)];
            let b = ks[(i + 1).min(ks.len() - 1)];
            let (k, s) = self.refine(a, b);
            if s < ACCEPT_SIGMA && roots.last().is_none_or(|&r| k - r > MERGE_TOL) {
                roots.push(k);
            }
        }
        roots
    }

    /// All eigenvalues in `(a, b)` by bisection on the exact count.
    fn isolate(&self, a: f64, na: usize, b: f64, nb: usize, out: &mut Vec<(f64, usize)>) -> Result<()> {
        if nb <= na {
            return Ok(());
        }
        if b - a <= 1e-10 * b.max(1.0) {
            let (k, _) = self.refine(a, b);
            out.push((k, nb - na));
            return Ok(());
        }
        let mid = 0.5 * (a + b);
        let nm = self.sys.count_below(mid)?;
        self.isolate(a, na, mid, nm.clamp(na, nb), out)?;
        self.isolate(mid, nm.clamp(na, nb), b, nb, out)
    }

    /// Assigns multiplicities from count jumps; segments whose count disagrees
    /// with the grid roots are re-isolated from the count alone.
    fn reconcile(&self, roots: &[f64], kmax: f64, step: f64) -> Result<Vec<(f64, usize)>> {
        let mut probes = vec![1e-3 * step];
        probes.extend(roots.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        probes.push(kmax * (1.0 + 1e-12));
        let counts = probes
            .iter()
            .map(|&p| self.sys.count_below(p))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        self.isolate(0.0, 0, probes[0], counts[0], &mut out)?;
        for s in 0..probes.len() - 1 {
            let (lo, hi) = (probes[s], probes[s + 1]);
            let (nlo, nhi) = (counts[s], counts[s + 1].max(counts[s]));
            let expected = nhi - nlo;
            if expected == 0 {
                continue;
            }
            match roots.get(s) {
                Some(&r) if r > lo && r < hi => {
                    let d = 0.5 * MERGE_TOL;
                    let below = self.sys.count_below((r - d).max(lo))?;
                    let above = self.sys.count_below((r + d).min(hi))?;
                    if below == nlo && above == nhi {
                        out.push((r, expected));
                    } else {
                        self.isolate(lo, nlo, hi, nhi, &mut out)?;
                    }
                }
                _ => self.isolate(lo, nlo, hi, nhi, &mut out)?,
            }
        }
        out.retain(|&(k, _)| k <= kmax * (1.0 + 1e-12));
        Ok(out)
    }
}

/// All eigenvalues `λ ≤ λ_max` with multiplicity, zero modes first.
pub fn find_spectrum(g: &MetricGraph, spec: &ConditionSpec, lambda_max: f64, opts: &SolverOptions) -> Result<Spectrum> {
    if !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda_max".into(),
            reason: format!("must be positive and finite, got {lambda_max}"),
        });
    }
    let sys = SecularSystem::new(g, spec)?;
    let (zero, _) = null_waves(g, sys.matrix(0.0), 0.0);
    let kmax = lambda_max.sqrt();
    let total = sys.total_length();
    let mut step = PI / (opts.samples_per_gap.max(1) as f64 * total);
    let scan = Scan { sys: &sys };
    let bound = (2 * g.edge_count() + 2) as f64;
    let mut last = (0, 0.0);
    for _ in 0..=opts.max_rescans {
        let roots = scan.grid_roots(step, kmax);
        let mut all = Vec::new();
        if !zero.is_empty() {
            all.push((0.0, zero.len()));
        }
        all.extend(scan.reconcile(&roots, kmax, step)?);
        let spectrum = Spectrum::from_roots(all, lambda_max, MERGE_TOL);
        let expected = total * kmax / PI;
        let found = spectrum.count();
        if (found as f64 - expected).abs() <= bound {
            return Ok(spectrum);
        }
        last = (found, expected);
        step /= 2.0;
    }
    Err(Error::WeylMismatch {
        k: kmax,
        found: last.0,
        expected: last.1,
        lo: 0.0,
        hi: kmax,
    })
}

/// Smallest spectrum that contains at least `n` eigenvalues with multiplicity.
pub fn lowest_eigenvalues(g: &MetricGraph, spec: &ConditionSpec, n: usize, opts: &SolverOptions) -> Result<Spectrum> {
    let total = g.total_length();
    let mut k = PI * (n + 2 * g.edge_count() + 2) as f64 / total;
    loop {
        let s = find_spectrum(g, spec, k * k, opts)?;
        if s.count() >= n {
            return Ok(s);
        }
        k *= 2.0;
    }
}

/// Convenience: the first `n` eigenvalues with multiplicity.
pub fn first_eigenvalues(g: &MetricGraph, spec: &ConditionSpec, n: usize) -> Result<Vec<f64>> {
    let mut v = lowest_eigenvalues(g, spec, n, &SolverOptions::default())?.expanded();
    v.truncate(n);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin::builtin;

    #[test]
    fn dirichlet_interval_matrix() {
        let g = builtin("path", &[PI]).unwrap();
        let m = assemble(&g, &ConditionSpec::dirichlet(), 1.0).unwrap();
        assert!((m[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((m[(1, 0)] + 1.0).abs() < 1e-15);
        assert!(m[(1, 1)].abs() < 1e-15);
        assert_eq!(nullity_of(m.singular_values().as_slice()), 1);
    }

    #[test]
    fn unitary_phases_with_degeneracy() {
        let raw = DMatrix::from_fn(6, 6, |i, j| ((i * 7 + j * 3) as f64).sin());
        let q = raw.qr().q();
        let want = [0.3, 0.3, -0.3, 2.0, PI - 1e-3, 0.0];
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            6,
            want.iter().map(|&p| Complex::from_polar(1.0, p)),
        ));
        let qc = q.map(|x| Complex::new(x, 0.0));
        let w = &qc * d * qc.transpose();
        let mut got = unitary_phases(&w).unwrap();
        got.sort_by(f64::total_cmp);
        let mut want = want.to_vec();
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{got:?}");
        }
    }

    #[test]
    fn loop_double_root() {
        let g = builtin("loop", &[1.0]).unwrap();
        let sys = SecularSystem::new(&g, &ConditionSpec::standard()).unwrap();
        assert_eq!(sys.nullity(2.0 * PI), 2);
        assert_eq!(sys.nullity(PI), 0);
    }

    #[test]
    fn count_matches_interval() {
        let g = builtin("path", &[1.0]).unwrap();
        let sys = SecularSystem::new(&g, &ConditionSpec::standard()).unwrap();
        for (t, n) in [(0.5, 0), (PI - 0.1, 0), (PI + 0.1, 1), (3.0 * PI + 0.1, 3)] {
            assert_eq!(sys.count_below(t).unwrap(), n, "t = {t}");
        }
        let sys = SecularSystem::new(&g, &ConditionSpec::dirichlet()).unwrap();
        assert_eq!(sys.count_below(2.0 * PI + 0.1).unwrap(), 2);
    }

    #[test]
    fn interval_spectrum() {
        let g = builtin("path", &[1.0]).unwrap();
        let s = find_spectrum(&g, &ConditionSpec::standard(), 10.0 * 10.0, &SolverOptions::default()).unwrap();
        let ks: Vec<f64> = s.records.iter().map(|r| r.k).collect();
        assert_eq!(ks.len(), 4);
        for (m, k) in ks.iter().enumerate() {
            assert!((k - m as f64 * PI).abs() < 1e-10);
        }
    }

    #[test]
    fn momentum_twice_negates() {
        let g = builtin("path", &[1.0]).unwrap();
        let f = EdgeWave { k: 2.0, coeffs: vec![(0.3, -0.7)] };
        let ff = apply_momentum(&g, &apply_momentum(&g, &f).unwrap()).unwrap();
        assert_eq!(ff.coeffs, vec![(-0.3, 0.7)]);
    }
}
