use crate::error::{Error, Result};
use crate::graph::MetricGraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub k: f64,
    pub lambda: f64,
    pub multiplicity: usize,
}

impl Eigenvalue {
    pub fn new(k: f64, multiplicity: usize) -> Self {
        Self {
            k,
            lambda: k * k,
            multiplicity,
        }
    }
}

/// Distinct eigenvalues sorted by `k`, complete on `[0, complete_up_to]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub records: Vec<Eigenvalue>,
    pub complete_up_to: f64,
}

impl Spectrum {
    pub fn new(records: Vec<Eigenvalue>, complete_up_to: f64) -> Self {
        Self {
            records,
            complete_up_to,
        }
    }

    /// Builds records from sorted `(k, multiplicity)` pairs, merging `k` values
    /// closer than `merge_tol` (absolute).
    pub fn from_roots(mut roots: Vec<(f64, usize)>, complete_up_to: f64, merge_tol: f64) -> Self {
        roots.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut records: Vec<Eigenvalue> = Vec::new();
        let mut weighted = 0.0;
        for (k, m) in roots.into_iter().filter(|r| r.1 > 0) {
            match records.last_mut() {
                Some(last) if k - last.k <= merge_tol && (last.k > 0.0 || k == 0.0) => {
                    weighted += k * m as f64;
                    last.multiplicity += m;
                    last.k = weighted / last.multiplicity as f64;
                    last.lambda = last.k * last.k;
                }
                _ => {
                    weighted = k * m as f64;
                    records.push(Eigenvalue::new(k, m));
                }
            }
        }
        Self::new(records, complete_up_to)
    }

    /// Total number of eigenvalues counted with multiplicity.
    pub fn count(&self) -> usize {
        self.records.iter().map(|r| r.multiplicity).sum()
    }

    pub fn zero_modes(&self) -> usize {
        self.records.iter().filter(|r| r.k == 0.0).map(|r| r.multiplicity).sum()
    }

    /// Eigenvalues `λ` repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.records
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.lambda, r.multiplicity))
            .collect()
    }

    /// `λ_n`, counted from 1 with multiplicity.
    pub fn nth(&self, n: usize) -> Option<f64> {
        if n == 0 {
            return None;
        }
        let mut seen = 0;
        for r in &self.records {
            seen += r.multiplicity;
            if seen >= n {
                return Some(r.lambda);
            }
        }
        None
    }

    /// Largest `λ` present.
    pub fn max_lambda(&self) -> Option<f64> {
        self.records.last().map(|r| r.lambda)
    }

    /// Spectrum of the same graph with every length multiplied by `c`.
    pub fn rescaled(&self, c: f64) -> Self {
        Self::new(
            self.records
                .iter()
                .map(|r| Eigenvalue::new(r.k / c, r.multiplicity))
                .collect(),
            self.complete_up_to / (c * c),
        )
    }
}

/// Closed-form spectrum of the Dirichlet Laplacian: the union over edges of
/// `(mπ/L(e))²`, with coincidences merged at relative `1e-12`.
pub fn dirichlet_spectrum(g: &MetricGraph, lambda_max: f64) -> Result<Spectrum> {
    if !(lambda_max.is_finite() && lambda_max >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda_max".into(),
            reason: format!("must be finite and non-negative, got {lambda_max}"),
        });
    }
    let kmax = lambda_max.sqrt();
    let mut ks: Vec<(f64, usize)> = Vec::new();
    for e in g.edges() {
        let step = std::f64::consts::PI / e.length;
        let mut m = 1usize;
        loop {
            let k = m as f64 * step;
            if k * k > lambda_max * (1.0 + 1e-14) {
                break;
            }
            ks.push((k, 1));
            m += 1;
        }
    }
    ks.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut records: Vec<Eigenvalue> = Vec::new();
    for (k, _) in ks {
        match records.last_mut() {
            Some(last) if (k - last.k).abs() <= 1e-12 * k => last.multiplicity += 1,
            _ => records.push(Eigenvalue::new(k, 1)),
        }
    }
    records.retain(|r| r.k <= kmax * (1.0 + 1e-14));
    Ok(Spectrum::new(records, lambda_max))
}
