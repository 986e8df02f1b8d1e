//! Vertex conditions as orthonormal constraint rows.
//!
//! Every supported family is scaling-invariant: at a vertex of degree `d` it is
//! given by a subspace `X+ ⊆ R^d` with the endpoint values in `X+` and the
//! inward derivatives in `X- = (X+)^⊥`. The constraint rows are orthonormal
//! bases of `(X+)^⊥` (acting on values) and of `X+` (acting on derivatives),
//! `d` rows in total.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{analyze, cycle_basis, GraphAnalysis, MetricGraph, VertexId};
use crate::secular::EdgeWave;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionKind {
    Standard,
    AntiStandard,
    AllDirichlet,
    /// Neumann at every endpoint; the dual of `AllDirichlet`.
    AllNeumann,
    /// Dirichlet on `B ⊆ ∂Γ`, standard elsewhere.
    StandardDirichletB,
    /// Neumann on `B ⊆ ∂Γ`, anti-standard elsewhere.
    AntiStandardNeumannB,
    ScalingInvariant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSpec {
    pub kind: ConditionKind,
    pub boundary: BTreeSet<VertexId>,
    /// Rows spanning `X+(v)` for `ScalingInvariant`; `ncols` is the degree.
    pub subspaces: BTreeMap<VertexId, DMatrix<f64>>,
}

impl ConditionSpec {
    fn of(kind: ConditionKind) -> Self {
        Self {
            kind,
            boundary: BTreeSet::new(),
            subspaces: BTreeMap::new(),
        }
    }

    pub fn standard() -> Self {
        Self::of(ConditionKind::Standard)
    }

    pub fn anti_standard() -> Self {
        Self::of(ConditionKind::AntiStandard)
    }

    pub fn dirichlet() -> Self {
        Self::of(ConditionKind::AllDirichlet)
    }

    pub fn neumann() -> Self {
        Self::of(ConditionKind::AllNeumann)
    }

    pub fn standard_dirichlet(boundary: impl IntoIterator<Item = VertexId>) -> Self {
        Self {
            boundary: boundary.into_iter().collect(),
            ..Self::of(ConditionKind::StandardDirichletB)
        }
    }

    pub fn anti_standard_neumann(boundary: impl IntoIterator<Item = VertexId>) -> Self {
        Self {
            boundary: boundary.into_iter().collect(),
            ..Self::of(ConditionKind::AntiStandardNeumannB)
        }
    }

    /// Scaling-invariant conditions from spanning rows of `X+(v)` at every vertex.
    /// The rows are orthonormalized; they must be linearly independent.
    pub fn scaling_invariant(subspaces: BTreeMap<VertexId, DMatrix<f64>>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (v, rows) in subspaces {
            let q = orthonormalize_rows(&rows).ok_or_else(|| Error::InconsistentSubspace {
                vertex: v.0,
                reason: "spanning rows are linearly dependent".into(),
            })?;
            out.insert(v, q);
        }
        Ok(Self {
            subspaces: out,
            ..Self::of(ConditionKind::ScalingInvariant)
        })
    }

    /// Checks the spec against a graph: mixed kinds need `B ⊆ ∂Γ`, scaling-invariant
    /// specs need a subspace of the right ambient dimension at every vertex.
    pub fn validate(&self, g: &MetricGraph) -> Result<()> {
        for &v in &self.boundary {
            if v.0 >= g.vertex_count() {
                return Err(Error::UnknownVertex(format!("#{}", v.0)));
            }
            if g.degree(v) != 1 {
                return Err(Error::BoundaryNotLeaf(g.vertex(v).label.clone()));
            }
        }
        if self.kind == ConditionKind::ScalingInvariant {
            for v in g.vertex_ids() {
                let Some(rows) = self.subspaces.get(&v) else {
                    return Err(Error::InconsistentSubspace {
                        vertex: v.0,
                        reason: "no subspace given".into(),
                    });
                };
                if rows.ncols() != g.degree(v) || rows.nrows() > rows.ncols() {
                    return Err(Error::InconsistentSubspace {
                        vertex: v.0,
                        reason: format!(
                            "{}x{} basis for a vertex of degree {}",
                            rows.nrows(),
                            rows.ncols(),
                            g.degree(v)
                        ),
                    });
                }
            }
            if let Some(&v) = self.subspaces.keys().find(|v| v.0 >= g.vertex_count()) {
                return Err(Error::UnknownVertex(format!("#{}", v.0)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRows {
    /// Rows annihilating the endpoint-value vector.
    pub value_rows: DMatrix<f64>,
    /// Rows annihilating the inward-derivative vector.
    pub derivative_rows: DMatrix<f64>,
}

impl ConditionRows {
    /// Orthogonal projector onto `X+`.
    pub fn positive_projector(&self) -> DMatrix<f64> {
        self.derivative_rows.transpose() * &self.derivative_rows
    }

    pub fn degree(&self) -> usize {
        self.value_rows.ncols()
    }
}

/// Orthonormal basis of `span{(1,...,1)}^⊥` in `R^d` (Helmert rows).
fn ones_complement(d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d.saturating_sub(1), d, |i, j| {
        let j1 = (i + 1) as f64;
        let scale = 1.0 / (j1 * (j1 + 1.0)).sqrt();
        match j.cmp(&(i + 1)) {
            std::cmp::Ordering::Less => scale,
            std::cmp::Ordering::Equal => -j1 * scale,
            std::cmp::Ordering::Greater => 0.0,
        }
    })
}

fn ones_row(d: usize) -> DMatrix<f64> {
    DMatrix::from_element(1, d, 1.0 / (d as f64).sqrt())
}

/// Modified Gram-Schmidt on rows; `None` when the rows are dependent.
pub(crate) fn orthonormalize_rows(rows: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for i in 0..rows.nrows() {
        let mut v: Vec<f64> = rows.row(i).iter().copied().collect();
        let n0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for _ in 0..2 {
            for q in &out {
                let dot: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n <= 1e-10 * n0.max(f64::MIN_POSITIVE) || n == 0.0 {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= n);
        out.push(v);
    }
    Some(DMatrix::from_fn(out.len(), rows.ncols(), |i, j| out[i][j]))
}

/// Orthonormal basis of the orthogonal complement of the span of orthonormal `rows`.
pub(crate) fn orthonormal_complement(rows: &DMatrix<f64>) -> DMatrix<f64> {
    let d = rows.ncols();
    let mut basis: Vec<Vec<f64>> = (0..rows.nrows()).map(|i| rows.row(i).iter().copied().collect()).collect();
    let start = basis.len();
    for j in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = vec![0.0; d];
        v[j] = 1.0;
        for _ in 0..2 {
            for q in &basis {
                let dot: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    let extra = &basis[start..];
    DMatrix::from_fn(extra.len(), d, |i, j| extra[i][j])
}

/// Constraint rows at vertex `v` of degree `d`.
pub fn condition_rows(v: VertexId, d: usize, spec: &ConditionSpec) -> Result<ConditionRows> {
    use ConditionKind::*;
    let empty = || DMatrix::zeros(0, d);
    let in_b = spec.boundary.contains(&v);
    let (value_rows, derivative_rows) = match spec.kind {
        Standard => (ones_complement(d), ones_row(d)),
        AntiStandard => (ones_row(d), ones_complement(d)),
        AllDirichlet => (DMatrix::identity(d, d), empty()),
        AllNeumann => (empty(), DMatrix::identity(d, d)),
        StandardDirichletB if in_b => (DMatrix::identity(d, d), empty()),
        StandardDirichletB => (ones_complement(d), ones_row(d)),
        AntiStandardNeumannB if in_b => (empty(), DMatrix::identity(d, d)),
        AntiStandardNeumannB => (ones_row(d), ones_complement(d)),
        ScalingInvariant => {
            let plus = spec.subspaces.get(&v).ok_or_else(|| Error::InconsistentSubspace {
                vertex: v.0,
                reason: "no subspace given".into(),
            })?;
            if plus.ncols() != d || plus.nrows() > d {
                return Err(Error::InconsistentSubspace {
                    vertex: v.0,
                    reason: format!("basis of shape {}x{} at degree {d}", plus.nrows(), plus.ncols()),
                });
            }
            (orthonormal_complement(plus), plus.clone())
        }
    };
    if (StandardDirichletB == spec.kind || AntiStandardNeumannB == spec.kind) && in_b && d != 1 {
        return Err(Error::BoundaryNotLeaf(format!("#{}", v.0)));
    }
    Ok(ConditionRows {
        value_rows,
        derivative_rows,
    })
}

/// Rows for every vertex of `g`, after validating `spec`.
pub fn all_condition_rows(g: &MetricGraph, spec: &ConditionSpec) -> Result<Vec<ConditionRows>> {
    spec.validate(g)?;
    g.vertex_ids().map(|v| condition_rows(v, g.degree(v), spec)).collect()
}

/// Dual conditions: `X+` and `X-` interchanged at every vertex.
pub fn dual(spec: &ConditionSpec) -> ConditionSpec {
    use ConditionKind::*;
    match spec.kind {
        Standard => ConditionSpec::anti_standard(),
        AntiStandard => ConditionSpec::standard(),
        AllDirichlet => ConditionSpec::neumann(),
        AllNeumann => ConditionSpec::dirichlet(),
        StandardDirichletB => ConditionSpec::anti_standard_neumann(spec.boundary.iter().copied()),
        AntiStandardNeumannB => ConditionSpec::standard_dirichlet(spec.boundary.iter().copied()),
        ScalingInvariant => ConditionSpec {
            subspaces: spec
                .subspaces
                .iter()
                .map(|(&v, plus)| (v, orthonormal_complement(plus)))
                .collect(),
            ..ConditionSpec::of(ScalingInvariant)
        },
    }
}

/// Dual conditions of the Laplacian `D D*` built from the momentum operator.
/// The subspace swap is only the correct dual on bipartite graphs with edges
/// oriented between the two colour classes.
pub fn momentum_dual(g: &MetricGraph, spec: &ConditionSpec) -> Result<ConditionSpec> {
    if !analyze(g).bipartite {
        return Err(Error::NotBipartite);
    }
    Ok(dual(spec))
}

/// Same operator expressed through explicit `X+` subspaces.
pub fn to_scaling_invariant(g: &MetricGraph, spec: &ConditionSpec) -> Result<ConditionSpec> {
    let rows = all_condition_rows(g, spec)?;
    Ok(ConditionSpec {
        subspaces: g
            .vertex_ids()
            .zip(rows)
            .map(|(v, r)| (v, r.derivative_rows))
            .collect(),
        ..ConditionSpec::of(ConditionKind::ScalingInvariant)
    })
}

/// Kernel dimension from the combinatorics of a connected graph.
pub fn kernel_dimension_combinatorial(g: &MetricGraph, spec: &ConditionSpec) -> Result<usize> {
    let a = analyze(g);
    kernel_dimension_with(g, spec, &a)
}

pub(crate) fn kernel_dimension_with(g: &MetricGraph, spec: &ConditionSpec, a: &GraphAnalysis) -> Result<usize> {
    use ConditionKind::*;
    if !a.connected {
        return Err(Error::Disconnected);
    }
    spec.validate(g)?;
    let anti = |a: &GraphAnalysis| if a.bipartite { a.betti } else { a.betti - 1 };
    match spec.kind {
        Standard => Ok(1),
        AntiStandard => Ok(anti(a)),
        AllDirichlet => Ok(0),
        AllNeumann => Ok(g.edge_count()),
        StandardDirichletB => Ok(usize::from(spec.boundary.is_empty())),
        AntiStandardNeumannB if spec.boundary.is_empty() => Ok(anti(a)),
        AntiStandardNeumannB if a.bipartite => Ok(a.betti + spec.boundary.len() - 1),
        AntiStandardNeumannB => Err(Error::UnsupportedCondition(
            "no combinatorial kernel formula for Neumann-anti-standard conditions on non-bipartite graphs".into(),
        )),
        ScalingInvariant => Err(Error::UnsupportedCondition(
            "no combinatorial kernel formula for general scaling-invariant conditions".into(),
        )),
    }
}

/// Edgewise-constant anti-standard kernel functions: `±1` alternating along each
/// fundamental cycle, zero elsewhere.
pub fn kernel_basis_ast(g: &MetricGraph) -> Result<Vec<EdgeWave>> {
    let a = analyze(g);
    if !a.connected {
        return Err(Error::Disconnected);
    }
    if !a.bipartite {
        return Err(Error::NotBipartite);
    }
    let basis = cycle_basis(g)?;
    Ok(basis
        .fundamental_cycles
        .iter()
        .map(|cycle| {
            let mut coeffs = vec![(0.0, 0.0); g.edge_count()];
            for (i, s) in cycle.iter().enumerate() {
                coeffs[s.edge.0].0 = if i % 2 == 0 { 1.0 } else { -1.0 };
            }
            EdgeWave { k: 0.0, coeffs }
        })
        .collect())
}
