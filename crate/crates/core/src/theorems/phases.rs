use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::{analyze, EdgeId, MetricGraph, VertexId};

/// Edge phases `φ_e ∈ [0, 2π)` whose unit vectors cancel at every interior vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAssignment {
    pub phases: Vec<f64>,
}

impl PhaseAssignment {
    /// `|Σ_e e^{iφ_e}|` over edges at `v` (loops counted per endpoint).
    pub fn vertex_residual(&self, g: &MetricGraph, v: VertexId) -> f64 {
        let (re, im) = g
            .incident(v)
            .map(|(e, _)| self.phases[e.0])
            .fold((0.0, 0.0), |(re, im), p| (re + p.cos(), im + p.sin()));
        re.hypot(im)
    }

    pub fn max_interior_residual(&self, g: &MetricGraph) -> f64 {
        g.vertex_ids()
            .filter(|&v| g.degree(v) > 1)
            .map(|v| self.vertex_residual(g, v))
            .fold(0.0, f64::max)
    }
}

/// Breadth-first from the first boundary vertex: the edge entering a vertex
/// keeps its phase, the other `d - 1` edges get the remaining `d`-th roots of
/// unity rotated by it.
pub fn assign_tree_phases(g: &MetricGraph) -> Result<PhaseAssignment> {
    let a = analyze(g);
    if !a.is_tree() {
        return Err(Error::NotATree);
    }
    let root = *a.boundary.iter().min().ok_or(Error::NotATree)?;
    let mut phases = vec![f64::NAN; g.edge_count()];
    let (first, next) = g.incident(root).next().expect("boundary vertex has an edge");
    phases[first.0] = 0.0;
    let mut queue: VecDeque<(VertexId, EdgeId)> = VecDeque::from([(next, first)]);
    while let Some((v, entering)) = queue.pop_front() {
        let d = g.degree(v);
        let base = phases[entering.0];
        let others = g.incident(v).filter(|&(e, _)| e != entering);
        for (j, (e, w)) in others.enumerate() {
            phases[e.0] = (base + 2.0 * PI * (j + 1) as f64 / d as f64).rem_euclid(2.0 * PI);
            queue.push_back((w, e));
        }
    }
    Ok(PhaseAssignment { phases })
}
