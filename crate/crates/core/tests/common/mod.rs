#![allow(dead_code)]

use qgraph_core::graph::{analyze, Endpoint, MetricGraph, VertexId};
use qgraph_core::theorems::VertexCut;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()) + 1e-12
}

/// Random split of the endpoints at a random vertex of degree ≥ 2.
pub fn random_cut<R: Rng>(rng: &mut R, g: &MetricGraph) -> Option<VertexCut> {
    let candidates: Vec<VertexId> = g.vertex_ids().filter(|&v| g.degree(v) >= 2).collect();
    let &vertex = candidates.choose(rng)?;
    let mut eps: Vec<Endpoint> = g.vertex(vertex).endpoints.clone();
    eps.shuffle(rng);
    let split = rng.random_range(1..eps.len());
    let class_b = eps.split_off(split);
    Some(VertexCut {
        vertex,
        class_a: eps,
        class_b,
    })
}

/// Random nonempty subset of the degree-one vertices (empty if there are none).
pub fn random_boundary_subset<R: Rng>(rng: &mut R, g: &MetricGraph) -> Vec<VertexId> {
    let boundary = analyze(g).boundary;
    if boundary.is_empty() {
        return boundary;
    }
    loop {
        let pick: Vec<VertexId> = boundary.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        if !pick.is_empty() {
            return pick;
        }
    }
}
