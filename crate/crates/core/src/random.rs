//! Seeded random graph families for property checks.

use rand::Rng;

use crate::graph::{EdgeDecl, MetricGraph};

fn length<R: Rng>(rng: &mut R, range: (f64, f64)) -> f64 {
    if range.0 >= range.1 {
        range.0
    } else {
        rng.random_range(range.0..range.1)
    }
}

fn assemble(pairs: Vec<(usize, usize)>, lengths: Vec<f64>) -> MetricGraph {
    MetricGraph::build(
        pairs
            .into_iter()
            .zip(lengths)
            .enumerate()
            .map(|(i, ((a, b), l))| EdgeDecl::new(format!("e{}", i + 1), format!("v{a}"), format!("v{b}"), l)),
    )
    .expect("generated graphs are valid")
}

/// Random tree with `edges` edges: vertex `i` attaches to a uniform earlier vertex.
pub fn random_tree<R: Rng>(rng: &mut R, edges: usize, lengths: (f64, f64)) -> MetricGraph {
    let pairs: Vec<_> = (1..=edges.max(1)).map(|i| (rng.random_range(0..i), i)).collect();
    let ls = (0..pairs.len()).map(|_| length(rng, lengths)).collect();
    assemble(pairs, ls)
}

/// Random connected graph: a random spanning tree on `vertices` vertices plus
/// extra edges between random pairs. Parallel edges are allowed; loops only
/// when `loops` is set.
pub fn random_connected<R: Rng>(
    rng: &mut R,
    vertices: usize,
    edges: usize,
    lengths: (f64, f64),
    loops: bool,
) -> MetricGraph {
    let vertices = vertices.max(if loops { 1 } else { 2 });
    let mut pairs: Vec<_> = (1..vertices).map(|i| (rng.random_range(0..i), i)).collect();
    while pairs.len() < edges.max(1) {
        let a = rng.random_range(0..vertices);
        let b = rng.random_range(0..vertices);
        if a != b || loops {
            pairs.push((a, b));
        }
    }
    let ls = (0..pairs.len()).map(|_| length(rng, lengths)).collect();
    assemble(pairs, ls)
}

/// Random connected bipartite graph: tree colours by depth parity, extra edges
/// only between the two colour classes.
pub fn random_bipartite_connected<R: Rng>(
    rng: &mut R,
    vertices: usize,
    edges: usize,
    lengths: (f64, f64),
) -> MetricGraph {
    let vertices = vertices.max(2);
    let mut colour = vec![0usize; vertices];
    let mut pairs = Vec::new();
    for i in 1..vertices {
        let p = rng.random_range(0..i);
        colour[i] = 1 - colour[p];
        pairs.push((p, i));
    }
    let (even, odd): (Vec<usize>, Vec<usize>) = (0..vertices).partition(|&v| colour[v] == 0);
    while pairs.len() < edges {
        let a = even[rng.random_range(0..even.len())];
        let b = odd[rng.random_range(0..odd.len())];
        pairs.push(if rng.random_bool(0.5) { (a, b) } else { (b, a) });
    }
    let ls = (0..pairs.len()).map(|_| length(rng, lengths)).collect();
    assemble(pairs, ls)
}
