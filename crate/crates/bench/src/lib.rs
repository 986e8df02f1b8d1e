//! Fixed benchmark inputs.

use qgraph_core::graph::builtin::builtin;
use qgraph_core::random::{random_bipartite_connected, random_connected};
use qgraph_core::MetricGraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named builtin graphs of increasing size.
pub fn builtin_fixtures() -> Vec<(&'static str, MetricGraph)> {
    [
        ("star3", "star", vec![3.0, 1.0]),
        ("lasso", "lasso", vec![2.0, 1.0]),
        ("cycle5322", "cycle", vec![5.0, 3.0, 2.0, 2.0]),
        ("kbip33", "kbip", vec![3.0, 3.0, 1.0]),
        ("theta5", "theta", vec![1.0, 1.3, 1.7, 2.1, 2.9]),
    ]
    .into_iter()
    .map(|(label, name, params)| (label, builtin(name, &params).expect("valid builtin")))
    .collect()
}

/// Seeded random graph with `edges` edges on roughly `edges / 2 + 1` vertices.
pub fn random_fixture(edges: usize, seed: u64) -> MetricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_connected(&mut rng, edges / 2 + 1, edges, (0.5, 2.0), true)
}

pub fn random_bipartite_fixture(edges: usize, seed: u64) -> MetricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_bipartite_connected(&mut rng, edges / 2 + 1, edges, (0.5, 2.0))
}

/// The equilateral graph on the same edges as [`random_fixture`].
pub fn equilateral_fixture(edges: usize, seed: u64) -> MetricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_connected(&mut rng, edges / 2 + 1, edges, (1.0, 1.0), false)
}
