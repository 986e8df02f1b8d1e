use std::collections::{BTreeSet, VecDeque};

use super::{Edge, EdgeId, Endpoint, MetricGraph, Side, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GraphAnalysis {
    pub connected: bool,
    pub component_count: usize,
    pub bipartite: bool,
    /// Colour (0 or 1) per vertex when the graph is bipartite. Colour 0 is the
    /// class containing the lowest-numbered vertex of each component.
    pub bipartition: Option<Vec<u8>>,
    /// `E - V + component_count`.
    pub betti: usize,
    pub boundary: Vec<VertexId>,
    pub degrees: Vec<usize>,
    pub bridge_edges: Vec<EdgeId>,
    pub doubly_connected_length: f64,
}

impl GraphAnalysis {
    pub fn is_tree(&self) -> bool {
        self.connected && self.betti == 0
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.degrees[v.0] == 1
    }
}

/// Vertex component labels and the number of components.
pub(crate) fn components(g: &MetricGraph) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; g.vertex_count()];
    let mut count = 0;
    for start in g.vertex_ids() {
        if label[start.0] != usize::MAX {
            continue;
        }
        label[start.0] = count;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for (_, w) in g.incident(v) {
                if label[w.0] == usize::MAX {
                    label[w.0] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

fn two_coloring(g: &MetricGraph) -> Option<Vec<u8>> {
    if g.edges().iter().any(Edge::is_loop) {
        return None;
    }
    let mut color = vec![u8::MAX; g.vertex_count()];
    for start in g.vertex_ids() {
        if color[start.0] != u8::MAX {
            continue;
        }
        color[start.0] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for (_, w) in g.incident(v) {
                if color[w.0] == u8::MAX {
                    color[w.0] = 1 - color[v.0];
                    queue.push_back(w);
                } else if color[w.0] == color[v.0] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

pub fn analyze(g: &MetricGraph) -> GraphAnalysis {
    let (_, component_count) = components(g);
    let bipartition = two_coloring(g);
    let degrees: Vec<usize> = g.vertices().iter().map(|v| v.degree()).collect();
    let boundary = g.vertex_ids().filter(|v| degrees[v.0] == 1).collect();
    let bridge_edges: Vec<EdgeId> = blocks(g)
        .into_iter()
        .filter(|b| b.edges.len() == 1 && !g.edge(b.edges[0]).is_loop())
        .map(|b| b.edges[0])
        .collect();
    let bridge_set: BTreeSet<EdgeId> = bridge_edges.iter().copied().collect();
    let doubly_connected_length = g
        .edge_ids()
        .filter(|e| !bridge_set.contains(e))
        .map(|e| g.edge(e).length)
        .sum();
    GraphAnalysis {
        connected: component_count == 1,
        component_count,
        bipartite: bipartition.is_some(),
        bipartition,
        betti: g.edge_count() + component_count - g.vertex_count(),
        boundary,
        degrees,
        bridge_edges,
        doubly_connected_length,
    }
}

/// A biconnected block: a bridge, a loop, or a 2-connected multigraph piece.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
}

/// Biconnected blocks by iterative low-link traversal. Loops form their own
/// blocks; a second parallel edge is a back edge, so parallel edges share a block.
pub fn blocks(g: &MetricGraph) -> Vec<Block> {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut out = Vec::new();
    let adj: Vec<Vec<(EdgeId, VertexId)>> = g
        .vertex_ids()
        .map(|v| g.incident(v).filter(|(e, _)| !g.edge(*e).is_loop()).collect())
        .collect();

    let finish_block = |edge_stack: &mut Vec<EdgeId>, until: EdgeId, out: &mut Vec<Block>| {
        let mut edges = Vec::new();
        while let Some(e) = edge_stack.pop() {
            edges.push(e);
            if e == until {
                break;
            }
        }
        edges.sort();
        let vertices: BTreeSet<VertexId> = edges
            .iter()
            .flat_map(|&e| [g.edge(e).low, g.edge(e).high])
            .collect();
        out.push(Block {
            edges,
            vertices: vertices.into_iter().collect(),
        });
    };

    for root in g.vertex_ids() {
        if disc[root.0] != usize::MAX {
            continue;
        }
        disc[root.0] = time;
        low[root.0] = time;
        time += 1;
        // (vertex, entering edge, next adjacency index)
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        while let Some(&mut (v, parent_edge, ref mut next)) = stack.last_mut() {
            if *next < adj[v.0].len() {
                let (e, w) = adj[v.0][*next];
                *next += 1;
                if Some(e) == parent_edge {
                    continue;
                }
                if disc[w.0] == usize::MAX {
                    edge_stack.push(e);
                    disc[w.0] = time;
                    low[w.0] = time;
                    time += 1;
                    stack.push((w, Some(e), 0));
                } else if disc[w.0] < disc[v.0] {
                    edge_stack.push(e);
                    low[v.0] = low[v.0].min(disc[w.0]);
                }
            } else {
                stack.pop();
                if let (Some(&(p, _, _)), Some(e)) = (stack.last(), parent_edge) {
                    low[p.0] = low[p.0].min(low[v.0]);
                    if low[v.0] >= disc[p.0] {
                        finish_block(&mut edge_stack, e, &mut out);
                    }
                }
            }
        }
    }
    for e in g.edge_ids() {
        if g.edge(e).is_loop() {
            out.push(Block {
                edges: vec![e],
                vertices: vec![g.edge(e).low],
            });
        }
    }
    out.sort_by_key(|b| b.edges[0]);
    out
}

/// True iff no edge lies on two distinct cycles, i.e. every block is a single
/// edge or a single cycle.
pub fn has_independent_cycles(g: &MetricGraph) -> bool {
    blocks(g).iter().all(|b| b.edges.len() <= b.vertices.len())
}

/// An edge traversed along (`+1`, low to high) or against (`-1`) its orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedEdge {
    pub edge: EdgeId,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleBasis {
    pub spanning_tree_edges: Vec<EdgeId>,
    /// One closed signed walk per non-tree edge, starting with that edge.
    pub fundamental_cycles: Vec<Vec<SignedEdge>>,
}

impl CycleBasis {
    /// The closing edge of each fundamental cycle.
    pub fn non_tree_edges(&self) -> Vec<EdgeId> {
        self.fundamental_cycles.iter().map(|c| c[0].edge).collect()
    }
}

/// Start and end vertex of a signed traversal.
#[cfg(test)]
pub(crate) fn traversal_ends(g: &MetricGraph, s: SignedEdge) -> (VertexId, VertexId) {
    let e = g.edge(s.edge);
    if s.sign > 0 {
        (e.low, e.high)
    } else {
        (e.high, e.low)
    }
}

pub fn cycle_basis(g: &MetricGraph) -> Result<CycleBasis> {
    let n = g.vertex_count();
    let mut parent: Vec<Option<EdgeId>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut in_tree = vec![false; g.edge_count()];
    depth[0] = 0;
    let mut queue = VecDeque::from([VertexId(0)]);
    while let Some(v) = queue.pop_front() {
        for (e, w) in g.incident(v) {
            if depth[w.0] == usize::MAX {
                depth[w.0] = depth[v.0] + 1;
                parent[w.0] = Some(e);
                in_tree[e.0] = true;
                queue.push_back(w);
            }
        }
    }
    if depth.contains(&usize::MAX) {
        return Err(Error::Disconnected);
    }
    // signed step from a vertex to its tree parent
    let up = |v: VertexId| -> (SignedEdge, VertexId) {
        let e = parent[v.0].expect("non-root vertex");
        let edge = g.edge(e);
        let sign = if edge.low == v { 1 } else { -1 };
        (SignedEdge { edge: e, sign }, edge.other(v))
    };
    let mut cycles = Vec::new();
    for e in g.edge_ids() {
        if in_tree[e.0] {
            continue;
        }
        let edge = g.edge(e);
        let mut cycle = vec![SignedEdge { edge: e, sign: 1 }];
        // walk from the high end back to the low end through the tree
        let (mut a, mut b) = (edge.high, edge.low);
        let mut tail = Vec::new();
        while a != b {
            if depth[a.0] >= depth[b.0] {
                let (s, p) = up(a);
                cycle.push(s);
                a = p;
            } else {
                let (s, p) = up(b);
                tail.push(SignedEdge {
                    edge: s.edge,
                    sign: -s.sign,
                });
                b = p;
            }
        }
        cycle.extend(tail.into_iter().rev());
        cycles.push(cycle);
    }
    Ok(CycleBasis {
        spanning_tree_edges: g.edge_ids().filter(|e| in_tree[e.0]).collect(),
        fundamental_cycles: cycles,
    })
}

/// Splits vertex `v` into two: `class_a` stays at `v`, `class_b` moves to a new
/// vertex labelled `<label>'`. Lengths are untouched.
pub fn cut_vertex(g: &MetricGraph, v: VertexId, class_a: &[Endpoint], class_b: &[Endpoint]) -> Result<MetricGraph> {
    if v.0 >= g.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{}", v.0)));
    }
    let vertex = g.vertex(v);
    if vertex.degree() < 2 {
        return Err(Error::InvalidCut(format!("vertex `{}` has degree 1", vertex.label)));
    }
    if class_a.is_empty() || class_b.is_empty() {
        return Err(Error::InvalidCut("both classes must be nonempty".into()));
    }
    let a: BTreeSet<Endpoint> = class_a.iter().copied().collect();
    let b: BTreeSet<Endpoint> = class_b.iter().copied().collect();
    let all: BTreeSet<Endpoint> = vertex.endpoints.iter().copied().collect();
    if a.len() != class_a.len() || b.len() != class_b.len() || !a.is_disjoint(&b) {
        return Err(Error::InvalidCut("classes overlap".into()));
    }
    if a.union(&b).copied().collect::<BTreeSet<_>>() != all {
        return Err(Error::InvalidCut(format!(
            "classes must partition the endpoints of `{}`",
            vertex.label
        )));
    }
    let new_v = VertexId(g.vertex_count());
    let mut edges = g.edges().to_vec();
    for ep in &b {
        let e = &mut edges[ep.edge.0];
        match ep.side {
            Side::Low => e.low = new_v,
            Side::High => e.high = new_v,
        }
    }
    let mut labels: Vec<String> = g.vertices().iter().map(|x| x.label.clone()).collect();
    let mut label = format!("{}'", vertex.label);
    while labels.contains(&label) {
        label.push('\'');
    }
    labels.push(label);
    MetricGraph::from_edges(edges, labels)
}

/// Largest path-metric distance between two vertices of a tree.
pub fn tree_diameter(g: &MetricGraph) -> Result<f64> {
    if !analyze(g).is_tree() {
        return Err(Error::NotATree);
    }
    let farthest = |start: VertexId| -> (VertexId, f64) {
        let mut dist = vec![f64::NAN; g.vertex_count()];
        dist[start.0] = 0.0;
        let mut stack = vec![start];
        let mut best = (start, 0.0);
        while let Some(v) = stack.pop() {
            if dist[v.0] > best.1 {
                best = (v, dist[v.0]);
            }
            for (e, w) in g.incident(v) {
                if dist[w.0].is_nan() {
                    dist[w.0] = dist[v.0] + g.edge(e).length;
                    stack.push(w);
                }
            }
        }
        best
    };
    let (a, _) = farthest(VertexId(0));
    Ok(farthest(a).1)
}
