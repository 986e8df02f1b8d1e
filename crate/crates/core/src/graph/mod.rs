//! Compact metric graphs.
//!
//! A graph is a list of edges `[0, L(e)]` together with a partition of the
//! `2E` edge endpoints into vertices. Each edge is stored with an orientation:
//! its `Low` endpoint sits at `x = 0` and its `High` endpoint at `x = L(e)`.
//! Loops and parallel edges are allowed.

mod analysis;
pub mod builtin;
pub mod qgf;

pub use analysis::{
    analyze, blocks, cut_vertex, cycle_basis, has_independent_cycles, tree_diameter, Block,
    CycleBasis, GraphAnalysis, SignedEdge,
};

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

/// Which end of an edge: `Low` is `x = 0`, `High` is `x = L(e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub edge: EdgeId,
    pub side: Side,
}

impl Endpoint {
    pub fn new(edge: EdgeId, side: Side) -> Self {
        Self { edge, side }
    }

    /// Position of this endpoint in the global `2E` endpoint ordering.
    pub fn index(self) -> usize {
        2 * self.edge.0
            + match self.side {
                Side::Low => 0,
                Side::High => 1,
            }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub name: String,
    pub low: VertexId,
    pub high: VertexId,
    pub length: f64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.low == self.high
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.low == v {
            self.high
        } else {
            self.low
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub label: String,
    pub endpoints: Vec<Endpoint>,
}

impl Vertex {
    pub fn degree(&self) -> usize {
        self.endpoints.len()
    }
}

/// One line of graph input: an edge name, its two vertex labels and its length.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDecl {
    pub name: String,
    pub a: String,
    pub b: String,
    pub length: f64,
}

impl EdgeDecl {
    pub fn new(name: impl Into<String>, a: impl Into<String>, b: impl Into<String>, length: f64) -> Self {
        Self {
            name: name.into(),
            a: a.into(),
            b: b.into(),
            length,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    edges: Vec<Edge>,
    vertices: Vec<Vertex>,
}

impl MetricGraph {
    /// Builds a graph from labelled edge declarations. Vertices are the classes
    /// of endpoints sharing a label, numbered in order of first appearance.
    pub fn build<I>(decls: I) -> Result<Self>
    where
        I: IntoIterator<Item = EdgeDecl>,
    {
        let mut names = HashSet::new();
        let mut labels: BTreeMap<String, usize> = BTreeMap::new();
        let mut vertex_labels: Vec<String> = Vec::new();
        let mut raw = Vec::new();
        for d in decls {
            if !names.insert(d.name.clone()) {
                return Err(Error::DuplicateEdge(d.name));
            }
            let mut id = |label: &str| -> VertexId {
                if let Some(&i) = labels.get(label) {
                    return VertexId(i);
                }
                let i = vertex_labels.len();
                labels.insert(label.to_string(), i);
                vertex_labels.push(label.to_string());
                VertexId(i)
            };
            let low = id(&d.a);
            let high = id(&d.b);
            raw.push(Edge {
                name: d.name,
                low,
                high,
                length: d.length,
            });
        }
        Self::from_edges(raw, vertex_labels)
    }

    /// Builds a graph from edges whose endpoints already reference vertex indices.
    pub fn from_edges(edges: Vec<Edge>, vertex_labels: Vec<String>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut seen = HashSet::new();
        for e in &edges {
            if !(e.length.is_finite() && e.length > 0.0) {
                return Err(Error::InvalidLength {
                    name: e.name.clone(),
                    length: e.length,
                });
            }
            if !seen.insert(e.name.as_str()) {
                return Err(Error::DuplicateEdge(e.name.clone()));
            }
            for v in [e.low, e.high] {
                if v.0 >= vertex_labels.len() {
                    return Err(Error::InvalidPartition(format!(
                        "edge `{}` references missing vertex {}",
                        e.name, v.0
                    )));
                }
            }
        }
        let mut vertices: Vec<Vertex> = vertex_labels
            .into_iter()
            .map(|label| Vertex {
                label,
                endpoints: Vec::new(),
            })
            .collect();
        for (i, e) in edges.iter().enumerate() {
            vertices[e.low.0].endpoints.push(Endpoint::new(EdgeId(i), Side::Low));
            vertices[e.high.0].endpoints.push(Endpoint::new(EdgeId(i), Side::High));
        }
        if let Some(v) = vertices.iter().find(|v| v.endpoints.is_empty()) {
            return Err(Error::InvalidPartition(format!("vertex `{}` has no endpoints", v.label)));
        }
        Ok(Self { edges, vertices })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id.0]
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertices[v.0].degree()
    }

    pub fn endpoint_vertex(&self, ep: Endpoint) -> VertexId {
        let e = &self.edges[ep.edge.0];
        match ep.side {
            Side::Low => e.low,
            Side::High => e.high,
        }
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn vertex_by_label(&self, label: &str) -> Result<VertexId> {
        self.vertices
            .iter()
            .position(|v| v.label == label)
            .map(VertexId)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .map(EdgeId)
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    /// Common edge length if all edges agree to relative `1e-12`.
    pub fn equilateral_length(&self) -> Option<f64> {
        let l0 = self.edges[0].length;
        self.edges
            .iter()
            .all(|e| (e.length - l0).abs() <= 1e-12 * l0)
            .then_some(l0)
    }

    /// Same combinatorics with every length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                length: e.length * factor,
                ..e.clone()
            })
            .collect();
        Self::from_edges(edges, self.vertices.iter().map(|v| v.label.clone()).collect())
    }

    /// Copy with the given edges reversed (`Low` and `High` swapped).
    pub fn with_reversed(&self, reversed: &[EdgeId]) -> Self {
        let mut g = self.clone();
        for &id in reversed {
            let e = &mut g.edges[id.0];
            std::mem::swap(&mut e.low, &mut e.high);
        }
        for v in &mut g.vertices {
            v.endpoints.clear();
        }
        for (i, e) in g.edges.iter().enumerate() {
            g.vertices[e.low.0].endpoints.push(Endpoint::new(EdgeId(i), Side::Low));
            g.vertices[e.high.0].endpoints.push(Endpoint::new(EdgeId(i), Side::High));
        }
        g
    }

    /// Incident `(edge, neighbour)` pairs of `v`; a loop is listed once per endpoint.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = (EdgeId, VertexId)> + '_ {
        self.vertices[v.0].endpoints.iter().map(move |ep| {
            let e = &self.edges[ep.edge.0];
            let other = match ep.side {
                Side::Low => e.high,
                Side::High => e.low,
            };
            (ep.edge, other)
        })
    }

    /// Endpoint token `name/0` (low) or `name/1` (high), or the bare edge name.
    pub fn parse_endpoints_at(&self, v: VertexId, token: &str) -> Result<Vec<Endpoint>> {
        let (name, side) = match token.rsplit_once('/') {
            Some((n, "0")) => (n, Some(Side::Low)),
            Some((n, "1")) => (n, Some(Side::High)),
            _ => (token, None),
        };
        let edge = self.edge_by_name(name)?;
        let eps: Vec<Endpoint> = self.vertices[v.0]
            .endpoints
            .iter()
            .copied()
            .filter(|ep| ep.edge == edge && side.is_none_or(|s| ep.side == s))
            .collect();
        if eps.is_empty() {
            return Err(Error::InvalidCut(format!(
                "`{token}` is not incident to vertex `{}`",
                self.vertices[v.0].label
            )));
        }
        Ok(eps)
    }
}

impl fmt::Display for MetricGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", qgf::to_qgf(self))
    }
}
