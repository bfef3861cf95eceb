//! Immutable metric-graph data model.
//!
//! A [`MetricGraph`] is a connected multigraph (loops and parallel edges
//! allowed) whose edges carry strictly positive lengths.  Every edge is
//! oriented by its file order `from -> to`, fixing the coordinate
//! `x ∈ [0, len]` measured from `from`.  Each edge yields two [`BondId`]s,
//! one per direction; a loop yields two distinct bonds sharing their
//! endpoints.
//!
//! Graphs are immutable after construction.  Inserting an artificial
//! (degree-two) vertex at an interior point returns a new graph; the
//! original edge count, minimum original edge length, and original
//! vertex/edge structure are carried along unchanged because the
//! spectral and truncation estimates are expressed in terms of the
//! un-subdivided graph.

use nalgebra::DMatrix;
use serde::Deserialize;
use std::collections::HashMap;

/// Index of a vertex within a [`MetricGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

/// Index of an edge within a [`MetricGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

/// Oriented edge: bond `2e` runs `from -> to` of edge `e`, bond `2e + 1`
/// is its reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BondId(pub usize);

impl BondId {
    /// The reverse bond; an involution without fixed points.
    #[inline]
    pub fn reverse(self) -> BondId {
        BondId(self.0 ^ 1)
    }

    /// The undirected edge this bond belongs to.
    #[inline]
    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 >> 1)
    }

    /// True when the bond runs in the edge's `from -> to` direction.
    #[inline]
    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }
}

/// A location on the graph: edge plus coordinate `x ∈ [0, len]` measured
/// from the edge's `from` vertex.  Coordinates at `0` or `len` denote the
/// corresponding vertex, whichever incident edge expresses them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphPoint {
    pub edge: EdgeId,
    pub x: f64,
}

impl GraphPoint {
    pub fn new(edge: EdgeId, x: f64) -> Self {
        Self { edge, x }
    }
}

/// A graph point after snapping to the underlying vertex when it sits at
/// an edge end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResolvedPoint {
    Vertex(VertexId),
    Interior { edge: EdgeId, x: f64 },
}

#[derive(Debug, Clone)]
struct VertexData {
    name: String,
    artificial: bool,
}

#[derive(Debug, Clone)]
struct EdgeData {
    name: String,
    from: usize,
    to: usize,
    length: f64,
    /// Index of the original (un-subdivided) edge this edge descends from.
    origin: usize,
}

/// Errors from graph construction and point handling.
#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("graph description is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("graph has no edges")]
    Empty,
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} references unknown vertex {vertex:?}")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("edge {edge:?} has non-positive length {length}")]
    NonPositiveLength { edge: String, length: f64 },
    #[error("graph is not connected")]
    Disconnected,
    #[error("unknown vertex id {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge id {0:?}")]
    UnknownEdge(String),
    #[error("coordinate {x} outside [0, {length}] on edge {edge:?}")]
    CoordinateOutOfRange { edge: String, x: f64, length: f64 },
}

#[derive(Debug, Deserialize)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<EdgeFile>,
}

#[derive(Debug, Deserialize)]
struct EdgeFile {
    id: String,
    from: String,
    to: String,
    length: f64,
}

/// Edge description used by programmatic constructors.
#[derive(Debug, Clone)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub length: f64,
}

impl EdgeSpec {
    pub fn new(id: &str, from: &str, to: &str, length: f64) -> Self {
        Self {
            id: id.to_string(),
            from: from.to_string(),
            to: to.to_string(),
            length,
        }
    }
}

/// Compact, connected metric graph.
#[derive(Debug, Clone)]
pub struct MetricGraph {
    vertices: Vec<VertexData>,
    edges: Vec<EdgeData>,
    degrees: Vec<usize>,
    /// Outgoing bonds per vertex, ascending bond index.
    outgoing: Vec<Vec<BondId>>,
    total_length: f64,
    original_edge_count: usize,
    original_vertex_count: usize,
    min_original_edge_length: f64,
    /// Endpoint pair of every original edge, frozen at construction.
    original_endpoints: Vec<(usize, usize)>,
}

impl MetricGraph {
    /// Parse the JSON graph description documented in the README:
    /// `{"vertices": [..ids..], "edges": [{"id", "from", "to", "length"}]}`.
    pub fn parse_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile = serde_json::from_str(text)?;
        let edges = file
            .edges
            .into_iter()
            .map(|e| EdgeSpec {
                id: e.id,
                from: e.from,
                to: e.to,
                length: e.length,
            })
            .collect();
        Self::from_parts(file.vertices, edges)
    }

    /// Build and validate a graph from vertex ids and edge descriptions.
    pub fn from_parts(vertex_ids: Vec<String>, edges: Vec<EdgeSpec>) -> Result<Self, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut vertex_index = HashMap::new();
        for (i, id) in vertex_ids.iter().enumerate() {
            if vertex_index.insert(id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(id.clone()));
            }
        }
        let mut edge_names = HashMap::new();
        let mut edge_data = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if edge_names.insert(e.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateEdge(e.id.clone()));
            }
            if !(e.length > 0.0) || !e.length.is_finite() {
                return Err(GraphError::NonPositiveLength {
                    edge: e.id.clone(),
                    length: e.length,
                });
            }
            let from = *vertex_index
                .get(&e.from)
                .ok_or_else(|| GraphError::DanglingEndpoint {
                    edge: e.id.clone(),
                    vertex: e.from.clone(),
                })?;
            let to = *vertex_index
                .get(&e.to)
                .ok_or_else(|| GraphError::DanglingEndpoint {
                    edge: e.id.clone(),
                    vertex: e.to.clone(),
                })?;
            edge_data.push(EdgeData {
                name: e.id.clone(),
                from,
                to,
                length: e.length,
                origin: i,
            });
        }
        let vertices = vertex_ids
            .into_iter()
            .map(|name| VertexData {
                name,
                artificial: false,
            })
            .collect::<Vec<_>>();
        let original_endpoints = edge_data.iter().map(|e| (e.from, e.to)).collect();
        let graph = Self::assemble(
            vertices,
            edge_data,
            edges.len(),
            vertex_index.len(),
            edges.iter().map(|e| e.length).fold(f64::INFINITY, f64::min),
            original_endpoints,
        );
        graph.check_connected()?;
        Ok(graph)
    }

    fn assemble(
        vertices: Vec<VertexData>,
        edges: Vec<EdgeData>,
        original_edge_count: usize,
        original_vertex_count: usize,
        min_original_edge_length: f64,
        original_endpoints: Vec<(usize, usize)>,
    ) -> Self {
        let mut degrees = vec![0usize; vertices.len()];
        let mut outgoing = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            degrees[e.from] += 1;
            degrees[e.to] += 1;
            outgoing[e.from].push(BondId(2 * i));
            outgoing[e.to].push(BondId(2 * i + 1));
        }
        for list in &mut outgoing {
            list.sort_unstable();
        }
        let total_length = edges.iter().map(|e| e.length).sum();
        Self {
            vertices,
            edges,
            degrees,
            outgoing,
            total_length,
            original_edge_count,
            original_vertex_count,
            min_original_edge_length,
            original_endpoints,
        }
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &b in &self.outgoing[v] {
                let w = self.bond_head(b).0;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(GraphError::Disconnected)
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn bond_count(&self) -> usize {
        2 * self.edges.len()
    }

    /// Total length `L`, invariant under artificial subdivision.
    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// Number of edges of the original (un-subdivided) graph.
    pub fn original_edge_count(&self) -> usize {
        self.original_edge_count
    }

    /// Number of vertices of the original graph.
    pub fn original_vertex_count(&self) -> usize {
        self.original_vertex_count
    }

    /// Minimum edge length of the original graph.
    pub fn min_original_edge_length(&self) -> f64 {
        self.min_original_edge_length
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degrees[v.0]
    }

    pub fn is_artificial(&self, v: VertexId) -> bool {
        self.vertices[v.0].artificial
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0].name
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn edge_length(&self, e: EdgeId) -> f64 {
        self.edges[e.0].length
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        (VertexId(self.edges[e.0].from), VertexId(self.edges[e.0].to))
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertices
            .iter()
            .position(|v| v.name == name)
            .map(VertexId)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .map(EdgeId)
            .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn bond_ids(&self) -> impl Iterator<Item = BondId> {
        (0..self.bond_count()).map(BondId)
    }

    /// Initial vertex of a bond.
    #[inline]
    pub fn bond_tail(&self, b: BondId) -> VertexId {
        let e = &self.edges[b.0 >> 1];
        VertexId(if b.is_forward() { e.from } else { e.to })
    }

    /// Final vertex of a bond.
    #[inline]
    pub fn bond_head(&self, b: BondId) -> VertexId {
        let e = &self.edges[b.0 >> 1];
        VertexId(if b.is_forward() { e.to } else { e.from })
    }

    #[inline]
    pub fn bond_length(&self, b: BondId) -> f64 {
        self.edges[b.0 >> 1].length
    }

    /// Bonds departing from `v`, ascending bond index.
    pub fn outgoing_bonds(&self, v: VertexId) -> &[BondId] {
        &self.outgoing[v.0]
    }

    /// Snap a graph point to a vertex when its coordinate sits at an edge
    /// end (within 1 part in 10^12 of the edge length).
    pub fn resolve_point(&self, p: GraphPoint) -> Result<ResolvedPoint, GraphError> {
        let len = self
            .edges
            .get(p.edge.0)
            .map(|e| e.length)
            .ok_or_else(|| GraphError::UnknownEdge(format!("#{}", p.edge.0)))?;
        let snap = 1e-12 * len.max(1.0);
        if !(p.x >= -snap && p.x <= len + snap) {
            return Err(GraphError::CoordinateOutOfRange {
                edge: self.edges[p.edge.0].name.clone(),
                x: p.x,
                length: len,
            });
        }
        if p.x.abs() <= snap {
            Ok(ResolvedPoint::Vertex(VertexId(self.edges[p.edge.0].from)))
        } else if (p.x - len).abs() <= snap {
            Ok(ResolvedPoint::Vertex(VertexId(self.edges[p.edge.0].to)))
        } else {
            Ok(ResolvedPoint::Interior {
                edge: p.edge,
                x: p.x,
            })
        }
    }

    /// Split an edge at an interior point, producing a new graph with an
    /// artificial degree-two vertex.  Vertex points are returned with the
    /// existing vertex and the graph unchanged.  The split leaves total
    /// length, original-edge statistics, distances, and the spectrum
    /// untouched.
    ///
    /// The returned [`PointRemap`] translates graph points expressed on
    /// the split edge into the new graph's coordinates.
    pub fn insert_point_vertex(
        &self,
        p: GraphPoint,
    ) -> Result<(MetricGraph, VertexId, PointRemap), GraphError> {
        match self.resolve_point(p)? {
            ResolvedPoint::Vertex(v) => Ok((self.clone(), v, PointRemap::identity())),
            ResolvedPoint::Interior { edge, x } => {
                let mut vertices = self.vertices.clone();
                let e = &self.edges[edge.0];
                let new_vertex = vertices.len();
                vertices.push(VertexData {
                    name: format!("{}@{}", e.name, x),
                    artificial: true,
                });
                let mut edges = self.edges.clone();
                // First half keeps the edge slot so untouched edge indices
                // stay valid; the second half is appended.
                edges[edge.0] = EdgeData {
                    name: format!("{}#a", e.name),
                    from: e.from,
                    to: new_vertex,
                    length: x,
                    origin: e.origin,
                };
                let to = e.to;
                let tail_len = e.length - x;
                let name_b = format!("{}#b", e.name);
                edges.push(EdgeData {
                    name: name_b,
                    from: new_vertex,
                    to,
                    length: tail_len,
                    origin: e.origin,
                });
                let second = EdgeId(edges.len() - 1);
                let graph = Self::assemble(
                    vertices,
                    edges,
                    self.original_edge_count,
                    self.original_vertex_count,
                    self.min_original_edge_length,
                    self.original_endpoints.clone(),
                );
                Ok((
                    graph,
                    VertexId(new_vertex),
                    PointRemap {
                        split: Some(SplitInfo {
                            edge,
                            at: x,
                            first: edge,
                            second,
                        }),
                    },
                ))
            }
        }
    }

    /// Adjacency matrix of the original graph: `A[i][j]` counts edges
    /// joining original vertices `i` and `j`; a loop adds 2 on the
    /// diagonal.  Artificial vertices are ignored.
    pub fn adjacency_matrix(&self) -> DMatrix<u32> {
        let n = self.original_vertex_count;
        let mut a = DMatrix::zeros(n, n);
        for &(u, v) in &self.original_endpoints {
            if u == v {
                a[(u, u)] += 2;
            } else {
                a[(u, v)] += 1;
                a[(v, u)] += 1;
            }
        }
        a
    }

    /// Two-colorability of the original combinatorial graph.  Loops force
    /// `false`.
    pub fn is_bipartite(&self) -> bool {
        let n = self.original_vertex_count;
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.original_endpoints {
            if u == v {
                return false;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut color = vec![-1i8; n];
        let mut stack = vec![0usize];
        color[0] = 0;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if color[w] == -1 {
                    color[w] = 1 - color[v];
                    stack.push(w);
                } else if color[w] == color[v] {
                    return false;
                }
            }
        }
        true
    }

    /// Geodesic distance between two graph points.
    pub fn distance(&self, p: GraphPoint, q: GraphPoint) -> Result<f64, GraphError> {
        let (g1, v1, remap) = self.insert_point_vertex(p)?;
        let q = remap.apply(q);
        let (g2, v2, _) = g1.insert_point_vertex(q)?;
        Ok(g2.vertex_distance(v1, v2))
    }

    /// Geodesic distance between two vertices (Dijkstra).
    pub fn vertex_distance(&self, from: VertexId, to: VertexId) -> f64 {
        // Dijkstra over the (small) vertex set.
        let n = self.vertices.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        dist[from.0] = 0.0;
        loop {
            let mut best = None;
            let mut best_d = f64::INFINITY;
            for v in 0..n {
                if !done[v] && dist[v] < best_d {
                    best_d = dist[v];
                    best = Some(v);
                }
            }
            let Some(v) = best else { break };
            if v == to.0 {
                return dist[v];
            }
            done[v] = true;
            for &b in &self.outgoing[v] {
                let w = self.bond_head(b).0;
                let d = dist[v] + self.bond_length(b);
                if d < dist[w] {
                    dist[w] = d;
                }
            }
        }
        dist[to.0]
    }
}

#[derive(Debug, Clone, Copy)]
struct SplitInfo {
    edge: EdgeId,
    at: f64,
    first: EdgeId,
    second: EdgeId,
}

/// Coordinate translation produced by [`MetricGraph::insert_point_vertex`].
#[derive(Debug, Clone, Copy)]
pub struct PointRemap {
    split: Option<SplitInfo>,
}

impl PointRemap {
    fn identity() -> Self {
        Self { split: None }
    }

    /// Express `p` in the coordinates of the split graph.
    pub fn apply(&self, p: GraphPoint) -> GraphPoint {
        match self.split {
            Some(s) if p.edge == s.edge => {
                if p.x <= s.at {
                    GraphPoint::new(s.first, p.x)
                } else {
                    GraphPoint::new(s.second, p.x - s.at)
                }
            }
            _ => p,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn parse_single_edge_interval() {
        let g = MetricGraph::parse_json(
            r#"{"vertices": ["u", "v"],
                "edges": [{"id": "e", "from": "u", "to": "v", "length": 1.0}]}"#,
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.total_length(), 1.0);
        assert_eq!(g.degree(VertexId(0)), 1);
        assert_eq!(g.degree(VertexId(1)), 1);
    }

    #[test]
    fn parse_star_five() {
        let g = zoo::star(5, 1.0);
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.total_length(), 5.0);
        let center = g.vertex_by_name("c").unwrap();
        assert_eq!(g.degree(center), 5);
    }

    #[test]
    fn loop_counts_twice_in_degree() {
        let g = MetricGraph::parse_json(
            r#"{"vertices": ["v"],
                "edges": [{"id": "p", "from": "v", "to": "v", "length": 1.0}]}"#,
        )
        .unwrap();
        assert_eq!(g.degree(VertexId(0)), 2);
        assert_eq!(g.bond_count(), 2);
        assert_eq!(g.bond_tail(BondId(0)), g.bond_head(BondId(0)));
    }

    #[test]
    fn parse_errors() {
        let dangling = MetricGraph::parse_json(
            r#"{"vertices": ["u"],
                "edges": [{"id": "e", "from": "u", "to": "w", "length": 1.0}]}"#,
        );
        assert!(matches!(dangling, Err(GraphError::DanglingEndpoint { .. })));

        let nonpositive = MetricGraph::parse_json(
            r#"{"vertices": ["u", "v"],
                "edges": [{"id": "e", "from": "u", "to": "v", "length": 0.0}]}"#,
        );
        assert!(matches!(
            nonpositive,
            Err(GraphError::NonPositiveLength { .. })
        ));

        let duplicate = MetricGraph::parse_json(
            r#"{"vertices": ["u", "v"],
                "edges": [{"id": "e", "from": "u", "to": "v", "length": 1.0},
                           {"id": "e", "from": "v", "to": "u", "length": 1.0}]}"#,
        );
        assert!(matches!(duplicate, Err(GraphError::DuplicateEdge(_))));

        let disconnected = MetricGraph::parse_json(
            r#"{"vertices": ["a", "b", "c", "d"],
                "edges": [{"id": "e1", "from": "a", "to": "b", "length": 1.0},
                           {"id": "e2", "from": "c", "to": "d", "length": 1.0}]}"#,
        );
        assert!(matches!(disconnected, Err(GraphError::Disconnected)));
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        for g in zoo::all_graphs() {
            let total: usize = g.vertex_ids().map(|v| g.degree(v)).sum();
            assert_eq!(total, 2 * g.edge_count(), "graph {:?}", g.total_length());
        }
    }

    #[test]
    fn bonds_partition_into_reverse_pairs() {
        let g = zoo::k4(1.0);
        for b in g.bond_ids() {
            assert_ne!(b, b.reverse());
            assert_eq!(b.reverse().reverse(), b);
            assert_eq!(g.bond_tail(b), g.bond_head(b.reverse()));
            assert_eq!(g.bond_head(b), g.bond_tail(b.reverse()));
        }
    }

    #[test]
    fn insert_point_splits_lengths() {
        let g = zoo::interval(1.0);
        let e = EdgeId(0);
        let (g2, v, _) = g.insert_point_vertex(GraphPoint::new(e, 0.3)).unwrap();
        assert_eq!(g2.vertex_count(), 3);
        assert_eq!(g2.edge_count(), 2);
        assert!(g2.is_artificial(v));
        assert_eq!(g2.degree(v), 2);
        let l1 = g2.edge_length(EdgeId(0));
        let l2 = g2.edge_length(EdgeId(1));
        assert!((l1 - 0.3).abs() < 1e-15);
        assert!((l1 + l2 - 1.0).abs() < 1e-15);
        assert_eq!(g2.total_length(), 1.0);
        assert_eq!(g2.min_original_edge_length(), 1.0);
        assert_eq!(g2.original_edge_count(), 1);
    }

    #[test]
    fn insert_point_at_vertex_is_identity() {
        let g = zoo::interval(1.0);
        let (g2, v, _) = g.insert_point_vertex(GraphPoint::new(EdgeId(0), 0.0)).unwrap();
        assert_eq!(g2.vertex_count(), 2);
        assert_eq!(v, VertexId(0));
        let (g3, v, _) = g.insert_point_vertex(GraphPoint::new(EdgeId(0), 1.0)).unwrap();
        assert_eq!(g3.vertex_count(), 2);
        assert_eq!(v, VertexId(1));
    }

    #[test]
    fn insert_point_into_loop_makes_two_ordinary_edges() {
        let g = zoo::flower(0.4, 1.0);
        let e = g.edge_by_name("p1").unwrap();
        let (g2, v, _) = g.insert_point_vertex(GraphPoint::new(e, 0.2)).unwrap();
        assert_eq!(g2.degree(v), 2);
        assert_eq!(g2.edge_count(), 3);
        let (u1, v1) = g2.edge_endpoints(e);
        assert_ne!(u1, v1);
    }

    #[test]
    fn adjacency_k4_and_interval_and_flower() {
        let k4 = zoo::k4(1.0).adjacency_matrix();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(k4[(i, j)], u32::from(i != j));
            }
        }
        let interval = zoo::interval(1.0).adjacency_matrix();
        assert_eq!(interval[(0, 0)], 0);
        assert_eq!(interval[(0, 1)], 1);
        assert_eq!(interval[(1, 0)], 1);

        let flower = zoo::flower(0.4, 1.0).adjacency_matrix();
        assert_eq!(flower.nrows(), 1);
        assert_eq!(flower[(0, 0)], 4);
    }

    #[test]
    fn bipartite_detection() {
        assert!(zoo::cube(1.0).is_bipartite());
        assert!(!zoo::k4(1.0).is_bipartite());
        assert!(!zoo::flower(0.4, 1.0).is_bipartite());
        assert!(zoo::pumpkin(3, 1.0).is_bipartite());
    }

    #[test]
    fn distances_survive_subdivision() {
        let g = zoo::star(3, 1.0);
        let e0 = EdgeId(0);
        let e1 = EdgeId(1);
        let p = GraphPoint::new(e0, 0.25);
        let q = GraphPoint::new(e1, 0.5);
        let d = g.distance(p, q).unwrap();
        assert!((d - 0.75).abs() < 1e-12);

        let (g2, _, remap) = g.insert_point_vertex(GraphPoint::new(e0, 0.7)).unwrap();
        let d2 = g2.distance(remap.apply(p), remap.apply(q)).unwrap();
        assert!((d2 - 0.75).abs() < 1e-12);
    }

    #[test]
    fn resolve_point_range_check() {
        let g = zoo::interval(1.0);
        assert!(g.resolve_point(GraphPoint::new(EdgeId(0), 1.5)).is_err());
        assert!(g.resolve_point(GraphPoint::new(EdgeId(0), -0.1)).is_err());
    }
}
