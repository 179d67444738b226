//! Geolocated undirected topologies, their CSV form and structural checks.

pub mod io;
pub mod planarity;
pub mod structure;

use std::collections::{HashMap, HashSet};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodesy::{fibre_length_km, haversine_km, GeoPoint};
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("{file} file: header `{found}` does not match `{expected}`")]
    Header {
        file: &'static str,
        expected: String,
        found: String,
    },
    #[error("{file} file, row {row}, column {column}: {message}")]
    Field {
        file: &'static str,
        row: usize,
        column: &'static str,
        message: String,
    },
    #[error("{file} file: malformed csv: {message}")]
    Csv { file: &'static str, message: String },
    #[error("nodes row {row}: duplicate node id {id}")]
    DuplicateNodeId { row: usize, id: u64 },
    #[error("edges row {row}: duplicate edge id {id}")]
    DuplicateEdgeId { row: usize, id: u64 },
    #[error("edges row {row}: endpoint {id} is not a known node")]
    DanglingEndpoint { row: usize, id: u64 },
    #[error("edges row {row}: self-loop on node {id}")]
    SelfLoop { row: usize, id: u64 },
    #[error("edges row {row}: parallel edge between {source_id} and {destination}")]
    ParallelEdge { row: usize, source_id: u64, destination: u64 },
    #[error("edges row {row}: length {length} km is not finite and positive")]
    InvalidLength { row: usize, length: f64 },
    #[error("topology needs at least 2 nodes and 1 edge, found {nodes} nodes and {edges} edges")]
    TooSmall { nodes: usize, edges: usize },
    #[error("disconnected graph ({components} components)")]
    Disconnected { components: usize },
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

/// Discriminant of [`TopologyError`], for matching without payloads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyErrorKind {
    Header,
    Field,
    Csv,
    DuplicateNodeId,
    DuplicateEdgeId,
    DanglingEndpoint,
    SelfLoop,
    ParallelEdge,
    InvalidLength,
    TooSmall,
    Disconnected,
    Io,
}

impl TopologyError {
    pub fn kind(&self) -> TopologyErrorKind {
        match self {
            TopologyError::Header { .. } => TopologyErrorKind::Header,
            TopologyError::Field { .. } => TopologyErrorKind::Field,
            TopologyError::Csv { .. } => TopologyErrorKind::Csv,
            TopologyError::DuplicateNodeId { .. } => TopologyErrorKind::DuplicateNodeId,
            TopologyError::DuplicateEdgeId { .. } => TopologyErrorKind::DuplicateEdgeId,
            TopologyError::DanglingEndpoint { .. } => TopologyErrorKind::DanglingEndpoint,
            TopologyError::SelfLoop { .. } => TopologyErrorKind::SelfLoop,
            TopologyError::ParallelEdge { .. } => TopologyErrorKind::ParallelEdge,
            TopologyError::InvalidLength { .. } => TopologyErrorKind::InvalidLength,
            TopologyError::TooSmall { .. } => TopologyErrorKind::TooSmall,
            TopologyError::Disconnected { .. } => TopologyErrorKind::Disconnected,
            TopologyError::Io { .. } => TopologyErrorKind::Io,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: u64,
    pub location: GeoPoint,
    pub place_name: String,
    pub country: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub id: u64,
    pub source: u64,
    pub destination: u64,
    pub length_km: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Real,
    Synthetic,
}

/// A validated, connected, simple topology.
///
/// Node `i` of the internal [`Graph`] is `nodes()[i]`; edge `e` is
/// `edges()[e]`. External ids are kept for export.
#[derive(Debug, Clone)]
pub struct Topology {
    name: String,
    provenance: Provenance,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    graph: Graph,
    index: HashMap<u64, usize>,
}

impl Topology {
    pub fn new(
        name: impl Into<String>,
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        provenance: Provenance,
    ) -> Result<Self, TopologyError> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if index.insert(node.id, i).is_some() {
                return Err(TopologyError::DuplicateNodeId { row: i + 1, id: node.id });
            }
        }
        let mut graph = Graph::new(nodes.len());
        let mut edge_ids = HashSet::with_capacity(edges.len());
        for (i, edge) in edges.iter().enumerate() {
            let row = i + 1;
            if !edge_ids.insert(edge.id) {
                return Err(TopologyError::DuplicateEdgeId { row, id: edge.id });
            }
            let u = *index
                .get(&edge.source)
                .ok_or(TopologyError::DanglingEndpoint { row, id: edge.source })?;
            let v = *index
                .get(&edge.destination)
                .ok_or(TopologyError::DanglingEndpoint { row, id: edge.destination })?;
            if u == v {
                return Err(TopologyError::SelfLoop { row, id: edge.source });
            }
            if !edge.length_km.is_finite() || edge.length_km <= 0.0 {
                return Err(TopologyError::InvalidLength {
                    row,
                    length: edge.length_km,
                });
            }
            if graph.add_edge(u, v).is_none() {
                return Err(TopologyError::ParallelEdge {
                    row,
                    source_id: edge.source,
                    destination: edge.destination,
                });
            }
        }
        let components = graph.component_count();
        if components > 1 {
            return Err(TopologyError::Disconnected { components });
        }
        if nodes.len() < 2 || edges.is_empty() {
            return Err(TopologyError::TooSmall {
                nodes: nodes.len(),
                edges: edges.len(),
            });
        }
        Ok(Self {
            name: name.into(),
            provenance,
            nodes,
            edges,
            graph,
            index,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Dense index of an external node id.
    pub fn node_index(&self, id: u64) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn edge_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.edges.iter().map(|e| e.length_km)
    }

    pub fn locations(&self) -> Vec<GeoPoint> {
        self.nodes.iter().map(|n| n.location).collect()
    }

    /// Symmetric 0/1 adjacency matrix in dense node order.
    pub fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        self.graph.adjacency_rows()
    }

    pub fn structure_flags(&self) -> StructureFlags {
        StructureFlags::of(&self.graph)
    }

    /// Compares each stored length with the fibre model applied to the
    /// endpoint coordinates. Nothing is modified.
    pub fn length_audit(&self) -> Vec<LengthAudit> {
        self.edges
            .iter()
            .zip(self.graph.edges())
            .map(|(edge, &(u, v))| {
                let hav = haversine_km(&self.nodes[u].location, &self.nodes[v].location);
                let model = fibre_length_km(hav).expect("haversine is non-negative");
                LengthAudit {
                    edge_id: edge.id,
                    stored_km: edge.length_km,
                    model_km: model,
                    relative_divergence: (edge.length_km - model).abs() / model.max(f64::MIN_POSITIVE),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthAudit {
    pub edge_id: u64,
    pub stored_km: f64,
    pub model_km: f64,
    pub relative_divergence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFlags {
    pub is_planar: bool,
    pub has_bridge: bool,
    pub is_biconnected: bool,
    pub bridge_count: usize,
}

impl StructureFlags {
    pub fn of(g: &Graph) -> Self {
        let blocks = structure::decompose(g);
        let bridge_count = blocks.bridges.len();
        Self {
            is_planar: planarity::is_planar(g),
            has_bridge: bridge_count > 0,
            is_biconnected: g.node_count() >= 3
                && g.is_connected()
                && bridge_count == 0
                && blocks.articulation_count() == 0,
            bridge_count,
        }
    }
}
