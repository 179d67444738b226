//! CSV ingestion and export in the `nodes_<name>.csv` / `edges_<name>.csv`
//! layout.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use super::{Edge, Node, Provenance, Topology, TopologyError};
use crate::geodesy::GeoPoint;

pub const NODE_HEADER: [&str; 5] = ["Node_ID", "Latitude", "Longitude", "Location Name", "Country"];
pub const EDGE_HEADER: [&str; 4] = ["Edge_ID", "Source", "Destination", "Computed Length (km)"];

fn strip_bom(bytes: &[u8]) -> &[u8] {
    bytes.strip_prefix(&[0xEF, 0xBB, 0xBF]).unwrap_or(bytes)
}

fn records(
    file: &'static str,
    bytes: &[u8],
    header: &[&str],
) -> Result<Vec<csv::StringRecord>, TopologyError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(strip_bom(bytes));
    let found = reader
        .headers()
        .map_err(|e| TopologyError::Csv { file, message: e.to_string() })?
        .clone();
    if found.len() != header.len() || found.iter().zip(header).any(|(a, b)| a != *b) {
        return Err(TopologyError::Header {
            file,
            expected: header.join(","),
            found: found.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| TopologyError::Csv { file, message: e.to_string() })?;
        if rec.len() != header.len() {
            return Err(TopologyError::Field {
                file,
                row: i + 1,
                column: "*",
                message: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        out.push(rec);
    }
    Ok(out)
}

fn parse<T: std::str::FromStr>(
    file: &'static str,
    row: usize,
    column: &'static str,
    raw: &str,
) -> Result<T, TopologyError> {
    raw.parse().map_err(|_| TopologyError::Field {
        file,
        row,
        column,
        message: format!("cannot parse `{raw}`"),
    })
}

/// Parses a node file and an edge file into a validated topology. Row
/// numbers in errors count data rows from 1, header excluded.
pub fn read_topology(
    name: &str,
    nodes: &[u8],
    edges: &[u8],
    provenance: Provenance,
) -> Result<Topology, TopologyError> {
    const NODES: &str = "nodes";
    const EDGES: &str = "edges";
    let mut node_list = Vec::new();
    for (i, rec) in records(NODES, nodes, &NODE_HEADER)?.iter().enumerate() {
        let row = i + 1;
        let lat: f64 = parse(NODES, row, "Latitude", &rec[1])?;
        let lon: f64 = parse(NODES, row, "Longitude", &rec[2])?;
        let location = GeoPoint::new(lat, lon).map_err(|e| TopologyError::Field {
            file: NODES,
            row,
            column: "Latitude/Longitude",
            message: e.to_string(),
        })?;
        node_list.push(Node {
            id: parse(NODES, row, "Node_ID", &rec[0])?,
            location,
            place_name: rec[3].to_string(),
            country: rec[4].to_string(),
        });
    }
    let mut edge_list = Vec::new();
    for (i, rec) in records(EDGES, edges, &EDGE_HEADER)?.iter().enumerate() {
        let row = i + 1;
        edge_list.push(Edge {
            id: parse(EDGES, row, "Edge_ID", &rec[0])?,
            source: parse(EDGES, row, "Source", &rec[1])?,
            destination: parse(EDGES, row, "Destination", &rec[2])?,
            length_km: parse(EDGES, row, "Computed Length (km)", &rec[3])?,
        });
    }
    Topology::new(name, node_list, edge_list, provenance)
}

/// Serialises a topology to `(nodes csv, edges csv)` bytes. Coordinates use
/// the shortest exact decimal form; lengths are printed with two decimals.
pub fn write_topology(t: &Topology) -> (Vec<u8>, Vec<u8>) {
    let mut nodes = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    nodes.write_record(NODE_HEADER).expect("in-memory write");
    for node in t.nodes() {
        nodes
            .write_record([
                node.id.to_string(),
                node.location.latitude_deg().to_string(),
                node.location.longitude_deg().to_string(),
                node.place_name.clone(),
                node.country.clone(),
            ])
            .expect("in-memory write");
    }
    let mut edges = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    edges.write_record(EDGE_HEADER).expect("in-memory write");
    for edge in t.edges() {
        edges
            .write_record([
                edge.id.to_string(),
                edge.source.to_string(),
                edge.destination.to_string(),
                format!("{:.2}", edge.length_km),
            ])
            .expect("in-memory write");
    }
    (
        nodes.into_inner().expect("in-memory flush"),
        edges.into_inner().expect("in-memory flush"),
    )
}

pub fn nodes_file_name(name: &str) -> String {
    format!("nodes_{name}.csv")
}

pub fn edges_file_name(name: &str) -> String {
    format!("edges_{name}.csv")
}

fn read_file(path: &Path) -> Result<Vec<u8>, TopologyError> {
    let mut buf = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|e| TopologyError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    Ok(buf)
}

/// Reads `nodes_<name>.csv` and `edges_<name>.csv` from `dir`.
pub fn read_topology_dir(dir: &Path, name: &str, provenance: Provenance) -> Result<Topology, TopologyError> {
    let nodes = read_file(&dir.join(nodes_file_name(name)))?;
    let edges = read_file(&dir.join(edges_file_name(name)))?;
    read_topology(name, &nodes, &edges, provenance)
}

/// Writes the file pair for `t` into `dir`.
pub fn write_topology_dir(dir: &Path, t: &Topology) -> Result<(), TopologyError> {
    let (nodes, edges) = write_topology(t);
    let io_err = |path: PathBuf| {
        move |e: std::io::Error| TopologyError::Io {
            path,
            message: e.to_string(),
        }
    };
    fs::create_dir_all(dir).map_err(io_err(dir.to_path_buf()))?;
    let np = dir.join(nodes_file_name(t.name()));
    fs::write(&np, nodes).map_err(io_err(np.clone()))?;
    let ep = dir.join(edges_file_name(t.name()));
    fs::write(&ep, edges).map_err(io_err(ep.clone()))?;
    Ok(())
}

/// A `nodes_<name>.csv` file with its matching edge file.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TopologyFiles {
    pub name: String,
    pub dir: PathBuf,
}

/// Recursively finds every complete file pair under `root`, sorted by name
/// then directory. Node files without an edge file are skipped.
pub fn discover(root: &Path) -> Result<Vec<TopologyFiles>, TopologyError> {
    let mut out = Vec::new();
    let mut pending = vec![root.to_path_buf()];
    while let Some(dir) = pending.pop() {
        let entries = fs::read_dir(&dir).map_err(|e| TopologyError::Io {
            path: dir.clone(),
            message: e.to_string(),
        })?;
        for entry in entries {
            let entry = entry.map_err(|e| TopologyError::Io {
                path: dir.clone(),
                message: e.to_string(),
            })?;
            let path = entry.path();
            if path.is_dir() {
                pending.push(path);
                continue;
            }
            let Some(file) = path.file_name().and_then(|f| f.to_str()) else {
                continue;
            };
            if let Some(name) = file.strip_prefix("nodes_").and_then(|f| f.strip_suffix(".csv")) {
                if dir.join(edges_file_name(name)).is_file() {
                    out.push(TopologyFiles {
                        name: name.to_string(),
                        dir: dir.clone(),
                    });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}
