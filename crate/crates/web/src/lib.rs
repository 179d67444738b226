//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes and returns plain JSON strings. The `*_json`
//! functions hold the logic so they can be tested natively.

use optitopo::generator::{generate, GenerationSpec};
use optitopo::geodesy::{fibre_length_km, GeoPoint, RegionLabel};
use optitopo::metrics::{graph_spectra, metric_vector, MetricVector, NormalizationScheme};
use optitopo::spectral::{wsd_histogram, WSD_BINS};
use optitopo::topology::io::read_topology;
use optitopo::topology::{Edge, Node, Provenance, StructureFlags, Topology};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use wasm_bindgen::prelude::*;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WebNode {
    pub id: u64,
    pub lat: f64,
    pub lon: f64,
    #[serde(default)]
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WebEdge {
    pub id: u64,
    pub source: u64,
    pub target: u64,
    pub length_km: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WebTopology {
    pub name: String,
    pub nodes: Vec<WebNode>,
    pub edges: Vec<WebEdge>,
}

impl WebTopology {
    fn of(t: &Topology) -> Self {
        Self {
            name: t.name().to_string(),
            nodes: t
                .nodes()
                .iter()
                .map(|n| WebNode {
                    id: n.id,
                    lat: n.location.latitude_deg(),
                    lon: n.location.longitude_deg(),
                    name: n.place_name.clone(),
                })
                .collect(),
            edges: t
                .edges()
                .iter()
                .map(|e| WebEdge {
                    id: e.id,
                    source: e.source,
                    target: e.destination,
                    length_km: e.length_km,
                })
                .collect(),
        }
    }

    fn to_topology(&self) -> Result<Topology, String> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                Ok(Node {
                    id: n.id,
                    location: GeoPoint::new(n.lat, n.lon).map_err(|e| format!("node {}: {e}", n.id))?,
                    place_name: n.name.clone(),
                    country: String::new(),
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                id: e.id,
                source: e.source,
                destination: e.target,
                length_km: e.length_km,
            })
            .collect();
        Topology::new(self.name.clone(), nodes, edges, Provenance::Synthetic).map_err(|e| e.to_string())
    }
}

fn flags_json(f: StructureFlags) -> Value {
    json!({
        "is_planar": f.is_planar,
        "has_bridge": f.has_bridge,
        "is_biconnected": f.is_biconnected,
        "bridge_count": f.bridge_count,
    })
}

/// A fresh synthetic topology with its generation report.
pub fn generate_json(n: usize, density: f64, region: &str, theta: f64, seed: u64) -> Result<String, String> {
    let region: RegionLabel = region.parse()?;
    let mut spec = GenerationSpec::new(n, density, region, seed);
    spec.theta = theta;
    let name = format!("{region}-d{density:.1}-n{n}-s{seed}");
    let (t, report) = generate(&name, &spec).map_err(|e| e.to_string())?;
    let out = json!({
        "topology": WebTopology::of(&t),
        "edge_target": report.edge_target,
        "grown_edges": report.grown_edges,
        "repair_edges": report.repair_edges,
        "flags": flags_json(t.structure_flags()),
    });
    Ok(out.to_string())
}

fn analyze(t: &Topology, scheme: NormalizationScheme) -> Result<String, String> {
    let metrics = metric_vector(t, scheme).map_err(|e| e.to_string())?;
    let spectra = graph_spectra(t.graph()).map_err(|e| e.to_string())?;
    let histogram = wsd_histogram(&spectra.normalized_laplacian).map_err(|e| e.to_string())?;
    let fields: Map<String, Value> = MetricVector::FIELD_NAMES
        .iter()
        .zip(metrics.values())
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    let degrees = t.graph().degrees();
    let mut degree_histogram = vec![0usize; degrees.iter().copied().max().unwrap_or(0) + 1];
    for d in degrees {
        degree_histogram[d] += 1;
    }
    let out = json!({
        "name": t.name(),
        "metrics": fields,
        "flags": flags_json(t.structure_flags()),
        "adjacency_eigenvalues": spectra.adjacency.values(),
        "laplacian_eigenvalues": spectra.laplacian.values(),
        "normalized_laplacian_eigenvalues": spectra.normalized_laplacian.values(),
        "wsd_bins": WSD_BINS,
        "wsd_histogram": histogram.to_vec(),
        "degree_histogram": degree_histogram,
    });
    Ok(out.to_string())
}

fn scheme(name: &str) -> Result<NormalizationScheme, String> {
    name.parse()
}

/// Metrics, spectra and histograms for a topology in the `generate_json`
/// shape (either the whole result or its `topology` member).
pub fn analyze_json(topology_json: &str, normalization: &str) -> Result<String, String> {
    let value: Value = serde_json::from_str(topology_json).map_err(|e| e.to_string())?;
    let inner = value.get("topology").cloned().unwrap_or(value);
    let web: WebTopology = serde_json::from_value(inner).map_err(|e| e.to_string())?;
    analyze(&web.to_topology()?, scheme(normalization)?)
}

/// Same as [`analyze_json`] for a pasted nodes/edges CSV pair.
pub fn analyze_csv(nodes_csv: &str, edges_csv: &str, normalization: &str) -> Result<String, String> {
    let t = read_topology("pasted", nodes_csv.as_bytes(), edges_csv.as_bytes(), Provenance::Real).map_err(|e| e.to_string())?;
    let mut out: Value = serde_json::from_str(&analyze(&t, scheme(normalization)?)?).map_err(|e| e.to_string())?;
    out["topology"] = serde_json::to_value(WebTopology::of(&t)).map_err(|e| e.to_string())?;
    Ok(out.to_string())
}

/// `steps + 1` samples of the fibre-length model on `[0, max_km]`.
pub fn fibre_curve_json(max_km: f64, steps: usize) -> Result<String, String> {
    if !(max_km > 0.0 && max_km.is_finite()) || steps == 0 {
        return Err("need max_km > 0 and steps > 0".into());
    }
    let points = (0..=steps)
        .map(|i| {
            let d = max_km * i as f64 / steps as f64;
            fibre_length_km(d).map(|f| json!({ "haversine_km": d, "fibre_km": f }))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(Value::Array(points).to_string())
}

#[wasm_bindgen(js_name = generateTopology)]
pub fn generate_topology(n: u32, density: f64, region: &str, theta: f64, seed: u32) -> Result<String, JsError> {
    generate_json(n as usize, density, region, theta, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = analyzeTopology)]
pub fn analyze_topology(topology_json: &str, normalization: &str) -> Result<String, JsError> {
    analyze_json(topology_json, normalization).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = analyzeCsv)]
pub fn analyze_csv_files(nodes_csv: &str, edges_csv: &str, normalization: &str) -> Result<String, JsError> {
    analyze_csv(nodes_csv, edges_csv, normalization).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = fibreCurve)]
pub fn fibre_curve(max_km: f64, steps: u32) -> Result<String, JsError> {
    fibre_curve_json(max_km, steps as usize).map_err(|e| JsError::new(&e))
}
