//! The per-topology metric vector: hop-based structure, km-based spatial
//! measures and the spectral trio, plus the normalisation scheme that turns
//! them into size-comparable values.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodesy::haversine_km;
use crate::graph::Graph;
use crate::spectral::{self, SpectralError, Spectrum, SymmetricMatrix};
use crate::topology::Topology;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("all nodes share one location; spatial normalisation is undefined")]
    DegenerateGeometry,
    #[error("metrics csv: {0}")]
    Csv(String),
}

/// How the spectral and spatial "normalized" fields are derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationScheme {
    /// `rho/(n-1)`, `lambda2/n`, WSD as is, average link length over
    /// km-diameter, km-diameter over the widest node separation.
    #[default]
    Standard,
    /// Raw spectral radius, algebraic connectivity and km values.
    Raw,
}

impl std::str::FromStr for NormalizationScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(Self::Standard),
            "raw" => Ok(Self::Raw),
            other => Err(format!("unknown normalization scheme `{other}` (expected standard|raw)")),
        }
    }
}

macro_rules! metric_vector {
    ($($field:ident),+ $(,)?) => {
        /// One value per named metric for a single topology.
        #[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
        pub struct MetricVector {
            $(pub $field: f64,)+
        }

        impl MetricVector {
            pub const FIELD_NAMES: &'static [&'static str] = &[$(stringify!($field)),+];

            pub fn values(&self) -> Vec<f64> {
                vec![$(self.$field),+]
            }

            pub fn from_values(values: &[f64]) -> Option<Self> {
                let mut it = values.iter().copied();
                let v = Self { $($field: it.next()?,)+ };
                it.next().is_none().then_some(v)
            }

            fn field(&self, name: &str) -> Option<f64> {
                match name {
                    $(stringify!($field) => Some(self.$field),)+
                    _ => None,
                }
            }
        }
    };
}

metric_vector!(
    number_of_nodes,
    number_of_edges,
    average_node_degree,
    average_clustering_coefficient,
    network_density,
    max_node_betweenness,
    avg_node_betweenness,
    max_edge_betweenness,
    avg_edge_betweenness,
    diameter_hops,
    aspl_hops,
    global_efficiency,
    normalized_spectral_radius,
    normalized_algebraic_connectivity,
    normalized_wsd,
    aspl_km,
    avg_link_length_km,
    std_shortest_path_km,
    diameter_km,
    normalized_avg_link_length,
    normalized_diameter_km,
);

impl MetricVector {
    /// Ratios computable from the stored fields.
    pub const DERIVED_NAMES: &'static [&'static str] =
        &["normalized_aspl_km", "normalized_diameter_hops", "normalized_aspl_hops"];

    /// Looks up a stored field or a derived ratio by name.
    pub fn get(&self, name: &str) -> Option<f64> {
        self.field(name).or_else(|| match name {
            "normalized_aspl_km" => Some(self.aspl_km / self.diameter_km),
            "normalized_diameter_hops" => Some(self.diameter_hops / (self.number_of_nodes - 1.0)),
            "normalized_aspl_hops" => Some(self.aspl_hops / (self.number_of_nodes - 1.0)),
            _ => None,
        })
    }

    pub fn is_known_name(name: &str) -> bool {
        Self::FIELD_NAMES.contains(&name) || Self::DERIVED_NAMES.contains(&name)
    }
}

/// Node degrees and their mean `2m/n`.
pub fn degree_stats(g: &Graph) -> (Vec<usize>, f64) {
    let degrees = g.degrees();
    let avg = 2.0 * g.edge_count() as f64 / g.node_count() as f64;
    (degrees, avg)
}

/// All-pairs hop distances by breadth-first search from every vertex.
pub fn hop_paths(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.node_count()).map(|s| g.bfs_distances(s)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct KmPaths {
    pub distances: Vec<Vec<f64>>,
    pub aspl_km: f64,
    pub diameter_km: f64,
    /// Population standard deviation over unordered pairs.
    pub std_km: f64,
}

#[derive(PartialEq)]
struct Frontier(f64, usize);

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

fn dijkstra(g: &Graph, lengths: &[f64], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.node_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Frontier(0.0, source));
    while let Some(Frontier(d, v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(w, e) in g.incident(v) {
            let nd = d + lengths[e];
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(Frontier(nd, w));
            }
        }
    }
    dist
}

/// Length-weighted all-pairs shortest paths with their summary statistics.
pub fn km_paths(g: &Graph, lengths: &[f64]) -> KmPaths {
    let n = g.node_count();
    let distances: Vec<Vec<f64>> = (0..n).map(|s| dijkstra(g, lengths, s)).collect();
    let pairs: Vec<f64> = (0..n)
        .flat_map(|i| distances[i][i + 1..].iter().copied())
        .collect();
    let count = pairs.len() as f64;
    let mean = pairs.iter().sum::<f64>() / count;
    let var = pairs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / count;
    KmPaths {
        aspl_km: mean,
        diameter_km: pairs.iter().copied().fold(0.0, f64::max),
        std_km: var.sqrt(),
        distances,
    }
}

/// Local clustering per node (zero below degree two) and the mean over all
/// nodes.
pub fn clustering_coefficient(g: &Graph) -> (Vec<f64>, f64) {
    let n = g.node_count();
    let local: Vec<f64> = (0..n)
        .map(|v| {
            let nbrs: Vec<usize> = g.neighbors(v).collect();
            let d = nbrs.len();
            if d < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if g.has_edge(a, b) {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (d * (d - 1)) as f64
        })
        .collect();
    let avg = local.iter().sum::<f64>() / n as f64;
    (local, avg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Betweenness {
    /// Normalised by `(n-1)(n-2)/2`.
    pub node: Vec<f64>,
    /// Normalised by `n(n-1)/2`, indexed like `Graph::edges`.
    pub edge: Vec<f64>,
    pub max_node: f64,
    pub avg_node: f64,
    pub max_edge: f64,
    pub avg_edge: f64,
}

/// Brandes accumulation over unweighted shortest paths.
pub fn betweenness(g: &Graph) -> Betweenness {
    let n = g.node_count();
    let m = g.edge_count();
    let mut node = vec![0.0; n];
    let mut edge = vec![0.0; m];
    let mut order = Vec::with_capacity(n);
    let mut dist = vec![usize::MAX; n];
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    for s in 0..n {
        order.clear();
        dist.fill(usize::MAX);
        sigma.fill(0.0);
        delta.fill(0.0);
        dist[s] = 0;
        sigma[s] = 1.0;
        order.push(s);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    order.push(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        for &w in order.iter().rev() {
            for &(v, e) in g.incident(w) {
                if dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                    let c = sigma[v] / sigma[w] * (1.0 + delta[w]);
                    edge[e] += c;
                    delta[v] += c;
                }
            }
            if w != s {
                node[w] += delta[w];
            }
        }
    }
    // each unordered pair was visited from both ends
    let node_scale = if n > 2 { 1.0 / ((n - 1) * (n - 2)) as f64 } else { 0.0 };
    let edge_scale = if n > 1 { 1.0 / (n * (n - 1)) as f64 } else { 0.0 };
    node.iter_mut().for_each(|x| *x *= node_scale);
    edge.iter_mut().for_each(|x| *x *= edge_scale);
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    Betweenness {
        max_node: max(&node),
        avg_node: mean(&node),
        max_edge: max(&edge),
        avg_edge: mean(&edge),
        node,
        edge,
    }
}

/// Mean inverse hop distance over ordered pairs of distinct nodes.
pub fn global_efficiency(g: &Graph) -> f64 {
    efficiency_from(&hop_paths(g))
}

fn efficiency_from(hops: &[Vec<usize>]) -> f64 {
    let n = hops.len();
    let mut sum = 0.0;
    for (i, row) in hops.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            if i != j && d != usize::MAX {
                sum += 1.0 / d as f64;
            }
        }
    }
    sum / (n * (n - 1)) as f64
}

/// Diameter and average shortest path length in hops over ordered pairs.
pub fn hop_summary(hops: &[Vec<usize>]) -> (f64, f64) {
    let n = hops.len();
    let mut total = 0usize;
    let mut diameter = 0usize;
    for (i, row) in hops.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            if i != j {
                total += d;
                diameter = diameter.max(d);
            }
        }
    }
    (diameter as f64, total as f64 / (n * (n - 1)) as f64)
}

/// Spectra of the adjacency, Laplacian and normalised Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpectra {
    pub adjacency: Spectrum,
    pub laplacian: Spectrum,
    pub normalized_laplacian: Spectrum,
}

pub fn graph_spectra(g: &Graph) -> Result<GraphSpectra, MetricsError> {
    let a = SymmetricMatrix::new(g.adjacency_rows())?;
    Ok(GraphSpectra {
        adjacency: spectral::eigenvalues_symmetric(&a)?,
        laplacian: spectral::eigenvalues_symmetric(&spectral::laplacian(&a)?)?,
        normalized_laplacian: spectral::eigenvalues_symmetric(&spectral::normalized_laplacian(&a)?)?,
    })
}

pub fn metric_vector(t: &Topology, scheme: NormalizationScheme) -> Result<MetricVector, MetricsError> {
    let g = t.graph();
    let n = g.node_count() as f64;
    let m = g.edge_count() as f64;
    let (_, avg_degree) = degree_stats(g);
    let (_, avg_clustering) = clustering_coefficient(g);
    let hops = hop_paths(g);
    let (diameter_hops, aspl_hops) = hop_summary(&hops);
    let bc = betweenness(g);

    let spectra = graph_spectra(g)?;
    let rho = spectra
        .adjacency
        .values()
        .iter()
        .fold(0.0, |acc: f64, x| acc.max(x.abs()));
    let lambda2 = spectral::algebraic_connectivity_of(&spectra.laplacian)?;
    let wsd = spectral::wsd(&spectra.normalized_laplacian)?;

    let lengths: Vec<f64> = t.edge_lengths().collect();
    let km = km_paths(g, &lengths);
    let avg_link = lengths.iter().sum::<f64>() / m;

    let (nsr, nac, nall, ndk) = match scheme {
        NormalizationScheme::Standard => {
            let locs = t.locations();
            let mut widest: f64 = 0.0;
            for i in 0..locs.len() {
                for j in i + 1..locs.len() {
                    widest = widest.max(haversine_km(&locs[i], &locs[j]));
                }
            }
            if widest <= 0.0 {
                return Err(MetricsError::DegenerateGeometry);
            }
            (rho / (n - 1.0), lambda2 / n, avg_link / km.diameter_km, km.diameter_km / widest)
        }
        NormalizationScheme::Raw => (rho, lambda2, avg_link, km.diameter_km),
    };

    Ok(MetricVector {
        number_of_nodes: n,
        number_of_edges: m,
        average_node_degree: avg_degree,
        average_clustering_coefficient: avg_clustering,
        network_density: 2.0 * m / (n * (n - 1.0)),
        max_node_betweenness: bc.max_node,
        avg_node_betweenness: bc.avg_node,
        max_edge_betweenness: bc.max_edge,
        avg_edge_betweenness: bc.avg_edge,
        diameter_hops,
        aspl_hops,
        global_efficiency: efficiency_from(&hops),
        normalized_spectral_radius: nsr,
        normalized_algebraic_connectivity: nac,
        normalized_wsd: wsd,
        aspl_km: km.aspl_km,
        avg_link_length_km: avg_link,
        std_shortest_path_km: km.std_km,
        diameter_km: km.diameter_km,
        normalized_avg_link_length: nall,
        normalized_diameter_km: ndk,
    })
}

/// A metric vector tagged with its topology name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMetrics {
    pub topology: String,
    pub metrics: MetricVector,
}

/// Metric vectors for a corpus, sorted by topology name. Runs in parallel
/// when the `parallel` feature is on; output order never depends on it.
pub fn corpus_metrics(
    corpus: &[Topology],
    scheme: NormalizationScheme,
) -> Vec<(String, Result<MetricVector, MetricsError>)> {
    let mut out = crate::par::map_indices(corpus.len(), |i| {
        let t = &corpus[i];
        (t.name().to_string(), metric_vector(t, scheme))
    });
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Consolidated CSV: a `topology` column then one column per field.
pub fn write_metrics_csv(rows: &[NamedMetrics]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["topology"];
    header.extend_from_slice(MetricVector::FIELD_NAMES);
    w.write_record(&header).expect("in-memory write");
    for row in rows {
        let mut rec = vec![row.topology.clone()];
        rec.extend(row.metrics.values().iter().map(|v| v.to_string()));
        w.write_record(&rec).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn read_metrics_csv(bytes: &[u8]) -> Result<Vec<NamedMetrics>, MetricsError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes);
    let header = r.headers().map_err(|e| MetricsError::Csv(e.to_string()))?.clone();
    let mut expected = vec!["topology"];
    expected.extend_from_slice(MetricVector::FIELD_NAMES);
    if header.iter().ne(expected.iter().copied()) {
        return Err(MetricsError::Csv(format!(
            "header must be `{}`",
            expected.join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| MetricsError::Csv(e.to_string()))?;
        let values: Vec<f64> = rec
            .iter()
            .skip(1)
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| MetricsError::Csv(format!("row {}: {e}", i + 1)))?;
        let metrics = MetricVector::from_values(&values)
            .ok_or_else(|| MetricsError::Csv(format!("row {}: wrong field count", i + 1)))?;
        out.push(NamedMetrics {
            topology: rec[0].to_string(),
            metrics,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesy::GeoPoint;
    use crate::graph::test_graphs::*;
    use crate::topology::{Edge, Node, Provenance};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    /// Topology on `g` with nodes on a small lattice and unit-ish lengths.
    fn embed(g: &Graph, rng: &mut ChaCha8Rng) -> Topology {
        let nodes = (0..g.node_count())
            .map(|i| Node {
                id: i as u64 + 1,
                location: GeoPoint::new(40.0 + (i / 7) as f64, -100.0 + (i % 7) as f64).unwrap(),
                place_name: format!("n{i}"),
                country: String::new(),
            })
            .collect();
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| Edge {
                id: e as u64 + 1,
                source: u as u64 + 1,
                destination: v as u64 + 1,
                length_km: rng.gen_range(50.0..900.0),
            })
            .collect();
        Topology::new("t", nodes, edges, Provenance::Synthetic).unwrap()
    }

    #[test]
    fn degrees() {
        let (d, avg) = degree_stats(&complete(4));
        assert_eq!(d, vec![3, 3, 3, 3]);
        assert_eq!(avg, 3.0);
        let (d, avg) = degree_stats(&star(3));
        assert_eq!(d, vec![3, 1, 1, 1]);
        assert_eq!(avg, 1.5);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let g = random_connected(rng.gen_range(2..20), 0.2, &mut rng);
            let (d, avg) = degree_stats(&g);
            assert!(close(avg, d.iter().sum::<usize>() as f64 / d.len() as f64));
        }
    }

    #[test]
    fn hop_examples() {
        let (diam, _) = hop_summary(&hop_paths(&cycle(6)));
        assert_eq!(diam, 3.0);
        let (_, aspl) = hop_summary(&hop_paths(&path(4)));
        assert!(close(aspl, 5.0 / 3.0));
        let (diam, aspl) = hop_summary(&hop_paths(&complete(6)));
        assert_eq!((diam, aspl), (1.0, 1.0));
    }

    #[test]
    fn km_examples() {
        let single = km_paths(&path(2), &[100.0]);
        assert_eq!((single.aspl_km, single.diameter_km, single.std_km), (100.0, 100.0, 0.0));
        let tri = km_paths(&cycle(3), &[3.0, 4.0, 5.0]);
        assert_eq!(tri.diameter_km, 5.0);
        let mut pairs: Vec<f64> = vec![tri.distances[0][1], tri.distances[1][2], tri.distances[0][2]];
        pairs.sort_by(f64::total_cmp);
        assert_eq!(pairs, vec![3.0, 4.0, 5.0]);
        assert!(close(tri.aspl_km, 4.0));
        assert!(close(tri.std_km, (2.0f64 / 3.0).sqrt()));

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = random_connected(12, 0.3, &mut rng);
        let lengths: Vec<f64> = (0..g.edge_count()).map(|_| rng.gen_range(1.0..100.0)).collect();
        let base = km_paths(&g, &lengths);
        let scaled = km_paths(&g, &lengths.iter().map(|l| l * 3.5).collect::<Vec<_>>());
        assert!((scaled.aspl_km - 3.5 * base.aspl_km).abs() < 1e-9);
        assert!((scaled.diameter_km - 3.5 * base.diameter_km).abs() < 1e-9);
        assert!((scaled.std_km - 3.5 * base.std_km).abs() < 1e-9);
    }

    #[test]
    fn clustering_examples() {
        let (c, avg) = clustering_coefficient(&complete(3));
        assert_eq!(c, vec![1.0; 3]);
        assert_eq!(avg, 1.0);
        assert_eq!(clustering_coefficient(&star(3)).1, 0.0);
        // K4 minus {2,3}: nodes 0,1 see 2 of 3 neighbour links, 2,3 see 1 of 1
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        let (c, avg) = clustering_coefficient(&g);
        assert!(close(c[0], 2.0 / 3.0) && close(c[1], 2.0 / 3.0));
        assert_eq!((c[2], c[3]), (1.0, 1.0));
        assert!(close(avg, 5.0 / 6.0));
        assert_eq!(clustering_coefficient(&path(6)).1, 0.0);
    }

    #[test]
    fn betweenness_examples() {
        let s = betweenness(&star(5));
        assert!(close(s.node[0], 1.0));
        assert!(s.node[1..].iter().all(|&x| x == 0.0));
        let p = betweenness(&path(4));
        assert!(close(p.node[1], 2.0 / 3.0) && close(p.node[2], 2.0 / 3.0));
        // edges of P4 in order (0,1), (1,2), (2,3)
        assert!(close(p.edge[1], 2.0 / 3.0));
        assert!(close(p.edge[0], 0.5));
        let k2 = betweenness(&path(2));
        assert_eq!(k2.node, vec![0.0, 0.0]);
        assert!(close(k2.edge[0], 1.0));
    }

    #[test]
    fn efficiency_examples() {
        assert!(close(global_efficiency(&complete(5)), 1.0));
        assert!(close(global_efficiency(&path(3)), 5.0 / 6.0));
    }

    #[test]
    fn vector_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let k4 = embed(&complete(4), &mut rng);
        let v = metric_vector(&k4, NormalizationScheme::Standard).unwrap();
        assert_eq!((v.number_of_nodes, v.number_of_edges, v.network_density), (4.0, 6.0, 1.0));
        assert!((v.normalized_spectral_radius - 1.0).abs() < 1e-9);
        assert!((v.normalized_algebraic_connectivity - 1.0).abs() < 1e-9);
        for _ in 0..50 {
            let g = random_connected(rng.gen_range(2..25), 0.15, &mut rng);
            let t = embed(&g, &mut rng);
            let v = metric_vector(&t, NormalizationScheme::Standard).unwrap();
            assert!(v.values().iter().all(|x| x.is_finite()));
            assert!((v.network_density - v.average_node_degree / (v.number_of_nodes - 1.0)).abs() < 1e-12);
            assert!(v.network_density > 0.0 && v.network_density <= 1.0);
            assert!(v.global_efficiency > 0.0 && v.global_efficiency <= 1.0);
            for b in [v.max_node_betweenness, v.avg_node_betweenness, v.max_edge_betweenness, v.avg_edge_betweenness] {
                assert!((0.0..=1.0 + 1e-12).contains(&b));
            }
            assert!(v.diameter_hops >= v.aspl_hops && v.aspl_hops >= 1.0);
            let km = km_paths(t.graph(), &t.edge_lengths().collect::<Vec<_>>());
            let max_km = km.distances.iter().flatten().copied().fold(0.0, f64::max);
            assert!((v.diameter_km - max_km).abs() < 1e-9);
            let hop_max = hop_paths(t.graph()).into_iter().flatten().max().unwrap();
            assert_eq!(v.diameter_hops, hop_max as f64);
        }
    }

    #[test]
    fn relabelling_leaves_vector_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let g = random_connected(rng.gen_range(3..18), 0.2, &mut rng);
            let t = embed(&g, &mut rng);
            let mut nodes = t.nodes().to_vec();
            nodes.shuffle(&mut rng);
            let mut edges = t.edges().to_vec();
            edges.shuffle(&mut rng);
            let permuted = Topology::new("p", nodes, edges, Provenance::Synthetic).unwrap();
            let a = metric_vector(&t, NormalizationScheme::Standard).unwrap().values();
            let b = metric_vector(&permuted, NormalizationScheme::Standard).unwrap().values();
            for (name, (x, y)) in MetricVector::FIELD_NAMES.iter().zip(a.iter().zip(&b)) {
                assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{name}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn derived_names_and_raw_scheme() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = embed(&cycle(6), &mut rng);
        let v = metric_vector(&t, NormalizationScheme::Standard).unwrap();
        assert_eq!(v.get("normalized_aspl_km"), Some(v.aspl_km / v.diameter_km));
        assert_eq!(v.get("normalized_diameter_hops"), Some(3.0 / 5.0));
        assert_eq!(v.get("diameter_km"), Some(v.diameter_km));
        assert_eq!(v.get("nope"), None);
        let raw = metric_vector(&t, NormalizationScheme::Raw).unwrap();
        assert!((raw.normalized_spectral_radius - 2.0).abs() < 1e-9);
        assert_eq!(raw.normalized_diameter_km, raw.diameter_km);
    }

    #[test]
    fn metrics_csv_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rows: Vec<NamedMetrics> = (0..3)
            .map(|i| NamedMetrics {
                topology: format!("t{i}"),
                metrics: metric_vector(&embed(&random_connected(8, 0.3, &mut rng), &mut rng), NormalizationScheme::Standard)
                    .unwrap(),
            })
            .collect();
        let bytes = write_metrics_csv(&rows);
        assert_eq!(read_metrics_csv(&bytes).unwrap(), rows);
        assert!(read_metrics_csv(b"topology,x\n").is_err());
    }
}
