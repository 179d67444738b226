//! Independent reference implementations shared by the integration tests.
//! Everything here is deliberately naive: explicit path enumeration,
//! Floyd–Warshall and brute-force subgraph counting.

#![allow(dead_code)]

use optitopo::geodesy::GeoPoint;
use optitopo::topology::{Edge, Node, Provenance, Topology};
use rand::Rng;

/// Connected random topology: a random spanning tree plus extra edges with
/// probability `p`, nodes on a jittered lattice, random fibre lengths.
pub fn random_topology<R: Rng>(name: &str, n: usize, p: f64, rng: &mut R) -> Topology {
    let mut pairs = Vec::new();
    for v in 1..n {
        pairs.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !pairs.contains(&(u, v)) && rng.gen_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    let nodes = (0..n)
        .map(|i| Node {
            id: i as u64 + 1,
            location: GeoPoint::new(
                35.0 + (i / 10) as f64 + rng.gen_range(0.0..0.5),
                -110.0 + (i % 10) as f64 + rng.gen_range(0.0..0.5),
            )
            .unwrap(),
            place_name: format!("n{i}"),
            country: String::new(),
        })
        .collect();
    let edges = pairs
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| Edge {
            id: e as u64 + 1,
            source: u as u64 + 1,
            destination: v as u64 + 1,
            length_km: rng.gen_range(80.0..2500.0),
        })
        .collect();
    Topology::new(name, nodes, edges, Provenance::Synthetic).unwrap()
}

pub fn adjacency(t: &Topology) -> Vec<Vec<bool>> {
    let n = t.node_count();
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in t.graph().edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

pub fn floyd_hops(a: &[Vec<bool>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
        for j in 0..n {
            if a[i][j] {
                d[i][j] = 1.0;
            }
        }
    }
    floyd(&mut d);
    d
}

pub fn floyd_km(t: &Topology) -> Vec<Vec<f64>> {
    let n = t.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for (e, &(u, v)) in t.graph().edges().iter().enumerate() {
        let l = t.edges()[e].length_km;
        d[u][v] = l;
        d[v][u] = l;
    }
    floyd(&mut d);
    d
}

fn floyd(d: &mut [Vec<f64>]) {
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
}

/// Every shortest s-t path as a vertex list.
pub fn shortest_paths(a: &[Vec<bool>], hops: &[Vec<f64>], s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(a: &[Vec<bool>], hops: &[Vec<f64>], t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for w in 0..a.len() {
            if a[v][w] && hops[w][t] == hops[v][t] - 1.0 {
                path.push(w);
                walk(a, hops, t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(a, hops, t, &mut vec![s], &mut out);
    out
}

pub struct Reference {
    pub node_betweenness: Vec<f64>,
    /// Keyed like `Graph::edges`.
    pub edge_betweenness: Vec<f64>,
    pub clustering: Vec<f64>,
    pub efficiency: f64,
    pub diameter_hops: f64,
    pub aspl_hops: f64,
    pub diameter_km: f64,
    pub aspl_km: f64,
}

pub fn reference(t: &Topology) -> Reference {
    let n = t.node_count();
    let a = adjacency(t);
    let hops = floyd_hops(&a);
    let edges = t.graph().edges().to_vec();
    let mut nb = vec![0.0; n];
    let mut eb = vec![0.0; edges.len()];
    for s in 0..n {
        for u in s + 1..n {
            let paths = shortest_paths(&a, &hops, s, u);
            let total = paths.len() as f64;
            for v in 0..n {
                if v != s && v != u {
                    nb[v] += paths.iter().filter(|p| p.contains(&v)).count() as f64 / total;
                }
            }
            for (e, &(x, y)) in edges.iter().enumerate() {
                let uses = paths
                    .iter()
                    .filter(|p| p.windows(2).any(|w| (w[0] == x && w[1] == y) || (w[0] == y && w[1] == x)))
                    .count();
                eb[e] += uses as f64 / total;
            }
        }
    }
    let node_norm = if n > 2 { ((n - 1) * (n - 2)) as f64 / 2.0 } else { f64::INFINITY };
    nb.iter_mut().for_each(|x| *x /= node_norm);
    eb.iter_mut().for_each(|x| *x /= (n * (n - 1)) as f64 / 2.0);

    let clustering = (0..n)
        .map(|v| {
            let nbrs: Vec<usize> = (0..n).filter(|&w| a[v][w]).collect();
            let k = nbrs.len();
            if k < 2 {
                return 0.0;
            }
            let mut tri = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if a[nbrs[i]][nbrs[j]] {
                        tri += 1;
                    }
                }
            }
            tri as f64 / (k * (k - 1) / 2) as f64
        })
        .collect();

    let mut eff = 0.0;
    let mut hop_sum = 0.0;
    let mut hop_max: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                eff += 1.0 / hops[i][j];
                hop_sum += hops[i][j];
                hop_max = hop_max.max(hops[i][j]);
            }
        }
    }
    let km = floyd_km(t);
    let mut km_pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            km_pairs.push(km[i][j]);
        }
    }
    let ordered = (n * (n - 1)) as f64;
    Reference {
        node_betweenness: nb,
        edge_betweenness: eb,
        clustering,
        efficiency: eff / ordered,
        diameter_hops: hop_max,
        aspl_hops: hop_sum / ordered,
        diameter_km: km_pairs.iter().copied().fold(0.0, f64::max),
        aspl_km: km_pairs.iter().sum::<f64>() / km_pairs.len() as f64,
    }
}

/// Worst absolute disagreement between the library and the reference on one
/// topology, over node/edge betweenness, clustering, efficiency and hop
/// path statistics.
pub fn worst_hop_metric_error(t: &Topology) -> f64 {
    use optitopo::metrics;
    let r = reference(t);
    let g = t.graph();
    let bc = metrics::betweenness(g);
    let (cc, _) = metrics::clustering_coefficient(g);
    let (diam, aspl) = metrics::hop_summary(&metrics::hop_paths(g));
    let mut worst: f64 = 0.0;
    for (x, y) in bc.node.iter().zip(&r.node_betweenness) {
        worst = worst.max((x - y).abs());
    }
    for (x, y) in bc.edge.iter().zip(&r.edge_betweenness) {
        worst = worst.max((x - y).abs());
    }
    for (x, y) in cc.iter().zip(&r.clustering) {
        worst = worst.max((x - y).abs());
    }
    worst = worst.max((metrics::global_efficiency(g) - r.efficiency).abs());
    worst = worst.max((diam - r.diameter_hops).abs());
    worst.max((aspl - r.aspl_hops).abs())
}

/// Relative closeness with an absolute floor of `tol`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
