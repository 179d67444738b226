//! Distance-weighted preferential attachment: geographically spaced nodes
//! join one at a time and attach to existing nodes, favouring near,
//! well-connected targets. Growth is followed by a shortest-fibre repair
//! pass until the graph is biconnected.

use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodesy::{fibre_length_km, haversine_km, sample_point, GeoPoint, Region, RegionLabel, PLACEMENT_RADIUS_KM};
use crate::graph::Graph;
use crate::topology::io::write_topology_dir;
use crate::topology::structure::decompose;
use crate::topology::{Edge, Node, Provenance, Topology, TopologyError};

pub const DEFAULT_THETA: f64 = 5.0;
pub const MIN_NODES: usize = 10;
pub const MAX_NODES: usize = 100;
pub const MIN_DENSITY: f64 = 1.2;
/// Rejected draws allowed per node before placement gives up.
pub const PLACEMENT_ATTEMPTS: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerationError {
    #[error("node count {n} outside [{min}, {max}]")]
    NodeCount { n: usize, min: usize, max: usize },
    #[error("density multiplier {0} must be finite and at least {MIN_DENSITY}")]
    Density(f64),
    #[error("theta {0} must be finite and positive")]
    Theta(f64),
    #[error("minimum spacing {0} km must be finite and non-negative")]
    Spacing(f64),
    #[error("edge target {target} below node count {n}")]
    EdgeTarget { target: usize, n: usize },
    #[error("placed {placed} of {requested} nodes before giving up; region too small for the spacing")]
    Placement { placed: usize, requested: usize },
    #[error("nodes {0} and {1} share a location")]
    ZeroDistance(usize, usize),
    #[error("reference topology is not biconnected")]
    NotBiconnected,
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Where nodes come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// Rejection-sampled inside a rectangle with minimum spacing.
    Region(Region),
    /// Fixed coordinates, used as given.
    Fixed(Vec<GeoPoint>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSpec {
    pub n: usize,
    pub density: f64,
    pub placement: Placement,
    pub theta: f64,
    pub min_spacing_km: f64,
    pub seed: u64,
    /// Overrides `round(density * n)` when set.
    pub edge_target: Option<usize>,
}

impl GenerationSpec {
    pub fn new(n: usize, density: f64, region: RegionLabel, seed: u64) -> Self {
        Self {
            n,
            density,
            placement: Placement::Region(Region::preset(region)),
            theta: DEFAULT_THETA,
            min_spacing_km: PLACEMENT_RADIUS_KM,
            seed,
            edge_target: None,
        }
    }

    /// Edge count the growth phase aims for, clamped to the complete graph.
    pub fn edge_target(&self) -> usize {
        let raw = self
            .edge_target
            .unwrap_or_else(|| (self.density * self.n as f64).round() as usize);
        raw.min(self.n * (self.n - 1) / 2)
    }

    pub fn validate(&self) -> Result<(), GenerationError> {
        if !self.theta.is_finite() || self.theta <= 0.0 {
            return Err(GenerationError::Theta(self.theta));
        }
        if !self.min_spacing_km.is_finite() || self.min_spacing_km < 0.0 {
            return Err(GenerationError::Spacing(self.min_spacing_km));
        }
        match &self.placement {
            Placement::Region(_) => {
                if !(MIN_NODES..=MAX_NODES).contains(&self.n) {
                    return Err(GenerationError::NodeCount {
                        n: self.n,
                        min: MIN_NODES,
                        max: MAX_NODES,
                    });
                }
                if self.edge_target.is_none() && !(self.density.is_finite() && self.density >= MIN_DENSITY) {
                    return Err(GenerationError::Density(self.density));
                }
            }
            Placement::Fixed(points) => {
                if self.n < 3 || points.len() != self.n {
                    return Err(GenerationError::NodeCount {
                        n: points.len(),
                        min: 3,
                        max: usize::MAX,
                    });
                }
            }
        }
        let target = self.edge_target();
        if target < self.n {
            return Err(GenerationError::EdgeTarget { target, n: self.n });
        }
        Ok(())
    }
}

/// Rejection-samples `n` points in `region`, each at least `min_spacing_km`
/// from all earlier ones.
pub fn place_nodes<R: Rng + ?Sized>(
    region: &Region,
    n: usize,
    min_spacing_km: f64,
    rng: &mut R,
) -> Result<Vec<GeoPoint>, GenerationError> {
    let mut points: Vec<GeoPoint> = Vec::with_capacity(n);
    while points.len() < n {
        let accepted = (0..PLACEMENT_ATTEMPTS).find_map(|_| {
            let p = sample_point(region, rng);
            points
                .iter()
                .all(|q| haversine_km(&p, q) >= min_spacing_km)
                .then_some(p)
        });
        match accepted {
            Some(p) => points.push(p),
            None => {
                return Err(GenerationError::Placement {
                    placed: points.len(),
                    requested: n,
                })
            }
        }
    }
    Ok(points)
}

/// Attachment score of target `j` for newcomer `i`.
///
/// `distance_to_target` is `D(i,j)`, `distances_to_existing` lists `D(i,k)`
/// for every node `k` already in the graph (including `j`).
pub fn attachment_score(
    distance_to_target: f64,
    distances_to_existing: &[f64],
    target_degree: usize,
    degree_sum: usize,
    theta: f64,
) -> Result<f64, GenerationError> {
    if distance_to_target <= 0.0 || distances_to_existing.iter().any(|&d| d <= 0.0) {
        return Err(GenerationError::ZeroDistance(0, 0));
    }
    let inverse_sum: f64 = distances_to_existing.iter().map(|d| 1.0 / d).sum();
    Ok(attachment(distance_to_target, inverse_sum, target_degree, degree_sum, theta))
}

fn attachment(d_ij: f64, inverse_sum: f64, degree: usize, degree_sum: usize, theta: f64) -> f64 {
    (d_ij * inverse_sum).powf(-theta) * degree as f64 / degree_sum as f64
}

/// Edge counts of a finished generation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub edge_target: usize,
    pub grown_edges: usize,
    pub repair_edges: usize,
}

struct Layout {
    hav: Vec<f64>,
    fibre: Vec<f64>,
    n: usize,
}

impl Layout {
    fn new(points: &[GeoPoint]) -> Result<Self, GenerationError> {
        let n = points.len();
        let mut hav = vec![0.0; n * n];
        let mut fibre = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = haversine_km(&points[i], &points[j]);
                if d <= 0.0 {
                    return Err(GenerationError::ZeroDistance(i, j));
                }
                let f = fibre_length_km(d).expect("haversine is non-negative");
                hav[i * n + j] = d;
                hav[j * n + i] = d;
                fibre[i * n + j] = f;
                fibre[j * n + i] = f;
            }
        }
        Ok(Self { hav, fibre, n })
    }

    fn d(&self, i: usize, j: usize) -> f64 {
        self.hav[i * self.n + j]
    }

    fn fibre(&self, i: usize, j: usize) -> f64 {
        self.fibre[i * self.n + j]
    }

    /// Score of `j` for `i` against every current member other than `i`.
    fn score(&self, g: &Graph, members: &[usize], i: usize, j: usize, theta: f64) -> f64 {
        let mut inverse_sum = 0.0;
        let mut degree_sum = 0;
        for &k in members.iter().filter(|&&k| k != i) {
            inverse_sum += 1.0 / self.d(i, k);
            degree_sum += g.degree(k);
        }
        if degree_sum == 0 {
            return 0.0;
        }
        attachment(self.d(i, j), inverse_sum, g.degree(j), degree_sum, theta)
    }
}

/// Draws up to `count` distinct indices with probability proportional to
/// `weights`; all-zero weights fall back to uniform.
fn sample_without_replacement<R: Rng + ?Sized>(weights: &mut [f64], count: usize, rng: &mut R) -> Vec<usize> {
    let mut picked = Vec::with_capacity(count);
    let mut live: Vec<bool> = vec![true; weights.len()];
    for _ in 0..count.min(weights.len()) {
        let total: f64 = weights.iter().zip(&live).filter(|(_, &l)| l).map(|(w, _)| w).sum();
        let choice = if total > 0.0 && total.is_finite() {
            let mut u = rng.gen::<f64>() * total;
            let mut last = None;
            let mut found = None;
            for (idx, (&w, &l)) in weights.iter().zip(&live).enumerate() {
                if !l || w <= 0.0 {
                    continue;
                }
                last = Some(idx);
                if u < w {
                    found = Some(idx);
                    break;
                }
                u -= w;
            }
            found.or(last).expect("positive total has a positive weight")
        } else {
            let open: Vec<usize> = (0..weights.len()).filter(|&i| live[i]).collect();
            open[rng.gen_range(0..open.len())]
        };
        live[choice] = false;
        weights[choice] = 0.0;
        picked.push(choice);
    }
    picked
}

/// Edge quota of each arrival after the seed pair: `floor(m/(n-1))` with the
/// last `m mod (n-1)` arrivals taking one more. Index 0 is the seed edge.
fn arrival_quotas(n: usize, target: usize) -> Vec<usize> {
    let arrivals = n - 1;
    let base = target / arrivals;
    let extra = target - base * arrivals;
    (0..arrivals)
        .map(|t| if t >= arrivals - extra { base + 1 } else { base })
        .collect()
}

/// Shortest-fibre non-edge satisfying `eligible`, ties to the higher score
/// then the lower index pair.
fn shortest_candidate(
    g: &Graph,
    layout: &Layout,
    theta: f64,
    eligible: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize)> {
    let n = g.node_count();
    let candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u, v) && eligible(u, v))
        .collect();
    let shortest = candidates
        .iter()
        .map(|&(u, v)| layout.fibre(u, v))
        .fold(f64::INFINITY, f64::min);
    let tied: Vec<(usize, usize)> = candidates
        .into_iter()
        .filter(|&(u, v)| layout.fibre(u, v) == shortest)
        .collect();
    if tied.len() <= 1 {
        return tied.first().copied();
    }
    let all: Vec<usize> = (0..n).collect();
    let mut best = tied[0];
    let mut best_score = layout.score(g, &all, best.0, best.1, theta);
    for &(u, v) in &tied[1..] {
        let s = layout.score(g, &all, u, v, theta);
        if s > best_score {
            best = (u, v);
            best_score = s;
        }
    }
    Some(best)
}

fn grow(spec: &GenerationSpec, layout: &Layout, rng: &mut ChaCha8Rng) -> (Graph, usize) {
    let n = spec.n;
    let target = spec.edge_target();
    let mut g = Graph::new(n);

    let mut seed = (0, 1);
    for i in 0..n {
        for j in i + 1..n {
            if layout.d(i, j) < layout.d(seed.0, seed.1) {
                seed = (i, j);
            }
        }
    }
    g.add_edge(seed.0, seed.1);
    let mut members = vec![seed.0, seed.1];
    let mut rest: Vec<usize> = (0..n).filter(|&v| v != seed.0 && v != seed.1).collect();
    rest.shuffle(rng);

    let quotas = arrival_quotas(n, target);
    let mut deficit = quotas[0] - 1;
    for (&newcomer, &quota) in rest.iter().zip(&quotas[1..]) {
        let want = quota + deficit;
        let take = want.min(members.len());
        deficit = want - take;
        let mut weights: Vec<f64> = members
            .iter()
            .map(|&j| layout.score(&g, &members, newcomer, j, spec.theta))
            .collect();
        let picks = sample_without_replacement(&mut weights, take, rng);
        for p in picks {
            g.add_edge(newcomer, members[p]);
        }
        members.push(newcomer);
    }
    // carried quota that never found room
    while g.edge_count() < target {
        match shortest_candidate(&g, layout, spec.theta, |_, _| true) {
            Some((u, v)) => {
                g.add_edge(u, v);
            }
            None => break,
        }
    }
    let grown = g.edge_count();
    (g, grown)
}

fn repair(g: &mut Graph, layout: &Layout, theta: f64) {
    loop {
        let blocks = decompose(g);
        if blocks.blocks.len() <= 1 && g.is_connected() {
            return;
        }
        let membership = blocks.vertex_blocks(g);
        let shares_block = |u: usize, v: usize| membership[u].iter().any(|b| membership[v].contains(b));
        match shortest_candidate(g, layout, theta, |u, v| !shares_block(u, v)) {
            Some((u, v)) => {
                g.add_edge(u, v);
            }
            None => return,
        }
    }
}

fn positions(spec: &GenerationSpec, rng: &mut ChaCha8Rng) -> Result<Vec<GeoPoint>, GenerationError> {
    match &spec.placement {
        Placement::Region(region) => place_nodes(region, spec.n, spec.min_spacing_km, rng),
        Placement::Fixed(points) => Ok(points.clone()),
    }
}

/// Runs placement, growth and repair, returning the graph on its node
/// positions.
pub fn generate_graph(spec: &GenerationSpec) -> Result<(Vec<GeoPoint>, Graph, GenerationReport), GenerationError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let points = positions(spec, &mut rng)?;
    let layout = Layout::new(&points)?;
    let (mut g, grown) = grow(spec, &layout, &mut rng);
    repair(&mut g, &layout, spec.theta);
    let report = GenerationReport {
        edge_target: spec.edge_target(),
        grown_edges: grown,
        repair_edges: g.edge_count() - grown,
    };
    Ok((points, g, report))
}

fn assemble(name: &str, nodes: Vec<Node>, g: &Graph) -> Result<Topology, GenerationError> {
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            let (a, b) = (u.min(v), u.max(v));
            Edge {
                id: e as u64 + 1,
                source: nodes[a].id,
                destination: nodes[b].id,
                length_km: fibre_length_km(haversine_km(&nodes[a].location, &nodes[b].location))
                    .expect("haversine is non-negative"),
            }
        })
        .collect();
    Ok(Topology::new(name, nodes, edges, Provenance::Synthetic)?)
}

/// Generates a topology with nodes numbered `1..=n` in placement order.
pub fn generate(name: &str, spec: &GenerationSpec) -> Result<(Topology, GenerationReport), GenerationError> {
    let (points, g, report) = generate_graph(spec)?;
    let nodes = points
        .into_iter()
        .enumerate()
        .map(|(i, location)| Node {
            id: i as u64 + 1,
            location,
            place_name: format!("N{}", i + 1),
            country: String::new(),
        })
        .collect();
    Ok((assemble(name, nodes, &g)?, report))
}

/// `replicates` topologies on the node set of `real` with its edge count.
/// Node ids, names and coordinates are copied verbatim.
pub fn generate_position_matched(
    real: &Topology,
    replicates: usize,
    theta: f64,
    master_seed: u64,
) -> Result<Vec<(Topology, GenerationReport)>, GenerationError> {
    if !crate::topology::structure::is_biconnected(real.graph()) {
        return Err(GenerationError::NotBiconnected);
    }
    let n = real.node_count();
    (0..replicates)
        .map(|rep| {
            let spec = GenerationSpec {
                n,
                density: real.edge_count() as f64 / n as f64,
                placement: Placement::Fixed(real.locations()),
                theta,
                min_spacing_km: 0.0,
                seed: derive_seed(RecipeName::PositionMatched.as_str(), real.name(), 0.0, n, rep, master_seed),
                edge_target: Some(real.edge_count()),
            };
            let (_, g, report) = generate_graph(&spec)?;
            let name = format!("{}-pm-r{rep}", real.name());
            Ok((assemble(&name, real.nodes().to_vec(), &g)?, report))
        })
        .collect()
}

/// Stable 64-bit seed for one dataset cell: FNV-1a over
/// `recipe|group|d|n|replicate|master` (d printed with one decimal), then a
/// splitmix64 finaliser.
pub fn derive_seed(recipe: &str, group: &str, d: f64, n: usize, replicate: usize, master_seed: u64) -> u64 {
    let key = format!("{recipe}|{group}|{d:.1}|{n}|{replicate}|{master_seed}");
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in key.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecipeName {
    Small,
    Large,
    PositionMatched,
}

impl RecipeName {
    pub fn as_str(&self) -> &'static str {
        match self {
            RecipeName::Small => "small",
            RecipeName::Large => "large",
            RecipeName::PositionMatched => "position-matched",
        }
    }
}

impl std::str::FromStr for RecipeName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "small" => Ok(RecipeName::Small),
            "large" => Ok(RecipeName::Large),
            "position-matched" => Ok(RecipeName::PositionMatched),
            other => Err(format!("unknown recipe `{other}` (expected small|large|position-matched)")),
        }
    }
}

/// Grid of generation cells for the region-based recipes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecipe {
    pub name: RecipeName,
    pub sizes: Vec<usize>,
    pub replicates_per_size: usize,
    pub d_values: Vec<f64>,
    pub regions: Vec<RegionLabel>,
    pub theta: f64,
}

impl DatasetRecipe {
    /// Sizes 10..=99, ten replicates, d = 1.2, large region.
    pub fn small() -> Self {
        Self {
            name: RecipeName::Small,
            sizes: (10..100).collect(),
            replicates_per_size: 10,
            d_values: vec![1.2],
            regions: vec![RegionLabel::Large],
            theta: DEFAULT_THETA,
        }
    }

    /// Sizes 10..=99, a hundred replicates, d from 1.2 to 4.8 in steps of
    /// 0.4, all three regions.
    pub fn large() -> Self {
        Self {
            name: RecipeName::Large,
            sizes: (10..100).collect(),
            replicates_per_size: 100,
            d_values: (0..10).map(|i| ((12 + 4 * i) as f64) / 10.0).collect(),
            regions: RegionLabel::ALL.to_vec(),
            theta: DEFAULT_THETA,
        }
    }

    pub fn cell_count(&self) -> usize {
        self.sizes.len() * self.replicates_per_size * self.d_values.len() * self.regions.len()
    }

    /// Cells in region, d, n, replicate order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.cell_count());
        for &region in &self.regions {
            for &d in &self.d_values {
                for &n in &self.sizes {
                    for replicate in 0..self.replicates_per_size {
                        out.push(Cell { region, d, n, replicate });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub region: RegionLabel,
    pub d: f64,
    pub n: usize,
    pub replicate: usize,
}

impl Cell {
    pub fn name(&self, recipe: RecipeName) -> String {
        format!("{}-{}-d{:.1}-n{}-r{}", recipe.as_str(), self.region, self.d, self.n, self.replicate)
    }

    /// `<recipe>/<region>/<d>/<n>/<replicate>` relative to the output root.
    pub fn dir(&self, recipe: RecipeName) -> PathBuf {
        [
            recipe.as_str().to_string(),
            self.region.to_string(),
            format!("{:.1}", self.d),
            self.n.to_string(),
            self.replicate.to_string(),
        ]
        .iter()
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub dir: PathBuf,
    pub group: String,
    pub d: f64,
    pub n: usize,
    pub replicate: usize,
    pub seed: u64,
    pub edge_target: usize,
    pub edges: Option<usize>,
    pub repair_edges: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub recipe: RecipeName,
    pub master_seed: u64,
    pub theta: f64,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub const FILE_NAME: &'static str = "manifest.json";

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.error.is_some()).count()
    }

    pub fn write(&self, root: &Path) -> std::io::Result<PathBuf> {
        let path = root.join(Self::FILE_NAME);
        let json = serde_json::to_vec_pretty(self).map_err(std::io::Error::other)?;
        std::fs::write(&path, json)?;
        Ok(path)
    }
}

fn run_cell(recipe: &DatasetRecipe, cell: &Cell, root: &Path, master_seed: u64) -> ManifestEntry {
    let seed = derive_seed(recipe.name.as_str(), cell.region.as_str(), cell.d, cell.n, cell.replicate, master_seed);
    let mut spec = GenerationSpec::new(cell.n, cell.d, cell.region, seed);
    spec.theta = recipe.theta;
    let dir = cell.dir(recipe.name);
    let mut entry = ManifestEntry {
        name: cell.name(recipe.name),
        dir: dir.clone(),
        group: cell.region.to_string(),
        d: cell.d,
        n: cell.n,
        replicate: cell.replicate,
        seed,
        edge_target: spec.edge_target(),
        edges: None,
        repair_edges: None,
        error: None,
    };
    let outcome = generate(&entry.name, &spec).and_then(|(t, report)| {
        write_topology_dir(&root.join(&dir), &t)?;
        Ok((t.edge_count(), report.repair_edges))
    });
    match outcome {
        Ok((m, repair)) => {
            entry.edges = Some(m);
            entry.repair_edges = Some(repair);
        }
        Err(e) => entry.error = Some(e.to_string()),
    }
    entry
}

/// Generates every cell of `recipe` under `root` and writes the manifest.
/// Failing cells are recorded and do not stop the run. `progress` is called
/// once per finished cell, possibly from several threads.
pub fn generate_dataset(
    recipe: &DatasetRecipe,
    root: &Path,
    master_seed: u64,
    progress: &(dyn Fn(&ManifestEntry) + Sync),
) -> std::io::Result<Manifest> {
    std::fs::create_dir_all(root)?;
    let cells = recipe.cells();
    let entries = crate::par::map_indices(cells.len(), |i| {
        let entry = run_cell(recipe, &cells[i], root, master_seed);
        progress(&entry);
        entry
    });
    let manifest = Manifest {
        recipe: recipe.name,
        master_seed,
        theta: recipe.theta,
        entries,
    };
    manifest.write(root)?;
    Ok(manifest)
}

/// Position-matched corpus for several reference topologies under
/// `<root>/position-matched/<reference>/<d>/<n>/<replicate>/`.
pub fn generate_position_matched_dataset(
    references: &[Topology],
    replicates: usize,
    theta: f64,
    root: &Path,
    master_seed: u64,
    progress: &(dyn Fn(&ManifestEntry) + Sync),
) -> std::io::Result<Manifest> {
    std::fs::create_dir_all(root)?;
    let jobs: Vec<(usize, usize)> = (0..references.len())
        .flat_map(|r| (0..replicates).map(move |rep| (r, rep)))
        .collect();
    let entries = crate::par::map_indices(jobs.len(), |i| {
        let (r, rep) = jobs[i];
        let real = &references[r];
        let n = real.node_count();
        let m = real.edge_count();
        let d = m as f64 / n as f64;
        let name = format!("{}-pm-r{rep}", real.name());
        let dir: PathBuf = [
            RecipeName::PositionMatched.as_str().to_string(),
            real.name().to_string(),
            format!("{d:.1}"),
            n.to_string(),
            rep.to_string(),
        ]
        .iter()
        .collect();
        let seed = derive_seed(RecipeName::PositionMatched.as_str(), real.name(), 0.0, n, rep, master_seed);
        let mut entry = ManifestEntry {
            name: name.clone(),
            dir: dir.clone(),
            group: real.name().to_string(),
            d,
            n,
            replicate: rep,
            seed,
            edge_target: m,
            edges: None,
            repair_edges: None,
            error: None,
        };
        let spec = GenerationSpec {
            n,
            density: d,
            placement: Placement::Fixed(real.locations()),
            theta,
            min_spacing_km: 0.0,
            seed,
            edge_target: Some(m),
        };
        let outcome = if crate::topology::structure::is_biconnected(real.graph()) {
            generate_graph(&spec)
                .and_then(|(_, g, report)| Ok((assemble(&name, real.nodes().to_vec(), &g)?, report)))
        } else {
            Err(GenerationError::NotBiconnected)
        }
        .and_then(|(t, report)| {
            write_topology_dir(&root.join(&dir), &t)?;
            Ok((t.edge_count(), report.repair_edges))
        });
        match outcome {
            Ok((edges, repair)) => {
                entry.edges = Some(edges);
                entry.repair_edges = Some(repair);
            }
            Err(e) => entry.error = Some(e.to_string()),
        }
        progress(&entry);
        entry
    });
    let manifest = Manifest {
        recipe: RecipeName::PositionMatched,
        master_seed,
        theta,
        entries,
    };
    manifest.write(root)?;
    Ok(manifest)
}
