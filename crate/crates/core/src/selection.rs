//! Topology selection: standardise metric columns, project to two principal
//! components, cluster with k-means++ and score the clustering by how wide a
//! linear SVM can separate the clusters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::NamedMetrics;
use crate::spectral::{self, SpectralError, SymmetricMatrix};
use crate::stats::{self, StatsError};

/// Two scores closer than this count as tied in the subset search.
pub const SUBSET_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelectionError {
    #[error("metric `{0}` is constant across the corpus")]
    ConstantColumn(String),
    #[error("feature matrix is empty")]
    Empty,
    #[error("ragged feature matrix")]
    Ragged,
    #[error("pool `{pool}` has {size} metrics, at least 3 needed")]
    PoolTooSmall { pool: String, size: usize },
    #[error("no usable 3-metric combination in pool `{0}`")]
    NoUsableSubset(String),
    #[error("k = {k} is invalid for {points} points")]
    BadK { k: usize, points: usize },
    #[error("need at least two classes")]
    SingleClass,
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Rows are topologies, columns named metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub row_names: Vec<String>,
    pub column_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub standardized: bool,
}

impl FeatureMatrix {
    pub fn new(row_names: Vec<String>, column_names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, SelectionError> {
        if rows.is_empty() || column_names.is_empty() {
            return Err(SelectionError::Empty);
        }
        if rows.len() != row_names.len() || rows.iter().any(|r| r.len() != column_names.len()) {
            return Err(SelectionError::Ragged);
        }
        Ok(Self {
            row_names,
            column_names,
            rows,
            standardized: false,
        })
    }

    pub fn from_corpus(corpus: &[NamedMetrics], metric_names: &[&str]) -> Result<Self, SelectionError> {
        let cols = stats::columns(corpus, metric_names)?;
        let rows = (0..corpus.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        Self::new(
            corpus.iter().map(|r| r.topology.clone()).collect(),
            metric_names.iter().map(|s| s.to_string()).collect(),
            rows,
        )
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn select(&self, columns: &[usize]) -> Self {
        Self {
            row_names: self.row_names.clone(),
            column_names: columns.iter().map(|&j| self.column_names[j].clone()).collect(),
            rows: self.rows.iter().map(|r| columns.iter().map(|&j| r[j]).collect()).collect(),
            standardized: self.standardized,
        }
    }
}

/// Z-scores every column with the population standard deviation.
pub fn standardize(f: &FeatureMatrix) -> Result<FeatureMatrix, SelectionError> {
    let p = f.column_names.len();
    let mut out = f.clone();
    for j in 0..p {
        let col = f.column(j);
        let m = stats::mean(&col);
        let s = stats::std_dev(&col, stats::StdConvention::Population);
        if s == 0.0 || col.iter().all(|&x| x == col[0]) {
            return Err(SelectionError::ConstantColumn(f.column_names[j].clone()));
        }
        for (row, x) in out.rows.iter_mut().zip(&col) {
            row[j] = (x - m) / s;
        }
    }
    out.standardized = true;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub feature_names: Vec<String>,
    /// One unit loading vector per retained component.
    pub components: Vec<Vec<f64>>,
    /// Share of total variance for every component, descending.
    pub explained_variance_ratio: Vec<f64>,
}

impl PcaModel {
    /// Variance share of the retained components.
    pub fn retained_ratio(&self) -> f64 {
        self.explained_variance_ratio[..self.components.len()].iter().sum()
    }

    pub fn project(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter()
            .map(|r| self.components.iter().map(|c| c.iter().zip(r).map(|(a, b)| a * b).sum()).collect())
            .collect()
    }
}

/// Principal components of a standardised matrix from the covariance
/// eigendecomposition. Each component is signed so its largest-magnitude
/// loading is positive.
pub fn pca_fit(f: &FeatureMatrix, dims: usize) -> Result<(PcaModel, Vec<Vec<f64>>), SelectionError> {
    let n = f.rows.len() as f64;
    let p = f.column_names.len();
    let means: Vec<f64> = (0..p).map(|j| stats::mean(&f.column(j))).collect();
    let mut cov = vec![vec![0.0; p]; p];
    for row in &f.rows {
        for a in 0..p {
            for b in a..p {
                cov[a][b] += (row[a] - means[a]) * (row[b] - means[b]);
            }
        }
    }
    for a in 0..p {
        for b in a..p {
            cov[a][b] /= n;
            cov[b][a] = cov[a][b];
        }
    }
    let eig = spectral::eigen_decompose(&SymmetricMatrix::new(cov)?)?;
    let values: Vec<f64> = eig.values.iter().rev().map(|v| v.max(0.0)).collect();
    let total: f64 = values.iter().sum();
    let ratios: Vec<f64> = values.iter().map(|v| if total > 0.0 { v / total } else { 0.0 }).collect();
    let components: Vec<Vec<f64>> = eig
        .vectors
        .iter()
        .rev()
        .take(dims.min(p))
        .map(|v| {
            let lead = v
                .iter()
                .enumerate()
                .fold(0, |best, (i, x)| if x.abs() > v[best].abs() { i } else { best });
            if v[lead] < 0.0 {
                v.iter().map(|x| -x).collect()
            } else {
                v.clone()
            }
        })
        .collect();
    let model = PcaModel {
        feature_names: f.column_names.clone(),
        components,
        explained_variance_ratio: ratios,
    };
    let centred: Vec<Vec<f64>> = f
        .rows
        .iter()
        .map(|r| r.iter().zip(&means).map(|(x, m)| x - m).collect())
        .collect();
    let projection = model.project(&centred);
    Ok((model, projection))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Structural,
    Spatial,
    Spectral,
    Combined,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Structural, Level::Spatial, Level::Spectral, Level::Combined];

    pub fn as_str(&self) -> &'static str {
        match self {
            Level::Structural => "structural",
            Level::Spatial => "spatial",
            Level::Spectral => "spectral",
            Level::Combined => "combined",
        }
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Metrics eligible for each category's subset search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePools {
    pub structural: Vec<String>,
    pub spatial: Vec<String>,
    pub spectral: Vec<String>,
}

impl Default for CandidatePools {
    fn default() -> Self {
        let owned = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        Self {
            structural: owned(&[
                "number_of_nodes",
                "average_node_degree",
                "average_clustering_coefficient",
                "network_density",
                "max_node_betweenness",
                "avg_node_betweenness",
                "max_edge_betweenness",
                "avg_edge_betweenness",
                "diameter_hops",
                "aspl_hops",
                "global_efficiency",
            ]),
            spatial: owned(&[
                "aspl_km",
                "avg_link_length_km",
                "std_shortest_path_km",
                "diameter_km",
                "normalized_avg_link_length",
                "normalized_diameter_km",
                "normalized_aspl_km",
            ]),
            spectral: owned(&[
                "normalized_spectral_radius",
                "normalized_algebraic_connectivity",
                "normalized_wsd",
            ]),
        }
    }
}

impl CandidatePools {
    pub fn pool(&self, level: Level) -> Option<&[String]> {
        match level {
            Level::Structural => Some(&self.structural),
            Level::Spatial => Some(&self.spatial),
            Level::Spectral => Some(&self.spectral),
            Level::Combined => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetChoice {
    pub level: Level,
    pub metrics: Vec<String>,
    /// PC1 + PC2 explained-variance ratio of the chosen triple.
    pub two_component_ratio: f64,
    pub mean_abs_correlation: f64,
    pub evaluated: usize,
    pub skipped: usize,
}

struct SubsetScore {
    ratio: f64,
    corr: f64,
    names: Vec<String>,
}

fn score_subset(f: &FeatureMatrix, cols: &[usize]) -> Option<SubsetScore> {
    let sub = standardize(&f.select(cols)).ok()?;
    let (model, _) = pca_fit(&sub, 2).ok()?;
    let columns: Vec<Vec<f64>> = (0..cols.len()).map(|j| sub.column(j)).collect();
    let mut corr = 0.0;
    let mut pairs = 0.0;
    for a in 0..cols.len() {
        for b in a + 1..cols.len() {
            corr += stats::pearson(&columns[a], &columns[b])?.abs();
            pairs += 1.0;
        }
    }
    Some(SubsetScore {
        ratio: model.retained_ratio(),
        corr: corr / pairs,
        names: sub.column_names,
    })
}

/// Exhaustive search for the 3-metric subset with the lowest PC1 + PC2
/// explained variance. Near ties go to the less correlated triple, then to
/// the lexicographically smaller name list. Triples containing a constant
/// column are skipped.
pub fn select_subset(corpus: &[NamedMetrics], level: Level, pool: &[String]) -> Result<SubsetChoice, SelectionError> {
    if pool.len() < 3 {
        return Err(SelectionError::PoolTooSmall {
            pool: level.to_string(),
            size: pool.len(),
        });
    }
    let names: Vec<&str> = pool.iter().map(String::as_str).collect();
    let f = FeatureMatrix::from_corpus(corpus, &names)?;
    let p = pool.len();
    let combos: Vec<[usize; 3]> = (0..p)
        .flat_map(|a| (a + 1..p).flat_map(move |b| (b + 1..p).map(move |c| [a, b, c])))
        .collect();
    let scores = crate::par::map_indices(combos.len(), |i| score_subset(&f, &combos[i]));
    let skipped = scores.iter().filter(|s| s.is_none()).count();
    let mut best: Option<&SubsetScore> = None;
    for s in scores.iter().flatten() {
        let better = match best {
            None => true,
            Some(b) => {
                if s.ratio < b.ratio - SUBSET_TIE_TOL {
                    true
                } else if s.ratio <= b.ratio + SUBSET_TIE_TOL {
                    s.corr < b.corr - SUBSET_TIE_TOL || (s.corr <= b.corr + SUBSET_TIE_TOL && s.names < b.names)
                } else {
                    false
                }
            }
        };
        if better {
            best = Some(s);
        }
    }
    let best = best.ok_or_else(|| SelectionError::NoUsableSubset(level.to_string()))?;
    Ok(SubsetChoice {
        level,
        metrics: best.names.clone(),
        two_component_ratio: best.ratio,
        mean_abs_correlation: best.corr,
        evaluated: combos.len() - skipped,
        skipped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansResult {
    /// Labels numbered by first appearance in point order.
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            restarts: 10,
            max_iterations: 300,
            tolerance: 1e-4,
        }
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    centroids
        .iter()
        .enumerate()
        .map(|(c, ctr)| (c, dist2(point, ctr)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

fn plus_plus_seed(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids = vec![points[rng.gen_range(0..points.len())].clone()];
    while centroids.len() < k {
        let d: Vec<f64> = points.iter().map(|p| nearest(p, &centroids).1).collect();
        let total: f64 = d.iter().sum();
        let pick = if total > 0.0 {
            let mut u = rng.gen::<f64>() * total;
            let mut chosen = d.iter().rposition(|&w| w > 0.0).expect("positive total");
            for (i, &w) in d.iter().enumerate() {
                if w > 0.0 && u < w {
                    chosen = i;
                    break;
                }
                u -= w;
            }
            chosen
        } else {
            rng.gen_range(0..points.len())
        };
        centroids.push(points[pick].clone());
    }
    centroids
}

fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>, cfg: &KMeansConfig) -> KMeansResult {
    let k = centroids.len();
    let dim = points[0].len();
    let mut labels = vec![0; points.len()];
    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        iterations += 1;
        for (l, p) in labels.iter_mut().zip(points) {
            *l = nearest(p, &centroids).0;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (l, p) in labels.iter().zip(points) {
            counts[*l] += 1;
            for (s, x) in sums[*l].iter_mut().zip(p) {
                *s += x;
            }
        }
        let mut shift: f64 = 0.0;
        for c in 0..k {
            // an emptied cluster keeps its old centre
            if counts[c] == 0 {
                continue;
            }
            let next: Vec<f64> = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            shift = shift.max(dist2(&next, &centroids[c]).sqrt());
            centroids[c] = next;
        }
        if shift < cfg.tolerance {
            break;
        }
    }
    for (l, p) in labels.iter_mut().zip(points) {
        *l = nearest(p, &centroids).0;
    }
    let inertia = labels.iter().zip(points).map(|(&l, p)| dist2(p, &centroids[l])).sum();
    KMeansResult {
        labels,
        centroids,
        inertia,
        iterations,
    }
}

fn canonical(mut r: KMeansResult) -> KMeansResult {
    let k = r.centroids.len();
    let mut map = vec![usize::MAX; k];
    let mut next = 0;
    for &l in &r.labels {
        if map[l] == usize::MAX {
            map[l] = next;
            next += 1;
        }
    }
    for m in map.iter_mut().filter(|m| **m == usize::MAX) {
        *m = next;
        next += 1;
    }
    let mut centroids = vec![Vec::new(); k];
    for (old, &new) in map.iter().enumerate() {
        centroids[new] = r.centroids[old].clone();
    }
    r.labels.iter_mut().for_each(|l| *l = map[*l]);
    r.centroids = centroids;
    r
}

/// k-means++ seeding and Lloyd iterations, best inertia over the restarts.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, cfg: &KMeansConfig) -> Result<KMeansResult, SelectionError> {
    if k == 0 || k > points.len() {
        return Err(SelectionError::BadK { k, points: points.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KMeansResult> = None;
    for _ in 0..cfg.restarts.max(1) {
        let start = plus_plus_seed(points, k, &mut rng);
        let run = lloyd(points, start, cfg);
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(canonical(best.expect("at least one restart")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarginAggregation {
    #[default]
    Mean,
    Min,
}

impl std::str::FromStr for MarginAggregation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mean" => Ok(Self::Mean),
            "min" => Ok(Self::Min),
            other => Err(format!("unknown margin aggregation `{other}` (expected mean|min)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    pub c: f64,
    pub aggregation: MarginAggregation,
    /// Stop once the primal-dual gap is below this.
    pub duality_gap: f64,
    pub max_iterations: usize,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            aggregation: MarginAggregation::Mean,
            duality_gap: 1e-6,
            max_iterations: 1_000_000,
        }
    }
}

/// `w·x + b = 0`; positive side is `class`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub class: usize,
    pub w: Vec<f64>,
    pub b: f64,
    /// Signed distance from the hyperplane to the nearest training point,
    /// negative when some point lies on the wrong side.
    pub margin: f64,
    pub duality_gap: f64,
}

impl Hyperplane {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.b
    }

    /// `1/||w||`, the half-width of the soft margin band.
    pub fn inverse_norm(&self) -> f64 {
        1.0 / self.w.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// Pair violation the solver always reaches, so that solutions on
/// numerically equal inputs agree well past the printed precision.
const KKT_TOLERANCE: f64 = 1e-9;

/// `||w||` times the data radius below which a classifier is treated as `w = 0`.
const NULL_WEIGHT: f64 = 1e-8;
/// One-vs-rest decision values this close count as tied.
const DECISION_TIE_TOL: f64 = 1e-9;

/// Soft-margin linear SVM dual solved by maximal-violating-pair updates.
/// `y` holds ±1 labels.
pub fn train_linear_svm(x: &[Vec<f64>], y: &[f64], c: f64, gap_tol: f64, max_iterations: usize) -> (Vec<f64>, f64, f64) {
    let n = x.len();
    let dim = x[0].len();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; dim];
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let mut eps = 1e-3;
    let mut iterations = 0;
    loop {
        // -y_t * gradient_t = y_t - w·x_t
        let score: Vec<f64> = (0..n).map(|t| y[t] - dot(&w, &x[t])).collect();
        let up = |t: usize| (y[t] > 0.0 && alpha[t] < c) || (y[t] < 0.0 && alpha[t] > 0.0);
        let low = |t: usize| (y[t] < 0.0 && alpha[t] < c) || (y[t] > 0.0 && alpha[t] > 0.0);
        let i = (0..n).filter(|&t| up(t)).max_by(|&a, &b| score[a].total_cmp(&score[b]).then(b.cmp(&a)));
        let j = (0..n).filter(|&t| low(t)).min_by(|&a, &b| score[a].total_cmp(&score[b]).then(a.cmp(&b)));
        let (Some(i), Some(j)) = (i, j) else { break };
        let violation = score[i] - score[j];
        if violation < eps || iterations >= max_iterations {
            let b = bias(&alpha, &score, c, score[i], score[j]);
            let gap = duality_gap(x, y, &alpha, &w, b, c);
            if (gap < gap_tol && eps <= KKT_TOLERANCE) || eps < 1e-14 || iterations >= max_iterations {
                return (w, b, gap);
            }
            eps /= 10.0;
            continue;
        }
        iterations += 1;
        let curvature = dist2(&x[i], &x[j]).max(1e-12);
        let cap_i = if y[i] > 0.0 { c - alpha[i] } else { alpha[i] };
        let cap_j = if y[j] > 0.0 { alpha[j] } else { c - alpha[j] };
        let t = (violation / curvature).min(cap_i).min(cap_j);
        alpha[i] += y[i] * t;
        alpha[j] -= y[j] * t;
        for d in 0..dim {
            w[d] += t * (x[i][d] - x[j][d]);
        }
    }
    // one class only: no feasible pair
    (w, 0.0, f64::INFINITY)
}

fn bias(alpha: &[f64], score: &[f64], c: f64, upper: f64, lower: f64) -> f64 {
    let free: Vec<f64> = (0..alpha.len())
        .filter(|&t| alpha[t] > 0.0 && alpha[t] < c)
        .map(|t| score[t])
        .collect();
    if free.is_empty() {
        0.5 * (upper + lower)
    } else {
        stats::mean(&free)
    }
}

fn duality_gap(x: &[Vec<f64>], y: &[f64], alpha: &[f64], w: &[f64], b: f64, c: f64) -> f64 {
    let ww: f64 = w.iter().map(|a| a * a).sum();
    let hinge: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (1.0 - yi * (w.iter().zip(xi).map(|(p, q)| p * q).sum::<f64>() + b)).max(0.0))
        .sum();
    let primal = 0.5 * ww + c * hinge;
    let dual = alpha.iter().sum::<f64>() - 0.5 * ww;
    primal - dual
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmEvaluation {
    pub accuracy: f64,
    pub margin: f64,
    pub hyperplanes: Vec<Hyperplane>,
}

/// Linear SVMs on the cluster pseudo-labels: a single classifier for two
/// classes, one-vs-rest otherwise.
pub fn svm_evaluate(points: &[Vec<f64>], labels: &[usize], k: usize, cfg: &SvmConfig) -> Result<SvmEvaluation, SelectionError> {
    let present: std::collections::BTreeSet<usize> = labels.iter().copied().collect();
    if present.len() < 2 {
        return Err(SelectionError::SingleClass);
    }
    let classes: Vec<usize> = if k == 2 { vec![1] } else { (0..k).filter(|c| present.contains(c)).collect() };
    let radius = points.iter().map(|p| p.iter().map(|a| a * a).sum::<f64>().sqrt()).fold(0.0, f64::max);
    let hyperplanes: Vec<Hyperplane> = classes
        .iter()
        .map(|&class| {
            let y: Vec<f64> = labels.iter().map(|&l| if l == class { 1.0 } else { -1.0 }).collect();
            let (mut w, b, gap) = train_linear_svm(points, &y, cfg.c, cfg.duality_gap, cfg.max_iterations);
            let mut norm = w.iter().map(|a| a * a).sum::<f64>().sqrt();
            // the optimum is w = 0 for a class no hyperplane can help; drop solver residue
            if norm * radius < NULL_WEIGHT {
                w.iter_mut().for_each(|a| *a = 0.0);
                norm = 0.0;
            }
            let nearest = points
                .iter()
                .zip(&y)
                .map(|(p, yi)| yi * (w.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() + b))
                .fold(f64::INFINITY, f64::min);
            Hyperplane {
                class,
                margin: if norm > 0.0 { nearest / norm } else { 0.0 },
                w,
                b,
                duality_gap: gap,
            }
        })
        .collect();
    let predict = |x: &[f64]| -> usize {
        if k == 2 {
            usize::from(hyperplanes[0].decision(x) > 0.0)
        } else {
            let scores: Vec<f64> = hyperplanes.iter().map(|h| h.decision(x)).collect();
            let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            // near-ties go to the lowest class so rounding noise cannot flip a prediction
            let pick = scores.iter().position(|&v| v >= top - DECISION_TIE_TOL).unwrap_or(0);
            hyperplanes[pick].class
        }
    };
    let correct = points.iter().zip(labels).filter(|(p, &l)| predict(p) == l).count();
    let margins: Vec<f64> = hyperplanes.iter().map(|h| h.margin).collect();
    let margin = match cfg.aggregation {
        MarginAggregation::Mean => stats::mean(&margins),
        MarginAggregation::Min => margins.iter().copied().fold(f64::INFINITY, f64::min),
    };
    Ok(SvmEvaluation {
        accuracy: correct as f64 / points.len() as f64,
        margin,
        hyperplanes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringReport {
    pub level: Level,
    pub k: usize,
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub svm_accuracy: f64,
    pub svm_margin: f64,
    pub hyperplanes: Vec<Hyperplane>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub k_min: usize,
    pub k_max: usize,
    pub seed: u64,
    pub kmeans: KMeansConfig,
    pub svm: SvmConfig,
    pub pools: CandidatePools,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            k_min: 3,
            k_max: 7,
            seed: 0,
            kmeans: KMeansConfig::default(),
            svm: SvmConfig::default(),
            pools: CandidatePools::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelResult {
    pub level: Level,
    pub metrics: Vec<String>,
    pub pca: PcaModel,
    pub projection: Vec<Vec<f64>>,
    pub sweep: Vec<ClusteringReport>,
    /// k with the widest margin, smaller k on ties.
    pub optimal_k: usize,
}

impl LevelResult {
    pub fn optimal(&self) -> &ClusteringReport {
        self.sweep.iter().find(|r| r.k == self.optimal_k).expect("optimal k is in the sweep")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub topologies: Vec<String>,
    pub subsets: Vec<SubsetChoice>,
    pub levels: Vec<LevelResult>,
}

impl PipelineReport {
    pub fn level(&self, level: Level) -> &LevelResult {
        self.levels.iter().find(|l| l.level == level).expect("all levels present")
    }

    /// Cluster count chosen on the combined level.
    pub fn optimal_k(&self) -> usize {
        self.level(Level::Combined).optimal_k
    }
}

fn level_seed(seed: u64, level: Level, k: usize) -> u64 {
    crate::generator::derive_seed("cluster", level.as_str(), 0.0, k, 0, seed)
}

/// Clusters one feature set over the configured k range.
pub fn run_level(
    corpus: &[NamedMetrics],
    level: Level,
    metric_names: &[String],
    cfg: &PipelineConfig,
) -> Result<LevelResult, SelectionError> {
    let names: Vec<&str> = metric_names.iter().map(String::as_str).collect();
    let f = standardize(&FeatureMatrix::from_corpus(corpus, &names)?)?;
    let (pca, projection) = pca_fit(&f, 2)?;
    let ks: Vec<usize> = (cfg.k_min..=cfg.k_max).collect();
    let sweep = crate::par::map_indices(ks.len(), |i| {
        let k = ks[i];
        let km = kmeans(&projection, k, level_seed(cfg.seed, level, k), &cfg.kmeans)?;
        let svm = svm_evaluate(&projection, &km.labels, k, &cfg.svm)?;
        Ok(ClusteringReport {
            level,
            k,
            labels: km.labels,
            centroids: km.centroids,
            inertia: km.inertia,
            svm_accuracy: svm.accuracy,
            svm_margin: svm.margin,
            hyperplanes: svm.hyperplanes,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, SelectionError>>()?;
    let optimal_k = sweep
        .iter()
        .fold(None::<&ClusteringReport>, |best, r| match best {
            Some(b) if b.svm_margin >= r.svm_margin => Some(b),
            _ => Some(r),
        })
        .map(|r| r.k)
        .ok_or(SelectionError::BadK { k: 0, points: corpus.len() })?;
    Ok(LevelResult {
        level,
        metrics: metric_names.to_vec(),
        pca,
        projection,
        sweep,
        optimal_k,
    })
}

/// Subset search per category, then the clustering sweep on each category
/// and on the union of the three chosen triples. The corpus is processed in
/// topology-name order.
pub fn run_pipeline(corpus: &[NamedMetrics], cfg: &PipelineConfig) -> Result<PipelineReport, SelectionError> {
    let mut sorted = corpus.to_vec();
    sorted.sort_by(|a, b| a.topology.cmp(&b.topology));
    let mut subsets = Vec::new();
    for level in [Level::Structural, Level::Spatial, Level::Spectral] {
        subsets.push(select_subset(&sorted, level, cfg.pools.pool(level).expect("category level"))?);
    }
    let combined: Vec<String> = subsets.iter().flat_map(|s| s.metrics.clone()).collect();
    let mut levels = Vec::new();
    for s in &subsets {
        levels.push(run_level(&sorted, s.level, &s.metrics, cfg)?);
    }
    levels.push(run_level(&sorted, Level::Combined, &combined, cfg)?);
    Ok(PipelineReport {
        topologies: sorted.into_iter().map(|r| r.topology).collect(),
        subsets,
        levels,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcCorrelation {
    pub metric: String,
    /// One entry per projection axis; `None` for a constant metric.
    pub rho: Vec<Option<f64>>,
}

/// Pearson correlation of each projection axis with each metric.
pub fn pca_metric_correlation(
    projection: &[Vec<f64>],
    corpus: &[NamedMetrics],
    metric_names: &[&str],
) -> Result<Vec<PcCorrelation>, SelectionError> {
    let cols = stats::columns(corpus, metric_names)?;
    let dims = projection.first().map_or(0, Vec::len);
    let axes: Vec<Vec<f64>> = (0..dims).map(|d| projection.iter().map(|p| p[d]).collect()).collect();
    Ok(metric_names
        .iter()
        .zip(&cols)
        .map(|(m, col)| PcCorrelation {
            metric: m.to_string(),
            rho: axes.iter().map(|a| stats::pearson(a, col)).collect(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceRow {
    pub topology: String,
    pub n: f64,
    pub aspl_km: f64,
    pub wsd: f64,
    pub wsd_cluster: usize,
}

/// Size, mean km path and WSD per topology, with 1-D k-means clusters on
/// WSD. Cluster ids are ordered by ascending WSD centre.
pub fn wsd_slice(corpus: &[NamedMetrics], wsd_clusters: usize, seed: u64) -> Result<Vec<SliceRow>, SelectionError> {
    let points: Vec<Vec<f64>> = corpus.iter().map(|r| vec![r.metrics.normalized_wsd]).collect();
    let k = wsd_clusters.min(points.len());
    let km = kmeans(&points, k, seed, &KMeansConfig::default())?;
    let mut order: Vec<usize> = (0..km.centroids.len()).collect();
    order.sort_by(|&a, &b| km.centroids[a][0].total_cmp(&km.centroids[b][0]));
    let mut rank = vec![0; order.len()];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    Ok(corpus
        .iter()
        .zip(&km.labels)
        .map(|(r, &l)| SliceRow {
            topology: r.topology.clone(),
            n: r.metrics.number_of_nodes,
            aspl_km: r.metrics.aspl_km,
            wsd: r.metrics.normalized_wsd,
            wsd_cluster: rank[l],
        })
        .collect())
}

fn equal_width_bin(x: f64, lo: f64, hi: f64, bins: usize) -> usize {
    if hi <= lo {
        return 0;
    }
    (((x - lo) / (hi - lo) * bins as f64).floor() as usize).min(bins - 1)
}

/// One randomly chosen topology per non-empty (size bin, WSD cluster,
/// path-length bin) cell. Size and path bins are equal width. Returned
/// indices follow cell order.
pub fn uniform_slice(rows: &[SliceRow], size_bins: usize, path_bins: usize, seed: u64) -> Vec<usize> {
    if rows.is_empty() || size_bins == 0 || path_bins == 0 {
        return Vec::new();
    }
    let span = |f: fn(&SliceRow) -> f64| {
        rows.iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
    };
    let (nlo, nhi) = span(|r| r.n);
    let (plo, phi) = span(|r| r.aspl_km);
    let mut cells: std::collections::BTreeMap<(usize, usize, usize), Vec<usize>> = Default::default();
    for (i, r) in rows.iter().enumerate() {
        let key = (
            equal_width_bin(r.n, nlo, nhi, size_bins),
            r.wsd_cluster,
            equal_width_bin(r.aspl_km, plo, phi, path_bins),
        );
        cells.entry(key).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cells.values().map(|members| members[rng.gen_range(0..members.len())]).collect()
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

impl PipelineReport {
    /// `topology,cluster` at the level's optimal k, sorted by topology.
    pub fn clusters_csv(&self, level: Level) -> Vec<u8> {
        let report = self.level(level).optimal();
        csv_bytes(
            &["topology", "cluster"],
            self.topologies
                .iter()
                .zip(&report.labels)
                .map(|(t, l)| vec![t.clone(), l.to_string()]),
        )
    }

    /// `topology,level,pc1,pc2` for every level.
    pub fn projection_csv(&self) -> Vec<u8> {
        csv_bytes(
            &["topology", "level", "pc1", "pc2"],
            self.levels.iter().flat_map(|l| {
                self.topologies.iter().zip(&l.projection).map(move |(t, p)| {
                    vec![
                        t.clone(),
                        l.level.to_string(),
                        p[0].to_string(),
                        p.get(1).copied().unwrap_or(0.0).to_string(),
                    ]
                })
            }),
        )
    }

    /// `k,level,accuracy,margin,inertia` for the whole sweep.
    pub fn margin_sweep_csv(&self) -> Vec<u8> {
        let mut rows: Vec<(usize, Level, &ClusteringReport)> = self
            .levels
            .iter()
            .flat_map(|l| l.sweep.iter().map(move |r| (r.k, l.level, r)))
            .collect();
        rows.sort_by_key(|(k, level, _)| (*k, *level));
        csv_bytes(
            &["k", "level", "accuracy", "margin", "inertia"],
            rows.into_iter().map(|(k, level, r)| {
                vec![
                    k.to_string(),
                    level.to_string(),
                    r.svm_accuracy.to_string(),
                    r.svm_margin.to_string(),
                    r.inertia.to_string(),
                ]
            }),
        )
    }

    /// Hyperplane coefficients per level and k.
    pub fn boundaries_json(&self) -> serde_json::Value {
        serde_json::json!(self
            .levels
            .iter()
            .map(|l| serde_json::json!({
                "level": l.level,
                "optimal_k": l.optimal_k,
                "sweep": l.sweep.iter().map(|r| serde_json::json!({
                    "k": r.k,
                    "margin": r.svm_margin,
                    "accuracy": r.svm_accuracy,
                    "classifiers": r.hyperplanes,
                })).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>())
    }
}

pub fn pca_metric_correlation_csv(rows: &[PcCorrelation]) -> Vec<u8> {
    csv_bytes(
        &["metric", "pc1", "pc2"],
        rows.iter().map(|r| {
            let cell = |d: usize| r.rho.get(d).copied().flatten().map_or("NA".to_string(), |v| v.to_string());
            vec![r.metric.clone(), cell(0), cell(1)]
        }),
    )
}

pub fn slice_csv(rows: &[SliceRow]) -> Vec<u8> {
    csv_bytes(
        &["topology", "n", "aspl_km", "wsd", "wsd_cluster"],
        rows.iter().map(|r| {
            vec![
                r.topology.clone(),
                r.n.to_string(),
                r.aspl_km.to_string(),
                r.wsd.to_string(),
                r.wsd_cluster.to_string(),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::MetricVector;
    use rand_chacha::ChaCha8Rng;

    fn matrix(cols: &[Vec<f64>]) -> FeatureMatrix {
        let n = cols[0].len();
        FeatureMatrix::new(
            (0..n).map(|i| format!("r{i}")).collect(),
            (0..cols.len()).map(|j| format!("c{j}")).collect(),
            (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect(),
        )
        .unwrap()
    }

    fn normal(rng: &mut ChaCha8Rng) -> f64 {
        // Box-Muller
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        let v: f64 = rng.gen();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }

    fn blobs(centres: &[[f64; 2]], per: usize, spread: f64, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        centres
            .iter()
            .flat_map(|c| (0..per).map(|_| vec![c[0] + spread * normal(&mut rng), c[1] + spread * normal(&mut rng)]).collect::<Vec<_>>())
            .collect()
    }

    fn same_partition(a: &[usize], b: &[usize]) -> bool {
        (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
    }

    #[test]
    fn standardize_examples() {
        let f = matrix(&[vec![1.0, 2.0, 3.0], vec![10.0, 0.0, 5.0]]);
        let z = standardize(&f).unwrap();
        let c = 1.5f64.sqrt();
        assert!((z.rows[0][0] + c).abs() < 1e-12 && z.rows[1][0].abs() < 1e-12 && (z.rows[2][0] - c).abs() < 1e-12);
        let again = standardize(&z).unwrap();
        for (a, b) in again.rows.iter().flatten().zip(z.rows.iter().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
        let scaled = standardize(&matrix(&[vec![10.0, 20.0, 30.0], vec![10.0, 0.0, 5.0]])).unwrap();
        for (a, b) in scaled.rows.iter().flatten().zip(z.rows.iter().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
        for j in 0..2 {
            let col = z.column(j);
            assert!(stats::mean(&col).abs() < 1e-9);
            assert!((stats::std_dev(&col, stats::StdConvention::Population) - 1.0).abs() < 1e-9);
        }
        let flat = matrix(&[vec![1.0, 2.0, 3.0], vec![4.0, 4.0, 4.0]]);
        assert_eq!(standardize(&flat), Err(SelectionError::ConstantColumn("c1".into())));
    }

    #[test]
    fn pca_on_a_line_has_one_component() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let (model, proj) = pca_fit(&standardize(&matrix(&[xs, ys])).unwrap(), 2).unwrap();
        assert!((model.explained_variance_ratio[0] - 1.0).abs() < 1e-12);
        assert!((model.explained_variance_ratio.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(proj.iter().all(|p| p[1].abs() < 1e-9));
        let c = &model.components;
        assert!((c[0].iter().map(|a| a * a).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(c[0].iter().zip(&c[1]).map(|(a, b)| a * b).sum::<f64>().abs() < 1e-12);
        assert!(c[0].iter().cloned().fold(f64::NEG_INFINITY, f64::max) > 0.0);
    }

    #[test]
    fn pca_isotropic_sample_splits_evenly() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let xs: Vec<f64> = (0..5000).map(|_| normal(&mut rng)).collect();
        let ys: Vec<f64> = (0..5000).map(|_| normal(&mut rng)).collect();
        let (model, _) = pca_fit(&standardize(&matrix(&[xs, ys])).unwrap(), 2).unwrap();
        // standard error of the sample correlation at n = 5000 is about 0.014
        assert!((model.explained_variance_ratio[0] - 0.5).abs() < 0.03);
    }

    fn corpus_from(cols: &[(&str, Vec<f64>)]) -> Vec<NamedMetrics> {
        let n = cols[0].1.len();
        (0..n)
            .map(|i| {
                let mut v = MetricVector::default();
                let mut values = v.values();
                for (name, col) in cols {
                    let idx = MetricVector::FIELD_NAMES.iter().position(|f| f == name).unwrap();
                    values[idx] = col[i];
                }
                v = MetricVector::from_values(&values).unwrap();
                NamedMetrics {
                    topology: format!("t{i:03}"),
                    metrics: v,
                }
            })
            .collect()
    }

    #[test]
    fn subset_search_prefers_independent_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200;
        let noise = |rng: &mut ChaCha8Rng| (0..n).map(|_| normal(rng)).collect::<Vec<f64>>();
        let (a, b, c) = (noise(&mut rng), noise(&mut rng), noise(&mut rng));
        // every mixed column correlates with all three pure ones
        let mix: Vec<f64> = (0..n).map(|i| a[i] + b[i] + c[i]).collect();
        let cols = vec![
            ("aspl_km", mix.clone()),
            ("avg_link_length_km", mix.iter().map(|x| 2.0 * x + 0.01 * normal(&mut rng)).collect()),
            ("std_shortest_path_km", a),
            ("diameter_km", mix.iter().map(|x| -x + 0.02 * normal(&mut rng)).collect()),
            ("normalized_avg_link_length", b),
            ("normalized_diameter_km", c),
        ];
        let corpus = corpus_from(&cols);
        let pool: Vec<String> = cols.iter().map(|c| c.0.to_string()).collect();
        let choice = select_subset(&corpus, Level::Spatial, &pool).unwrap();
        assert_eq!(
            choice.metrics,
            vec!["std_shortest_path_km", "normalized_avg_link_length", "normalized_diameter_km"]
        );
        assert_eq!(choice.evaluated, 20);

        let spectral: Vec<String> = CandidatePools::default().spectral;
        let corpus = corpus_from(&[
            ("normalized_spectral_radius", noise(&mut rng)),
            ("normalized_algebraic_connectivity", noise(&mut rng)),
            ("normalized_wsd", noise(&mut rng)),
        ]);
        let single = select_subset(&corpus, Level::Spectral, &spectral).unwrap();
        assert_eq!(single.metrics, spectral);
        assert_eq!(single.evaluated, 1);
        assert!(matches!(
            select_subset(&corpus, Level::Spectral, &spectral[..2]),
            Err(SelectionError::PoolTooSmall { size: 2, .. })
        ));
    }

    #[test]
    fn default_pools_have_expected_sizes() {
        let p = CandidatePools::default();
        assert_eq!((p.structural.len(), p.spatial.len(), p.spectral.len()), (11, 7, 3));
        for name in p.structural.iter().chain(&p.spatial).chain(&p.spectral) {
            assert!(MetricVector::is_known_name(name), "{name}");
        }
    }

    #[test]
    fn kmeans_examples() {
        let pts = blobs(&[[0.0, 0.0], [10.0, 10.0]], 30, 0.5, 1);
        let r = kmeans(&pts, 2, 5, &KMeansConfig::default()).unwrap();
        let truth: Vec<usize> = (0..60).map(|i| i / 30).collect();
        assert!(same_partition(&r.labels, &truth));

        let few = blobs(&[[0.0, 0.0]], 6, 1.0, 2);
        assert!(kmeans(&few, 6, 0, &KMeansConfig::default()).unwrap().inertia < 1e-24);
        assert!(kmeans(&few, 7, 0, &KMeansConfig::default()).is_err());

        let doubled: Vec<Vec<f64>> = pts.iter().chain(&pts).cloned().collect();
        let d = kmeans(&doubled, 2, 5, &KMeansConfig::default()).unwrap();
        let sort = |mut c: Vec<Vec<f64>>| {
            c.sort_by(|a, b| a[0].total_cmp(&b[0]));
            c
        };
        for (a, b) in sort(r.centroids.clone()).iter().zip(&sort(d.centroids)) {
            assert!(dist2(a, b) < 1e-18);
        }

        let again = kmeans(&pts, 2, 5, &KMeansConfig::default()).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn kmeans_partition_ignores_point_order() {
        let pts = blobs(&[[0.0, 0.0], [8.0, 0.0], [0.0, 8.0]], 20, 0.6, 4);
        let r = kmeans(&pts, 3, 1, &KMeansConfig::default()).unwrap();
        let rev: Vec<Vec<f64>> = pts.iter().rev().cloned().collect();
        let mut back = kmeans(&rev, 3, 1, &KMeansConfig::default()).unwrap().labels;
        back.reverse();
        assert!(same_partition(&r.labels, &back));
    }

    #[test]
    fn svm_two_points() {
        let pts = vec![vec![-1.0, 0.0], vec![1.0, 0.0]];
        let e = svm_evaluate(&pts, &[0, 1], 2, &SvmConfig::default()).unwrap();
        let h = &e.hyperplanes[0];
        assert!((h.w[0] - 1.0).abs() < 1e-6 && h.w[1].abs() < 1e-9 && h.b.abs() < 1e-6);
        assert!((e.margin - 1.0).abs() < 1e-6);
        assert_eq!(e.accuracy, 1.0);
        assert!(h.duality_gap < 1e-6);
        assert_eq!(svm_evaluate(&pts, &[0, 0], 2, &SvmConfig::default()), Err(SelectionError::SingleClass));
    }

    #[test]
    fn svm_separable_blobs_and_shrinking_gap() {
        let three = blobs(&[[0.0, 0.0], [6.0, 0.0], [3.0, 6.0]], 25, 0.4, 9);
        let labels: Vec<usize> = (0..75).map(|i| i / 25).collect();
        let e = svm_evaluate(&three, &labels, 3, &SvmConfig::default()).unwrap();
        assert_eq!(e.accuracy, 1.0);
        assert_eq!(e.hyperplanes.len(), 3);
        assert!(e.hyperplanes.iter().all(|h| h.duality_gap < 1e-6));

        let mut previous = f64::INFINITY;
        for gap in [4.0, 3.0, 2.0] {
            let pts = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![gap, 0.0], vec![gap, 1.0]];
            let m = svm_evaluate(&pts, &[0, 0, 1, 1], 2, &SvmConfig::default()).unwrap().margin;
            assert!((m - gap / 2.0).abs() < 1e-6, "{gap}: {m}");
            assert!(m < previous);
            previous = m;
        }
    }

    #[test]
    fn svm_min_aggregation() {
        let pts = blobs(&[[0.0, 0.0], [6.0, 0.0], [3.0, 6.0]], 10, 0.3, 2);
        let labels: Vec<usize> = (0..30).map(|i| i / 10).collect();
        let mean = svm_evaluate(&pts, &labels, 3, &SvmConfig::default()).unwrap();
        let min = svm_evaluate(&pts, &labels, 3, &SvmConfig { aggregation: MarginAggregation::Min, ..Default::default() }).unwrap();
        assert!(min.margin <= mean.margin);
        let smallest = mean.hyperplanes.iter().map(|h| h.margin).fold(f64::INFINITY, f64::min);
        assert_eq!(min.margin, smallest);
    }

    #[test]
    fn pc_correlation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let proj: Vec<Vec<f64>> = (0..105).map(|_| vec![normal(&mut rng), normal(&mut rng)]).collect();
        let corpus = corpus_from(&[
            ("network_density", proj.iter().map(|p| p[0]).collect()),
            ("aspl_km", (0..105).map(|_| normal(&mut rng)).collect()),
            ("number_of_nodes", vec![1.0; 105]),
        ]);
        let rows = pca_metric_correlation(&proj, &corpus, &["network_density", "aspl_km", "number_of_nodes"]).unwrap();
        assert!((rows[0].rho[0].unwrap() - 1.0).abs() < 1e-12);
        assert!(rows[1].rho[0].unwrap().abs() < 0.2);
        assert_eq!(rows[2].rho, vec![None, None]);
        let text = String::from_utf8(pca_metric_correlation_csv(&rows)).unwrap();
        assert!(text.contains("number_of_nodes,NA,NA"));
    }

    #[test]
    fn slice_partitions_the_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let corpus = corpus_from(&[
            ("number_of_nodes", (0..300).map(|i| (10 + i % 90) as f64).collect()),
            ("aspl_km", (0..300).map(|_| rng.gen_range(500.0..3000.0)).collect()),
            ("normalized_wsd", (0..300).map(|_| rng.gen_range(0.1..0.4)).collect()),
        ]);
        let rows = wsd_slice(&corpus, 10, 1).unwrap();
        assert_eq!(rows.len(), 300);
        assert!(rows.iter().all(|r| r.wsd_cluster < 10));
        // clusters are ordered by WSD so their ranges do not overlap
        for c in 0..9 {
            let hi = rows.iter().filter(|r| r.wsd_cluster == c).map(|r| r.wsd).fold(f64::NEG_INFINITY, f64::max);
            let lo = rows.iter().filter(|r| r.wsd_cluster == c + 1).map(|r| r.wsd).fold(f64::INFINITY, f64::min);
            assert!(hi < lo);
        }
        let picked = uniform_slice(&rows, 18, 5, 3);
        assert!(!picked.is_empty() && picked.len() <= 18 * 10 * 5);
        let mut uniq = picked.clone();
        uniq.sort_unstable();
        uniq.dedup();
        assert_eq!(uniq.len(), picked.len());
    }
}
