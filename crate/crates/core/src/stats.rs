//! Corpus statistics: column summaries, Pearson correlation with the mean
//! absolute off-diagonal correlation, z-score outliers, two-sample
//! Kolmogorov–Smirnov tests and descriptive regression diagnostics.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::metrics::{self, MetricVector, MetricsError, NamedMetrics};
use crate::topology::Topology;

/// |z| above this flags an outlier.
pub const OUTLIER_Z: f64 = 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("empty sample")]
    Empty,
    #[error("need at least {needed} samples, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("non-finite value in metric `{0}`")]
    NonFinite(String),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdConvention {
    /// Divide by `n`.
    #[default]
    Population,
    /// Divide by `n - 1`.
    Sample,
}

impl std::str::FromStr for StdConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "population" => Ok(Self::Population),
            "sample" => Ok(Self::Sample),
            other => Err(format!("unknown std convention `{other}` (expected population|sample)")),
        }
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn std_dev(xs: &[f64], convention: StdConvention) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m).powi(2)).sum();
    let denom = match convention {
        StdConvention::Population => xs.len() as f64,
        StdConvention::Sample => (xs.len() as f64 - 1.0).max(1.0),
    };
    (ss / denom).sqrt()
}

/// Pulls the named metric columns out of a corpus.
pub fn columns(corpus: &[NamedMetrics], metric_names: &[&str]) -> Result<Vec<Vec<f64>>, StatsError> {
    metric_names
        .iter()
        .map(|&name| {
            if !MetricVector::is_known_name(name) {
                return Err(StatsError::UnknownMetric(name.to_string()));
            }
            let col: Vec<f64> = corpus.iter().map(|r| r.metrics.get(name).expect("known name")).collect();
            if col.iter().any(|x| !x.is_finite()) {
                return Err(StatsError::NonFinite(name.to_string()));
            }
            Ok(col)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub samples: usize,
    pub convention: StdConvention,
    pub rows: Vec<SummaryRow>,
}

pub fn summarize(
    corpus: &[NamedMetrics],
    metric_names: &[&str],
    convention: StdConvention,
) -> Result<DatasetSummary, StatsError> {
    if corpus.is_empty() {
        return Err(StatsError::Empty);
    }
    let cols = columns(corpus, metric_names)?;
    let rows = metric_names
        .iter()
        .zip(&cols)
        .map(|(name, col)| SummaryRow {
            metric: name.to_string(),
            mean: mean(col),
            std: std_dev(col, convention),
            min: col.iter().copied().fold(f64::INFINITY, f64::min),
            max: col.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
        .collect();
    Ok(DatasetSummary {
        samples: corpus.len(),
        convention,
        rows,
    })
}

/// Pearson correlation, `None` when either column is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Average ranks, ties sharing their mean rank.
pub fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    pearson(&ranks(x), &ranks(y))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub metrics: Vec<String>,
    /// `None` marks pairs involving a constant metric.
    pub matrix: Vec<Vec<Option<f64>>>,
    /// Mean absolute off-diagonal correlation over the non-constant metrics.
    pub avg_abs_correlation: Option<f64>,
    pub constant_metrics: Vec<String>,
}

pub fn pearson_matrix(corpus: &[NamedMetrics], metric_names: &[&str]) -> Result<CorrelationReport, StatsError> {
    if corpus.len() < 3 {
        return Err(StatsError::TooFew {
            needed: 3,
            got: corpus.len(),
        });
    }
    Ok(correlate_columns(metric_names, &columns(corpus, metric_names)?))
}

pub fn correlate_columns(metric_names: &[&str], cols: &[Vec<f64>]) -> CorrelationReport {
    let k = cols.len();
    let constant: Vec<bool> = cols.iter().map(|c| c.iter().all(|&x| x == c[0])).collect();
    let mut matrix = vec![vec![None; k]; k];
    for i in 0..k {
        if constant[i] {
            continue;
        }
        matrix[i][i] = Some(1.0);
        for j in i + 1..k {
            if constant[j] {
                continue;
            }
            let r = pearson(&cols[i], &cols[j]);
            matrix[i][j] = r;
            matrix[j][i] = r;
        }
    }
    let live: Vec<usize> = (0..k).filter(|&i| !constant[i]).collect();
    let q = live.len();
    let avg = (q >= 2).then(|| {
        let total: f64 = live
            .iter()
            .flat_map(|&i| live.iter().map(move |&j| (i, j)))
            .map(|(i, j)| matrix[i][j].expect("non-constant pair").abs())
            .sum();
        (total - q as f64) / (q * (q - 1)) as f64
    });
    CorrelationReport {
        metrics: metric_names.iter().map(|s| s.to_string()).collect(),
        matrix,
        avg_abs_correlation: avg,
        constant_metrics: (0..k).filter(|&i| constant[i]).map(|i| metric_names[i].to_string()).collect(),
    }
}

impl CorrelationReport {
    /// Square matrix CSV with `NA` for undefined entries.
    pub fn matrix_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header = vec!["metric".to_string()];
        header.extend(self.metrics.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (name, row) in self.metrics.iter().zip(&self.matrix) {
            let mut rec = vec![name.clone()];
            rec.extend(row.iter().map(|v| v.map_or("NA".to_string(), |r| r.to_string())));
            w.write_record(&rec).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    /// Long-form `metric_a,metric_b,rho` rows for heatmap plotting.
    pub fn long_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["metric_a", "metric_b", "rho"]).expect("in-memory write");
        for (i, a) in self.metrics.iter().enumerate() {
            for (j, b) in self.metrics.iter().enumerate() {
                let v = self.matrix[i][j].map_or("NA".to_string(), |r| r.to_string());
                w.write_record([a.as_str(), b.as_str(), v.as_str()]).expect("in-memory write");
            }
        }
        w.into_inner().expect("in-memory flush")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierRow {
    pub topology: String,
    pub z: Vec<f64>,
    pub flagged: Vec<String>,
    pub max_abs_z: f64,
}

impl OutlierRow {
    pub fn flag_count(&self) -> usize {
        self.flagged.len()
    }

    pub fn is_outlier(&self) -> bool {
        !self.flagged.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport {
    pub metrics: Vec<String>,
    pub rows: Vec<OutlierRow>,
}

impl OutlierReport {
    pub fn outlier_count(&self) -> usize {
        self.rows.iter().filter(|r| r.is_outlier()).count()
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header = vec!["topology".to_string()];
        header.extend(self.metrics.iter().map(|m| format!("z_{m}")));
        header.extend(["max_abs_z", "flag_count", "flagged"].map(String::from));
        w.write_record(&header).expect("in-memory write");
        for row in &self.rows {
            let mut rec = vec![row.topology.clone()];
            rec.extend(row.z.iter().map(|z| z.to_string()));
            rec.push(row.max_abs_z.to_string());
            rec.push(row.flag_count().to_string());
            rec.push(row.flagged.join(";"));
            w.write_record(&rec).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

/// Population z-scores per metric; a constant metric scores zero everywhere.
pub fn z_scores(col: &[f64]) -> Vec<f64> {
    let m = mean(col);
    let s = std_dev(col, StdConvention::Population);
    col.iter().map(|x| if s > 0.0 { (x - m) / s } else { 0.0 }).collect()
}

pub fn detect_outliers(corpus: &[NamedMetrics], metric_names: &[&str]) -> Result<OutlierReport, StatsError> {
    if corpus.len() < 2 {
        return Err(StatsError::TooFew {
            needed: 2,
            got: corpus.len(),
        });
    }
    let z: Vec<Vec<f64>> = columns(corpus, metric_names)?.iter().map(|c| z_scores(c)).collect();
    let rows = corpus
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let zi: Vec<f64> = z.iter().map(|col| col[i]).collect();
            OutlierRow {
                topology: r.topology.clone(),
                flagged: metric_names
                    .iter()
                    .zip(&zi)
                    .filter(|(_, z)| z.abs() > OUTLIER_Z)
                    .map(|(m, _)| m.to_string())
                    .collect(),
                max_abs_z: zi.iter().fold(0.0, |a: f64, z| a.max(z.abs())),
                z: zi,
            }
        })
        .collect();
    Ok(OutlierReport {
        metrics: metric_names.iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub size_a: usize,
    pub size_b: usize,
}

/// Kolmogorov survival function `Q(λ) = P(K > λ)`, using the theta-function
/// form below 1.18 where the alternating series converges slowly.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let q = if lambda < 1.18 {
        let c = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for j in 1..=20 {
            let k = (2 * j - 1) as f64;
            let term = (-k * k * c).exp();
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum
    } else {
        let mut sum = 0.0;
        for j in 1..=100 {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * lambda * lambda).exp();
            sum += if j % 2 == 1 { term } else { -term };
            if term < 1e-17 {
                break;
            }
        }
        2.0 * sum
    };
    q.clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value at
/// `λ = (√n_e + 0.12 + 0.11/√n_e)·D`, `n_e = n_a n_b/(n_a + n_b)`.
pub fn ks2(a: &[f64], b: &[f64]) -> Result<KsResult, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::Empty);
    }
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len(), xb.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < na && j < nb {
        let x = xa[i].min(xb[j]);
        while i < na && xa[i] == x {
            i += 1;
        }
        while j < nb && xb[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    let en = (na * nb) as f64 / (na + nb) as f64;
    let p = if d == 0.0 {
        1.0
    } else {
        kolmogorov_q((en.sqrt() + 0.12 + 0.11 / en.sqrt()) * d)
    };
    Ok(KsResult {
        statistic: d,
        p_value: p,
        size_a: na,
        size_b: nb,
    })
}

/// Per-topology distributions compared by [`validate_synthetic`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyProfile {
    pub n: usize,
    pub degrees: Vec<f64>,
    pub diameter_hops: f64,
    pub normalized_laplacian: Vec<f64>,
    pub fibre_lengths: Vec<f64>,
}

impl TopologyProfile {
    pub fn of(t: &Topology) -> Result<Self, StatsError> {
        let g = t.graph();
        let (diameter, _) = metrics::hop_summary(&metrics::hop_paths(g));
        Ok(Self {
            n: t.node_count(),
            degrees: g.degrees().into_iter().map(|d| d as f64).collect(),
            diameter_hops: diameter,
            normalized_laplacian: metrics::graph_spectra(g)?.normalized_laplacian.values().to_vec(),
            fibre_lengths: t.edge_lengths().collect(),
        })
    }
}

/// Node count splitting the two degree comparisons.
pub const DEGREE_SPLIT_N: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationProperty {
    DegreeSmall,
    DegreeLarge,
    Diameter,
    NormalizedLaplacianEigenvalues,
    FibreLengths,
}

impl ValidationProperty {
    pub const ALL: [ValidationProperty; 5] = [
        ValidationProperty::DegreeSmall,
        ValidationProperty::DegreeLarge,
        ValidationProperty::Diameter,
        ValidationProperty::NormalizedLaplacianEigenvalues,
        ValidationProperty::FibreLengths,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ValidationProperty::DegreeSmall => "degree (n <= 40)",
            ValidationProperty::DegreeLarge => "degree (n > 40)",
            ValidationProperty::Diameter => "diameter",
            ValidationProperty::NormalizedLaplacianEigenvalues => "normalised laplacian eigenvalues",
            ValidationProperty::FibreLengths => "fibre lengths",
        }
    }

    fn pool(&self, corpus: &[TopologyProfile]) -> Vec<f64> {
        let mut out = Vec::new();
        for p in corpus {
            match self {
                ValidationProperty::DegreeSmall if p.n <= DEGREE_SPLIT_N => out.extend(&p.degrees),
                ValidationProperty::DegreeLarge if p.n > DEGREE_SPLIT_N => out.extend(&p.degrees),
                ValidationProperty::Diameter => out.push(p.diameter_hops),
                ValidationProperty::NormalizedLaplacianEigenvalues => out.extend(&p.normalized_laplacian),
                ValidationProperty::FibreLengths => out.extend(&p.fibre_lengths),
                _ => {}
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub property: ValidationProperty,
    /// `None` when either corpus has nothing in this category.
    pub result: Option<KsResult>,
}

pub fn validate_profiles(real: &[TopologyProfile], synthetic: &[TopologyProfile]) -> Vec<ValidationRow> {
    ValidationProperty::ALL
        .iter()
        .map(|&property| ValidationRow {
            property,
            result: ks2(&property.pool(real), &property.pool(synthetic)).ok(),
        })
        .collect()
}

pub fn validate_synthetic(real: &[Topology], synthetic: &[Topology]) -> Result<Vec<ValidationRow>, StatsError> {
    if real.is_empty() || synthetic.is_empty() {
        return Err(StatsError::Empty);
    }
    let profile = |c: &[Topology]| c.iter().map(TopologyProfile::of).collect::<Result<Vec<_>, _>>();
    Ok(validate_profiles(&profile(real)?, &profile(synthetic)?))
}

/// D'Agostino–Pearson omnibus test on sample skewness and kurtosis.
/// Returns `(K², p)`; needs at least 8 values and a non-constant sample.
pub fn dagostino_pearson(xs: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 8 {
        return None;
    }
    let m = mean(xs);
    let moment = |k: i32| xs.iter().map(|x| (x - m).powi(k)).sum::<f64>() / n;
    let m2 = moment(2);
    if m2 == 0.0 {
        return None;
    }
    let skew = moment(3) / m2.powf(1.5);
    let kurt = moment(4) / (m2 * m2);

    let y = skew * ((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0))).sqrt();
    let beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0)
        / ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
    let w2 = -1.0 + (2.0 * (beta2 - 1.0)).sqrt();
    let delta = 1.0 / (0.5 * w2.ln()).sqrt();
    let alpha = (2.0 / (w2 - 1.0)).sqrt();
    let ya = if y == 0.0 { 1.0 } else { y / alpha };
    let z_skew = delta * (ya + (ya * ya + 1.0).sqrt()).ln();

    let expected = 3.0 * (n - 1.0) / (n + 1.0);
    let var = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0).powi(2) * (n + 3.0) * (n + 5.0));
    let x = (kurt - expected) / var.sqrt();
    let sqrt_beta1 = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0))
        * (6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0))).sqrt();
    let a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + (1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)).sqrt());
    let term1 = 1.0 - 2.0 / (9.0 * a);
    let denom = 1.0 + x * (2.0 / (a - 4.0)).sqrt();
    if denom == 0.0 {
        return None;
    }
    let term2 = denom.signum() * ((1.0 - 2.0 / a) / denom.abs()).cbrt();
    let z_kurt = (term1 - term2) / (2.0 / (9.0 * a)).sqrt();

    let k2 = z_skew * z_skew + z_kurt * z_kurt;
    Some((k2, (-k2 / 2.0).exp()))
}

/// Koenker's studentised Breusch–Pagan test of `y` regressed on `x`:
/// `n R²` of squared residuals on `x`, referred to chi-squared with one
/// degree of freedom. Returns `(LM, p)`.
pub fn breusch_pagan(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len();
    if n < 3 || n != y.len() {
        return None;
    }
    let (slope, intercept) = ols(x, y)?;
    let sq: Vec<f64> = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).collect();
    let (s2, i2) = ols(x, &sq)?;
    let ms = mean(&sq);
    let tss: f64 = sq.iter().map(|e| (e - ms).powi(2)).sum();
    if tss == 0.0 {
        return None;
    }
    let rss: f64 = x.iter().zip(&sq).map(|(a, e)| (e - i2 - s2 * a).powi(2)).sum();
    let lm = n as f64 * (1.0 - rss / tss);
    let p = 1.0 - ChiSquared::new(1.0).expect("one degree of freedom").cdf(lm);
    Some((lm, p))
}

fn ols(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Significance level used to count diagnostic departures.
pub const DIAGNOSTIC_ALPHA: f64 = 0.05;
/// |Spearman − Pearson| above this counts as a non-linear pair.
pub const LINEARITY_GAP: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityRow {
    pub metric: String,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDiagnostic {
    pub metric_a: String,
    pub metric_b: String,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    pub breusch_pagan_p: Option<f64>,
}

/// Descriptive normality, linearity and heteroscedasticity checks. Nothing
/// here gates any other computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub normality: Vec<NormalityRow>,
    pub pairs: Vec<PairDiagnostic>,
    pub non_normal_count: usize,
    pub non_linear_pairs: usize,
    pub heteroscedastic_pairs: usize,
}

pub fn diagnostics(corpus: &[NamedMetrics], metric_names: &[&str]) -> Result<Diagnostics, StatsError> {
    let cols = columns(corpus, metric_names)?;
    let normality: Vec<NormalityRow> = metric_names
        .iter()
        .zip(&cols)
        .map(|(m, c)| {
            let test = dagostino_pearson(c);
            NormalityRow {
                metric: m.to_string(),
                statistic: test.map(|t| t.0),
                p_value: test.map(|t| t.1),
            }
        })
        .collect();
    let mut pairs = Vec::new();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            pairs.push(PairDiagnostic {
                metric_a: metric_names[i].to_string(),
                metric_b: metric_names[j].to_string(),
                pearson: pearson(&cols[i], &cols[j]),
                spearman: spearman(&cols[i], &cols[j]),
                breusch_pagan_p: breusch_pagan(&cols[i], &cols[j]).map(|t| t.1),
            });
        }
    }
    Ok(Diagnostics {
        non_normal_count: normality.iter().filter(|r| r.p_value.is_some_and(|p| p < DIAGNOSTIC_ALPHA)).count(),
        non_linear_pairs: pairs
            .iter()
            .filter(|p| matches!((p.pearson, p.spearman), (Some(a), Some(b)) if (a - b).abs() > LINEARITY_GAP))
            .count(),
        heteroscedastic_pairs: pairs
            .iter()
            .filter(|p| p.breusch_pagan_p.is_some_and(|p| p < DIAGNOSTIC_ALPHA))
            .count(),
        normality,
        pairs,
    })
}
