//! Dense symmetric eigensolver and the spectral graph quantities built on it:
//! Laplacian, normalised Laplacian, spectral radius, algebraic connectivity
//! and the weighted spectral distribution.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of equal-width bins spanning `[0, 2]` for the weighted spectral
/// distribution.
pub const WSD_BINS: usize = 40;
/// Exponent applied to `(1 - k)` in the weighted spectral distribution.
pub const WSD_EXPONENT: i32 = 4;
/// Eigenvalues with magnitude below this count as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-8;

/// Eigenvalues closer than this to a bin edge are binned as if on it.
pub const WSD_EDGE_SNAP: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("matrix is empty")]
    Empty,
    #[error("entry ({0}, {1}) is not finite")]
    NonFinite(usize, usize),
    #[error("entries ({0}, {1}) and ({1}, {0}) differ")]
    NotSymmetric(usize, usize),
    #[error("node {0} has zero degree; the degree matrix is singular")]
    ZeroDegree(usize),
    #[error("eigenvalue {0} lies outside [0, 2]")]
    OutOfRange(f64),
    #[error("need at least {needed} eigenvalues, have {have}")]
    TooFewEigenvalues { needed: usize, have: usize },
    #[error("jacobi iteration did not converge in {0} sweeps")]
    NoConvergence(usize),
}

/// Dense real symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, SpectralError> {
        let order = rows.len();
        if order == 0 {
            return Err(SpectralError::Empty);
        }
        let mut entries = Vec::with_capacity(order * order);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != order {
                return Err(SpectralError::NotSquare {
                    rows: order,
                    row: i,
                    len: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::from_entries(order, entries)
    }

    fn from_entries(order: usize, entries: Vec<f64>) -> Result<Self, SpectralError> {
        for i in 0..order {
            for j in 0..order {
                let a = entries[i * order + j];
                if !a.is_finite() {
                    return Err(SpectralError::NonFinite(i, j));
                }
                if j > i {
                    let b = entries[j * order + i];
                    if (a - b).abs() > SYMMETRY_TOL * a.abs().max(b.abs()).max(1.0) {
                        return Err(SpectralError::NotSymmetric(i, j));
                    }
                }
            }
        }
        Ok(Self { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.chunks(self.order).map(|r| r.iter().sum()).collect()
    }
}

/// Eigenvalues in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn from_values(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Self { eigenvalues }
    }

    pub fn values(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn near_zero_count(&self) -> usize {
        self.eigenvalues.iter().filter(|x| x.abs() < ZERO_EIGENVALUE_TOL).count()
    }
}

/// Eigenvalues with matching unit eigenvectors (`vectors[k]` belongs to
/// `values[k]`), sorted by ascending eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls below
/// `1e-12 * ||M||_F`.
fn jacobi(m: &SymmetricMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>), SpectralError> {
    let n = m.order;
    let mut a = m.entries.clone();
    let mut v = want_vectors.then(|| {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        id
    });
    let threshold = JACOBI_REL_TOL * m.frobenius_norm();
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(SpectralError::NoConvergence(JACOBI_MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        converged = off_norm(&a) <= threshold;
    }
    Ok(((0..n).map(|i| a[i * n + i]).collect(), v))
}

pub fn eigenvalues_symmetric(m: &SymmetricMatrix) -> Result<Spectrum, SpectralError> {
    let (values, _) = jacobi(m, false)?;
    Ok(Spectrum::from_values(values))
}

pub fn eigen_decompose(m: &SymmetricMatrix) -> Result<EigenDecomposition, SpectralError> {
    let n = m.order;
    let (values, vectors) = jacobi(m, true)?;
    let vectors = vectors.expect("requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    Ok(EigenDecomposition {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: order.iter().map(|&k| (0..n).map(|r| vectors[r * n + k]).collect()).collect(),
    })
}

fn degrees(adjacency: &SymmetricMatrix) -> Vec<f64> {
    adjacency.row_sums()
}

/// `L = D - A`.
pub fn laplacian(adjacency: &SymmetricMatrix) -> Result<SymmetricMatrix, SpectralError> {
    let n = adjacency.order;
    let deg = degrees(adjacency);
    if let Some(i) = deg.iter().position(|&d| d <= 0.0) {
        return Err(SpectralError::ZeroDegree(i));
    }
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] = if i == j { deg[i] } else { 0.0 } - adjacency.get(i, j);
        }
    }
    SymmetricMatrix::from_entries(n, entries)
}

/// `I - D^{-1/2} A D^{-1/2}`.
pub fn normalized_laplacian(adjacency: &SymmetricMatrix) -> Result<SymmetricMatrix, SpectralError> {
    let n = adjacency.order;
    let deg = degrees(adjacency);
    if let Some(i) = deg.iter().position(|&d| d <= 0.0) {
        return Err(SpectralError::ZeroDegree(i));
    }
    let inv_sqrt: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let scaled = inv_sqrt[i] * adjacency.get(i, j) * inv_sqrt[j];
            entries[i * n + j] = if i == j { 1.0 } else { 0.0 } - scaled;
        }
    }
    SymmetricMatrix::from_entries(n, entries)
}

/// Largest eigenvalue magnitude of the adjacency matrix.
pub fn spectral_radius(adjacency: &SymmetricMatrix) -> Result<f64, SpectralError> {
    let s = eigenvalues_symmetric(adjacency)?;
    Ok(s.values().iter().fold(0.0, |m: f64, x| m.max(x.abs())))
}

/// Second-smallest Laplacian eigenvalue.
pub fn algebraic_connectivity(laplacian: &SymmetricMatrix) -> Result<f64, SpectralError> {
    algebraic_connectivity_of(&eigenvalues_symmetric(laplacian)?)
}

pub fn algebraic_connectivity_of(laplacian_spectrum: &Spectrum) -> Result<f64, SpectralError> {
    laplacian_spectrum
        .values()
        .get(1)
        .copied()
        .ok_or(SpectralError::TooFewEigenvalues {
            needed: 2,
            have: laplacian_spectrum.len(),
        })
}

/// Eigenvalue counts per WSD bin.
///
/// Bins are `[i/20, (i+1)/20)` for `i < 39` with the last bin closed at 2.
pub fn wsd_histogram(normalized_laplacian_spectrum: &Spectrum) -> Result<[usize; WSD_BINS], SpectralError> {
    let values = normalized_laplacian_spectrum.values();
    if values.is_empty() {
        return Err(SpectralError::TooFewEigenvalues { needed: 1, have: 0 });
    }
    let width = 2.0 / WSD_BINS as f64;
    let mut counts = [0usize; WSD_BINS];
    for &x in values {
        if !(-ZERO_EIGENVALUE_TOL..=2.0 + ZERO_EIGENVALUE_TOL).contains(&x) {
            return Err(SpectralError::OutOfRange(x));
        }
        let q = x / width;
        // eigenvalues such as exactly 1 land on bin edges; solver noise must
        // not decide which side they fall on
        let q = if (q - q.round()).abs() * width < WSD_EDGE_SNAP { q.round() } else { q };
        let bin = (q.floor().max(0.0) as usize).min(WSD_BINS - 1);
        counts[bin] += 1;
    }
    Ok(counts)
}

/// Weighted spectral distribution of a normalised-Laplacian spectrum: each
/// [`wsd_histogram`] bin's weight is `(1 - midpoint)^4` times the fraction
/// of eigenvalues it holds.
pub fn wsd(normalized_laplacian_spectrum: &Spectrum) -> Result<f64, SpectralError> {
    let counts = wsd_histogram(normalized_laplacian_spectrum)?;
    let width = 2.0 / WSD_BINS as f64;
    let total = normalized_laplacian_spectrum.len() as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(bin, &c)| {
            let mid = (bin as f64 + 0.5) * width;
            (1.0 - mid).powi(WSD_EXPONENT) * c as f64 / total
        })
        .sum())
}
