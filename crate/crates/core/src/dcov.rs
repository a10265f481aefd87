//! Sample distance covariance and correlation for univariate features, and
//! the diversity linkage built from them.
//!
//! For a column `x` with `n` samples, `E[k][l] = d(x_k, x_l)` is double
//! centered to `Ê = E − row means − column means + grand mean`, and
//! `ν̂²(x, y) = (1/n²) Σ_{k,l} Ê_x[k][l] · Ê_y[k][l]`.
//!
//! `d` is the squared difference by default. Note that with squared distances
//! `Ê_x = −2 x̃ x̃ᵀ` (with `x̃` the centered column), so the statistic reduces
//! to `4 · cov(x, y)²` and only sees linear dependence. The
//! [`DistanceMode::Euclidean`] mode gives the usual (unsquared) estimator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkage::PairwiseSumLinkage;
use crate::matrix::SquareMatrix;
use crate::parallel::map_indices;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMode {
    /// `(x_k − x_l)²`
    #[default]
    Squared,
    /// `|x_k − x_l|`
    Euclidean,
}

impl DistanceMode {
    #[inline]
    pub fn distance(self, a: f64, b: f64) -> f64 {
        match self {
            DistanceMode::Squared => (a - b) * (a - b),
            DistanceMode::Euclidean => (a - b).abs(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DistanceMode::Squared => "squared",
            DistanceMode::Euclidean => "euclidean",
        }
    }
}

/// Observations in rows, features in columns. Stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    labels: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl DataMatrix {
    pub fn from_columns(labels: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Empty("data matrix has no columns"));
        }
        if labels.len() != columns.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} columns",
                labels.len(),
                columns.len()
            )));
        }
        let n = columns[0].len();
        for (label, col) in labels.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "column '{label}' has {} samples, expected {n}",
                    col.len()
                )));
            }
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFiniteData {
                    column: label.clone(),
                    row,
                });
            }
        }
        if n < 3 {
            return Err(Error::TooFewSamples(n));
        }
        Ok(DataMatrix { labels, columns })
    }

    pub fn from_rows(labels: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let width = labels.len();
        let mut columns = vec![Vec::with_capacity(rows.len()); width];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} values, expected {width}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                columns[c].push(v);
            }
        }
        DataMatrix::from_columns(labels, columns)
    }

    pub fn n_samples(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn column(&self, index: usize) -> &[f64] {
        &self.columns[index]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn is_constant(&self, index: usize) -> bool {
        let c = &self.columns[index];
        c.iter().all(|&v| v == c[0])
    }
}

/// A double-centered distance matrix: rows and columns sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredDistanceMatrix {
    pub values: SquareMatrix,
    /// How the underlying distances were formed, when known.
    pub mode: Option<DistanceMode>,
}

#[inline]
fn center_entry(e: f64, row_mean_k: f64, row_mean_l: f64, grand: f64) -> f64 {
    // Grouping the row means keeps the result exactly symmetric in (k, l).
    e - (row_mean_k + row_mean_l) + grand
}

/// Double-centers a symmetric distance matrix.
pub fn double_center(distances: &SquareMatrix) -> Result<CenteredDistanceMatrix> {
    let n = distances.size();
    for k in 0..n {
        for l in 0..n {
            if !distances.get(k, l).is_finite() {
                return Err(Error::NonFiniteDistance { row: k, col: l });
            }
        }
    }
    if let Some((row, col)) = distances.asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    // Symmetry makes row means and column means the same vector.
    let row_means: Vec<f64> = distances
        .rows()
        .map(|r| r.iter().sum::<f64>() / n as f64)
        .collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let values = SquareMatrix::from_fn(n, |k, l| {
        center_entry(distances.get(k, l), row_means[k], row_means[l], grand)
    });
    Ok(CenteredDistanceMatrix { values, mode: None })
}

/// Row means of the distance matrix of one column, enough to produce any
/// centered entry on demand in O(1).
struct ColumnCentering<'a> {
    values: &'a [f64],
    row_means: Vec<f64>,
    grand: f64,
    mode: DistanceMode,
}

impl<'a> ColumnCentering<'a> {
    fn new(values: &'a [f64], mode: DistanceMode) -> Self {
        let n = values.len() as f64;
        let row_means: Vec<f64> = values
            .iter()
            .map(|&a| values.iter().map(|&b| mode.distance(a, b)).sum::<f64>() / n)
            .collect();
        let grand = row_means.iter().sum::<f64>() / n;
        ColumnCentering {
            values,
            row_means,
            grand,
            mode,
        }
    }

    #[inline]
    fn entry(&self, k: usize, l: usize) -> f64 {
        center_entry(
            self.mode.distance(self.values[k], self.values[l]),
            self.row_means[k],
            self.row_means[l],
            self.grand,
        )
    }

    fn materialize(&self) -> Vec<f64> {
        let n = self.values.len();
        let mut out = Vec::with_capacity(n * n);
        for k in 0..n {
            for l in 0..n {
                out.push(self.entry(k, l));
            }
        }
        out
    }
}

/// Double-centered distance matrix of a single column.
pub fn centered_distances(column: &[f64], mode: DistanceMode) -> CenteredDistanceMatrix {
    let n = column.len();
    let c = ColumnCentering::new(column, mode);
    CenteredDistanceMatrix {
        values: SquareMatrix::from_fn(n, |k, l| c.entry(k, l)),
        mode: Some(mode),
    }
}

// Both paths sum row by row in the same order, so they agree bit for bit.
fn streamed_dcov(a: &ColumnCentering<'_>, b: &ColumnCentering<'_>) -> f64 {
    let n = a.values.len();
    let mut total = 0.0;
    for k in 0..n {
        let mut row = 0.0;
        for l in 0..n {
            row += a.entry(k, l) * b.entry(k, l);
        }
        total += row;
    }
    finish_dcov(total, n)
}

fn materialized_dcov(a: &[f64], b: &[f64], n: usize) -> f64 {
    let mut total = 0.0;
    for (ra, rb) in a.chunks_exact(n).zip(b.chunks_exact(n)) {
        let mut row = 0.0;
        for (x, y) in ra.iter().zip(rb) {
            row += x * y;
        }
        total += row;
    }
    finish_dcov(total, n)
}

#[inline]
fn finish_dcov(total: f64, n: usize) -> f64 {
    // The exact value is nonnegative; rounding can leave a tiny negative.
    (total / (n * n) as f64).max(0.0)
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "columns have {} and {} samples",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::TooFewSamples(x.len()));
    }
    for (name, col) in [("x", x), ("y", y)] {
        if let Some(row) = col.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteData {
                column: name.to_string(),
                row,
            });
        }
    }
    Ok(())
}

/// Sample distance covariance `ν̂²(x, y)`.
pub fn sample_dcov(x: &[f64], y: &[f64], mode: DistanceMode) -> Result<f64> {
    check_pair(x, y)?;
    let a = ColumnCentering::new(x, mode);
    let b = ColumnCentering::new(y, mode);
    Ok(streamed_dcov(&a, &b))
}

/// Sample distance correlation `ρ̂²(x, y)`, defined as 0 when either column
/// has zero distance variance.
pub fn sample_dcor(x: &[f64], y: &[f64], mode: DistanceMode) -> Result<f64> {
    check_pair(x, y)?;
    let a = ColumnCentering::new(x, mode);
    let b = ColumnCentering::new(y, mode);
    let xy = streamed_dcov(&a, &b);
    let xx = streamed_dcov(&a, &a);
    let yy = streamed_dcov(&b, &b);
    Ok(correlation_from(xy, xx, yy))
}

fn correlation_from(xy: f64, xx: f64, yy: f64) -> f64 {
    let denom = xx * yy;
    if denom > 0.0 {
        (xy / denom.sqrt()).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Result of z-scoring every column.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub data: DataMatrix,
    /// Columns that were constant and are now all zero.
    pub constant_columns: Vec<usize>,
}

/// Shifts each column to mean 0 and scales it to unit sample standard
/// deviation. Constant columns become all zeros and are reported.
pub fn normalize_columns(data: &DataMatrix) -> Normalized {
    let n = data.n_samples() as f64;
    let mut constant_columns = Vec::new();
    let columns = data
        .columns
        .iter()
        .enumerate()
        .map(|(j, col)| {
            if data.is_constant(j) {
                constant_columns.push(j);
                return vec![0.0; col.len()];
            }
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
            let sd = var.sqrt();
            col.iter().map(|v| (v - mean) / sd).collect()
        })
        .collect();
    Normalized {
        data: DataMatrix {
            labels: data.labels.clone(),
            columns,
        },
        constant_columns,
    }
}

/// Pairwise `ν̂²` between every pair of features.
#[derive(Debug, Clone, PartialEq)]
pub struct DcovMatrix {
    pub values: SquareMatrix,
    pub mode: DistanceMode,
    pub labels: Vec<String>,
}

impl DcovMatrix {
    /// Pairwise `ρ̂²` derived from the same covariances.
    pub fn correlations(&self) -> SquareMatrix {
        let v = &self.values;
        SquareMatrix::from_fn(v.size(), |i, j| correlation_from(v.get(i, j), v.get(i, i), v.get(j, j)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcovOptions {
    pub mode: DistanceMode,
    /// 0 = all available cores.
    pub workers: usize,
    /// Centered matrices (`8 · n² · N` bytes) are cached when they fit in
    /// this budget; otherwise entries are recomputed per pair.
    pub memory_budget_bytes: usize,
}

impl Default for DcovOptions {
    fn default() -> Self {
        DcovOptions {
            mode: DistanceMode::Squared,
            workers: 0,
            memory_budget_bytes: 512 << 20,
        }
    }
}

impl DcovOptions {
    pub fn with_mode(mode: DistanceMode) -> Self {
        DcovOptions {
            mode,
            ..DcovOptions::default()
        }
    }
}

pub fn pairwise_dcov_matrix(data: &DataMatrix, mode: DistanceMode) -> Result<DcovMatrix> {
    pairwise_dcov_matrix_with(data, &DcovOptions::with_mode(mode))
}

pub fn pairwise_dcov_matrix_with(data: &DataMatrix, options: &DcovOptions) -> Result<DcovMatrix> {
    let n = data.n_samples();
    if n < 3 {
        return Err(Error::TooFewSamples(n));
    }
    let features = data.n_features();
    let mode = options.mode;
    let infallible = |e: (usize, std::convert::Infallible)| -> Error { match e.1 {} };

    let centering: Vec<ColumnCentering<'_>> = map_indices(features, options.workers, |j| {
        Ok(ColumnCentering::new(data.column(j), mode))
    })
    .map_err(infallible)?;

    let pairs: Vec<(usize, usize)> = (0..features)
        .flat_map(|i| (i..features).map(move |j| (i, j)))
        .collect();

    let fits = (n * n)
        .checked_mul(features)
        .and_then(|cells| cells.checked_mul(std::mem::size_of::<f64>()))
        .is_some_and(|bytes| bytes <= options.memory_budget_bytes);

    let pair_values: Vec<f64> = if fits {
        let cached: Vec<Vec<f64>> = map_indices(features, options.workers, |j| Ok(centering[j].materialize()))
            .map_err(infallible)?;
        map_indices(pairs.len(), options.workers, |p| {
            let (i, j) = pairs[p];
            Ok(materialized_dcov(&cached[i], &cached[j], n))
        })
        .map_err(infallible)?
    } else {
        map_indices(pairs.len(), options.workers, |p| {
            let (i, j) = pairs[p];
            Ok(streamed_dcov(&centering[i], &centering[j]))
        })
        .map_err(infallible)?
    };

    let mut values = SquareMatrix::zeros(features);
    for (&(i, j), &v) in pairs.iter().zip(&pair_values) {
        values.set(i, j, v);
        values.set(j, i, v);
    }
    Ok(DcovMatrix {
        values,
        mode,
        labels: data.labels.clone(),
    })
}

/// Off-diagonal dependence below this is reported as a degenerate objective.
pub const DEGENERATE_DEPENDENCE: f64 = 1e-12;

/// The diversity linkage `π(i, S) = −Σ_{j∈S} ν̂²(X_i, X_j)` together with the
/// matrix it was built from.
#[derive(Debug, Clone)]
pub struct DcovLinkage {
    pub linkage: PairwiseSumLinkage,
    pub dcov: DcovMatrix,
    pub warnings: Vec<String>,
}

pub fn dcov_linkage(data: &DataMatrix, mode: DistanceMode) -> Result<DcovLinkage> {
    dcov_linkage_with(data, &DcovOptions::with_mode(mode))
}

pub fn dcov_linkage_with(data: &DataMatrix, options: &DcovOptions) -> Result<DcovLinkage> {
    let dcov = pairwise_dcov_matrix_with(data, options)?;
    let linkage = linkage_from_dcov(&dcov)?;
    let mut warnings = Vec::new();
    let n = dcov.values.size();
    let max_off = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| dcov.values.get(i, j))
        .fold(0.0f64, f64::max);
    if n > 1 && max_off < DEGENERATE_DEPENDENCE {
        warnings.push(format!(
            "all pairwise distance covariances are below {DEGENERATE_DEPENDENCE:e}; the objective is nearly constant"
        ));
    }
    for j in 0..n {
        if dcov.values.get(j, j) == 0.0 {
            warnings.push(format!("column '{}' has zero distance variance", dcov.labels[j]));
        }
    }
    Ok(DcovLinkage {
        linkage,
        dcov,
        warnings,
    })
}

/// Zeroes the diagonal (never consulted, since `i ∉ S`) and wraps the rest.
pub fn linkage_from_dcov(dcov: &DcovMatrix) -> Result<PairwiseSumLinkage> {
    let v = &dcov.values;
    PairwiseSumLinkage::new(SquareMatrix::from_fn(v.size(), |i, j| if i == j { 0.0 } else { v.get(i, j) }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KosorokConfig {
    pub n_samples: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: DistanceMode,
    /// Standard deviation of the noise mixed into `Y = X + noise`.
    pub dependence_noise: f64,
    /// Scale of the independent `Z`; 0 makes both sides identical.
    pub z_scale: f64,
}

impl Default for KosorokConfig {
    fn default() -> Self {
        KosorokConfig {
            n_samples: 1000,
            trials: 100,
            seed: 0,
            mode: DistanceMode::Euclidean,
            dependence_noise: 0.1,
            z_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KosorokReport {
    pub trials: usize,
    pub held: usize,
    pub fraction: f64,
}

/// Monte Carlo check of `ν²(X + Z, Y) ≤ ν²(X, Y)` for `Z` independent of
/// `(X, Y)`, using the sample estimator. Statistical only: individual trials
/// may fail.
pub fn kosorok_smoke_test(config: &KosorokConfig) -> Result<KosorokReport> {
    if config.n_samples < 3 {
        return Err(Error::TooFewSamples(config.n_samples));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut held = 0;
    let n = config.n_samples;
    for _ in 0..config.trials {
        let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
        let x: Vec<f64> = (0..n).map(|_| draw()).collect();
        let y: Vec<f64> = x.iter().map(|&v| v + config.dependence_noise * draw()).collect();
        let xz: Vec<f64> = x.iter().map(|&v| v + config.z_scale * draw()).collect();
        let with_z = sample_dcov(&xz, &y, config.mode)?;
        let without = sample_dcov(&x, &y, config.mode)?;
        if with_z <= without {
            held += 1;
        }
    }
    Ok(KosorokReport {
        trials: config.trials,
        held,
        fraction: if config.trials == 0 {
            1.0
        } else {
            held as f64 / config.trials as f64
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("f{i}")).collect()
    }

    #[test]
    fn double_center_hand_example() {
        let e = SquareMatrix::from_rows(&[[0.0, 1.0, 4.0], [1.0, 0.0, 1.0], [4.0, 1.0, 0.0]]).unwrap();
        let c = double_center(&e).unwrap();
        let expected = [[-2.0, 0.0, 2.0], [0.0, 0.0, 0.0], [2.0, 0.0, -2.0]];
        for (k, row) in expected.iter().enumerate() {
            for (l, &v) in row.iter().enumerate() {
                assert!((c.values.get(k, l) - v).abs() < 1e-12, "({k},{l})");
            }
        }
        let zeros = double_center(&SquareMatrix::zeros(4)).unwrap();
        assert_eq!(zeros.values, SquareMatrix::zeros(4));
    }

    #[test]
    fn double_center_rejects_bad_input() {
        let asym = SquareMatrix::from_rows(&[[0.0, 1.0], [2.0, 0.0]]).unwrap();
        assert_eq!(double_center(&asym), Err(Error::NotSymmetric { row: 0, col: 1 }));
        let inf = SquareMatrix::from_rows(&[[0.0, f64::INFINITY], [f64::INFINITY, 0.0]]).unwrap();
        assert!(matches!(double_center(&inf), Err(Error::NonFiniteDistance { .. })));
    }

    #[test]
    fn column_centering_matches_generic_double_center() {
        let x = [0.3, -1.2, 2.5, 0.0, 4.1];
        for mode in [DistanceMode::Squared, DistanceMode::Euclidean] {
            let e = SquareMatrix::from_fn(5, |k, l| mode.distance(x[k], x[l]));
            let generic = double_center(&e).unwrap();
            let direct = centered_distances(&x, mode);
            for k in 0..5 {
                for l in 0..5 {
                    assert!((generic.values.get(k, l) - direct.values.get(k, l)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn dcov_hand_values() {
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, 1.0, 0.0];
        let xx = sample_dcov(&x, &x, DistanceMode::Squared).unwrap();
        assert!((xx - 16.0 / 9.0).abs() < 1e-12);
        assert!(sample_dcov(&x, &y, DistanceMode::Squared).unwrap().abs() < 1e-12);
        assert_eq!(sample_dcov(&x, &[5.0; 3], DistanceMode::Squared).unwrap(), 0.0);
        assert_eq!(sample_dcov(&x, &[5.0; 3], DistanceMode::Euclidean).unwrap(), 0.0);
    }

    #[test]
    fn dcor_values() {
        let x = [0.0, 1.0, 2.0];
        assert!((sample_dcor(&x, &x, DistanceMode::Squared).unwrap() - 1.0).abs() < 1e-12);
        assert!((sample_dcor(&x, &x, DistanceMode::Euclidean).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(sample_dcor(&x, &[5.0; 3], DistanceMode::Squared).unwrap(), 0.0);
        assert!(sample_dcor(&x, &[0.0, 1.0, 0.0], DistanceMode::Squared).unwrap().abs() < 1e-12);
    }

    #[test]
    fn dcov_input_errors() {
        assert!(matches!(
            sample_dcov(&[1.0, 2.0, 3.0], &[1.0, 2.0], DistanceMode::Squared),
            Err(Error::DimensionMismatch(_))
        ));
        assert_eq!(
            sample_dcov(&[1.0, 2.0], &[1.0, 2.0], DistanceMode::Squared),
            Err(Error::TooFewSamples(2))
        );
    }

    #[test]
    fn data_matrix_validation() {
        assert_eq!(
            DataMatrix::from_columns(labels(1), vec![vec![1.0, 2.0]]),
            Err(Error::TooFewSamples(2))
        );
        assert!(matches!(
            DataMatrix::from_columns(labels(1), vec![vec![1.0, f64::NAN, 2.0]]),
            Err(Error::NonFiniteData { row: 1, .. })
        ));
        assert!(DataMatrix::from_rows(labels(2), &[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn normalization() {
        let d = DataMatrix::from_columns(labels(2), vec![vec![0.0, 1.0, 2.0], vec![5.0; 3]]).unwrap();
        let z = normalize_columns(&d);
        assert_eq!(z.constant_columns, vec![1]);
        assert_eq!(z.data.column(1), &[0.0, 0.0, 0.0]);
        let c = z.data.column(0);
        let mean: f64 = c.iter().sum::<f64>() / 3.0;
        let var: f64 = c.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 2.0;
        assert!(mean.abs() < 1e-12);
        assert!((var - 1.0).abs() < 1e-12);
        let again = normalize_columns(&z.data);
        for (a, b) in again.data.column(0).iter().zip(c) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pairwise_matrix_small() {
        let d = DataMatrix::from_columns(labels(2), vec![vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let m = pairwise_dcov_matrix(&d, DistanceMode::Squared).unwrap();
        assert!((m.values.get(0, 0) - 16.0 / 9.0).abs() < 1e-12);
        // y = (0,1,0): Ê_y = -2 ỹỹᵀ with ỹ = (-1/3, 2/3, -1/3), so ν̂² = 4 (Σỹ²/3)² = 4 (2/9)² = 16/81.
        assert!((m.values.get(1, 1) - 16.0 / 81.0).abs() < 1e-12);
        assert!(m.values.get(0, 1).abs() < 1e-12);
        assert_eq!(m.values.get(0, 1), m.values.get(1, 0));

        let same = DataMatrix::from_columns(labels(2), vec![vec![1.0, 3.0, 2.0, 7.0]; 2]).unwrap();
        let m = pairwise_dcov_matrix(&same, DistanceMode::Euclidean).unwrap();
        let v = m.values.get(0, 0);
        assert!(v > 0.0);
        for (i, j) in [(0, 1), (1, 0), (1, 1)] {
            assert_eq!(m.values.get(i, j), v);
        }
    }

    #[test]
    fn streamed_and_cached_paths_agree_exactly() {
        let cols: Vec<Vec<f64>> = (0..4)
            .map(|j| (0..9).map(|k| ((k * 7 + j * 3) % 5) as f64 * 0.37 - j as f64).collect())
            .collect();
        let d = DataMatrix::from_columns(labels(4), cols).unwrap();
        for mode in [DistanceMode::Squared, DistanceMode::Euclidean] {
            let cached = pairwise_dcov_matrix_with(&d, &DcovOptions { mode, workers: 2, memory_budget_bytes: usize::MAX }).unwrap();
            let streamed = pairwise_dcov_matrix_with(&d, &DcovOptions { mode, workers: 3, memory_budget_bytes: 0 }).unwrap();
            assert_eq!(cached, streamed);
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(
                        cached.values.get(i, j),
                        sample_dcov(d.column(i), d.column(j), mode).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn linkage_uses_negated_off_diagonal() {
        let d = DataMatrix::from_columns(labels(3), vec![vec![0.0, 1.0, 2.0, 4.0], vec![1.0, 0.0, 1.0, 3.0], vec![2.0, 2.0, 0.0, 1.0]]).unwrap();
        let built = dcov_linkage(&d, DistanceMode::Euclidean).unwrap();
        use crate::linkage::Linkage;
        use crate::subset::Subset;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let s = Subset::singleton(3, j).unwrap();
                    assert_eq!(built.linkage.evaluate(i, &s).unwrap(), -built.dcov.values.get(i, j));
                }
            }
        }
    }

    #[test]
    fn independent_noise_is_flagged_as_degenerate() {
        // Constant columns: every off-diagonal entry is exactly zero.
        let d = DataMatrix::from_columns(labels(3), vec![vec![1.0; 4], vec![2.0; 4], vec![3.0; 4]]).unwrap();
        let built = dcov_linkage(&d, DistanceMode::Squared).unwrap();
        assert!(built.warnings.iter().any(|w| w.contains("nearly constant")));
    }

    #[test]
    fn kosorok_with_zero_z_is_exact() {
        let cfg = KosorokConfig {
            n_samples: 50,
            trials: 5,
            z_scale: 0.0,
            ..KosorokConfig::default()
        };
        let r = kosorok_smoke_test(&cfg).unwrap();
        assert_eq!(r.held, 5);
    }
}
