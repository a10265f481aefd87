//! Parallel driver: one greedy series per start element, then a sequential
//! reduction over the resulting clusters.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::linkage::Linkage;
use crate::objective::{
    build_pi_series, extract_pi_cluster, select_minimal_maximizers, PiCluster, SelectionResult,
    DEFAULT_TOLERANCE,
};
use crate::parallel::{map_indices, resolve_workers};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Worker threads; 0 picks the number of available cores.
    pub workers: usize,
    pub tolerance: f64,
    pub collect_diagnostics: bool,
    /// Only consumed by verification harnesses; the search is deterministic.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            workers: 0,
            tolerance: DEFAULT_TOLERANCE,
            collect_diagnostics: false,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn with_workers(workers: usize) -> Self {
        RunConfig {
            workers,
            ..RunConfig::default()
        }
    }
}

/// Builds the series from every start and extracts its cluster, in start order.
pub fn build_clusters<L: Linkage + ?Sized>(
    linkage: &L,
    ground: &GroundSet,
    workers: usize,
) -> Result<Vec<PiCluster>> {
    if linkage.size() != ground.len() {
        return Err(Error::DimensionMismatch(format!(
            "linkage over {} elements, ground set has {}",
            linkage.size(),
            ground.len()
        )));
    }
    map_indices(ground.len(), workers, |start| {
        build_pi_series(linkage, start, ground).map(|s| extract_pi_cluster(&s))
    })
    .map_err(|(start, source)| Error::TaskFailed {
        start,
        source: Box::new(source),
    })
}

/// Finds all inclusion-minimal maximizers of the objective induced by `linkage`.
///
/// The result does not depend on `config.workers`.
pub fn run<L: Linkage + ?Sized>(
    linkage: &L,
    ground: &GroundSet,
    config: &RunConfig,
) -> Result<SelectionResult> {
    if config.tolerance < 0.0 || config.tolerance.is_nan() {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be >= 0, got {}",
            config.tolerance
        )));
    }
    let clusters = build_clusters(linkage, ground, config.workers)?;
    let mut result = select_minimal_maximizers(clusters, config.tolerance)?;
    if !config.collect_diagnostics {
        result.clusters.clear();
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Precompute,
    Series,
    Reduction,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Precompute => "precompute",
            Phase::Series => "series",
            Phase::Reduction => "reduction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub phase: Phase,
    pub workers: usize,
    pub milliseconds: f64,
    /// Baseline time divided by this row's time, for the same phase.
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub ground_size: usize,
    pub available_cores: usize,
    /// Worker count the speedups are relative to: 1 if measured, else the first entry.
    pub baseline_workers: usize,
    pub rows: Vec<BenchRow>,
    /// Whether every worker count produced the same selection.
    pub consistent: bool,
}

impl BenchReport {
    pub fn speedup(&self, phase: Phase, workers: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.phase == phase && r.workers == workers)
            .map(|r| r.speedup)
    }
}

/// Times each phase for every entry of `worker_counts`.
///
/// `build` constructs the linkage for a given worker count; its wall time is
/// the precompute phase.
pub fn benchmark<L, B>(build: B, ground: &GroundSet, worker_counts: &[usize]) -> Result<BenchReport>
where
    L: Linkage,
    B: Fn(usize) -> Result<L>,
{
    if worker_counts.is_empty() {
        return Err(Error::Empty("worker counts"));
    }
    let mut timings = Vec::with_capacity(worker_counts.len());
    let mut reference: Option<SelectionResult> = None;
    let mut consistent = true;
    for &workers in worker_counts {
        let t0 = Instant::now();
        let linkage = build(workers)?;
        let precompute = t0.elapsed();

        let t1 = Instant::now();
        let clusters = build_clusters(&linkage, ground, workers)?;
        let series = t1.elapsed();

        let t2 = Instant::now();
        let mut result = select_minimal_maximizers(clusters, DEFAULT_TOLERANCE)?;
        let reduction = t2.elapsed();

        result.clusters.clear();
        match &reference {
            Some(r) => consistent &= *r == result,
            None => reference = Some(result),
        }
        timings.push((workers, [precompute, series, reduction]));
    }

    let baseline_idx = worker_counts.iter().position(|&w| w == 1).unwrap_or(0);
    let baseline = timings[baseline_idx].1;
    let phases = [Phase::Precompute, Phase::Series, Phase::Reduction];
    let mut rows = Vec::new();
    for (p, phase) in phases.iter().enumerate() {
        let base_ms = baseline[p].as_secs_f64() * 1e3;
        for (workers, t) in &timings {
            let ms = t[p].as_secs_f64() * 1e3;
            let speedup = if ms > 0.0 { base_ms / ms } else { 1.0 };
            rows.push(BenchRow {
                phase: *phase,
                workers: *workers,
                milliseconds: ms,
                speedup,
            });
        }
    }
    Ok(BenchReport {
        ground_size: ground.len(),
        available_cores: resolve_workers(0),
        baseline_workers: worker_counts[baseline_idx],
        rows,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkage::PairwiseSumLinkage;
    use crate::matrix::SquareMatrix;
    use crate::subset::Subset;

    fn worked() -> (PairwiseSumLinkage, GroundSet) {
        (
            PairwiseSumLinkage::from_rows(&[[0.0, 1.0, 3.0], [1.0, 0.0, 5.0], [3.0, 5.0, 0.0]]).unwrap(),
            GroundSet::new(["A", "B", "C"]).unwrap(),
        )
    }

    #[test]
    fn worked_instance_for_several_worker_counts() {
        let (l, g) = worked();
        let expected = run(&l, &g, &RunConfig::with_workers(1)).unwrap();
        assert_eq!(expected.optimum, -3.0);
        assert_eq!(expected.maximizer_sets(), vec![g.subset([0]).unwrap()]);
        for w in [2, 4] {
            assert_eq!(run(&l, &g, &RunConfig::with_workers(w)).unwrap(), expected);
        }
    }

    #[test]
    fn two_elements_pick_the_better_singleton() {
        let l = PairwiseSumLinkage::from_rows(&[[0.0, 2.0], [1.0, 0.0]]).unwrap();
        let g = GroundSet::indexed(2).unwrap();
        let cfg = RunConfig {
            collect_diagnostics: true,
            ..RunConfig::default()
        };
        let r = run(&l, &g, &cfg).unwrap();
        // M({0}) = π(1, {0}) = -1, M({1}) = π(0, {1}) = -2.
        assert_eq!(r.optimum, -1.0);
        assert_eq!(r.maximizer_sets(), vec![g.subset([0]).unwrap()]);
        assert!(r.clusters.iter().all(|c| c.prefix_len == 1));
    }

    #[test]
    fn zero_weights_return_every_singleton() {
        let l = PairwiseSumLinkage::new(SquareMatrix::zeros(5)).unwrap();
        let g = GroundSet::indexed(5).unwrap();
        let r = run(&l, &g, &RunConfig::default()).unwrap();
        assert_eq!(r.optimum, 0.0);
        let expected: Vec<Subset> = (0..5).map(|i| Subset::singleton(5, i).unwrap()).collect();
        assert_eq!(r.maximizer_sets(), expected);
        assert!(r.clusters.is_empty());
    }

    struct FailsFrom(usize);
    impl Linkage for FailsFrom {
        fn size(&self) -> usize {
            4
        }
        fn evaluate(&self, element: usize, set: &Subset) -> Result<f64> {
            if set.contains(self.0) {
                Err(Error::SetFunction("poisoned".into()))
            } else {
                Ok(element as f64)
            }
        }
    }

    #[test]
    fn failure_carries_the_start_index() {
        let g = GroundSet::indexed(4).unwrap();
        for w in [1, 2, 4] {
            match run(&FailsFrom(3), &g, &RunConfig::with_workers(w)) {
                Err(Error::TaskFailed { start, .. }) => assert!(start <= 3),
                other => panic!("expected task failure, got {other:?}"),
            }
        }
    }

    #[test]
    fn benchmark_shape() {
        let (l, g) = worked();
        let report = benchmark(|_| Ok(&l), &g, &[1]).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.rows.iter().all(|r| r.speedup == 1.0 || r.milliseconds == 0.0));
        assert!(report.consistent);
        let report = benchmark(|_| Ok(&l), &g, &[1, 2]).unwrap();
        assert_eq!(report.rows.len(), 6);
        assert_eq!(report.speedup(Phase::Series, 1), Some(1.0));
        assert!(benchmark(|_| Ok(&l), &g, &[]).is_err());
    }
}
