//! The induced max-min objective and the greedy series machinery that finds
//! its inclusion-minimal maximizers.
//!
//! For a monotone linkage `π`, the induced objective is
//! `M(T) = min_{i ∉ T} π(i, T)` on nonempty proper subsets `T`. It is
//! quasi-concave, and every inclusion-minimal maximizer appears as the
//! shortest best prefix of the greedy series started from any of its members.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::linkage::{Linkage, SetFunction};
use crate::subset::Subset;

/// Default absolute tolerance for treating two objective values as equal.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

fn check_size<L: Linkage + ?Sized>(linkage: &L, ground: &GroundSet) -> Result<()> {
    if linkage.size() != ground.len() {
        return Err(Error::DimensionMismatch(format!(
            "linkage over {} elements, ground set has {}",
            linkage.size(),
            ground.len()
        )));
    }
    Ok(())
}

/// `M(T) = min_{i ∉ T} π(i, T)`, defined for `1 ≤ |T| ≤ N − 1`.
pub fn evaluate_objective<L: Linkage + ?Sized>(
    linkage: &L,
    set: &Subset,
    ground: &GroundSet,
) -> Result<f64> {
    check_size(linkage, ground)?;
    if set.universe() != ground.len() {
        return Err(Error::UniverseMismatch {
            subset: set.universe(),
            ground: ground.len(),
        });
    }
    if !set.is_proper_nonempty() {
        return Err(Error::OutsideDomain {
            size: set.len(),
            max: ground.len() - 1,
        });
    }
    let mut best = f64::INFINITY;
    for i in set.complement() {
        let v = linkage.evaluate(i, set)?;
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// The induced objective as a standalone set function.
#[derive(Debug, Clone, Copy)]
pub struct InducedObjective<'a, L: ?Sized> {
    pub linkage: &'a L,
    pub ground: &'a GroundSet,
}

impl<'a, L: Linkage + ?Sized> InducedObjective<'a, L> {
    pub fn new(linkage: &'a L, ground: &'a GroundSet) -> Self {
        InducedObjective { linkage, ground }
    }
}

impl<L: Linkage + ?Sized> SetFunction for InducedObjective<'_, L> {
    fn value(&self, set: &Subset) -> Result<f64> {
        evaluate_objective(self.linkage, set, self.ground)
    }
}

/// A greedy ordering of the whole ground set.
///
/// `order[0]` is the start; `order[k]` minimizes `π(·, order[..k])` over the
/// elements not yet placed, and `steps[k - 1]` records that minimum, which
/// is also `M(order[..k])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiSeries {
    pub start: usize,
    pub order: Vec<usize>,
    pub steps: Vec<f64>,
}

impl PiSeries {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The first `k` elements as a subset.
    pub fn prefix(&self, k: usize) -> Subset {
        let mut s = Subset::empty(self.order.len());
        for &e in &self.order[..k] {
            s.insert(e);
        }
        s
    }
}

/// Builds the greedy series from `start`. Ties go to the lowest index.
pub fn build_pi_series<L: Linkage + ?Sized>(
    linkage: &L,
    start: usize,
    ground: &GroundSet,
) -> Result<PiSeries> {
    check_size(linkage, ground)?;
    ground.check_index(start)?;
    let n = ground.len();
    let mut scorer = linkage.prefix_scorer();
    scorer.push(start)?;
    let mut order = Vec::with_capacity(n);
    let mut steps = Vec::with_capacity(n - 1);
    order.push(start);
    for k in 1..n {
        let scores = scorer.scores();
        let mut best = usize::MAX;
        let mut best_value = f64::INFINITY;
        for (i, &v) in scores.iter().enumerate() {
            if v < best_value {
                best = i;
                best_value = v;
            } else if v.is_nan() {
                return Err(Error::NonFiniteLinkage { element: i, value: v });
            }
        }
        if !best_value.is_finite() {
            // Every outside element scored +∞ (or the winner is −∞).
            let element = if best == usize::MAX {
                scorer.prefix().complement().next().unwrap_or(0)
            } else {
                best
            };
            return Err(Error::NonFiniteLinkage {
                element,
                value: best_value,
            });
        }
        order.push(best);
        steps.push(best_value);
        if k + 1 < n {
            scorer.push(best)?;
        }
    }
    Ok(PiSeries { start, order, steps })
}

/// Re-evaluates every greedy step of `series` from scratch. Returns the
/// first step `k` (1-based prefix length) whose recorded choice or value
/// disagrees with fresh evaluation beyond `tolerance`.
pub fn verify_series<L: Linkage + ?Sized>(
    linkage: &L,
    series: &PiSeries,
    ground: &GroundSet,
    tolerance: f64,
) -> Result<Option<usize>> {
    let n = ground.len();
    let mut is_perm = vec![false; n];
    for &e in &series.order {
        if e >= n || is_perm[e] {
            return Ok(Some(0));
        }
        is_perm[e] = true;
    }
    if series.order.len() != n || series.steps.len() + 1 != n {
        return Ok(Some(0));
    }
    for k in 1..n {
        let prefix = series.prefix(k);
        let fresh_min = evaluate_objective(linkage, &prefix, ground)?;
        let chosen = linkage.evaluate(series.order[k], &prefix)?;
        let recorded = series.steps[k - 1];
        let scale = 1.0 + fresh_min.abs();
        if (chosen - fresh_min).abs() > tolerance * scale || (recorded - fresh_min).abs() > tolerance * scale {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// The shortest best prefix of a greedy series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiCluster {
    pub start: usize,
    pub prefix_len: usize,
    pub members: Subset,
    pub value: f64,
}

/// Picks the smallest prefix length whose step value is maximal. Values are
/// compared exactly.
pub fn extract_pi_cluster(series: &PiSeries) -> PiCluster {
    assert!(
        !series.steps.is_empty(),
        "a series over fewer than 2 elements has no prefixes"
    );
    let mut best_k = 1;
    let mut best_value = series.steps[0];
    for (idx, &v) in series.steps.iter().enumerate().skip(1) {
        if v > best_value {
            best_k = idx + 1;
            best_value = v;
        }
    }
    PiCluster {
        start: series.start,
        prefix_len: best_k,
        members: series.prefix(best_k),
        value: best_value,
    }
}

/// A returned minimal maximizer and its objective value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Maximizer {
    pub members: Subset,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    pub optimum: f64,
    pub minimal_maximizers: Vec<Maximizer>,
    /// One cluster per start, in start order. Empty unless diagnostics were requested.
    pub clusters: Vec<PiCluster>,
    pub tolerance: f64,
}

impl SelectionResult {
    pub fn maximizer_sets(&self) -> Vec<Subset> {
        self.minimal_maximizers.iter().map(|m| m.members.clone()).collect()
    }
}

/// Final reduction over the per-start clusters.
///
/// Coinciding clusters are merged, those within `tolerance` of the best value
/// are kept, and any kept cluster that strictly contains another kept one is
/// dropped. Survivors are sorted by cardinality, then members.
pub fn select_minimal_maximizers(clusters: Vec<PiCluster>, tolerance: f64) -> Result<SelectionResult> {
    if clusters.is_empty() {
        return Err(Error::Empty("no clusters to select from"));
    }
    let mut distinct: Vec<&PiCluster> = Vec::new();
    for c in &clusters {
        if !distinct.iter().any(|d| d.members == c.members) {
            distinct.push(c);
        }
    }
    let optimum = distinct
        .iter()
        .map(|c| c.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let kept: Vec<&PiCluster> = distinct
        .into_iter()
        .filter(|c| c.value >= optimum - tolerance)
        .collect();
    // With exact arithmetic nothing is removed here; near-ties can admit a
    // cluster together with one of its supersets.
    let mut minimal: Vec<Maximizer> = kept
        .iter()
        .filter(|c| !kept.iter().any(|o| o.members.is_strict_subset(&c.members)))
        .map(|c| Maximizer {
            members: c.members.clone(),
            value: c.value,
        })
        .collect();
    minimal.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(SelectionResult {
        optimum,
        minimal_maximizers: minimal,
        clusters,
        tolerance,
    })
}
