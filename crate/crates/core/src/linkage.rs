//! Monotone linkage functions.
//!
//! A linkage `π(i, S)` scores an element `i` against a set `S` that does not
//! contain it. It is *monotone* when growing the set never increases the
//! score: `S ⊆ T, i ∉ T  ⟹  π(i, S) ≥ π(i, T)`. Larger values mean `i` is
//! more novel relative to `S`; constructors that start from a dependence
//! measure negate it themselves.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::matrix::SquareMatrix;
use crate::subset::Subset;

/// An element-to-set linkage function over a ground set of `size()` elements.
///
/// Point evaluation must be safe to call from many threads at once. Greedy
/// series construction goes through [`Linkage::prefix_scorer`], which hands
/// out a private, mutable incremental scorer.
pub trait Linkage: Sync {
    fn size(&self) -> usize;

    fn evaluate(&self, element: usize, set: &Subset) -> Result<f64>;

    fn prefix_scorer(&self) -> Box<dyn PrefixScorer + '_> {
        Box::new(FreshScorer::new(self))
    }
}

impl<L: Linkage + ?Sized> Linkage for &L {
    fn size(&self) -> usize {
        (**self).size()
    }

    fn evaluate(&self, element: usize, set: &Subset) -> Result<f64> {
        (**self).evaluate(element, set)
    }

    fn prefix_scorer(&self) -> Box<dyn PrefixScorer + '_> {
        (**self).prefix_scorer()
    }
}

/// Incremental scores of every element against a growing prefix.
///
/// After at least one `push`, `scores()[i]` is `π(i, prefix)` for every `i`
/// outside the prefix and `+∞` for members.
pub trait PrefixScorer {
    fn push(&mut self, element: usize) -> Result<()>;
    fn scores(&self) -> &[f64];
    fn prefix(&self) -> &Subset;
}

/// Scorer that re-evaluates every outside element after each push.
pub struct FreshScorer<'a, L: ?Sized> {
    linkage: &'a L,
    prefix: Subset,
    scores: Vec<f64>,
}

impl<'a, L: Linkage + ?Sized> FreshScorer<'a, L> {
    pub fn new(linkage: &'a L) -> Self {
        let n = linkage.size();
        FreshScorer {
            linkage,
            prefix: Subset::empty(n),
            scores: vec![f64::INFINITY; n],
        }
    }
}

impl<L: Linkage + ?Sized> PrefixScorer for FreshScorer<'_, L> {
    fn push(&mut self, element: usize) -> Result<()> {
        let n = self.scores.len();
        if element >= n {
            return Err(Error::ElementOutOfRange { index: element, size: n });
        }
        self.prefix.insert(element);
        for i in 0..n {
            self.scores[i] = if self.prefix.contains(i) {
                f64::INFINITY
            } else {
                self.linkage.evaluate(i, &self.prefix)?
            };
        }
        Ok(())
    }

    fn scores(&self) -> &[f64] {
        &self.scores
    }

    fn prefix(&self) -> &Subset {
        &self.prefix
    }
}

fn check_element(size: usize, element: usize, set: &Subset) -> Result<()> {
    if element >= size {
        return Err(Error::ElementOutOfRange { index: element, size });
    }
    if set.universe() != size {
        return Err(Error::UniverseMismatch {
            subset: set.universe(),
            ground: size,
        });
    }
    if set.contains(element) {
        return Err(Error::ElementInSet { element });
    }
    Ok(())
}

/// `π(i, S) = −Σ_{j∈S} W[i][j]` for a nonnegative weight matrix `W`.
#[derive(Debug, Clone)]
pub struct PairwiseSumLinkage {
    weights: SquareMatrix,
    // W transposed, so that pushing `j` walks a contiguous row.
    by_column: SquareMatrix,
}

impl PairwiseSumLinkage {
    /// Validates that `weights` is finite, nonnegative and zero on the diagonal.
    pub fn new(weights: SquareMatrix) -> Result<Self> {
        let n = weights.size();
        for i in 0..n {
            for j in 0..n {
                let w = weights.get(i, j);
                let reason = if !w.is_finite() {
                    Some("not finite")
                } else if w < 0.0 {
                    Some("negative")
                } else if i == j && w != 0.0 {
                    Some("nonzero diagonal")
                } else {
                    None
                };
                if let Some(reason) = reason {
                    return Err(Error::InvalidWeight {
                        row: i,
                        col: j,
                        value: w,
                        reason,
                    });
                }
            }
        }
        Ok(Self::new_unchecked(weights))
    }

    /// Skips validation. Negative weights break monotonicity, which is
    /// occasionally what a test wants to exercise.
    pub fn new_unchecked(weights: SquareMatrix) -> Self {
        let by_column = weights.transpose();
        PairwiseSumLinkage { weights, by_column }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    pub fn weights(&self) -> &SquareMatrix {
        &self.weights
    }
}

impl Linkage for PairwiseSumLinkage {
    fn size(&self) -> usize {
        self.weights.size()
    }

    fn evaluate(&self, element: usize, set: &Subset) -> Result<f64> {
        check_element(self.size(), element, set)?;
        let row = self.weights.row(element);
        Ok(-set.iter().map(|j| row[j]).sum::<f64>())
    }

    fn prefix_scorer(&self) -> Box<dyn PrefixScorer + '_> {
        let n = self.size();
        Box::new(PairwiseScorer {
            linkage: self,
            prefix: Subset::empty(n),
            scores: vec![0.0; n],
        })
    }
}

struct PairwiseScorer<'a> {
    linkage: &'a PairwiseSumLinkage,
    prefix: Subset,
    scores: Vec<f64>,
}

impl PrefixScorer for PairwiseScorer<'_> {
    fn push(&mut self, element: usize) -> Result<()> {
        let n = self.scores.len();
        if element >= n {
            return Err(Error::ElementOutOfRange { index: element, size: n });
        }
        if !self.prefix.insert(element) {
            return Err(Error::ElementInSet { element });
        }
        // Members sit at +∞, which absorbs the finite subtraction.
        let column = self.linkage.by_column.row(element);
        for (s, w) in self.scores.iter_mut().zip(column) {
            *s -= w;
        }
        self.scores[element] = f64::INFINITY;
        Ok(())
    }

    fn scores(&self) -> &[f64] {
        &self.scores
    }

    fn prefix(&self) -> &Subset {
        &self.prefix
    }
}

/// A real-valued function on subsets of the ground set.
pub trait SetFunction: Sync {
    fn value(&self, set: &Subset) -> Result<f64>;
}

impl<F> SetFunction for F
where
    F: Fn(&Subset) -> Result<f64> + Sync,
{
    fn value(&self, set: &Subset) -> Result<f64> {
        self(set)
    }
}

/// Discrete derivative of a set function: `π(e, X) = f(X ∪ {e}) − f(X)`.
///
/// Monotone exactly when `f` has diminishing returns (is submodular). No
/// incremental structure is assumed, so greedy steps re-evaluate `f`.
#[derive(Debug, Clone)]
pub struct SubmodularMarginalLinkage<F> {
    size: usize,
    f: F,
}

impl<F: SetFunction> SubmodularMarginalLinkage<F> {
    pub fn new(size: usize, f: F) -> Self {
        SubmodularMarginalLinkage { size, f }
    }

    pub fn function(&self) -> &F {
        &self.f
    }
}

impl<F: SetFunction> Linkage for SubmodularMarginalLinkage<F> {
    fn size(&self) -> usize {
        self.size
    }

    fn evaluate(&self, element: usize, set: &Subset) -> Result<f64> {
        check_element(self.size, element, set)?;
        let mut with = set.clone();
        with.insert(element);
        let gain = self.f.value(&with)? - self.f.value(set)?;
        if !gain.is_finite() {
            return Err(Error::NonFiniteLinkage { element, value: gain });
        }
        Ok(gain)
    }
}

/// Weighted coverage: each ground element covers a set of universe items and
/// `f(S)` is the total weight of items covered by `S`. Monotone submodular.
#[derive(Debug, Clone)]
pub struct WeightedCoverage {
    covers: Vec<Vec<usize>>,
    item_weights: Vec<f64>,
}

impl WeightedCoverage {
    pub fn new(covers: Vec<Vec<usize>>, item_weights: Vec<f64>) -> Result<Self> {
        for c in &covers {
            if let Some(&bad) = c.iter().find(|&&item| item >= item_weights.len()) {
                return Err(Error::DimensionMismatch(format!(
                    "coverage item {bad} has no weight (only {} items)",
                    item_weights.len()
                )));
            }
        }
        Ok(WeightedCoverage { covers, item_weights })
    }

    /// Unit item weights.
    pub fn unweighted(covers: Vec<Vec<usize>>) -> Self {
        let items = covers.iter().flatten().map(|&i| i + 1).max().unwrap_or(0);
        WeightedCoverage {
            covers,
            item_weights: vec![1.0; items],
        }
    }

    pub fn size(&self) -> usize {
        self.covers.len()
    }
}

impl SetFunction for WeightedCoverage {
    fn value(&self, set: &Subset) -> Result<f64> {
        let mut covered = vec![false; self.item_weights.len()];
        for e in set.iter() {
            let c = self.covers.get(e).ok_or(Error::ElementOutOfRange {
                index: e,
                size: self.covers.len(),
            })?;
            for &item in c {
                covered[item] = true;
            }
        }
        Ok(covered
            .iter()
            .zip(&self.item_weights)
            .filter(|(c, _)| **c)
            .map(|(_, w)| w)
            .sum())
    }
}

/// One observed breach of `π(i, S) ≥ π(i, T)` for `S ⊆ T`.
#[derive(Debug, Clone, Serialize)]
pub struct MonotoneViolation {
    pub element: usize,
    pub smaller: Subset,
    pub larger: Subset,
    pub smaller_value: f64,
    pub larger_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotoneReport {
    pub trials: usize,
    pub tolerance: f64,
    pub violations: Vec<MonotoneViolation>,
}

impl MonotoneReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples random chains `S ⊆ T ⊂ X` with `i ∉ T` and reports every triple
/// where `π(i, S) < π(i, T) − tolerance`.
///
/// Set sizes are drawn uniformly, then members uniformly given the size.
pub fn check_monotone_linkage<L: Linkage + ?Sized>(
    linkage: &L,
    ground: &GroundSet,
    trials: usize,
    seed: u64,
    tolerance: f64,
) -> Result<MonotoneReport> {
    let n = ground.len();
    if linkage.size() != n {
        return Err(Error::DimensionMismatch(format!(
            "linkage over {} elements, ground set has {n}",
            linkage.size()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut violations = Vec::new();
    for _ in 0..trials {
        order.shuffle(&mut rng);
        let t = rng.random_range(1..n);
        let s = rng.random_range(1..=t);
        let element = order[rng.random_range(t..n)];
        let smaller = Subset::from_indices(n, order[..s].iter().copied())?;
        let larger = Subset::from_indices(n, order[..t].iter().copied())?;
        let smaller_value = linkage.evaluate(element, &smaller)?;
        let larger_value = linkage.evaluate(element, &larger)?;
        if smaller_value < larger_value - tolerance {
            violations.push(MonotoneViolation {
                element,
                smaller,
                larger,
                smaller_value,
                larger_value,
            });
        }
    }
    Ok(MonotoneReport {
        trials,
        tolerance,
        violations,
    })
}
