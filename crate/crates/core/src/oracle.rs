//! Exhaustive ground truth for small ground sets, plus checkers for the
//! structural properties that maximizers of a quasi-concave function obey.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::linkage::{Linkage, SetFunction};
use crate::objective::evaluate_objective;
use crate::subset::Subset;

/// Default largest ground set the exhaustive search accepts (`2^N − 2` evaluations).
pub const DEFAULT_ORACLE_CAP: usize = 16;

/// Hard ceiling regardless of the configured cap: subsets are bitmasks.
pub const MAX_ORACLE_CAP: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub optimum: f64,
    /// Sorted by cardinality, then members.
    pub all_maximizers: Vec<Subset>,
    pub minimal_maximizers: Vec<Subset>,
    pub tolerance: f64,
}

pub fn brute_force<L: Linkage + ?Sized>(
    linkage: &L,
    ground: &GroundSet,
    tolerance: f64,
) -> Result<OracleResult> {
    brute_force_capped(linkage, ground, tolerance, DEFAULT_ORACLE_CAP)
}

/// Evaluates the objective on every nonempty proper subset, in plain mask order.
pub fn brute_force_capped<L: Linkage + ?Sized>(
    linkage: &L,
    ground: &GroundSet,
    tolerance: f64,
    cap: usize,
) -> Result<OracleResult> {
    let n = ground.len();
    let cap = cap.min(MAX_ORACLE_CAP);
    if n > cap {
        return Err(Error::OracleCapExceeded { size: n, cap });
    }
    let full = (1u64 << n) - 1;
    let mut values = Vec::with_capacity(full as usize - 1);
    for mask in 1..full {
        let v = evaluate_objective(linkage, &Subset::from_mask(n, mask), ground)?;
        values.push((mask, v));
    }
    let optimum = values
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut all_maximizers: Vec<Subset> = values
        .iter()
        .filter(|&&(_, v)| v >= optimum - tolerance)
        .map(|&(mask, _)| Subset::from_mask(n, mask))
        .collect();
    all_maximizers.sort();
    let minimal_maximizers = inclusion_minimal(&all_maximizers);
    Ok(OracleResult {
        optimum,
        all_maximizers,
        minimal_maximizers,
        tolerance,
    })
}

/// Inclusion-minimal members of `sorted`, which must be ordered by cardinality.
fn inclusion_minimal(sorted: &[Subset]) -> Vec<Subset> {
    let mut minimal: Vec<Subset> = Vec::new();
    for s in sorted {
        // Any strictly smaller member inside `s` implies a minimal one inside `s`.
        if !minimal.iter().any(|m| m.is_subset(s)) {
            minimal.push(s.clone());
        }
    }
    minimal
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub checked: usize,
    pub counterexamples: Vec<Vec<Subset>>,
}

impl CheckReport {
    fn from_witnesses(checked: usize, counterexamples: Vec<Vec<Subset>>) -> Self {
        CheckReport {
            passed: counterexamples.is_empty(),
            checked,
            counterexamples,
        }
    }
}

/// Minimal maximizers must not overlap. Witnesses are the overlapping pairs.
pub fn check_disjoint_minimal(minimal: &[Subset]) -> CheckReport {
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for (i, a) in minimal.iter().enumerate() {
        for b in &minimal[i + 1..] {
            checked += 1;
            if !a.is_disjoint(b) {
                witnesses.push(vec![a.clone(), b.clone()]);
            }
        }
    }
    CheckReport::from_witnesses(checked, witnesses)
}

/// Every maximizer must equal the union of the minimal maximizers it contains.
pub fn check_union_decomposition(result: &OracleResult) -> CheckReport {
    let mut witnesses = Vec::new();
    for m in &result.all_maximizers {
        let mut union = Subset::empty(m.universe());
        for minimal in result.minimal_maximizers.iter().filter(|x| x.is_subset(m)) {
            union = union.union(minimal);
        }
        if union != *m {
            witnesses.push(vec![m.clone()]);
        }
    }
    CheckReport::from_witnesses(result.all_maximizers.len(), witnesses)
}

/// For every overlapping pair of maximizers, the intersection must also be a
/// maximizer (valued by `f` within the result's tolerance).
pub fn check_intersection_closure<F: SetFunction + ?Sized>(
    f: &F,
    result: &OracleResult,
) -> Result<CheckReport> {
    let known: HashSet<&Subset> = result.all_maximizers.iter().collect();
    let threshold = result.optimum - result.tolerance;
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for (i, a) in result.all_maximizers.iter().enumerate() {
        for b in &result.all_maximizers[i + 1..] {
            let inter = a.intersection(b);
            if inter.is_empty() {
                continue;
            }
            checked += 1;
            if known.contains(&inter) || f.value(&inter)? >= threshold {
                continue;
            }
            witnesses.push(vec![a.clone(), b.clone(), inter]);
        }
    }
    Ok(CheckReport::from_witnesses(checked, witnesses))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiConcavityViolation {
    pub s: Subset,
    pub t: Subset,
    pub s_value: f64,
    pub t_value: f64,
    pub intersection_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiConcavityReport {
    pub trials: usize,
    pub tolerance: f64,
    pub violations: Vec<QuasiConcavityViolation>,
}

impl QuasiConcavityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn random_proper_subset(rng: &mut ChaCha8Rng, n: usize) -> Subset {
    loop {
        let p: f64 = rng.random_range(0.15..0.85);
        let mut s = Subset::empty(n);
        for i in 0..n {
            if rng.random_bool(p) {
                s.insert(i);
            }
        }
        if s.is_proper_nonempty() {
            return s;
        }
    }
}

/// Samples pairs `S, T` of nonempty proper subsets with a nonempty
/// intersection and reports every case of `F(S ∩ T) < min(F(S), F(T)) − tolerance`.
pub fn check_quasi_concavity<F: SetFunction + ?Sized>(
    f: &F,
    ground: &GroundSet,
    trials: usize,
    seed: u64,
    tolerance: f64,
) -> Result<QuasiConcavityReport> {
    let n = ground.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..trials {
        let (s, t, inter) = loop {
            let s = random_proper_subset(&mut rng, n);
            let t = random_proper_subset(&mut rng, n);
            let inter = s.intersection(&t);
            if !inter.is_empty() {
                break (s, t, inter);
            }
        };
        let s_value = f.value(&s)?;
        let t_value = f.value(&t)?;
        let intersection_value = f.value(&inter)?;
        if intersection_value < s_value.min(t_value) - tolerance {
            violations.push(QuasiConcavityViolation {
                s,
                t,
                s_value,
                t_value,
                intersection_value,
            });
        }
    }
    Ok(QuasiConcavityReport {
        trials,
        tolerance,
        violations,
    })
}
