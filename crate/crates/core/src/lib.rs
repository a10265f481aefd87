//! Exact maxi-min subset selection for quasi-concave set functions induced
//! by monotone linkage functions.
//!
//! Given a linkage `π(i, S)`, the objective `M(T) = min_{i ∉ T} π(i, T)` is
//! maximized over all nonempty proper subsets `T` of the ground set. Running
//! one greedy series from every element and keeping the best shortest
//! prefixes recovers *every* inclusion-minimal global maximizer; the series
//! are independent and are built in parallel.
//!
//! * [`linkage`]: the [`Linkage`] contract, pairwise-sum and submodular
//!   marginal-gain linkages, and a statistical monotonicity checker.
//! * [`objective`]: the objective, greedy series, clusters and the final
//!   selection.
//! * [`engine`]: the parallel driver and a phase timer.
//! * [`dcov`]: sample distance covariance and the feature-diversity linkage.
//! * [`oracle`]: exhaustive search and structural checks for small inputs.
//!
//! ```
//! use linkmax::{run, GroundSet, PairwiseSumLinkage, RunConfig};
//!
//! let w = [[0.0, 1.0, 3.0], [1.0, 0.0, 5.0], [3.0, 5.0, 0.0]];
//! let linkage = PairwiseSumLinkage::from_rows(&w).unwrap();
//! let ground = GroundSet::new(["A", "B", "C"]).unwrap();
//! let result = run(&linkage, &ground, &RunConfig::default()).unwrap();
//! assert_eq!(result.optimum, -3.0);
//! assert_eq!(ground.member_labels(&result.minimal_maximizers[0].members), ["A"]);
//! ```

pub mod dcov;
pub mod engine;
mod error;
mod ground;
pub mod linkage;
mod matrix;
pub mod objective;
pub mod oracle;
mod parallel;
mod subset;

pub use engine::{benchmark, build_clusters, run, BenchReport, BenchRow, Phase, RunConfig};
pub use error::{Error, Result};
pub use ground::GroundSet;
pub use linkage::{
    check_monotone_linkage, Linkage, PairwiseSumLinkage, PrefixScorer, SetFunction,
    SubmodularMarginalLinkage, WeightedCoverage,
};
pub use matrix::SquareMatrix;
pub use objective::{
    build_pi_series, evaluate_objective, extract_pi_cluster, select_minimal_maximizers,
    InducedObjective, Maximizer, PiCluster, PiSeries, SelectionResult, DEFAULT_TOLERANCE,
};
pub use parallel::resolve_workers;
pub use subset::Subset;
