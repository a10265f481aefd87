use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use linkmax::dcov::{
    dcov_linkage_with, normalize_columns, pairwise_dcov_matrix_with, DataMatrix, DcovOptions, DistanceMode,
};
use linkmax::oracle::{
    brute_force_capped, check_disjoint_minimal, check_intersection_closure, check_quasi_concavity,
    check_union_decomposition, DEFAULT_ORACLE_CAP, MAX_ORACLE_CAP,
};
use linkmax::{
    benchmark, check_monotone_linkage, run, GroundSet, InducedObjective, PairwiseSumLinkage, Phase, RunConfig,
    SquareMatrix, Subset,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{BenchArgs, DcovArgs, InputArgs, LinkageKind, SelectArgs, VerifyArgs};
use crate::error::CliError;
use crate::input::{read_data, read_weights};
use crate::report::{Answer, CheckEntry, ClusterEntry, MaximizerEntry, RunManifest, SelectDocument, VerifyDocument};

/// Environment variable overriding the largest ground set `verify` accepts.
pub const ORACLE_CAP_ENV: &str = "LINKMAX_ORACLE_CAP";

/// Speedup at 4 workers below which `bench` prints a warning.
pub const SPEEDUP_TARGET: f64 = 3.0;

fn manifest(command: &str, args: &InputArgs) -> RunManifest {
    RunManifest {
        tool: "linkmax".to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        command: command.to_owned(),
        input: args.input.as_ref().map(|p| p.display().to_string()),
        linkage: args.linkage.name().to_owned(),
        distance: DistanceMode::from(args.distance).name().to_owned(),
        normalize: args.normalize(),
        tolerance: args.tol,
        output: args.output.as_ref().map(|p| p.display().to_string()),
        workers: None,
        seed: None,
        trials: None,
        diagnostics: false,
    }
}

fn required_input(args: &InputArgs) -> Result<&Path, CliError> {
    args.input
        .as_deref()
        .ok_or_else(|| CliError::input("--input is required"))
}

fn write_bytes(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::input(format!("{}: cannot write: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::internal(format!("cannot write to stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes =
        serde_json::to_vec_pretty(value).map_err(|e| CliError::internal(format!("serialization failed: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes the manifest next to `output`, or to stderr when output goes to stdout.
fn write_manifest(output: Option<&Path>, manifest: &RunManifest) -> Result<(), CliError> {
    let bytes = to_json(manifest)?;
    match output {
        Some(p) => write_bytes(Some(&sidecar_path(p)), &bytes),
        None => {
            eprint!("{}", String::from_utf8_lossy(&bytes));
            Ok(())
        }
    }
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

/// Rejects data whose every column is constant.
fn check_not_constant_only(path: &Path, data: &DataMatrix) -> Result<(), CliError> {
    if (0..data.n_features()).all(|j| data.is_constant(j)) {
        return Err(CliError::domain(format!(
            "{}: constant-only data, every column is constant",
            path.display()
        )));
    }
    Ok(())
}

fn load_data(args: &InputArgs) -> Result<(DataMatrix, &Path), CliError> {
    let path = required_input(args)?;
    let data = read_data(path)?;
    if data.n_samples() < 3 {
        return Err(CliError::domain(format!(
            "{}: need at least 3 sample rows, found {}",
            path.display(),
            data.n_samples()
        )));
    }
    check_not_constant_only(path, &data)?;
    let data = if args.normalize() {
        normalize_columns(&data).data
    } else {
        data
    };
    Ok((data, path))
}

struct Problem {
    ground: GroundSet,
    linkage: PairwiseSumLinkage,
    warnings: Vec<String>,
}

fn weight_labels(args: &InputArgs, path: &Path, n: usize) -> Result<Vec<String>, CliError> {
    match &args.labels {
        Some(labels) if labels.len() != n => Err(CliError::input(format!(
            "{}: {} labels given for a {n}x{n} weight matrix",
            path.display(),
            labels.len()
        ))),
        Some(labels) => Ok(labels.clone()),
        None => Ok((0..n).map(|i| format!("X{i}")).collect()),
    }
}

fn ground_set(path: &Path, labels: Vec<String>) -> Result<GroundSet, CliError> {
    GroundSet::new(labels).map_err(|e| CliError::from_library(&path.display().to_string(), e))
}

fn load_problem(args: &InputArgs, workers: usize) -> Result<Problem, CliError> {
    match args.linkage {
        LinkageKind::Dcov => {
            let (data, path) = load_data(args)?;
            if data.n_features() < 2 {
                return Err(CliError::domain(format!(
                    "{}: need at least 2 feature columns, found {}",
                    path.display(),
                    data.n_features()
                )));
            }
            let ground = ground_set(path, data.labels().to_vec())?;
            let options = DcovOptions {
                workers,
                ..DcovOptions::with_mode(args.distance.into())
            };
            let built = dcov_linkage_with(&data, &options)
                .map_err(|e| CliError::from_library(&path.display().to_string(), e))?;
            Ok(Problem {
                ground,
                linkage: built.linkage,
                warnings: built.warnings,
            })
        }
        LinkageKind::Weights => {
            let path = required_input(args)?;
            let weights = read_weights(path)?;
            let labels = weight_labels(args, path, weights.size())?;
            let ground = ground_set(path, labels)?;
            let linkage = PairwiseSumLinkage::new(weights)
                .map_err(|e| CliError::from_library(&path.display().to_string(), e))?;
            Ok(Problem {
                ground,
                linkage,
                warnings: Vec::new(),
            })
        }
    }
}

fn labelled(ground: &GroundSet, members: &Subset) -> (Vec<String>, Vec<usize>) {
    (ground.member_labels(members), members.to_vec())
}

pub fn select(args: &SelectArgs) -> Result<i32, CliError> {
    let problem = load_problem(&args.input, args.workers)?;
    let config = RunConfig {
        workers: args.workers,
        tolerance: args.input.tol,
        collect_diagnostics: args.diagnostics,
        seed: 0,
    };
    let result = run(&problem.linkage, &problem.ground, &config).map_err(|e| CliError::from_library("select", e))?;
    let g = &problem.ground;
    let minimal_maximizers = result
        .minimal_maximizers
        .iter()
        .map(|m| {
            let (labels, indices) = labelled(g, &m.members);
            MaximizerEntry {
                labels,
                indices,
                value: m.value,
            }
        })
        .collect();
    let clusters = args.diagnostics.then(|| {
        result
            .clusters
            .iter()
            .map(|c| ClusterEntry {
                start: g.label(c.start).to_owned(),
                start_index: c.start,
                prefix_len: c.prefix_len,
                labels: g.member_labels(&c.members),
                value: c.value,
            })
            .collect()
    });
    let mut manifest = manifest("select", &args.input);
    manifest.diagnostics = args.diagnostics;
    let doc = SelectDocument {
        manifest,
        ground_size: g.len(),
        optimum: result.optimum,
        minimal_maximizers,
        clusters,
        warnings: problem.warnings,
    };
    warn_all(&doc.warnings);
    write_bytes(args.input.output.as_deref(), &to_json(&doc)?)?;
    Ok(0)
}

fn matrix_csv(labels: &[String], m: &SquareMatrix) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::internal(format!("csv encoding failed: {e}"));
    w.write_record(labels).map_err(fail)?;
    for row in m.rows() {
        w.write_record(row.iter().map(|v| v.to_string())).map_err(fail)?;
    }
    w.into_inner()
        .map_err(|e| CliError::internal(format!("csv encoding failed: {e}")))
}

pub fn dcov(args: &DcovArgs) -> Result<i32, CliError> {
    if args.input.linkage != LinkageKind::Dcov {
        return Err(CliError::input("dcov requires --linkage dcov"));
    }
    let (data, path) = load_data(&args.input)?;
    let options = DcovOptions {
        workers: args.workers,
        ..DcovOptions::with_mode(args.input.distance.into())
    };
    let matrix = pairwise_dcov_matrix_with(&data, &options)
        .map_err(|e| CliError::from_library(&path.display().to_string(), e))?;
    let warnings: Vec<String> = (0..data.n_features())
        .filter(|&j| data.is_constant(j))
        .map(|j| format!("column '{}' is constant; its distance covariances are zero", data.labels()[j]))
        .collect();
    warn_all(&warnings);

    let output = args.input.output.as_deref();
    write_bytes(output, &matrix_csv(&matrix.labels, &matrix.values)?)?;
    if let Some(p) = &args.dcor_output {
        write_bytes(Some(p), &matrix_csv(&matrix.labels, &matrix.correlations())?)?;
    }
    let mut manifest = manifest("dcov", &args.input);
    manifest.workers = Some(vec![args.workers]);
    write_manifest(output, &manifest)?;
    Ok(0)
}

fn oracle_cap() -> Result<usize, CliError> {
    match std::env::var(ORACLE_CAP_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("{ORACLE_CAP_ENV}='{raw}' is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}

fn answer(ground: &GroundSet, optimum: f64, sets: &[Subset]) -> Answer {
    Answer {
        optimum,
        minimal_maximizers: sets.iter().map(|s| ground.member_labels(s)).collect(),
    }
}

fn check(name: &str, passed: bool, checked: usize, detail: String) -> CheckEntry {
    CheckEntry {
        name: name.to_owned(),
        passed,
        checked,
        detail,
    }
}

fn describe<T: std::fmt::Debug>(witnesses: &[T]) -> String {
    match witnesses.first() {
        None => "no counterexamples".to_owned(),
        Some(w) => format!("{} counterexample(s), first: {w:?}", witnesses.len()),
    }
}

pub fn verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let cap = oracle_cap()?.min(MAX_ORACLE_CAP);
    let problem = load_problem(&args.input, args.workers)?;
    let (g, linkage) = (&problem.ground, &problem.linkage);
    if g.len() > cap {
        return Err(CliError::domain(format!(
            "ground set of {} elements exceeds the oracle cap of {cap} (set {ORACLE_CAP_ENV} to raise it, at most {MAX_ORACLE_CAP})",
            g.len()
        )));
    }
    let tol = args.input.tol;
    let lib = |e| CliError::from_library("verify", e);
    let engine = run(linkage, g, &RunConfig {
        workers: args.workers,
        tolerance: tol,
        collect_diagnostics: false,
        seed: args.seed,
    })
    .map_err(lib)?;
    let oracle = brute_force_capped(linkage, g, tol, cap).map_err(lib)?;
    let objective = InducedObjective::new(linkage, g);
    let engine_sets = engine.maximizer_sets();

    let gap = (engine.optimum - oracle.optimum).abs();
    let agree = engine_sets == oracle.minimal_maximizers && gap <= tol;
    let disjoint = check_disjoint_minimal(&engine_sets);
    let union = check_union_decomposition(&oracle);
    let closure = check_intersection_closure(&objective, &oracle).map_err(lib)?;
    let quasi = check_quasi_concavity(&objective, g, args.trials, args.seed, tol).map_err(lib)?;
    let monotone = check_monotone_linkage(linkage, g, args.trials, args.seed, tol).map_err(lib)?;

    let checks = vec![
        check(
            "agreement",
            agree,
            engine_sets.len().max(oracle.minimal_maximizers.len()),
            format!("optimum gap {gap:e}"),
        ),
        check("disjoint_minimal", disjoint.passed, disjoint.checked, describe(&disjoint.counterexamples)),
        check("union_decomposition", union.passed, union.checked, describe(&union.counterexamples)),
        check("intersection_closure", closure.passed, closure.checked, describe(&closure.counterexamples)),
        check("quasi_concavity", quasi.passed(), quasi.trials, describe(&quasi.violations)),
        check("monotone_linkage", monotone.passed(), monotone.trials, describe(&monotone.violations)),
    ];
    let passed = checks.iter().all(|c| c.passed);
    let mut manifest = manifest("verify", &args.input);
    manifest.seed = Some(args.seed);
    manifest.trials = Some(args.trials);
    let doc = VerifyDocument {
        manifest,
        ground_size: g.len(),
        passed,
        checks,
        engine: answer(g, engine.optimum, &engine_sets),
        oracle: answer(g, oracle.optimum, &oracle.minimal_maximizers),
        oracle_maximizers: oracle.all_maximizers.len(),
        warnings: problem.warnings,
    };
    warn_all(&doc.warnings);
    write_bytes(args.input.output.as_deref(), &to_json(&doc)?)?;
    if passed {
        Ok(0)
    } else {
        for c in doc.checks.iter().filter(|c| !c.passed) {
            eprintln!("check failed: {} ({})", c.name, c.detail);
        }
        Ok(crate::error::ExitKind::Disagreement as i32)
    }
}

/// Uniform `[0, 1)` symmetric weights with a zero diagonal.
pub fn synthetic_weights(n: usize, seed: u64) -> SquareMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = rng.random();
            w.set(i, j, v);
            w.set(j, i, v);
        }
    }
    w
}

pub fn bench(args: &BenchArgs) -> Result<i32, CliError> {
    let lib = |e| CliError::from_library("bench", e);
    let report = match (&args.input.input, args.input.linkage) {
        (None, _) => {
            if args.synthetic < 2 {
                return Err(CliError::domain(format!(
                    "--synthetic needs at least 2 elements, got {}",
                    args.synthetic
                )));
            }
            let w = synthetic_weights(args.synthetic, args.seed);
            let ground = GroundSet::indexed(args.synthetic).map_err(lib)?;
            benchmark(|_| PairwiseSumLinkage::new(w.clone()), &ground, &args.workers).map_err(lib)?
        }
        (Some(_), LinkageKind::Weights) => {
            let problem = load_problem(&args.input, 0)?;
            let w = problem.linkage.weights().clone();
            benchmark(|_| PairwiseSumLinkage::new(w.clone()), &problem.ground, &args.workers).map_err(lib)?
        }
        (Some(_), LinkageKind::Dcov) => {
            let (data, path) = load_data(&args.input)?;
            let ground = ground_set(path, data.labels().to_vec())?;
            let mode = args.input.distance.into();
            benchmark(
                |workers| {
                    let options = DcovOptions {
                        workers,
                        ..DcovOptions::with_mode(mode)
                    };
                    dcov_linkage_with(&data, &options).map(|b| b.linkage)
                },
                &ground,
                &args.workers,
            )
            .map_err(lib)?
        }
    };

    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::internal(format!("csv encoding failed: {e}"));
    w.write_record(["phase", "workers", "milliseconds", "speedup"]).map_err(fail)?;
    for row in &report.rows {
        w.write_record([
            row.phase.name().to_owned(),
            row.workers.to_string(),
            format!("{:.3}", row.milliseconds),
            format!("{:.3}", row.speedup),
        ])
        .map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::internal(format!("csv encoding failed: {e}")))?;
    let output = args.input.output.as_deref();
    write_bytes(output, &bytes)?;
    let mut manifest = manifest("bench", &args.input);
    manifest.workers = Some(args.workers.clone());
    manifest.seed = Some(args.seed);
    if let Some(p) = output {
        write_manifest(Some(p), &manifest)?;
    }

    if let Some(s) = report.speedup(Phase::Series, 4) {
        if report.baseline_workers == 1 && s < SPEEDUP_TARGET {
            eprintln!(
                "warning: series speedup at 4 workers is {s:.2}x, below the {SPEEDUP_TARGET:.1}x target ({} cores available)",
                report.available_cores
            );
        }
    }
    if !report.consistent {
        return Err(CliError::internal("selection differed across worker counts"));
    }
    Ok(0)
}
