use serde::{Deserialize, Serialize};

/// Invocation parameters echoed into every output.
///
/// `workers` is omitted from select and verify outputs so that they are
/// byte-identical across worker counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input: Option<String>,
    pub linkage: String,
    pub distance: String,
    pub normalize: bool,
    pub tolerance: f64,
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default)]
    pub diagnostics: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximizerEntry {
    pub labels: Vec<String>,
    pub indices: Vec<usize>,
    pub value: f64,
}

/// The shortest best prefix of the series grown from `start`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterEntry {
    pub start: String,
    pub start_index: usize,
    pub prefix_len: usize,
    pub labels: Vec<String>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectDocument {
    pub manifest: RunManifest,
    pub ground_size: usize,
    pub optimum: f64,
    pub minimal_maximizers: Vec<MaximizerEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clusters: Option<Vec<ClusterEntry>>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Answer {
    pub optimum: f64,
    pub minimal_maximizers: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub manifest: RunManifest,
    pub ground_size: usize,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
    pub engine: Answer,
    pub oracle: Answer,
    pub oracle_maximizers: usize,
    pub warnings: Vec<String>,
}
