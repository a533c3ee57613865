//! The JSON run configuration: one document with a section per subcommand.
//! Command-line flags override config values, which override the built-in
//! defaults.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::Deserialize;

use pivotlab_core::synth::ScenarioSpec;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub workers: Option<usize>,
    pub pivot_malware: PivotMalwareSection,
    pub pivot_hosts: PivotHostsSection,
    pub bucketize: BucketizeSection,
    pub scan_score: ScanScoreSection,
    pub path_score: PathScoreSection,
    pub bindshell: BindshellSection,
    pub ngram_extract: NgramExtractSection,
    pub ngram_derive: NgramDeriveSection,
    pub eval: EvalSection,
    pub synth: SynthSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PivotMalwareSection {
    pub comms: Option<PathBuf>,
    pub labels_out: Option<PathBuf>,
    pub report_out: Option<PathBuf>,
    pub benign_allowlist: BTreeSet<String>,
    pub max_files_per_domain: Option<usize>,
    pub negative_ratio: Option<f64>,
    pub rng_seed: Option<u64>,
    pub multiclass: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PivotHostsSection {
    pub comms: Option<PathBuf>,
    pub resolve: Option<PathBuf>,
    pub signatures: Option<PathBuf>,
    pub labels_out: Option<PathBuf>,
    pub report_out: Option<PathBuf>,
    pub mode: Option<String>,
    pub benign_allowlist: BTreeSet<String>,
    pub max_files_per_domain: Option<usize>,
    pub negative_ratio: Option<f64>,
    pub rng_seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BucketizeSection {
    pub traffic: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanScoreSection {
    pub traffic: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub window_seconds: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathScoreSection {
    pub traffic: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub paths: Vec<String>,
    pub paths_file: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BindshellSection {
    pub traffic: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub window_seconds: Option<i64>,
    pub lookback_seconds: Option<i64>,
    pub noise_filter: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NgramExtractSection {
    pub files: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub n: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NgramDeriveSection {
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub k: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub predictions: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub report_out: Option<PathBuf>,
    pub threshold: Option<f64>,
    pub base_rate: Option<f64>,
    pub labels_complete: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub out_dir: Option<PathBuf>,
    pub scenario: Option<String>,
    pub rng_seed: Option<u64>,
    pub spec: Option<ScenarioSpec>,
}
