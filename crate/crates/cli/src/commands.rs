//! Subcommand implementations: resolve flags against the config section,
//! call the library, write outputs atomically, and return the JSON summary.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::json;

use pivotlab_core::bindshell::{
    compute_candidate_features, pair_connections, BindShellCorpus, ConnectionPair, FeatureConfig,
    NoiseFilter, DEFAULT_LOOKBACK_SECONDS, DEFAULT_WINDOW_SECONDS,
};
use pivotlab_core::eval::evaluate;
use pivotlab_core::io;
use pivotlab_core::ngram::{extract_ngrams, marginalize_prefix};
use pivotlab_core::pivot::{
    label_host_pairs, label_malware_pairs, HostPairMode, PivotConfig, DEFAULT_SEED,
};
use pivotlab_core::synth::{gen_operator_corpus, gen_traffic_scenario, GroundTruth};
use pivotlab_core::traffic::{
    bucketize as bucketize_sessions, build_access_graph, fit_port_model, path_log_probability,
    rank_sources, BUCKET_SECONDS,
};

use crate::config;
use crate::output::write_atomic;
use crate::CliError;

fn require(path: Option<PathBuf>, flag: &str) -> Result<PathBuf, CliError> {
    path.ok_or_else(|| CliError::usage(format!("missing required path `{flag}` (flag or config)")))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::runtime(format!("opening {}: {e}", path.display())))
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

// ---------------------------------------------------------------------------
// pivot-malware

#[derive(Args, Debug)]
pub struct PivotMalwareArgs {
    /// Communication data set (TSV: sha256, domain, ip).
    #[arg(long)]
    comms: Option<PathBuf>,
    /// Labeled pair output (TSV).
    #[arg(long)]
    labels_out: Option<PathBuf>,
    /// Sidecar JSON report (default: <labels-out>.report.json).
    #[arg(long)]
    report_out: Option<PathBuf>,
    /// File with one allowlisted domain per line, merged with the config list.
    #[arg(long)]
    allowlist_file: Option<PathBuf>,
    #[arg(long)]
    max_files_per_domain: Option<usize>,
    #[arg(long)]
    negative_ratio: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    multiclass: Option<bool>,
}

fn read_allowlist(path: &Path) -> Result<BTreeSet<String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("reading {}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.to_ascii_lowercase())
        .collect())
}

fn report_path(explicit: Option<PathBuf>, labels_out: &Path) -> PathBuf {
    explicit.unwrap_or_else(|| {
        let mut name = labels_out.as_os_str().to_owned();
        name.push(".report.json");
        PathBuf::from(name)
    })
}

pub fn pivot_malware(
    args: PivotMalwareArgs,
    section: config::PivotMalwareSection,
) -> Result<serde_json::Value, CliError> {
    let comms_path = require(args.comms.or(section.comms), "comms")?;
    let labels_out = require(args.labels_out.or(section.labels_out), "labels-out")?;
    let report_out = report_path(args.report_out.or(section.report_out), &labels_out);

    let mut allowlist = section.benign_allowlist;
    if let Some(path) = &args.allowlist_file {
        allowlist.extend(read_allowlist(path)?);
    }
    let cfg = PivotConfig {
        benign_allowlist: allowlist,
        max_files_per_domain: args
            .max_files_per_domain
            .or(section.max_files_per_domain)
            .unwrap_or(PivotConfig::default().max_files_per_domain),
        negative_ratio: args
            .negative_ratio
            .or(section.negative_ratio)
            .unwrap_or(PivotConfig::default().negative_ratio),
        rng_seed: args.seed.or(section.rng_seed).unwrap_or(DEFAULT_SEED),
        multiclass: args.multiclass.or(section.multiclass).unwrap_or(false),
    };

    let comms = io::read_communications(open(&comms_path)?)?;
    let outcome = label_malware_pairs(&comms, &cfg)?;
    write_atomic(&labels_out, |w| io::write_pair_labels(w, &outcome.labels))?;
    let report = serde_json::to_value(&outcome.summary).map_err(pivotlab_core::Error::from)?;
    write_atomic(&report_out, |w| {
        writeln!(w, "{}", serde_json::to_string_pretty(&report)?).map_err(Into::into)
    })?;

    Ok(json!({
        "subcommand": "pivot-malware",
        "records": comms.len(),
        "labels_out": display(&labels_out),
        "report_out": display(&report_out),
        "summary": report,
    }))
}

// ---------------------------------------------------------------------------
// pivot-hosts

#[derive(Args, Debug)]
pub struct PivotHostsArgs {
    #[arg(long)]
    comms: Option<PathBuf>,
    /// Resolve snapshot (TSV: domain, ip).
    #[arg(long)]
    resolve: Option<PathBuf>,
    /// Host signatures (JSON lines).
    #[arg(long)]
    signatures: Option<PathBuf>,
    #[arg(long)]
    labels_out: Option<PathBuf>,
    #[arg(long)]
    report_out: Option<PathBuf>,
    /// Labeling rule: shared-domain-formula or shared-malware-domains.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    allowlist_file: Option<PathBuf>,
    #[arg(long)]
    max_files_per_domain: Option<usize>,
    #[arg(long)]
    negative_ratio: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_mode(text: &str) -> Result<HostPairMode, CliError> {
    match text {
        "shared-domain-formula" => Ok(HostPairMode::SharedDomainFormula),
        "shared-malware-domains" => Ok(HostPairMode::SharedMalwareDomains),
        other => Err(CliError::usage(format!(
            "unknown host-pair mode `{other}` (expected shared-domain-formula or shared-malware-domains)"
        ))),
    }
}

pub fn pivot_hosts(
    args: PivotHostsArgs,
    section: config::PivotHostsSection,
) -> Result<serde_json::Value, CliError> {
    let comms_path = require(args.comms.or(section.comms), "comms")?;
    let resolve_path = require(args.resolve.or(section.resolve), "resolve")?;
    let signatures_path = require(args.signatures.or(section.signatures), "signatures")?;
    let labels_out = require(args.labels_out.or(section.labels_out), "labels-out")?;
    let report_out = report_path(args.report_out.or(section.report_out), &labels_out);
    let mode = parse_mode(
        &args
            .mode
            .or(section.mode)
            .unwrap_or_else(|| "shared-domain-formula".to_string()),
    )?;

    let mut allowlist = section.benign_allowlist;
    if let Some(path) = &args.allowlist_file {
        allowlist.extend(read_allowlist(path)?);
    }
    let cfg = PivotConfig {
        benign_allowlist: allowlist,
        max_files_per_domain: args
            .max_files_per_domain
            .or(section.max_files_per_domain)
            .unwrap_or(PivotConfig::default().max_files_per_domain),
        negative_ratio: args
            .negative_ratio
            .or(section.negative_ratio)
            .unwrap_or(PivotConfig::default().negative_ratio),
        rng_seed: args.seed.or(section.rng_seed).unwrap_or(DEFAULT_SEED),
        multiclass: false,
    };

    let comms = io::read_communications(open(&comms_path)?)?;
    let resolve = io::read_resolve_map(open(&resolve_path)?)?;
    let signatures: BTreeMap<String, pivotlab_core::HostSignature> =
        io::read_host_signatures(open(&signatures_path)?)?
            .into_iter()
            .map(|s| (s.ip.clone(), s))
            .collect();
    let outcome = label_host_pairs(&comms, &cfg, &resolve, &signatures, mode)?;
    write_atomic(&labels_out, |w| io::write_pair_labels(w, &outcome.labels))?;
    let report = serde_json::to_value(&outcome.summary).map_err(pivotlab_core::Error::from)?;
    write_atomic(&report_out, |w| {
        writeln!(w, "{}", serde_json::to_string_pretty(&report)?).map_err(Into::into)
    })?;

    Ok(json!({
        "subcommand": "pivot-hosts",
        "records": comms.len(),
        "hosts_with_signatures": signatures.len(),
        "labels_out": display(&labels_out),
        "report_out": display(&report_out),
        "summary": report,
    }))
}

// ---------------------------------------------------------------------------
// bucketize

#[derive(Args, Debug)]
pub struct BucketizeArgs {
    #[arg(long)]
    traffic: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn bucketize(
    args: BucketizeArgs,
    section: config::BucketizeSection,
) -> Result<serde_json::Value, CliError> {
    let traffic_path = require(args.traffic.or(section.traffic), "traffic")?;
    let out = require(args.out.or(section.out), "out")?;
    let sessions = io::read_traffic(open(&traffic_path)?)?;
    let aggregated = bucketize_sessions(&sessions);
    write_atomic(&out, |w| io::write_traffic(w, &aggregated))?;
    Ok(json!({
        "subcommand": "bucketize",
        "rows_in": sessions.len(),
        "rows_out": aggregated.len(),
        "out": display(&out),
    }))
}

// ---------------------------------------------------------------------------
// scan-score

#[derive(Args, Debug)]
pub struct ScanScoreArgs {
    #[arg(long)]
    traffic: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Scoring window in seconds; a multiple of 600.
    #[arg(long)]
    window: Option<i64>,
}

pub fn scan_score(
    args: ScanScoreArgs,
    section: config::ScanScoreSection,
) -> Result<serde_json::Value, CliError> {
    let traffic_path = require(args.traffic.or(section.traffic), "traffic")?;
    let out = require(args.out.or(section.out), "out")?;
    let alpha = args.alpha.or(section.alpha).unwrap_or(1.0);
    let window = args
        .window
        .or(section.window_seconds)
        .unwrap_or(BUCKET_SECONDS);
    let sessions = io::read_traffic(open(&traffic_path)?)?;
    let model = fit_port_model(&sessions, alpha)?;
    let ranked = rank_sources(&model, &sessions, window)?;
    write_atomic(&out, |w| {
        for entry in &ranked {
            writeln!(w, "{}\t{}\t{}", entry.src_index, entry.window_start, entry.score)?;
        }
        Ok(())
    })?;
    Ok(json!({
        "subcommand": "scan-score",
        "sessions": sessions.len(),
        "observations": model.observations(),
        "distinct_ports": model.universe(),
        "ranked_groups": ranked.len(),
        "out": display(&out),
    }))
}

// ---------------------------------------------------------------------------
// path-score

#[derive(Args, Debug)]
pub struct PathScoreArgs {
    #[arg(long)]
    traffic: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Path as comma-joined host indices; repeatable.
    #[arg(long = "path")]
    paths: Vec<String>,
    /// File with one comma-joined path per line.
    #[arg(long)]
    paths_file: Option<PathBuf>,
}

fn parse_path(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| CliError::usage(format!("bad host index `{part}` in path `{text}`")))
        })
        .collect()
}

pub fn path_score(
    args: PathScoreArgs,
    section: config::PathScoreSection,
) -> Result<serde_json::Value, CliError> {
    let traffic_path = require(args.traffic.or(section.traffic), "traffic")?;
    let out = require(args.out.or(section.out), "out")?;
    let alpha = args.alpha.or(section.alpha).unwrap_or(1.0);
    let mut path_texts: Vec<String> = section.paths;
    path_texts.extend(args.paths);
    if let Some(file) = args.paths_file.or(section.paths_file) {
        let text = std::fs::read_to_string(&file)
            .map_err(|e| CliError::runtime(format!("reading {}: {e}", file.display())))?;
        path_texts.extend(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from));
    }
    if path_texts.is_empty() {
        return Err(CliError::usage("no paths given (use --path, --paths-file, or config)"));
    }
    let sessions = io::read_traffic(open(&traffic_path)?)?;
    let graph = build_access_graph(&sessions, alpha)?;
    let mut scored: Vec<(String, f64)> = Vec::with_capacity(path_texts.len());
    for text in &path_texts {
        let hosts = parse_path(text)?;
        let log_prob = path_log_probability(&graph, &hosts)?;
        let canonical: String = hosts
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        scored.push((canonical, log_prob));
    }
    // Most suspicious (lowest log-probability) first.
    scored.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    write_atomic(&out, |w| {
        for (path, log_prob) in &scored {
            writeln!(w, "{path}\t{log_prob}")?;
        }
        Ok(())
    })?;
    Ok(json!({
        "subcommand": "path-score",
        "paths": scored.len(),
        "nodes": graph.node_count(),
        "edges": graph.edge_count(),
        "out": display(&out),
    }))
}

// ---------------------------------------------------------------------------
// bindshell

#[derive(Args, Debug)]
pub struct BindshellArgs {
    #[arg(long)]
    traffic: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Pairing window between phase starts, in seconds.
    #[arg(long)]
    window: Option<i64>,
    /// Host-history horizon for is_new, in seconds.
    #[arg(long)]
    lookback: Option<i64>,
    /// Candidate noise filter: none or drop-loopback.
    #[arg(long)]
    noise_filter: Option<String>,
}

fn parse_noise_filter(name: &str) -> Result<Option<NoiseFilter<'static>>, CliError> {
    match name {
        "none" => Ok(None),
        "drop-loopback" => {
            static DROP_LOOPBACK: fn(&ConnectionPair) -> bool = |p| p.source != p.destination;
            Ok(Some(&DROP_LOOPBACK))
        }
        other => Err(CliError::usage(format!(
            "unknown noise filter `{other}` (expected none or drop-loopback)"
        ))),
    }
}

pub fn bindshell(
    args: BindshellArgs,
    section: config::BindshellSection,
) -> Result<serde_json::Value, CliError> {
    let traffic_path = require(args.traffic.or(section.traffic), "traffic")?;
    let out = require(args.out.or(section.out), "out")?;
    let window = args
        .window
        .or(section.window_seconds)
        .unwrap_or(DEFAULT_WINDOW_SECONDS);
    let lookback = args
        .lookback
        .or(section.lookback_seconds)
        .unwrap_or(DEFAULT_LOOKBACK_SECONDS);
    let filter_name = args
        .noise_filter
        .or(section.noise_filter)
        .unwrap_or_else(|| "none".to_string());
    let filter = parse_noise_filter(&filter_name)?;

    let sessions = io::read_traffic(open(&traffic_path)?)?;
    let corpus = BindShellCorpus::build(&sessions, window)?;
    let outcome = pair_connections(&sessions, window, filter)?;
    let rows = compute_candidate_features(
        &outcome.pairs,
        &corpus,
        &FeatureConfig {
            lookback_seconds: lookback,
        },
    )?;
    write_atomic(&out, |w| pivotlab_core::bindshell::write_candidates(w, &rows))?;
    Ok(json!({
        "subcommand": "bindshell",
        "sessions": sessions.len(),
        "unfiltered_pairs": corpus.unfiltered_pairs().len(),
        "candidates": rows.len(),
        "dropped_by_filter": outcome.dropped_by_filter,
        "noise_filter": filter_name,
        "out": display(&out),
    }))
}

// ---------------------------------------------------------------------------
// ngram-extract / ngram-derive

#[derive(Args, Debug)]
pub struct NgramExtractArgs {
    /// Input file; repeatable, indexed in order starting at 0.
    #[arg(long = "file")]
    files: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Gram length (1-4).
    #[arg(long)]
    n: Option<usize>,
}

pub fn ngram_extract(
    args: NgramExtractArgs,
    section: config::NgramExtractSection,
) -> Result<serde_json::Value, CliError> {
    let files = if args.files.is_empty() {
        section.files
    } else {
        args.files
    };
    if files.is_empty() {
        return Err(CliError::usage("no input files given (use --file or config)"));
    }
    let out = require(args.out.or(section.out), "out")?;
    let n = args.n.or(section.n).unwrap_or(4);
    let mut entries = Vec::with_capacity(files.len());
    for (index, path) in files.iter().enumerate() {
        let content = std::fs::read(path)
            .map_err(|e| CliError::runtime(format!("reading {}: {e}", path.display())))?;
        let hist = extract_ngrams(&content, n)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        entries.push((index as u64, hist));
    }
    write_atomic(&out, |w| io::write_ngram_file(w, &entries))?;
    let total_grams: u64 = entries.iter().map(|(_, h)| h.total()).sum();
    Ok(json!({
        "subcommand": "ngram-extract",
        "files": entries.len(),
        "n": n,
        "total_grams": total_grams,
        "out": display(&out),
    }))
}

#[derive(Args, Debug)]
pub struct NgramDeriveArgs {
    /// Existing n-gram TSV to marginalize.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Target gram length, below the input's.
    #[arg(long)]
    k: Option<usize>,
}

pub fn ngram_derive(
    args: NgramDeriveArgs,
    section: config::NgramDeriveSection,
) -> Result<serde_json::Value, CliError> {
    let input = require(args.input.or(section.input), "input")?;
    let out = require(args.out.or(section.out), "out")?;
    let k = args
        .k
        .or(section.k)
        .ok_or_else(|| CliError::usage("missing required `k` (flag or config)"))?;
    let entries = io::read_ngram_file(open(&input)?)?;
    let mut derived = Vec::with_capacity(entries.len());
    for (index, hist) in &entries {
        derived.push((*index, marginalize_prefix(hist, k)?));
    }
    write_atomic(&out, |w| io::write_ngram_file(w, &derived))?;
    Ok(json!({
        "subcommand": "ngram-derive",
        "files": derived.len(),
        "k": k,
        "out": display(&out),
    }))
}

// ---------------------------------------------------------------------------
// eval

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Scored predictions (TSV: key, score).
    #[arg(long)]
    predictions: Option<PathBuf>,
    /// Ground truth labels (TSV: key, 1|0|?).
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    report_out: Option<PathBuf>,
    /// Scores at or above this threshold predict positive.
    #[arg(long)]
    threshold: Option<f64>,
    /// Base rate override; computed from the labels when absent.
    #[arg(long)]
    base_rate: Option<f64>,
    /// Declare the label set complete so recall can be reported.
    #[arg(long)]
    labels_complete: Option<bool>,
}

pub fn eval(args: EvalArgs, section: config::EvalSection) -> Result<serde_json::Value, CliError> {
    let predictions_path = require(args.predictions.or(section.predictions), "predictions")?;
    let labels_path = require(args.labels.or(section.labels), "labels")?;
    let report_out = require(args.report_out.or(section.report_out), "report-out")?;
    let threshold = args.threshold.or(section.threshold).unwrap_or(0.5);
    let base_rate = args.base_rate.or(section.base_rate);
    let labels_complete = args
        .labels_complete
        .or(section.labels_complete)
        .unwrap_or(false);

    let scored = io::read_scored_predictions(open(&predictions_path)?)?;
    let labels = io::read_truth_labels(open(&labels_path)?)?;
    let mut ranked: Vec<(String, f64)> = scored.clone();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let ranked_keys: Vec<String> = ranked.into_iter().map(|(k, _)| k).collect();
    let predictions: BTreeMap<String, bool> = scored
        .into_iter()
        .map(|(k, score)| (k, score >= threshold))
        .collect();
    let report = evaluate(&ranked_keys, &predictions, &labels, labels_complete, base_rate)?;
    let report_value = serde_json::to_value(&report).map_err(pivotlab_core::Error::from)?;
    write_atomic(&report_out, |w| {
        writeln!(w, "{}", serde_json::to_string_pretty(&report_value)?).map_err(Into::into)
    })?;
    Ok(json!({
        "subcommand": "eval",
        "report_out": display(&report_out),
        "report": report_value,
    }))
}

// ---------------------------------------------------------------------------
// synth

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Directory the corpus files are written into.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// What to generate: operator, traffic, or both.
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

pub fn synth(args: SynthArgs, section: config::SynthSection) -> Result<serde_json::Value, CliError> {
    let out_dir = require(args.out_dir.or(section.out_dir), "out-dir")?;
    let scenario = args
        .scenario
        .or(section.scenario)
        .unwrap_or_else(|| "both".to_string());
    if !matches!(scenario.as_str(), "operator" | "traffic" | "both") {
        return Err(CliError::usage(format!(
            "unknown scenario `{scenario}` (expected operator, traffic, or both)"
        )));
    }
    let mut spec = section.spec.unwrap_or_default();
    if let Some(seed) = args.seed.or(section.rng_seed) {
        spec.rng_seed = seed;
    }

    let mut ground_truth = GroundTruth::default();
    let mut outputs = serde_json::Map::new();
    let mut counts = serde_json::Map::new();

    if scenario == "operator" || scenario == "both" {
        let corpus = gen_operator_corpus(&spec).map_err(CliError::from)?;
        let comms_path = out_dir.join("comms.tsv");
        let resolve_path = out_dir.join("resolve.tsv");
        let signatures_path = out_dir.join("signatures.jsonl");
        write_atomic(&comms_path, |w| {
            io::write_communications(w, &corpus.communications)
        })?;
        write_atomic(&resolve_path, |w| io::write_resolve_map(w, &corpus.resolve))?;
        write_atomic(&signatures_path, |w| {
            io::write_host_signatures(w, &corpus.signatures)
        })?;
        outputs.insert("comms".into(), display(&comms_path).into());
        outputs.insert("resolve".into(), display(&resolve_path).into());
        outputs.insert("signatures".into(), display(&signatures_path).into());
        counts.insert(
            "communications".into(),
            corpus.communications.len().into(),
        );
        counts.insert("signatures".into(), corpus.signatures.len().into());
        ground_truth = ground_truth.merge(corpus.ground_truth);
    }

    if scenario == "traffic" || scenario == "both" {
        let traffic = gen_traffic_scenario(&spec).map_err(CliError::from)?;
        let traffic_path = out_dir.join("traffic.tsv");
        write_atomic(&traffic_path, |w| io::write_traffic(w, &traffic.sessions))?;
        outputs.insert("traffic".into(), display(&traffic_path).into());
        counts.insert("sessions".into(), traffic.sessions.len().into());
        ground_truth = ground_truth.merge(traffic.ground_truth);
    }

    let truth_path = out_dir.join("ground_truth.json");
    let truth_value = serde_json::to_value(&ground_truth).map_err(pivotlab_core::Error::from)?;
    write_atomic(&truth_path, |w| {
        writeln!(w, "{}", serde_json::to_string_pretty(&truth_value)?).map_err(Into::into)
    })?;
    outputs.insert("ground_truth".into(), display(&truth_path).into());

    Ok(json!({
        "subcommand": "synth",
        "scenario": scenario,
        "rng_seed": spec.rng_seed,
        "outputs": serde_json::Value::Object(outputs),
        "counts": serde_json::Value::Object(counts),
        "ground_truth_counts": {
            "positive_malware_pairs": ground_truth.positive_malware_pairs.len(),
            "positive_host_pairs": ground_truth.positive_host_pairs.len(),
            "scanner_sources": ground_truth.scanner_sources.len(),
            "planted_path_len": ground_truth.planted_path.len(),
            "planted_bindshell_pairs": ground_truth.planted_bindshell_pairs.len(),
        },
    }))
}
