//! Operator-domain pivoting: derives positive/negative pair labels for
//! malware (shared command domains) and for hosts (resolve/signature join),
//! with allowlist and popularity filtering plus seeded negative sampling.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CommunicationRecord, HostSignature, Label, PairLabel};

/// Default cap on how many distinct files may contact a domain before it is
/// considered too popular to identify an operator.
pub const DEFAULT_MAX_FILES_PER_DOMAIN: usize = 100;

/// Default number of negatives emitted per positive.
pub const DEFAULT_NEGATIVE_RATIO: f64 = 1.0;

/// Default RNG seed used across the toolkit.
pub const DEFAULT_SEED: u64 = 20_120_623;

/// Above this many candidate pairs the negative sampler switches from
/// materializing the complement to rejection sampling.
const COMPLEMENT_LIMIT: u64 = 5_000_000;

/// Knobs for the pivoting label generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PivotConfig {
    /// Domains that never identify an operator, stored lowercase.
    pub benign_allowlist: BTreeSet<String>,
    /// Popularity cap: domains contacted by more distinct files are dropped.
    pub max_files_per_domain: usize,
    /// Negatives emitted per positive.
    pub negative_ratio: f64,
    pub rng_seed: u64,
    /// When set, positive pairs carry the byte-wise smallest mutual domain.
    pub multiclass: bool,
}

impl Default for PivotConfig {
    fn default() -> Self {
        PivotConfig {
            benign_allowlist: BTreeSet::new(),
            max_files_per_domain: DEFAULT_MAX_FILES_PER_DOMAIN,
            negative_ratio: DEFAULT_NEGATIVE_RATIO,
            rng_seed: DEFAULT_SEED,
            multiclass: false,
        }
    }
}

impl PivotConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_files_per_domain < 1 {
            return Err(Error::invalid("max_files_per_domain must be at least 1"));
        }
        if !(self.negative_ratio > 0.0) || !self.negative_ratio.is_finite() {
            return Err(Error::invalid("negative_ratio must be positive and finite"));
        }
        Ok(())
    }
}

/// Count of distinct files contacting each domain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DomainPopularityIndex {
    counts: BTreeMap<String, usize>,
}

impl DomainPopularityIndex {
    pub fn count(&self, domain: &str) -> usize {
        self.counts.get(domain).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.counts.iter().map(|(d, c)| (d.as_str(), *c))
    }
}

/// Static snapshot of domain -> IPv4 resolution; every IP set is non-empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolveMap {
    map: BTreeMap<String, BTreeSet<String>>,
}

impl ResolveMap {
    pub fn insert(&mut self, domain: String, ip: String) {
        self.map.entry(domain).or_default().insert(ip);
    }

    pub fn get(&self, domain: &str) -> Option<&BTreeSet<String>> {
        self.map.get(domain)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BTreeSet<String>)> {
        self.map.iter()
    }

    /// Every IP appearing anywhere in the snapshot.
    pub fn all_ips(&self) -> BTreeSet<String> {
        self.map.values().flatten().cloned().collect()
    }
}

/// Which host-pair labeling rule to apply; the two published variants differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HostPairMode {
    /// Positive IP pairs come from the resolve set of a single domain shared
    /// by two malware.
    SharedDomainFormula,
    /// Positive IP pairs bridge two distinct operator domains of one malware.
    SharedMalwareDomains,
}

/// Line counts reported next to a label file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PivotSummary {
    pub positives: usize,
    pub negatives: usize,
    pub negatives_requested: usize,
    /// How many requested negatives could not be drawn because the complement
    /// was exhausted.
    pub negative_shortfall: usize,
    /// Positive pairs dropped because an endpoint lacked a signature.
    pub skipped_missing_signature: usize,
}

/// Labels plus their summary counts.
#[derive(Debug, Clone, Default)]
pub struct LabelOutcome {
    pub labels: Vec<PairLabel>,
    pub summary: PivotSummary,
}

/// Counts distinct sha256 values per domain.
pub fn build_popularity_index(comms: &[CommunicationRecord]) -> DomainPopularityIndex {
    let mut files_per_domain: BTreeMap<&str, HashSet<&str>> = BTreeMap::new();
    for r in comms {
        files_per_domain
            .entry(&r.domain)
            .or_default()
            .insert(&r.sha256);
    }
    DomainPopularityIndex {
        counts: files_per_domain
            .into_iter()
            .map(|(d, files)| (d.to_string(), files.len()))
            .collect(),
    }
}

fn domain_passes(domain: &str, cfg: &PivotConfig, idx: &DomainPopularityIndex) -> bool {
    !cfg.benign_allowlist.contains(domain) && idx.count(domain) <= cfg.max_files_per_domain
}

/// The filtered set of domains contacted by `sha256`: allowlisted domains and
/// domains contacted by more than `max_files_per_domain` files are removed.
/// An unknown hash yields the empty set.
pub fn operator_domains(
    sha256: &str,
    comms: &[CommunicationRecord],
    cfg: &PivotConfig,
    idx: &DomainPopularityIndex,
) -> BTreeSet<String> {
    comms
        .iter()
        .filter(|r| r.sha256 == sha256 && domain_passes(&r.domain, cfg, idx))
        .map(|r| r.domain.clone())
        .collect()
}

/// Encodes (i, j) with i < j so positives fit a hash set of u64.
fn pair_code(i: u32, j: u32) -> u64 {
    (u64::from(i) << 32) | u64::from(j)
}

/// Draws `requested` distinct canonical pairs over `n` entities, uniformly
/// without replacement, excluding `positives`. The caller guarantees
/// `requested <= total_pairs - positives.len()`.
fn sample_negative_codes(
    n: u32,
    positives: &HashSet<u64>,
    requested: u64,
    rng: &mut ChaCha8Rng,
) -> Vec<u64> {
    let total = u64::from(n) * (u64::from(n) - 1) / 2;
    if requested == 0 {
        return Vec::new();
    }
    if total <= COMPLEMENT_LIMIT {
        let mut complement: Vec<u64> = Vec::with_capacity((total - positives.len() as u64) as usize);
        for i in 0..n {
            for j in (i + 1)..n {
                let code = pair_code(i, j);
                if !positives.contains(&code) {
                    complement.push(code);
                }
            }
        }
        // Partial Fisher-Yates: the first `requested` slots become the sample.
        let take = requested as usize;
        for idx in 0..take {
            let swap = rng.random_range(idx..complement.len());
            complement.swap(idx, swap);
        }
        complement.truncate(take);
        complement
    } else {
        let mut chosen: HashSet<u64> = HashSet::with_capacity(requested as usize);
        let mut out = Vec::with_capacity(requested as usize);
        while out.len() < requested as usize {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b {
                continue;
            }
            let code = pair_code(a.min(b), a.max(b));
            if positives.contains(&code) || !chosen.insert(code) {
                continue;
            }
            out.push(code);
        }
        out
    }
}

fn ceil_ratio(positives: usize, ratio: f64) -> u64 {
    (ratio * positives as f64).ceil() as u64
}

/// Emits exhaustive positive pairs (operator-domain intersection non-empty)
/// and seeded sampled negatives over the distinct malware hashes in `comms`.
/// Output is sorted by (entity_a, entity_b) and deterministic for a fixed
/// seed.
pub fn label_malware_pairs(comms: &[CommunicationRecord], cfg: &PivotConfig) -> Result<LabelOutcome> {
    cfg.validate()?;
    let idx = build_popularity_index(comms);

    let mut entities: Vec<&str> = comms
        .iter()
        .map(|r| r.sha256.as_str())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    entities.sort_unstable();
    let entity_id: HashMap<&str, u32> = entities
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i as u32))
        .collect();

    // Partition by surviving domain: each domain contributes the pairs of
    // files contacting it, and ascending domain order makes the first class
    // key recorded for a pair the byte-wise smallest mutual domain.
    let mut files_by_domain: BTreeMap<&str, BTreeSet<u32>> = BTreeMap::new();
    for r in comms {
        if domain_passes(&r.domain, cfg, &idx) {
            files_by_domain
                .entry(&r.domain)
                .or_default()
                .insert(entity_id[r.sha256.as_str()]);
        }
    }

    let mut positive_class: HashMap<u64, &str> = HashMap::new();
    for (domain, files) in &files_by_domain {
        let ids: Vec<u32> = files.iter().copied().collect();
        for (pos, &i) in ids.iter().enumerate() {
            for &j in &ids[pos + 1..] {
                positive_class.entry(pair_code(i, j)).or_insert(*domain);
            }
        }
    }

    let positive_codes: HashSet<u64> = positive_class.keys().copied().collect();
    let requested = ceil_ratio(positive_codes.len(), cfg.negative_ratio);
    let n = entities.len() as u32;
    let total = u64::from(n).saturating_mul(u64::from(n).saturating_sub(1)) / 2;
    let available = total - positive_codes.len() as u64;
    let emitted = requested.min(available);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let negative_codes = sample_negative_codes(n, &positive_codes, emitted, &mut rng);

    let mut labels = Vec::with_capacity(positive_codes.len() + negative_codes.len());
    for (&code, &domain) in &positive_class {
        let (i, j) = ((code >> 32) as u32, (code & 0xffff_ffff) as u32);
        labels.push(PairLabel {
            entity_a: entities[i as usize].to_string(),
            entity_b: entities[j as usize].to_string(),
            label: Label::Positive,
            class_key: cfg.multiclass.then(|| domain.to_string()),
        });
    }
    for code in negative_codes {
        let (i, j) = ((code >> 32) as u32, (code & 0xffff_ffff) as u32);
        labels.push(PairLabel {
            entity_a: entities[i as usize].to_string(),
            entity_b: entities[j as usize].to_string(),
            label: Label::Negative,
            class_key: None,
        });
    }
    labels.sort();

    Ok(LabelOutcome {
        summary: PivotSummary {
            positives: positive_codes.len(),
            negatives: labels.len() - positive_codes.len(),
            negatives_requested: requested as usize,
            negative_shortfall: (requested - emitted) as usize,
            skipped_missing_signature: 0,
        },
        labels,
    })
}

/// Labels host (IP) pairs from the malware pivot joined through `resolve`.
/// Positives follow the selected rule; negatives are sampled from canonical
/// pairs of signature-bearing IPs that are not positive. Positive pairs with
/// a missing signature on either side are skipped and counted.
pub fn label_host_pairs(
    comms: &[CommunicationRecord],
    cfg: &PivotConfig,
    resolve: &ResolveMap,
    signatures: &BTreeMap<String, HostSignature>,
    mode: HostPairMode,
) -> Result<LabelOutcome> {
    cfg.validate()?;
    if resolve.is_empty() {
        return Err(Error::invalid(
            "resolve map is empty: host labeling is impossible",
        ));
    }
    let idx = build_popularity_index(comms);

    let mut domains_by_file: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in comms {
        if domain_passes(&r.domain, cfg, &idx) {
            domains_by_file
                .entry(&r.sha256)
                .or_default()
                .insert(&r.domain);
        }
    }

    let resolved = |domain: &str| -> Result<&BTreeSet<String>> {
        resolve.get(domain).ok_or_else(|| {
            Error::invalid(format!(
                "domain `{domain}` survives the operator-domain filter but is missing from the resolve map"
            ))
        })
    };

    let mut positives: BTreeSet<(String, String)> = BTreeSet::new();
    match mode {
        HostPairMode::SharedDomainFormula => {
            // A domain shared by two distinct malware contributes every
            // canonical IP pair within its own resolve set.
            let mut files_per_domain: BTreeMap<&str, usize> = BTreeMap::new();
            for domains in domains_by_file.values() {
                for d in domains {
                    *files_per_domain.entry(*d).or_insert(0) += 1;
                }
            }
            for (domain, file_count) in files_per_domain {
                let ips = resolved(domain)?;
                if file_count < 2 {
                    continue;
                }
                let ips: Vec<&String> = ips.iter().collect();
                for (pos, a) in ips.iter().enumerate() {
                    for b in &ips[pos + 1..] {
                        positives.insert(((*a).clone(), (*b).clone()));
                    }
                }
            }
        }
        HostPairMode::SharedMalwareDomains => {
            // Two operator domains of one malware bridge their resolve sets.
            for domains in domains_by_file.values() {
                let domains: Vec<&str> = domains.iter().copied().collect();
                for (pos, d1) in domains.iter().enumerate() {
                    let ips1 = resolved(d1)?;
                    for d2 in &domains[pos + 1..] {
                        let ips2 = resolved(d2)?;
                        for a in ips1 {
                            for b in ips2 {
                                if a == b {
                                    continue;
                                }
                                let (a, b) = if a < b { (a, b) } else { (b, a) };
                                positives.insert((a.clone(), b.clone()));
                            }
                        }
                    }
                }
            }
        }
    }

    // Entities for negatives are the signature-bearing hosts; positives with
    // a missing signature are skipped and counted.
    let known: Vec<&str> = signatures.keys().map(|s| s.as_str()).collect();
    let known_id: HashMap<&str, u32> = known
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i as u32))
        .collect();
    let total_positive = positives.len();
    let mut positive_codes: HashSet<u64> = HashSet::new();
    let mut kept_positives: Vec<(String, String)> = Vec::new();
    for (a, b) in positives {
        match (known_id.get(a.as_str()), known_id.get(b.as_str())) {
            (Some(&i), Some(&j)) => {
                positive_codes.insert(pair_code(i.min(j), i.max(j)));
                kept_positives.push((a, b));
            }
            _ => {}
        }
    }
    let skipped = total_positive - kept_positives.len();

    let requested = ceil_ratio(kept_positives.len(), cfg.negative_ratio);
    let n = known.len() as u32;
    let total = u64::from(n).saturating_mul(u64::from(n).saturating_sub(1)) / 2;
    let available = total.saturating_sub(positive_codes.len() as u64);
    let emitted = requested.min(available);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let negative_codes = sample_negative_codes(n, &positive_codes, emitted, &mut rng);

    let mut labels = Vec::with_capacity(kept_positives.len() + negative_codes.len());
    for (a, b) in kept_positives {
        labels.push(PairLabel {
            entity_a: a,
            entity_b: b,
            label: Label::Positive,
            class_key: None,
        });
    }
    let positives_count = labels.len();
    for code in negative_codes {
        let (i, j) = ((code >> 32) as u32, (code & 0xffff_ffff) as u32);
        labels.push(PairLabel {
            entity_a: known[i as usize].to_string(),
            entity_b: known[j as usize].to_string(),
            label: Label::Negative,
            class_key: None,
        });
    }
    labels.sort();

    Ok(LabelOutcome {
        summary: PivotSummary {
            positives: positives_count,
            negatives: labels.len() - positives_count,
            negatives_requested: requested as usize,
            negative_shortfall: (requested - emitted) as usize,
            skipped_missing_signature: skipped,
        },
        labels,
    })
}
