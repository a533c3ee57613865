//! Brute-force oracles for the pivoting label generators: positive sets are
//! recomputed by exhaustive pairwise enumeration straight from the rule
//! definitions and compared for exact equality.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pivotlab_core::model::{CommunicationRecord, HostSignature, Label};
use pivotlab_core::pivot::{
    build_popularity_index, label_host_pairs, label_malware_pairs, HostPairMode, PivotConfig,
    ResolveMap,
};

fn random_corpus(seed: u64, files: usize, domains: usize) -> Vec<CommunicationRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain_pool: Vec<String> = (0..domains).map(|j| format!("d{j:02}.example")).collect();
    let mut comms = Vec::new();
    let mut seen = HashSet::new();
    for _ in 0..files {
        let sha = format!("{:032x}{:032x}", rng.random::<u128>(), rng.random::<u128>());
        let contacts = rng.random_range(1..=4usize);
        for _ in 0..contacts {
            let domain = &domain_pool[rng.random_range(0..domain_pool.len())];
            if seen.insert((sha.clone(), domain.clone())) {
                comms.push(CommunicationRecord {
                    sha256: sha.clone(),
                    domain: domain.clone(),
                    ip: "203.0.113.7".to_string(),
                });
            }
        }
    }
    comms
}

/// Recomputes the filtered domain set of one file straight from the rule.
fn oracle_operator_domains(
    sha: &str,
    comms: &[CommunicationRecord],
    cfg: &PivotConfig,
) -> BTreeSet<String> {
    let mut popularity: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in comms {
        popularity.entry(&r.domain).or_default().insert(&r.sha256);
    }
    comms
        .iter()
        .filter(|r| r.sha256 == sha)
        .filter(|r| !cfg.benign_allowlist.contains(&r.domain))
        .filter(|r| popularity[r.domain.as_str()].len() <= cfg.max_files_per_domain)
        .map(|r| r.domain.clone())
        .collect()
}

/// Exhaustive O(n^2) positive-pair enumeration.
fn oracle_malware_positives(
    comms: &[CommunicationRecord],
    cfg: &PivotConfig,
) -> BTreeSet<(String, String)> {
    let entities: BTreeSet<&str> = comms.iter().map(|r| r.sha256.as_str()).collect();
    let entities: Vec<&str> = entities.into_iter().collect();
    let mut positives = BTreeSet::new();
    for (i, a) in entities.iter().enumerate() {
        let od_a = oracle_operator_domains(a, comms, cfg);
        for b in &entities[i + 1..] {
            let od_b = oracle_operator_domains(b, comms, cfg);
            if od_a.intersection(&od_b).next().is_some() {
                positives.insert((a.to_string(), b.to_string()));
            }
        }
    }
    positives
}

fn positives_of(labels: &[pivotlab_core::PairLabel]) -> BTreeSet<(String, String)> {
    labels
        .iter()
        .filter(|l| l.label == Label::Positive)
        .map(|l| (l.entity_a.clone(), l.entity_b.clone()))
        .collect()
}

#[test]
fn malware_positives_match_exhaustive_oracle() {
    for seed in 0..20u64 {
        let comms = random_corpus(seed, 60, 12);
        let cfg = PivotConfig {
            max_files_per_domain: 8,
            benign_allowlist: ["d00.example".to_string()].into(),
            ..PivotConfig::default()
        };
        let outcome = label_malware_pairs(&comms, &cfg).unwrap();
        assert_eq!(
            positives_of(&outcome.labels),
            oracle_malware_positives(&comms, &cfg),
            "seed {seed}"
        );
    }
}

#[test]
fn popularity_index_matches_group_by_recount() {
    let comms = random_corpus(99, 400, 25);
    let idx = build_popularity_index(&comms);
    let mut recount: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for r in &comms {
        recount
            .entry(r.domain.clone())
            .or_default()
            .insert(r.sha256.clone());
    }
    for (domain, files) in recount {
        assert_eq!(idx.count(&domain), files.len());
    }
    let total: usize = idx.iter().map(|(_, c)| c).sum();
    assert_eq!(total, comms.len());
}

#[test]
fn multiclass_key_is_smallest_mutual_domain() {
    for seed in 20..30u64 {
        let comms = random_corpus(seed, 30, 8);
        let cfg = PivotConfig {
            multiclass: true,
            max_files_per_domain: 10,
            ..PivotConfig::default()
        };
        let outcome = label_malware_pairs(&comms, &cfg).unwrap();
        for label in outcome.labels.iter().filter(|l| l.label == Label::Positive) {
            let od_a = oracle_operator_domains(&label.entity_a, &comms, &cfg);
            let od_b = oracle_operator_domains(&label.entity_b, &comms, &cfg);
            let smallest = od_a.intersection(&od_b).next().cloned();
            assert_eq!(label.class_key, smallest);
        }
    }
}

#[test]
fn input_order_does_not_change_labels() {
    let mut comms = random_corpus(5, 40, 10);
    let cfg = PivotConfig::default();
    let forward = label_malware_pairs(&comms, &cfg).unwrap();
    comms.reverse();
    let reversed = label_malware_pairs(&comms, &cfg).unwrap();
    assert_eq!(forward.labels, reversed.labels);
}

fn host_fixture(
    seed: u64,
    domains: usize,
    max_ips: usize,
) -> (
    Vec<CommunicationRecord>,
    ResolveMap,
    BTreeMap<String, HostSignature>,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let comms = random_corpus(seed.wrapping_add(1000), 40, domains);
    let mut resolve = ResolveMap::default();
    let mut signatures = BTreeMap::new();
    let domain_names: BTreeSet<String> = comms.iter().map(|r| r.domain.clone()).collect();
    let mut ip_pool: Vec<String> = (0..max_ips)
        .map(|i| format!("198.51.100.{}", i + 1))
        .collect();
    ip_pool.extend((0..max_ips).map(|i| format!("192.0.2.{}", i + 1)));
    for domain in domain_names {
        let count = rng.random_range(1..=3usize);
        for _ in 0..count {
            let ip = ip_pool[rng.random_range(0..ip_pool.len())].clone();
            resolve.insert(domain.clone(), ip);
        }
    }
    for ip in resolve.all_ips() {
        // Leave a few hosts without signatures to exercise the skip path.
        if rng.random_range(0..10u32) == 0 {
            continue;
        }
        signatures.insert(
            ip.clone(),
            HostSignature::from_parts(&ip, BTreeMap::new()).unwrap(),
        );
    }
    (comms, resolve, signatures)
}

/// Exhaustive enumeration of the shared-domain rule: for every malware pair
/// and every mutual operator domain, all IP pairs within its resolve set.
fn oracle_host_positives_formula(
    comms: &[CommunicationRecord],
    cfg: &PivotConfig,
    resolve: &ResolveMap,
) -> BTreeSet<(String, String)> {
    let entities: BTreeSet<&str> = comms.iter().map(|r| r.sha256.as_str()).collect();
    let entities: Vec<&str> = entities.into_iter().collect();
    let mut positives = BTreeSet::new();
    for (i, m1) in entities.iter().enumerate() {
        let od1 = oracle_operator_domains(m1, comms, cfg);
        for m2 in &entities[i + 1..] {
            let od2 = oracle_operator_domains(m2, comms, cfg);
            for domain in od1.intersection(&od2) {
                let ips: Vec<&String> = resolve.get(domain).unwrap().iter().collect();
                for (p, a) in ips.iter().enumerate() {
                    for b in &ips[p + 1..] {
                        let (a, b) = if a < b { (a, b) } else { (b, a) };
                        positives.insert(((*a).clone(), (*b).clone()));
                    }
                }
            }
        }
    }
    positives
}

/// Exhaustive enumeration of the prose rule: for every malware and every two
/// of its operator domains, all cross pairs of their resolve sets.
fn oracle_host_positives_prose(
    comms: &[CommunicationRecord],
    cfg: &PivotConfig,
    resolve: &ResolveMap,
) -> BTreeSet<(String, String)> {
    let entities: BTreeSet<&str> = comms.iter().map(|r| r.sha256.as_str()).collect();
    let mut positives = BTreeSet::new();
    for m in entities {
        let od: Vec<String> = oracle_operator_domains(m, comms, cfg).into_iter().collect();
        for (i, d1) in od.iter().enumerate() {
            for d2 in &od[i + 1..] {
                for a in resolve.get(d1).unwrap() {
                    for b in resolve.get(d2).unwrap() {
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
    positives
}

fn signature_filtered(
    positives: BTreeSet<(String, String)>,
    signatures: &BTreeMap<String, HostSignature>,
) -> BTreeSet<(String, String)> {
    positives
        .into_iter()
        .filter(|(a, b)| signatures.contains_key(a) && signatures.contains_key(b))
        .collect()
}

#[test]
fn host_positives_match_oracle_both_modes() {
    for seed in 0..20u64 {
        let (comms, resolve, signatures) = host_fixture(seed, 10, 20);
        let cfg = PivotConfig {
            max_files_per_domain: 10,
            ..PivotConfig::default()
        };
        let formula = label_host_pairs(
            &comms,
            &cfg,
            &resolve,
            &signatures,
            HostPairMode::SharedDomainFormula,
        )
        .unwrap();
        let expected =
            signature_filtered(oracle_host_positives_formula(&comms, &cfg, &resolve), &signatures);
        assert_eq!(positives_of(&formula.labels), expected, "formula seed {seed}");

        let prose = label_host_pairs(
            &comms,
            &cfg,
            &resolve,
            &signatures,
            HostPairMode::SharedMalwareDomains,
        )
        .unwrap();
        let expected =
            signature_filtered(oracle_host_positives_prose(&comms, &cfg, &resolve), &signatures);
        assert_eq!(positives_of(&prose.labels), expected, "prose seed {seed}");
    }
}

#[test]
fn negative_counts_follow_ratio() {
    for ratio in [0.5, 1.0, 2.5] {
        let comms = random_corpus(77, 50, 10);
        let cfg = PivotConfig {
            negative_ratio: ratio,
            ..PivotConfig::default()
        };
        let outcome = label_malware_pairs(&comms, &cfg).unwrap();
        let requested = (ratio * outcome.summary.positives as f64).ceil() as usize;
        assert_eq!(outcome.summary.negatives_requested, requested);
        assert_eq!(
            outcome.summary.negatives + outcome.summary.negative_shortfall,
            requested
        );
    }
}

#[test]
fn monotone_in_filter_strictness() {
    for seed in 0..10u64 {
        let comms = random_corpus(seed, 50, 10);
        let loose = PivotConfig {
            max_files_per_domain: 20,
            ..PivotConfig::default()
        };
        let strict_allowlist = PivotConfig {
            max_files_per_domain: 20,
            benign_allowlist: ["d01.example".to_string(), "d02.example".to_string()].into(),
            ..PivotConfig::default()
        };
        let strict_cap = PivotConfig {
            max_files_per_domain: 4,
            ..PivotConfig::default()
        };
        let base = positives_of(&label_malware_pairs(&comms, &loose).unwrap().labels);
        for strict in [strict_allowlist, strict_cap] {
            let tightened = positives_of(&label_malware_pairs(&comms, &strict).unwrap().labels);
            assert!(tightened.is_subset(&base), "seed {seed}");
        }
    }
}
