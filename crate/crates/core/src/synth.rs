//! Seeded synthetic corpora with planted ground truth: operator-structured
//! malware communications with resolve/signature maps, and traffic scenarios
//! with planted stealth scans, lateral paths, and bind-shell pairs.
//!
//! The generator plants unambiguous signals (private domains, ports unseen
//! in background) so every pipeline can be verified against the emitted
//! ground truth under its default configuration.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bindshell::DEFAULT_WINDOW_SECONDS;
use crate::error::{Error, Result};
use crate::model::{CommunicationRecord, HostSignature, TrafficSession};
use crate::pivot::{ResolveMap, DEFAULT_MAX_FILES_PER_DOMAIN, DEFAULT_SEED};
use crate::traffic::BUCKET_SECONDS;

/// Fixed namespace of shared benign domains, so allowlists are testable.
pub const BENIGN_DOMAIN_POOL: [&str; 32] = [
    "google.com",
    "www.google.com",
    "gstatic.com",
    "googleapis.com",
    "microsoft.com",
    "windowsupdate.com",
    "update.microsoft.com",
    "msftconnecttest.com",
    "apple.com",
    "icloud.com",
    "amazonaws.com",
    "s3.amazonaws.com",
    "cloudfront.net",
    "akamai.net",
    "akamaitechnologies.com",
    "facebook.com",
    "twitter.com",
    "youtube.com",
    "doubleclick.net",
    "bing.com",
    "yahoo.com",
    "wikipedia.org",
    "github.com",
    "stackoverflow.com",
    "cloudflare.com",
    "pool.ntp.org",
    "debian.org",
    "ubuntu.com",
    "centos.org",
    "mozilla.org",
    "adobe.com",
    "java.com",
];

/// Files added per corpus so that every benign domain's popularity exceeds
/// the default per-domain file cap and gets filtered out of operator domains.
const FILLER_FILES: usize = DEFAULT_MAX_FILES_PER_DOMAIN + 1;

/// Ports the benign traffic background sticks to.
const POPULAR_PORTS: [u16; 6] = [80, 443, 22, 53, 445, 3389];

const SERVICE_POOL: [(u16, &str, &str); 10] = [
    (22, "OpenSSH", "7.4"),
    (22, "OpenSSH", "8.2p1"),
    (80, "nginx", "1.18.0"),
    (80, "Apache httpd", "2.4.41"),
    (443, "nginx", "1.24.0"),
    (21, "vsftpd", "3.0.3"),
    (3306, "MySQL", "5.7.33"),
    (6379, "Redis", "6.0.9"),
    (8080, "Apache Tomcat", "9.0.31"),
    (25, "Postfix smtpd", "3.4.13"),
];

/// Planted stealth scan: `port_count` ports unseen in background, aimed at
/// `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanSpec {
    pub port_count: u64,
    pub target: u64,
}

impl Default for ScanSpec {
    fn default() -> Self {
        ScanSpec {
            port_count: 10,
            target: 0,
        }
    }
}

/// Planted lateral path over `path_length` distinct hosts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LateralSpec {
    pub path_length: u64,
}

impl Default for LateralSpec {
    fn default() -> Self {
        LateralSpec { path_length: 5 }
    }
}

/// Planted two-phase bind-shell pair with this gap between phase starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BindShellSpec {
    pub window_gap_seconds: i64,
}

impl Default for BindShellSpec {
    fn default() -> Self {
        BindShellSpec {
            window_gap_seconds: 30,
        }
    }
}

/// Traffic half of a scenario: background volume plus planted attacks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrafficSpec {
    pub host_count: u64,
    /// Average benign sessions per 10-minute bucket.
    pub benign_session_rate: u64,
    pub horizon_buckets: u64,
    pub scan: Option<ScanSpec>,
    pub lateral: Option<LateralSpec>,
    pub bindshell: Option<BindShellSpec>,
}

impl Default for TrafficSpec {
    fn default() -> Self {
        TrafficSpec {
            host_count: 50,
            benign_session_rate: 14,
            horizon_buckets: 144,
            scan: Some(ScanSpec::default()),
            lateral: Some(LateralSpec::default()),
            bindshell: Some(BindShellSpec::default()),
        }
    }
}

/// Full scenario: operator-structured communications plus traffic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioSpec {
    pub rng_seed: u64,
    pub n_operators: usize,
    pub malware_per_operator: usize,
    pub domains_per_operator: usize,
    pub benign_domain_count: usize,
    pub traffic: TrafficSpec,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec {
            rng_seed: DEFAULT_SEED,
            n_operators: 4,
            malware_per_operator: 5,
            domains_per_operator: 2,
            benign_domain_count: 4,
            traffic: TrafficSpec::default(),
        }
    }
}

/// Identity of a planted bind-shell pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindShellKey {
    pub source: u64,
    pub destination: u64,
    pub dst_port_phase1: u16,
    pub dst_port_phase2: u16,
    pub start_time_phase1: i64,
    pub start_time_phase2: i64,
}

/// What the generator planted; every entry refers only to emitted entities.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GroundTruth {
    pub positive_malware_pairs: Vec<(String, String)>,
    pub positive_host_pairs: Vec<(String, String)>,
    pub scanner_sources: Vec<u64>,
    pub planted_path: Vec<u64>,
    pub planted_bindshell_pairs: Vec<BindShellKey>,
}

impl GroundTruth {
    /// Combines the operator-corpus and traffic halves of a scenario.
    pub fn merge(mut self, other: GroundTruth) -> GroundTruth {
        self.positive_malware_pairs.extend(other.positive_malware_pairs);
        self.positive_host_pairs.extend(other.positive_host_pairs);
        self.scanner_sources.extend(other.scanner_sources);
        if self.planted_path.is_empty() {
            self.planted_path = other.planted_path;
        }
        self.planted_bindshell_pairs
            .extend(other.planted_bindshell_pairs);
        self
    }
}

/// Operator-structured communications corpus with host enrichment.
#[derive(Debug, Clone)]
pub struct OperatorCorpus {
    pub communications: Vec<CommunicationRecord>,
    pub resolve: ResolveMap,
    pub signatures: Vec<HostSignature>,
    pub ground_truth: GroundTruth,
}

fn random_sha256(rng: &mut ChaCha8Rng, used: &mut HashSet<String>) -> String {
    loop {
        let mut bytes = [0u8; 32];
        rng.fill(&mut bytes);
        let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
        if used.insert(hex.clone()) {
            return hex;
        }
    }
}

fn random_ip(rng: &mut ChaCha8Rng, used: &mut HashSet<String>) -> String {
    loop {
        let ip = format!(
            "198.{}.{}.{}",
            18 + rng.random_range(0..2u8),
            rng.random_range(0..=255u8),
            rng.random_range(1..=254u8)
        );
        if used.insert(ip.clone()) {
            return ip;
        }
    }
}

fn canonical(a: String, b: String) -> (String, String) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Generates the operator corpus: each operator's malware contact a private
/// domain pool plus shared benign domains; filler files push every benign
/// domain over the default popularity cap. The recorded positive pairs are
/// exactly what the default pivoting configuration recovers.
pub fn gen_operator_corpus(spec: &ScenarioSpec) -> Result<OperatorCorpus> {
    if spec.n_operators < 1 || spec.malware_per_operator < 1 || spec.domains_per_operator < 1 {
        return Err(Error::invalid(
            "operator, malware, and domain counts must all be at least 1",
        ));
    }
    if spec.benign_domain_count < 1 || spec.benign_domain_count > BENIGN_DOMAIN_POOL.len() {
        return Err(Error::invalid(format!(
            "benign_domain_count must be 1..={}, the embedded name space",
            BENIGN_DOMAIN_POOL.len()
        )));
    }
    if spec.malware_per_operator > DEFAULT_MAX_FILES_PER_DOMAIN {
        return Err(Error::invalid(format!(
            "malware_per_operator above {DEFAULT_MAX_FILES_PER_DOMAIN} would push private domains over the default popularity cap"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut used_hashes = HashSet::new();
    let mut used_ips = HashSet::new();

    let mut benign: Vec<&str> = BENIGN_DOMAIN_POOL.to_vec();
    benign.shuffle(&mut rng);
    benign.truncate(spec.benign_domain_count);
    benign.sort_unstable();

    // Resolve every domain up front so communication rows can carry the
    // primary resolved IP.
    let mut resolve = ResolveMap::default();
    let mut domain_ips: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut operator_domains: Vec<Vec<String>> = Vec::with_capacity(spec.n_operators);
    for op in 0..spec.n_operators {
        let mut domains = Vec::with_capacity(spec.domains_per_operator);
        for d in 0..spec.domains_per_operator {
            domains.push(format!("c2-{op:03}-{d:02}.bad.example"));
        }
        operator_domains.push(domains);
    }
    let all_domains: Vec<String> = operator_domains
        .iter()
        .flatten()
        .cloned()
        .chain(benign.iter().map(|d| d.to_string()))
        .collect();
    for domain in &all_domains {
        let ip_count = rng.random_range(1..=3usize);
        let ips: Vec<String> = (0..ip_count)
            .map(|_| random_ip(&mut rng, &mut used_ips))
            .collect();
        for ip in &ips {
            resolve.insert(domain.clone(), ip.clone());
        }
        domain_ips.insert(domain.clone(), ips);
    }

    let mut communications = Vec::new();
    let contact = |sha: &str, domain: &str, domain_ips: &BTreeMap<String, Vec<String>>| {
        // First resolved IP is the one recorded in the communication row.
        let ip = domain_ips[domain][0].clone();
        CommunicationRecord {
            sha256: sha.to_string(),
            domain: domain.to_string(),
            ip,
        }
    };

    let mut ground_truth = GroundTruth::default();
    for domains in &operator_domains {
        let mut hashes: Vec<String> = (0..spec.malware_per_operator)
            .map(|_| random_sha256(&mut rng, &mut used_hashes))
            .collect();
        hashes.sort_unstable();
        for sha in &hashes {
            for domain in domains {
                communications.push(contact(sha, domain, &domain_ips));
            }
            for domain in &benign {
                if rng.random_bool(0.5) {
                    communications.push(contact(sha, domain, &domain_ips));
                }
            }
        }
        for (pos, a) in hashes.iter().enumerate() {
            for b in &hashes[pos + 1..] {
                ground_truth
                    .positive_malware_pairs
                    .push((a.clone(), b.clone()));
            }
        }
    }

    // Fillers contact every benign domain and nothing else, lifting benign
    // popularity above the default cap without adding positive pairs.
    for _ in 0..FILLER_FILES {
        let sha = random_sha256(&mut rng, &mut used_hashes);
        for domain in &benign {
            communications.push(contact(&sha, domain, &domain_ips));
        }
    }

    // Host ground truth under the shared-domain rule: every private domain
    // shared by at least two malware contributes its within-domain IP pairs.
    let mut host_pairs: BTreeSet<(String, String)> = BTreeSet::new();
    if spec.malware_per_operator >= 2 {
        for domains in &operator_domains {
            for domain in domains {
                let ips = &domain_ips[domain];
                for (pos, a) in ips.iter().enumerate() {
                    for b in &ips[pos + 1..] {
                        host_pairs.insert(canonical(a.clone(), b.clone()));
                    }
                }
            }
        }
    }
    ground_truth.positive_host_pairs = host_pairs.into_iter().collect();
    ground_truth.positive_malware_pairs.sort_unstable();

    let mut signatures = Vec::new();
    for ip in resolve.all_ips() {
        let service_count = rng.random_range(1..=4usize);
        let mut services: BTreeMap<u16, BTreeMap<String, String>> = BTreeMap::new();
        for _ in 0..service_count {
            let (port, product, version) = SERVICE_POOL[rng.random_range(0..SERVICE_POOL.len())];
            let mut desc = BTreeMap::new();
            desc.insert("product".to_string(), product.to_string());
            desc.insert("version".to_string(), version.to_string());
            services.insert(port, desc);
        }
        signatures.push(HostSignature::from_parts(&ip, services)?);
    }

    communications.sort_by(|a, b| (&a.sha256, &a.domain).cmp(&(&b.sha256, &b.domain)));

    Ok(OperatorCorpus {
        communications,
        resolve,
        signatures,
        ground_truth,
    })
}

/// Traffic scenario: schema-valid rows plus planted ground truth.
#[derive(Debug, Clone)]
pub struct TrafficScenario {
    pub sessions: Vec<TrafficSession>,
    pub ground_truth: GroundTruth,
}

fn benign_session(
    rng: &mut ChaCha8Rng,
    time: i64,
    src: u64,
    dst: u64,
    dst_port: u16,
) -> TrafficSession {
    let pkt = rng.random_range(1..=40u64);
    TrafficSession {
        min_start_time: time,
        src_index: src,
        dst_index: dst,
        src_port: rng.random_range(1024..=60000u16),
        dst_port,
        tvolume: rng.random_range(200..=20_000u64),
        rtvolume: rng.random_range(200..=40_000u64),
        pkt,
        rpkt: rng.random_range(1..=60u64),
        cnt: 1,
        failed_num: u64::from(rng.random_range(0..50u32) == 0),
        path: if dst_port == 53 { "udp" } else { "tcp" }.to_string(),
    }
}

/// Generates the traffic scenario. Background sessions repeat a fixed flow
/// backbone on popular ports; the planted scanner touches ports unseen in
/// background within one bucket; the planted lateral path uses edges kept out
/// of the backbone; the planted bind-shell pair obeys the pairing rules
/// inside the default window.
pub fn gen_traffic_scenario(spec: &ScenarioSpec) -> Result<TrafficScenario> {
    let t = &spec.traffic;
    if t.host_count < 2 {
        return Err(Error::invalid("host_count must be at least 2"));
    }
    if t.benign_session_rate < 1 || t.horizon_buckets < 1 {
        return Err(Error::invalid(
            "benign_session_rate and horizon_buckets must be at least 1",
        ));
    }
    let horizon_seconds = t.horizon_buckets as i64 * BUCKET_SECONDS;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut ground_truth = GroundTruth::default();
    let mut sessions = Vec::new();

    // Plant the lateral path first so the flow backbone can avoid its edges.
    let mut excluded_edges: HashSet<(u64, u64)> = HashSet::new();
    if let Some(lateral) = &t.lateral {
        if lateral.path_length < 1 {
            return Err(Error::invalid("path_length must be at least 1"));
        }
        if lateral.path_length > t.host_count {
            return Err(Error::invalid(format!(
                "host count {} too small for requested path length {}",
                t.host_count, lateral.path_length
            )));
        }
        let picked = rand::seq::index::sample(
            &mut rng,
            t.host_count as usize,
            lateral.path_length as usize,
        );
        let path: Vec<u64> = picked.iter().map(|i| i as u64).collect();
        for hop in path.windows(2) {
            excluded_edges.insert((hop[0], hop[1]));
        }
        ground_truth.planted_path = path;
    }

    // Flow backbone: repeated (src, dst) service flows on popular ports.
    let desired_flows = (t.host_count as usize * 2).clamp(8, 400);
    let mut flows: Vec<(u64, u64)> = Vec::with_capacity(desired_flows);
    let mut flow_set: HashSet<(u64, u64)> = HashSet::new();
    let max_flows = t.host_count as usize * (t.host_count as usize - 1) - excluded_edges.len();
    let target_flows = desired_flows.min(max_flows);
    while flows.len() < target_flows {
        let src = rng.random_range(0..t.host_count);
        let dst = rng.random_range(0..t.host_count);
        if src == dst || excluded_edges.contains(&(src, dst)) {
            continue;
        }
        if flow_set.insert((src, dst)) {
            flows.push((src, dst));
        }
    }

    let total_background = t.benign_session_rate * t.horizon_buckets;
    for _ in 0..total_background {
        let (src, dst) = flows[rng.random_range(0..flows.len())];
        let port = POPULAR_PORTS[rng.random_range(0..POPULAR_PORTS.len())];
        let time = rng.random_range(0..horizon_seconds);
        sessions.push(benign_session(&mut rng, time, src, dst, port));
    }

    if let Some(scan) = &t.scan {
        if scan.port_count < 1 || scan.port_count > 1000 {
            return Err(Error::invalid("scan.port_count must be 1..=1000"));
        }
        if scan.target >= t.host_count {
            return Err(Error::invalid(format!(
                "scan.target {} outside host range 0..{}",
                scan.target, t.host_count
            )));
        }
        let scanner = if scan.target == t.host_count - 1 {
            t.host_count - 2
        } else {
            t.host_count - 1
        };
        let mut ports: BTreeSet<u16> = BTreeSet::new();
        while (ports.len() as u64) < scan.port_count {
            let port = rng.random_range(19_000..=64_000u16);
            if !POPULAR_PORTS.contains(&port) {
                ports.insert(port);
            }
        }
        let bucket_start = (t.horizon_buckets as i64 / 2) * BUCKET_SECONDS;
        for (i, port) in ports.iter().enumerate() {
            let offset = (i as i64 * (BUCKET_SECONDS - 1)) / scan.port_count as i64;
            sessions.push(TrafficSession {
                min_start_time: bucket_start + offset,
                src_index: scanner,
                dst_index: scan.target,
                src_port: rng.random_range(1024..=60000u16),
                dst_port: *port,
                tvolume: rng.random_range(40..=120u64),
                rtvolume: rng.random_range(0..=60u64),
                pkt: rng.random_range(1..=3u64),
                rpkt: rng.random_range(0..=2u64),
                cnt: 1,
                failed_num: 1,
                path: "tcp".to_string(),
            });
        }
        ground_truth.scanner_sources.push(scanner);
    }

    if !ground_truth.planted_path.is_empty() {
        let base = (t.horizon_buckets as i64 / 4) * BUCKET_SECONDS;
        for (i, hop) in ground_truth.planted_path.windows(2).enumerate() {
            let mut s = benign_session(&mut rng, base + i as i64 * 30, hop[0], hop[1], 445);
            s.path = "tcp".to_string();
            sessions.push(s);
        }
    }

    if let Some(bindshell) = &t.bindshell {
        if bindshell.window_gap_seconds < 1
            || bindshell.window_gap_seconds > DEFAULT_WINDOW_SECONDS
        {
            return Err(Error::invalid(format!(
                "window_gap_seconds must be 1..={DEFAULT_WINDOW_SECONDS} so the default pairing window recovers the planted pair"
            )));
        }
        let source = rng.random_range(0..t.host_count);
        let destination = loop {
            let d = rng.random_range(0..t.host_count);
            if d != source {
                break d;
            }
        };
        let phase1_port = 445u16;
        let phase2_port = loop {
            let p = rng.random_range(30_000..=60_000u16);
            if p != phase1_port && !POPULAR_PORTS.contains(&p) {
                break p;
            }
        };
        let base = (t.horizon_buckets as i64 * 3 / 4) * BUCKET_SECONDS;
        let t1 = base + rng.random_range(0..300i64);
        let t2 = t1 + bindshell.window_gap_seconds;
        let mut phase1 = benign_session(&mut rng, t1, source, destination, phase1_port);
        phase1.tvolume = rng.random_range(500..=2_000u64);
        let mut phase2 = benign_session(&mut rng, t2, source, destination, phase2_port);
        phase2.tvolume = rng.random_range(5_000..=50_000u64);
        sessions.push(phase1);
        sessions.push(phase2);
        ground_truth.planted_bindshell_pairs.push(BindShellKey {
            source,
            destination,
            dst_port_phase1: phase1_port,
            dst_port_phase2: phase2_port,
            start_time_phase1: t1,
            start_time_phase2: t2,
        });
    }

    sessions.sort_by(|a, b| {
        (
            a.min_start_time,
            a.src_index,
            a.dst_index,
            a.src_port,
            a.dst_port,
            &a.path,
        )
            .cmp(&(
                b.min_start_time,
                b.src_index,
                b.dst_index,
                b.src_port,
                b.dst_port,
                &b.path,
            ))
    });

    Ok(TrafficScenario {
        sessions,
        ground_truth,
    })
}
