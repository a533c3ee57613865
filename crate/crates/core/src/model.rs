//! Record schemas: file identities, malware communications, host service
//! signatures, aggregated traffic sessions, verdicts, and labeled pairs.

use std::collections::BTreeMap;
use std::net::Ipv4Addr;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Returns true when `s` is exactly `len` lowercase hex characters.
pub fn is_lower_hex(s: &str, len: usize) -> bool {
    s.len() == len && s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
}

pub(crate) fn check_sha256(s: &str) -> std::result::Result<(), String> {
    if is_lower_hex(s, 64) {
        Ok(())
    } else {
        Err(format!("`{s}` is not a 64-char lowercase hex sha256"))
    }
}

pub(crate) fn check_md5(s: &str) -> std::result::Result<(), String> {
    if is_lower_hex(s, 32) {
        Ok(())
    } else {
        Err(format!("`{s}` is not a 32-char lowercase hex md5"))
    }
}

/// Lowercases and validates a domain name: non-empty, no whitespace, no tabs.
pub(crate) fn normalize_domain(s: &str) -> std::result::Result<String, String> {
    if s.is_empty() {
        return Err("domain is empty".to_string());
    }
    if s.chars().any(|c| c.is_whitespace()) {
        return Err(format!("domain `{s}` contains whitespace"));
    }
    Ok(s.to_ascii_lowercase())
}

/// Validates an IPv4 dotted quad and returns its canonical string form.
pub(crate) fn check_ipv4(s: &str) -> std::result::Result<String, String> {
    match Ipv4Addr::from_str(s) {
        Ok(ip) => Ok(ip.to_string()),
        Err(_) => Err(format!("`{s}` is not an IPv4 dotted quad")),
    }
}

pub(crate) fn check_field_text(
    s: &str,
    what: &'static str,
) -> std::result::Result<(), String> {
    if s.is_empty() {
        return Err(format!("{what} is empty"));
    }
    if s.contains(['\t', '\n', '\r']) {
        return Err(format!("{what} `{s}` contains a tab or line break"));
    }
    Ok(())
}

/// One file identity row: cryptographic hashes, fuzzy hash, and size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileRecord {
    pub sha256: String,
    pub md5: String,
    pub ssdeep: String,
    pub size: u64,
}

impl FileRecord {
    pub fn new(sha256: String, md5: String, ssdeep: String, size: u64) -> Result<Self> {
        check_sha256(&sha256).map_err(Error::invalid)?;
        check_md5(&md5).map_err(Error::invalid)?;
        check_field_text(&ssdeep, "ssdeep").map_err(Error::invalid)?;
        Ok(FileRecord {
            sha256,
            md5,
            ssdeep,
            size,
        })
    }
}

/// One observed (malware, domain, resolved ip) contact; the pivoting substrate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunicationRecord {
    pub sha256: String,
    /// Stored lowercase.
    pub domain: String,
    /// IPv4 dotted quad, canonical form.
    pub ip: String,
}

impl CommunicationRecord {
    pub fn new(sha256: String, domain: &str, ip: &str) -> Result<Self> {
        check_sha256(&sha256).map_err(Error::invalid)?;
        let domain = normalize_domain(domain).map_err(Error::invalid)?;
        let ip = check_ipv4(ip).map_err(Error::invalid)?;
        Ok(CommunicationRecord { sha256, domain, ip })
    }
}

/// Scan result for one internet host: the original JSON line plus the
/// extracted port -> service-descriptor map. `raw` is preserved verbatim so
/// that read -> write round-trips byte-identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostSignature {
    pub ip: String,
    pub services: BTreeMap<u16, BTreeMap<String, String>>,
    pub raw: String,
}

impl HostSignature {
    /// Builds a signature from parts, synthesizing a canonical JSON `raw`
    /// that parses back to the same ip and services.
    pub fn from_parts(ip: &str, services: BTreeMap<u16, BTreeMap<String, String>>) -> Result<Self> {
        let ip = check_ipv4(ip).map_err(Error::invalid)?;
        let data: Vec<serde_json::Value> = services
            .iter()
            .map(|(port, desc)| {
                let mut obj = serde_json::Map::new();
                obj.insert("port".to_string(), serde_json::json!(port));
                for (k, v) in desc {
                    obj.insert(k.clone(), serde_json::Value::String(v.clone()));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let raw = serde_json::to_string(&serde_json::json!({ "ip_str": ip, "data": data }))?;
        Ok(HostSignature { ip, services, raw })
    }

    /// Parses one JSON-lines object: requires an `ip_str` (or `ip`) field and
    /// a `data` service array whose elements carry a `port` in 0-65535.
    /// String-valued service fields are kept; other scalars are stringified;
    /// nested values are ignored. Returns (field, message) on failure.
    pub fn parse_json(line: &str) -> std::result::Result<Self, (&'static str, String)> {
        let value: serde_json::Value =
            serde_json::from_str(line).map_err(|e| ("json", e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or(("json", "line is not a JSON object".to_string()))?;
        let ip_raw = obj
            .get("ip_str")
            .or_else(|| obj.get("ip"))
            .and_then(|v| v.as_str())
            .ok_or(("ip_str", "missing string field `ip_str`".to_string()))?;
        let ip = check_ipv4(ip_raw).map_err(|m| ("ip_str", m))?;
        let data = obj
            .get("data")
            .and_then(|v| v.as_array())
            .ok_or(("data", "missing service array `data`".to_string()))?;
        let mut services: BTreeMap<u16, BTreeMap<String, String>> = BTreeMap::new();
        for entry in data {
            let service = entry
                .as_object()
                .ok_or(("data", "service entry is not an object".to_string()))?;
            let port = service
                .get("port")
                .and_then(|v| v.as_u64())
                .filter(|p| *p <= u64::from(u16::MAX))
                .ok_or(("port", "service entry lacks a port in 0-65535".to_string()))?;
            let mut desc = BTreeMap::new();
            for (k, v) in service {
                if k == "port" {
                    continue;
                }
                match v {
                    serde_json::Value::String(s) => {
                        desc.insert(k.clone(), s.clone());
                    }
                    serde_json::Value::Number(n) => {
                        desc.insert(k.clone(), n.to_string());
                    }
                    serde_json::Value::Bool(b) => {
                        desc.insert(k.clone(), b.to_string());
                    }
                    _ => {}
                }
            }
            // Duplicate ports on one host: the last entry wins.
            services.insert(port as u16, desc);
        }
        Ok(HostSignature {
            ip,
            services,
            raw: line.to_string(),
        })
    }
}

/// One aggregated network session row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrafficSession {
    /// Seconds relative to the 1912-06-23T00:00:00Z epoch.
    pub min_start_time: i64,
    pub src_index: u64,
    pub dst_index: u64,
    pub src_port: u16,
    pub dst_port: u16,
    /// Bytes from source to destination.
    pub tvolume: u64,
    /// Bytes from destination to source.
    pub rtvolume: u64,
    pub pkt: u64,
    pub rpkt: u64,
    /// Number of sessions aggregated into this row; at least 1.
    pub cnt: u64,
    pub failed_num: u64,
    /// Protocol.
    pub path: String,
}

impl TrafficSession {
    /// Checks the schema invariants; returns a message on violation.
    pub fn check(&self) -> std::result::Result<(), String> {
        if self.cnt < 1 {
            return Err("cnt must be at least 1".to_string());
        }
        if self.failed_num > self.cnt {
            return Err(format!(
                "failed_num {} exceeds cnt {}",
                self.failed_num, self.cnt
            ));
        }
        check_field_text(&self.path, "path")?;
        Ok(())
    }
}

/// Verdict assigned to a file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Benign,
    Malware,
    Greyware,
}

impl Verdict {
    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Verdict::Benign),
            1 => Some(Verdict::Malware),
            2 => Some(Verdict::Greyware),
            _ => None,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Verdict::Benign => 0,
            Verdict::Malware => 1,
            Verdict::Greyware => 2,
        }
    }
}

/// Verdict plus family tags for one file index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerdictRecord {
    pub file_index: u64,
    pub verdict: Verdict,
    /// Possibly empty; a sample may carry several family tags.
    pub family_tags: Vec<String>,
}

impl VerdictRecord {
    pub fn new(file_index: u64, verdict: Verdict, family_tags: Vec<String>) -> Result<Self> {
        for tag in &family_tags {
            check_field_text(tag, "family tag").map_err(Error::invalid)?;
        }
        Ok(VerdictRecord {
            file_index,
            verdict,
            family_tags,
        })
    }
}

/// Positive/negative marker for a labeled pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Negative,
    Positive,
}

/// A labeled entity pair in canonical form: `entity_a` is byte-wise smaller
/// than `entity_b`, so each unordered pair has exactly one representation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairLabel {
    pub entity_a: String,
    pub entity_b: String,
    pub label: Label,
    /// The mutual domain in multi-class mode; positives only.
    pub class_key: Option<String>,
}

impl PairLabel {
    /// Canonicalizes the pair; the two keys must differ.
    pub fn new(a: String, b: String, label: Label, class_key: Option<String>) -> Result<Self> {
        if a == b {
            return Err(Error::invalid(format!("pair of `{a}` with itself")));
        }
        if class_key.is_some() && label != Label::Positive {
            return Err(Error::invalid("class_key is only valid on positive pairs"));
        }
        let (entity_a, entity_b) = if a < b { (a, b) } else { (b, a) };
        Ok(PairLabel {
            entity_a,
            entity_b,
            label,
            class_key,
        })
    }

    pub fn key(&self) -> (&str, &str) {
        (&self.entity_a, &self.entity_b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_validation() {
        assert!(check_sha256(&"a".repeat(64)).is_ok());
        assert!(check_sha256("xyz").is_err());
        assert!(check_sha256(&"A".repeat(64)).is_err());
    }

    #[test]
    fn domain_is_lowercased() {
        let r = CommunicationRecord::new("ab".repeat(32), "Evil.Example", "10.0.0.1").unwrap();
        assert_eq!(r.domain, "evil.example");
    }

    #[test]
    fn bad_ip_rejected() {
        assert!(CommunicationRecord::new("ab".repeat(32), "evil.example", "10.0.0.256").is_err());
        assert!(CommunicationRecord::new("ab".repeat(32), "evil.example", "10.0.0").is_err());
    }

    #[test]
    fn pair_label_canonical_order() {
        let p = PairLabel::new("b".into(), "a".into(), Label::Positive, None).unwrap();
        assert_eq!(p.entity_a, "a");
        assert_eq!(p.entity_b, "b");
        assert!(PairLabel::new("a".into(), "a".into(), Label::Negative, None).is_err());
    }

    #[test]
    fn class_key_requires_positive() {
        assert!(PairLabel::new("a".into(), "b".into(), Label::Negative, Some("d".into())).is_err());
    }

    #[test]
    fn traffic_invariants() {
        let mut s = TrafficSession {
            min_start_time: 600,
            src_index: 1,
            dst_index: 2,
            src_port: 5000,
            dst_port: 445,
            tvolume: 100,
            rtvolume: 50,
            pkt: 3,
            rpkt: 2,
            cnt: 1,
            failed_num: 0,
            path: "tcp".to_string(),
        };
        assert!(s.check().is_ok());
        s.failed_num = 2;
        assert!(s.check().is_err());
        s.failed_num = 0;
        s.cnt = 0;
        assert!(s.check().is_err());
    }

    #[test]
    fn verdict_codes() {
        assert_eq!(Verdict::from_code(2), Some(Verdict::Greyware));
        assert_eq!(Verdict::from_code(7), None);
        assert_eq!(Verdict::Malware.code(), 1);
    }

    #[test]
    fn signature_from_parts_parses_back() {
        let mut services = BTreeMap::new();
        let mut desc = BTreeMap::new();
        desc.insert("product".to_string(), "OpenSSH".to_string());
        desc.insert("version".to_string(), "8.2".to_string());
        services.insert(22u16, desc);
        let sig = HostSignature::from_parts("10.0.0.1", services.clone()).unwrap();
        let parsed = HostSignature::parse_json(&sig.raw).unwrap();
        assert_eq!(parsed, sig);
        assert_eq!(parsed.services, services);
    }

    #[test]
    fn signature_requires_port_range() {
        let line = r#"{"ip_str":"10.0.0.1","data":[{"port":70000}]}"#;
        assert!(HostSignature::parse_json(line).is_err());
        let line = r#"{"ip_str":"10.0.0.1","data":[{"banner":"x"}]}"#;
        assert!(HostSignature::parse_json(line).is_err());
    }
}
