//! Readers and writers for the tab-separated and JSON-lines wire formats,
//! plus the relative-time epoch conversion.
//!
//! All files are UTF-8 with LF line endings. Writers emit no header line and
//! never a trailing tab. Readers tolerate one optional header line,
//! recognized by the schema's first column name in the first field (a header
//! first field can never be a valid record field in any of these formats).

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read, Write};

use chrono::{DateTime, TimeZone, Utc};

use crate::error::{Error, Result};
use crate::model::{
    check_ipv4, check_md5, check_sha256, normalize_domain, CommunicationRecord, FileRecord,
    HostSignature, Label, PairLabel, TrafficSession, Verdict, VerdictRecord,
};
use crate::ngram::{escape_gram, unescape_gram, NgramHistogram, MAX_GRAM_LEN};
use crate::pivot::ResolveMap;

/// The traffic data set epoch: Alan Turing's birthday.
pub fn turing_epoch() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(1912, 6, 23, 0, 0, 0).unwrap()
}

/// Converts seconds relative to the 1912-06-23T00:00:00Z epoch to a UTC
/// timestamp. Negative input is an error.
pub fn to_absolute_time(relative_seconds: i64) -> Result<DateTime<Utc>> {
    if relative_seconds < 0 {
        return Err(Error::invalid(format!(
            "relative time {relative_seconds} is negative"
        )));
    }
    turing_epoch()
        .checked_add_signed(chrono::Duration::seconds(relative_seconds))
        .ok_or_else(|| Error::invalid(format!("relative time {relative_seconds} overflows")))
}

fn lines_of<R: Read>(reader: R) -> std::io::Lines<BufReader<R>> {
    BufReader::new(reader).lines()
}

fn parse_u64(line: usize, field: &'static str, text: &str) -> Result<u64> {
    text.parse::<u64>()
        .map_err(|_| Error::parse(line, field, format!("`{text}` is not a non-negative integer")))
}

fn parse_i64(line: usize, field: &'static str, text: &str) -> Result<i64> {
    text.parse::<i64>()
        .map_err(|_| Error::parse(line, field, format!("`{text}` is not an integer")))
}

fn parse_port(line: usize, field: &'static str, text: &str) -> Result<u16> {
    text.parse::<u16>()
        .map_err(|_| Error::parse(line, field, format!("`{text}` is not a port in 0-65535")))
}

/// Reads the communication data set: `sha256 TAB domain TAB ip` per line.
/// Domains are lowercased; duplicate (sha256, domain) lines collapse to the
/// first occurrence.
pub fn read_communications<R: Read>(reader: R) -> Result<Vec<CommunicationRecord>> {
    let mut records = Vec::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    for (idx, line) in lines_of(reader).enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if line_no == 1 && matches!(fields[0], "sha256" | "sha-256" | "sha_256" | "SHA256") {
            continue;
        }
        if fields.len() != 3 {
            return Err(Error::parse(
                line_no,
                "line",
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        check_sha256(fields[0]).map_err(|m| Error::parse(line_no, "sha256", m))?;
        let domain = normalize_domain(fields[1]).map_err(|m| Error::parse(line_no, "domain", m))?;
        let ip = check_ipv4(fields[2]).map_err(|m| Error::parse(line_no, "ip", m))?;
        if seen.insert((fields[0].to_string(), domain.clone())) {
            records.push(CommunicationRecord {
                sha256: fields[0].to_string(),
                domain,
                ip,
            });
        }
    }
    Ok(records)
}

pub fn write_communications<W: Write>(w: &mut W, records: &[CommunicationRecord]) -> Result<()> {
    for r in records {
        writeln!(w, "{}\t{}\t{}", r.sha256, r.domain, r.ip)?;
    }
    Ok(())
}

const TRAFFIC_COLUMNS: [&str; 12] = [
    "min_start_time",
    "src_index",
    "dst_index",
    "src_port",
    "dst_port",
    "tvolume",
    "rtvolume",
    "pkt",
    "rpkt",
    "cnt",
    "failed_num",
    "path",
];

/// Reads the traffic data set in the 12-column order, enforcing the numeric
/// invariants (`cnt >= 1`, `failed_num <= cnt`).
pub fn read_traffic<R: Read>(reader: R) -> Result<Vec<TrafficSession>> {
    let mut sessions = Vec::new();
    for (idx, line) in lines_of(reader).enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if line_no == 1 && fields[0] == "min_start_time" {
            continue;
        }
        if fields.len() != TRAFFIC_COLUMNS.len() {
            return Err(Error::parse(
                line_no,
                "line",
                format!(
                    "expected {} tab-separated fields, found {}",
                    TRAFFIC_COLUMNS.len(),
                    fields.len()
                ),
            ));
        }
        let session = TrafficSession {
            min_start_time: parse_i64(line_no, "min_start_time", fields[0])?,
            src_index: parse_u64(line_no, "src_index", fields[1])?,
            dst_index: parse_u64(line_no, "dst_index", fields[2])?,
            src_port: parse_port(line_no, "src_port", fields[3])?,
            dst_port: parse_port(line_no, "dst_port", fields[4])?,
            tvolume: parse_u64(line_no, "tvolume", fields[5])?,
            rtvolume: parse_u64(line_no, "rtvolume", fields[6])?,
            pkt: parse_u64(line_no, "pkt", fields[7])?,
            rpkt: parse_u64(line_no, "rpkt", fields[8])?,
            cnt: parse_u64(line_no, "cnt", fields[9])?,
            failed_num: parse_u64(line_no, "failed_num", fields[10])?,
            path: fields[11].to_string(),
        };
        session.check().map_err(|m| Error::invariant(line_no, m))?;
        sessions.push(session);
    }
    Ok(sessions)
}

pub fn write_traffic<W: Write>(w: &mut W, sessions: &[TrafficSession]) -> Result<()> {
    for s in sessions {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            s.min_start_time,
            s.src_index,
            s.dst_index,
            s.src_port,
            s.dst_port,
            s.tvolume,
            s.rtvolume,
            s.pkt,
            s.rpkt,
            s.cnt,
            s.failed_num,
            s.path
        )?;
    }
    Ok(())
}

/// Reads the n-gram data set: `index TAB gram:count TAB gram:count ...`.
/// All grams on a line must decode to the same byte length (1 to 4); counts
/// must be positive; a gram may not repeat within a line.
pub fn read_ngram_file<R: Read>(reader: R) -> Result<Vec<(u64, NgramHistogram)>> {
    let mut out = Vec::new();
    for (idx, line) in lines_of(reader).enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if line_no == 1 && matches!(fields[0], "file_index" | "index") {
            continue;
        }
        let file_index = parse_u64(line_no, "file_index", fields[0])?;
        if fields.len() < 2 {
            return Err(Error::parse(
                line_no,
                "line",
                "expected at least one gram:count entry",
            ));
        }
        let mut counts: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
        let mut gram_len = 0usize;
        for entry in &fields[1..] {
            let (gram_text, count_text) = entry.split_once(':').ok_or_else(|| {
                Error::parse(line_no, "gram", format!("`{entry}` lacks a `:` separator"))
            })?;
            let gram = unescape_gram(gram_text).map_err(|m| Error::parse(line_no, "gram", m))?;
            if gram.is_empty() || gram.len() > MAX_GRAM_LEN {
                return Err(Error::parse(
                    line_no,
                    "gram",
                    format!("gram `{gram_text}` has {} bytes, expected 1-4", gram.len()),
                ));
            }
            if gram_len == 0 {
                gram_len = gram.len();
            } else if gram.len() != gram_len {
                return Err(Error::parse(
                    line_no,
                    "gram",
                    format!(
                        "gram `{gram_text}` has {} bytes but the line began with {gram_len}-byte grams",
                        gram.len()
                    ),
                ));
            }
            let count = parse_u64(line_no, "count", count_text)?;
            if count == 0 {
                return Err(Error::invariant(
                    line_no,
                    format!("gram `{gram_text}` has a non-positive count"),
                ));
            }
            if counts.insert(gram, count).is_some() {
                return Err(Error::invariant(
                    line_no,
                    format!("gram `{gram_text}` is duplicated on the line"),
                ));
            }
        }
        let hist = NgramHistogram::from_counts(gram_len, counts)?;
        out.push((file_index, hist));
    }
    Ok(out)
}

/// Writes n-gram lines with grams in ascending byte order, so that
/// read -> write -> read is a fixed point and re-writing is idempotent.
pub fn write_ngram_file<W: Write>(w: &mut W, entries: &[(u64, NgramHistogram)]) -> Result<()> {
    for (file_index, hist) in entries {
        if hist.counts().is_empty() {
            return Err(Error::invalid(format!(
                "histogram for index {file_index} is empty; the line format needs at least one gram"
            )));
        }
        write!(w, "{file_index}")?;
        for (gram, count) in hist.counts() {
            write!(w, "\t{}:{}", escape_gram(gram), count)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Reads the verdict data set: `index TAB verdict [TAB tag]*`.
pub fn read_verdicts<R: Read>(reader: R) -> Result<Vec<VerdictRecord>> {
    let mut out = Vec::new();
    for (idx, line) in lines_of(reader).enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if line_no == 1 && matches!(fields[0], "file_index" | "index") {
            continue;
        }
        if fields.len() < 2 {
            return Err(Error::parse(
                line_no,
                "line",
                format!("expected at least 2 tab-separated fields, found {}", fields.len()),
            ));
        }
        let file_index = parse_u64(line_no, "file_index", fields[0])?;
        let code = fields[1].parse::<u8>().map_err(|_| {
            Error::parse(line_no, "verdict", format!("`{}` is not an integer", fields[1]))
        })?;
        let verdict = Verdict::from_code(code).ok_or_else(|| {
            Error::invariant(line_no, format!("verdict code {code} outside {{0,1,2}}"))
        })?;
        let mut tags = Vec::new();
        for tag in &fields[2..] {
            if tag.is_empty() {
                return Err(Error::parse(line_no, "family_tag", "empty family tag"));
            }
            tags.push(tag.to_string());
        }
        out.push(VerdictRecord {
            file_index,
            verdict,
            family_tags: tags,
        });
    }
    Ok(out)
}

pub fn write_verdicts<W: Write>(w: &mut W, records: &[VerdictRecord]) -> Result<()> {
    for r in records {
        write!(w, "{}\t{}", r.file_index, r.verdict.code())?;
        for tag in &r.family_tags {
            write!(w, "\t{tag}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Reads the malware identity data set: `sha256 TAB md5 TAB ssdeep TAB size`.
pub fn read_file_records<R: Read>(reader: R) -> Result<Vec<FileRecord>> {
    let mut out = Vec::new();
    for (idx, line) in lines_of(reader).enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if line_no == 1 && matches!(fields[0], "sha256" | "sha-256" | "sha_256" | "SHA256") {
            continue;
        }
        if fields.len() != 4 {
            return Err(Error::parse(
                line_no,
                "line",
                format!("expected 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        check_sha256(fields[0]).map_err(|m| Error::parse(line_no, "sha256", m))?;
        check_md5(fields[1]).map_err(|m| Error::parse(line_no, "md5", m))?;
        if fields[2].is_empty() {
            return Err(Error::parse(line_no, "ssdeep", "empty ssdeep hash"));
        }
        let size = parse_u64(line_no, "size", fields[3])?;
        out.push(FileRecord {
            sha256: fields[0].to_string(),
            md5: fields[1].to_string(),
            ssdeep: fields[2].to_string(),
            size,
        });
    }
    Ok(out)
}

pub fn write_file_records<W: Write>(w: &mut W, records: &[FileRecord]) -> Result<()> {
    for r in records {
        writeln!(w, "{}\t{}\t{}\t{}", r.sha256, r.md5, r.ssdeep, r.size)?;
    }
    Ok(())
}

/// Reads host signatures as JSON lines, keeping each original line verbatim.
pub fn read_host_signatures<R: Read>(reader: R) -> Result<Vec<HostSignature>> {
    let mut out = Vec::new();
    for (idx, line) in lines_of(reader).enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let sig = HostSignature::parse_json(&line)
            .map_err(|(field, m)| Error::parse(line_no, field, m))?;
        out.push(sig);
    }
    Ok(out)
}

/// Writes host signatures back out byte-identically.
pub fn write_host_signatures<W: Write>(w: &mut W, signatures: &[HostSignature]) -> Result<()> {
    for sig in signatures {
        writeln!(w, "{}", sig.raw)?;
    }
    Ok(())
}

/// Reads labeled pairs: `entity_a TAB entity_b TAB label(0|1) [TAB class_key]`.
pub fn read_pair_labels<R: Read>(reader: R) -> Result<Vec<PairLabel>> {
    let mut out = Vec::new();
    for (idx, line) in lines_of(reader).enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if line_no == 1 && fields.len() >= 3 && fields[0] == "entity_a" && fields[1] == "entity_b" {
            continue;
        }
        if fields.len() < 3 || fields.len() > 4 {
            return Err(Error::parse(
                line_no,
                "line",
                format!("expected 3 or 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let label = match fields[2] {
            "1" => Label::Positive,
            "0" => Label::Negative,
            other => {
                return Err(Error::parse(
                    line_no,
                    "label",
                    format!("`{other}` is not 0 or 1"),
                ))
            }
        };
        let class_key = fields.get(3).map(|s| s.to_string());
        if class_key.is_some() && label == Label::Negative {
            return Err(Error::invariant(
                line_no,
                "class_key present on a negative pair",
            ));
        }
        if fields[0] >= fields[1] {
            return Err(Error::invariant(
                line_no,
                format!("pair `{}`,`{}` is not in canonical order", fields[0], fields[1]),
            ));
        }
        out.push(PairLabel {
            entity_a: fields[0].to_string(),
            entity_b: fields[1].to_string(),
            label,
            class_key,
        });
    }
    Ok(out)
}

pub fn write_pair_labels<W: Write>(w: &mut W, labels: &[PairLabel]) -> Result<()> {
    for l in labels {
        let code = match l.label {
            Label::Positive => 1,
            Label::Negative => 0,
        };
        match &l.class_key {
            Some(key) => writeln!(w, "{}\t{}\t{}\t{}", l.entity_a, l.entity_b, code, key)?,
            None => writeln!(w, "{}\t{}\t{}", l.entity_a, l.entity_b, code)?,
        }
    }
    Ok(())
}

/// Reads a domain resolution snapshot: `domain TAB ip` per line, repeated
/// domains accumulating into one IP set.
pub fn read_resolve_map<R: Read>(reader: R) -> Result<ResolveMap> {
    let mut map = ResolveMap::default();
    for (idx, line) in lines_of(reader).enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if line_no == 1 && fields.len() == 2 && fields[0] == "domain" && fields[1] == "ip" {
            continue;
        }
        if fields.len() != 2 {
            return Err(Error::parse(
                line_no,
                "line",
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        }
        let domain = normalize_domain(fields[0]).map_err(|m| Error::parse(line_no, "domain", m))?;
        let ip = check_ipv4(fields[1]).map_err(|m| Error::parse(line_no, "ip", m))?;
        map.insert(domain, ip);
    }
    Ok(map)
}

pub fn write_resolve_map<W: Write>(w: &mut W, map: &ResolveMap) -> Result<()> {
    for (domain, ips) in map.iter() {
        for ip in ips {
            writeln!(w, "{domain}\t{ip}")?;
        }
    }
    Ok(())
}

/// Reads scored predictions: `key TAB score` per line; keys must be unique.
pub fn read_scored_predictions<R: Read>(reader: R) -> Result<Vec<(String, f64)>> {
    let mut out: Vec<(String, f64)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, line) in lines_of(reader).enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if line_no == 1 && fields.len() == 2 && fields[0] == "key" && fields[1] == "score" {
            continue;
        }
        if fields.len() != 2 {
            return Err(Error::parse(
                line_no,
                "line",
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        }
        let score = fields[1].parse::<f64>().map_err(|_| {
            Error::parse(line_no, "score", format!("`{}` is not a number", fields[1]))
        })?;
        if !score.is_finite() {
            return Err(Error::parse(line_no, "score", "score is not finite"));
        }
        if !seen.insert(fields[0].to_string()) {
            return Err(Error::invariant(
                line_no,
                format!("key `{}` appears twice", fields[0]),
            ));
        }
        out.push((fields[0].to_string(), score));
    }
    Ok(out)
}

/// Reads ground-truth labels for evaluation: `key TAB label` with label in
/// {1, 0, ?}.
pub fn read_truth_labels<R: Read>(reader: R) -> Result<BTreeMap<String, crate::eval::TruthLabel>> {
    use crate::eval::TruthLabel;
    let mut out = BTreeMap::new();
    for (idx, line) in lines_of(reader).enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if line_no == 1 && fields.len() == 2 && fields[0] == "key" && fields[1] == "label" {
            continue;
        }
        if fields.len() != 2 {
            return Err(Error::parse(
                line_no,
                "line",
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        }
        let label = match fields[1] {
            "1" => TruthLabel::Positive,
            "0" => TruthLabel::Negative,
            "?" => TruthLabel::Unknown,
            other => {
                return Err(Error::parse(
                    line_no,
                    "label",
                    format!("`{other}` is not one of 1, 0, ?"),
                ))
            }
        };
        out.insert(fields[0].to_string(), label);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn comm_line(n: usize) -> String {
        format!("{}\tevil.example\t10.0.0.1", "a".repeat(n))
    }

    #[test]
    fn communications_single_record() {
        let input = comm_line(64) + "\n";
        let records = read_communications(input.as_bytes()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].sha256, "a".repeat(64));
        assert_eq!(records[0].domain, "evil.example");
        assert_eq!(records[0].ip, "10.0.0.1");
    }

    #[test]
    fn communications_dedup_keeps_first_ip() {
        let sha = "b".repeat(64);
        let input = format!("{sha}\tevil.example\t10.0.0.1\n{sha}\tevil.example\t10.0.0.2\n");
        let records = read_communications(input.as_bytes()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].ip, "10.0.0.1");
    }

    #[test]
    fn communications_bad_hash_is_error_at_line_one() {
        let err = read_communications("xyz\tevil.example\t10.0.0.1".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, field, .. } => {
                assert_eq!(line, 1);
                assert_eq!(field, "sha256");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn communications_header_accepted() {
        let input = format!("sha256\tdomain\tip\n{}\n", comm_line(64));
        assert_eq!(read_communications(input.as_bytes()).unwrap().len(), 1);
    }

    #[test]
    fn traffic_example_row() {
        let input = "600\t1\t2\t5000\t445\t100\t50\t3\t2\t1\t0\ttcp\n";
        let sessions = read_traffic(input.as_bytes()).unwrap();
        assert_eq!(sessions.len(), 1);
        assert_eq!(sessions[0].cnt, 1);
        assert_eq!(sessions[0].dst_port, 445);
    }

    #[test]
    fn traffic_failed_over_cnt_is_invariant_error() {
        let input = "600\t1\t2\t5000\t445\t100\t50\t3\t2\t2\t3\ttcp\n";
        match read_traffic(input.as_bytes()).unwrap_err() {
            Error::Invariant { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn traffic_empty_stream() {
        assert!(read_traffic("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn traffic_non_integer_is_parse_error() {
        let input = "600\t1\t2\t5000\t445\tabc\t50\t3\t2\t1\t0\ttcp\n";
        match read_traffic(input.as_bytes()).unwrap_err() {
            Error::Parse { field, .. } => assert_eq!(field, "tvolume"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn ngram_example_line() {
        let entries = read_ngram_file("7\t0123:1\t1234:1\n".as_bytes()).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].0, 7);
        assert_eq!(entries[0].1.get(b"0123"), 1);
        assert_eq!(entries[0].1.get(b"1234"), 1);
    }

    #[test]
    fn ngram_write_is_canonical_and_idempotent() {
        let entries = read_ngram_file("7\t1234:1\t0123:1\n".as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_ngram_file(&mut buf, &entries).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "7\t0123:1\t1234:1\n");
        let again = read_ngram_file(&buf[..]).unwrap();
        let mut buf2 = Vec::new();
        write_ngram_file(&mut buf2, &again).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn ngram_zero_count_rejected() {
        match read_ngram_file("7\t0123:0\n".as_bytes()).unwrap_err() {
            Error::Invariant { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn ngram_duplicate_gram_rejected() {
        assert!(read_ngram_file("7\t0123:1\t0123:2\n".as_bytes()).is_err());
    }

    #[test]
    fn ngram_escaped_bytes_round_trip() {
        let line = "3\t\\x00\\x09:2\t\\x3a2:4\n";
        let entries = read_ngram_file(line.as_bytes()).unwrap();
        assert_eq!(entries[0].1.n(), 2);
        assert_eq!(entries[0].1.get(&[0x00, 0x09]), 2);
        assert_eq!(entries[0].1.get(&[b':', b'2']), 4);
    }

    #[test]
    fn verdict_lines() {
        let input = "3\t1\tramnit\tallaple\n4\t0\n";
        let records = read_verdicts(input.as_bytes()).unwrap();
        assert_eq!(records[0].verdict, Verdict::Malware);
        assert_eq!(records[0].family_tags, vec!["ramnit", "allaple"]);
        assert_eq!(records[1].verdict, Verdict::Benign);
        assert!(records[1].family_tags.is_empty());
    }

    #[test]
    fn verdict_out_of_range() {
        match read_verdicts("5\t7\n".as_bytes()).unwrap_err() {
            Error::Invariant { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn epoch_conversions() {
        assert_eq!(
            to_absolute_time(0).unwrap().to_rfc3339(),
            "1912-06-23T00:00:00+00:00"
        );
        assert_eq!(
            to_absolute_time(86_400).unwrap().to_rfc3339(),
            "1912-06-24T00:00:00+00:00"
        );
        assert!(to_absolute_time(-1).is_err());
    }

    #[test]
    fn epoch_100_year_offset_matches_independent_calendar() {
        // Civil-days oracle, independent of chrono: count days since
        // 1912-06-23 with explicit Gregorian leap rules.
        fn is_leap(y: i64) -> bool {
            (y % 4 == 0 && y % 100 != 0) || y % 400 == 0
        }
        fn days_in_month(y: i64, m: u32) -> i64 {
            match m {
                1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
                4 | 6 | 9 | 11 => 30,
                2 => {
                    if is_leap(y) {
                        29
                    } else {
                        28
                    }
                }
                _ => unreachable!(),
            }
        }
        let mut days = 3_155_673_600i64 / 86_400;
        let (mut y, mut m, mut d) = (1912i64, 6u32, 23i64);
        while days > 0 {
            d += 1;
            if d > days_in_month(y, m) {
                d = 1;
                m += 1;
                if m > 12 {
                    m = 1;
                    y += 1;
                }
            }
            days -= 1;
        }
        assert_eq!((y, m, d), (2012, 6, 22));
        assert_eq!(
            to_absolute_time(3_155_673_600).unwrap().to_rfc3339(),
            "2012-06-22T00:00:00+00:00"
        );
    }

    #[test]
    fn signature_lines_round_trip_verbatim() {
        let input = "{\"ip_str\": \"10.0.0.1\",  \"data\": [{\"port\": 22, \"product\": \"OpenSSH\"}]}\n";
        let sigs = read_host_signatures(input.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_host_signatures(&mut buf, &sigs).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), input);
    }

    #[test]
    fn signature_missing_ip_is_error() {
        match read_host_signatures("{\"data\": []}\n".as_bytes()).unwrap_err() {
            Error::Parse { line, field, .. } => {
                assert_eq!(line, 1);
                assert_eq!(field, "ip_str");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn pair_labels_round_trip() {
        let labels = vec![
            PairLabel::new("a".into(), "b".into(), Label::Positive, Some("d1".into())).unwrap(),
            PairLabel::new("c".into(), "b".into(), Label::Negative, None).unwrap(),
        ];
        let mut buf = Vec::new();
        write_pair_labels(&mut buf, &labels).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "a\tb\t1\td1\nb\tc\t0\n"
        );
        assert_eq!(read_pair_labels(&buf[..]).unwrap(), labels);
    }

    #[test]
    fn pair_labels_reject_non_canonical() {
        assert!(read_pair_labels("b\ta\t1\n".as_bytes()).is_err());
    }

    #[test]
    fn resolve_map_round_trip() {
        let input = "evil.example\t10.0.0.2\nevil.example\t10.0.0.1\nother.example\t10.1.0.1\n";
        let map = read_resolve_map(input.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_resolve_map(&mut buf, &map).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "evil.example\t10.0.0.1\nevil.example\t10.0.0.2\nother.example\t10.1.0.1\n"
        );
    }

    #[test]
    fn scored_predictions_reject_duplicates() {
        assert!(read_scored_predictions("k\t1.0\nk\t2.0\n".as_bytes()).is_err());
        let preds = read_scored_predictions("k\t1.5\nj\t-0.25\n".as_bytes()).unwrap();
        assert_eq!(preds.len(), 2);
    }

    #[test]
    fn truth_labels_parse() {
        let labels = read_truth_labels("a\t1\nb\t0\nc\t?\n".as_bytes()).unwrap();
        assert_eq!(labels.len(), 3);
        assert!(read_truth_labels("a\t2\n".as_bytes()).is_err());
    }
}
