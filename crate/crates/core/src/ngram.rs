//! Byte n-gram histograms: sliding-window extraction and prefix
//! marginalization to lower-order grams.
//!
//! Grams are raw bytes, 1 to 4 per gram. The text form used by the
//! tab-separated file format writes printable ASCII bytes as-is and escapes
//! everything else (plus `:` and `\`) as `\xNN` lowercase hex.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Largest supported gram length.
pub const MAX_GRAM_LEN: usize = 4;

/// Per-file map from n-byte gram to occurrence count (every count >= 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgramHistogram {
    n: usize,
    counts: BTreeMap<Vec<u8>, u64>,
}

impl NgramHistogram {
    /// Empty histogram for grams of length `n` (1 to 4).
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GRAM_LEN {
            return Err(Error::invalid(format!(
                "gram length {n} outside 1-{MAX_GRAM_LEN}"
            )));
        }
        Ok(NgramHistogram {
            n,
            counts: BTreeMap::new(),
        })
    }

    /// Builds a histogram from an explicit count map, validating key lengths
    /// and positivity.
    pub fn from_counts(n: usize, counts: BTreeMap<Vec<u8>, u64>) -> Result<Self> {
        let mut hist = NgramHistogram::new(n)?;
        for (gram, count) in counts {
            if gram.len() != n {
                return Err(Error::invalid(format!(
                    "gram `{}` has {} bytes, expected {n}",
                    escape_gram(&gram),
                    gram.len()
                )));
            }
            if count == 0 {
                return Err(Error::invalid(format!(
                    "gram `{}` has a non-positive count",
                    escape_gram(&gram)
                )));
            }
            hist.counts.insert(gram, count);
        }
        Ok(hist)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &BTreeMap<Vec<u8>, u64> {
        &self.counts
    }

    pub fn get(&self, gram: &[u8]) -> u64 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Sum of all counts.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Adds another histogram of the same gram length into this one.
    pub fn merge(&mut self, other: &NgramHistogram) -> Result<()> {
        if other.n != self.n {
            return Err(Error::invalid(format!(
                "cannot merge {}-gram histogram into {}-gram histogram",
                other.n, self.n
            )));
        }
        for (gram, count) in &other.counts {
            *self.counts.entry(gram.clone()).or_insert(0) += count;
        }
        Ok(())
    }
}

/// Counts every contiguous window of `n` bytes in `content`.
pub fn extract_ngrams(content: &[u8], n: usize) -> Result<NgramHistogram> {
    let mut hist = NgramHistogram::new(n)?;
    if content.len() < n {
        return Err(Error::invalid(format!(
            "content of {} bytes is shorter than gram length {n}",
            content.len()
        )));
    }
    for window in content.windows(n) {
        *hist.counts.entry(window.to_vec()).or_insert(0) += 1;
    }
    Ok(hist)
}

/// Sums counts over the first `k` bytes of each gram, producing a k-gram
/// histogram. Total count is preserved, so the result differs from a direct
/// k-gram extraction only in the last n-k windows of the original file.
pub fn marginalize_prefix(hist: &NgramHistogram, k: usize) -> Result<NgramHistogram> {
    if k == 0 || k >= hist.n {
        return Err(Error::invalid(format!(
            "prefix length {k} outside 1-{}",
            hist.n.saturating_sub(1)
        )));
    }
    let mut out = NgramHistogram::new(k)?;
    for (gram, count) in &hist.counts {
        *out.counts.entry(gram[..k].to_vec()).or_insert(0) += count;
    }
    Ok(out)
}

/// Encodes gram bytes for the text file format.
pub fn escape_gram(gram: &[u8]) -> String {
    let mut out = String::with_capacity(gram.len());
    for &b in gram {
        if (0x21..=0x7e).contains(&b) && b != b':' && b != b'\\' {
            out.push(b as char);
        } else {
            out.push_str(&format!("\\x{b:02x}"));
        }
    }
    out
}

/// Decodes the text form back to raw bytes; returns a message on malformed
/// escapes or stray non-ASCII input.
pub fn unescape_gram(text: &str) -> std::result::Result<Vec<u8>, String> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'\\' {
            if i + 4 > bytes.len() {
                return Err(format!("truncated escape in `{text}`"));
            }
            if bytes[i + 1] != b'x' {
                return Err(format!("bad escape `\\{}`", bytes[i + 1] as char));
            }
            let hex = std::str::from_utf8(&bytes[i + 2..i + 4])
                .map_err(|_| format!("bad escape digits in `{text}`"))?;
            let value =
                u8::from_str_radix(hex, 16).map_err(|_| format!("bad escape digits `{hex}`"))?;
            out.push(value);
            i += 4;
        } else if (0x21..=0x7e).contains(&b) && b != b':' {
            out.push(b);
            i += 1;
        } else {
            return Err(format!("unescaped byte 0x{b:02x} in gram `{text}`"));
        }
    }
    Ok(out)
}
