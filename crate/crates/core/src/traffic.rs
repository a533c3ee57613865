//! Traffic analytics: ten-minute session bucketing, a smoothed first-order
//! access-pattern graph for path probabilities, and a port-combination
//! probability model for stealth-scan scoring.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::model::TrafficSession;

/// Bucket width of the traffic data set.
pub const BUCKET_SECONDS: i64 = 600;

/// Aggregation key: a session row belongs to bucket
/// [600 * bucket_index, 600 * (bucket_index + 1)).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BucketKey {
    pub bucket_index: i64,
    pub src_index: u64,
    pub dst_index: u64,
    pub src_port: u16,
    pub dst_port: u16,
    pub path: String,
}

impl BucketKey {
    pub fn of(session: &TrafficSession) -> Self {
        BucketKey {
            bucket_index: session.min_start_time.div_euclid(BUCKET_SECONDS),
            src_index: session.src_index,
            dst_index: session.dst_index,
            src_port: session.src_port,
            dst_port: session.dst_port,
            path: session.path.clone(),
        }
    }
}

/// Aggregates sessions into 10-minute buckets: one row per key, with counts
/// and volumes summed and the minimum start time kept. Output is sorted by
/// (bucket_index, src_index, dst_index, src_port, dst_port, path); running
/// it on its own output is a fixed point.
pub fn bucketize(sessions: &[TrafficSession]) -> Vec<TrafficSession> {
    let mut groups: BTreeMap<BucketKey, TrafficSession> = BTreeMap::new();
    for s in sessions {
        let key = BucketKey::of(s);
        match groups.get_mut(&key) {
            Some(acc) => {
                acc.min_start_time = acc.min_start_time.min(s.min_start_time);
                acc.tvolume += s.tvolume;
                acc.rtvolume += s.rtvolume;
                acc.pkt += s.pkt;
                acc.rpkt += s.rpkt;
                acc.cnt += s.cnt;
                acc.failed_num += s.failed_num;
            }
            None => {
                groups.insert(key, s.clone());
            }
        }
    }
    groups.into_values().collect()
}

/// Directed host-to-host access graph with additive smoothing: edge weights
/// are summed session counts and every transition row normalizes to one over
/// the full node set.
#[derive(Debug, Clone)]
pub struct AccessGraph {
    nodes: BTreeSet<u64>,
    edges: BTreeMap<(u64, u64), u64>,
    out_weight: BTreeMap<u64, u64>,
    alpha: f64,
}

impl AccessGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = u64> + '_ {
        self.nodes.iter().copied()
    }

    pub fn contains(&self, host: u64) -> bool {
        self.nodes.contains(&host)
    }

    pub fn edge_weight(&self, src: u64, dst: u64) -> u64 {
        self.edges.get(&(src, dst)).copied().unwrap_or(0)
    }

    pub fn out_weight(&self, src: u64) -> u64 {
        self.out_weight.get(&src).copied().unwrap_or(0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Observed out-edges of `src` with their weights.
    pub fn out_edges(&self, src: u64) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.edges
            .range((src, u64::MIN)..=(src, u64::MAX))
            .map(|(&(_, dst), &w)| (dst, w))
    }

    /// Smoothed transition probability
    /// P(dst | src) = (w(src,dst) + alpha) / (W(src) + alpha * |V|).
    pub fn transition_prob(&self, src: u64, dst: u64) -> Result<f64> {
        for host in [src, dst] {
            if !self.contains(host) {
                return Err(Error::UnknownHost(host));
            }
        }
        let w = self.edge_weight(src, dst) as f64;
        let total = self.out_weight(src) as f64;
        let v = self.node_count() as f64;
        Ok((w + self.alpha) / (total + self.alpha * v))
    }
}

/// Builds the access graph over all hosts appearing as source or destination;
/// w(u,v) sums `cnt` over sessions u -> v.
pub fn build_access_graph(sessions: &[TrafficSession], alpha: f64) -> Result<AccessGraph> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid("alpha must be positive and finite"));
    }
    let mut graph = AccessGraph {
        nodes: BTreeSet::new(),
        edges: BTreeMap::new(),
        out_weight: BTreeMap::new(),
        alpha,
    };
    for s in sessions {
        graph.nodes.insert(s.src_index);
        graph.nodes.insert(s.dst_index);
        *graph.edges.entry((s.src_index, s.dst_index)).or_insert(0) += s.cnt;
        *graph.out_weight.entry(s.src_index).or_insert(0) += s.cnt;
    }
    Ok(graph)
}

/// Log-probability of traversing `path` under the graph's smoothed
/// first-order transition model. A single-node path scores 0; hosts absent
/// from the graph and empty paths are errors.
pub fn path_log_probability(graph: &AccessGraph, path: &[u64]) -> Result<f64> {
    if path.is_empty() {
        return Err(Error::invalid("path is empty"));
    }
    for &host in path {
        if !graph.contains(host) {
            return Err(Error::UnknownHost(host));
        }
    }
    let mut log_prob = 0.0;
    for hop in path.windows(2) {
        log_prob += graph.transition_prob(hop[0], hop[1])?.ln();
    }
    Ok(log_prob)
}

/// Destination-port access model: one observation per distinct
/// (src, dst, dst_port, bucket), with additive smoothing and one reserved
/// cell for unseen ports.
#[derive(Debug, Clone)]
pub struct PortModel {
    counts: BTreeMap<u16, u64>,
    observations: u64,
    alpha: f64,
}

impl PortModel {
    /// Total observations N.
    pub fn observations(&self) -> u64 {
        self.observations
    }

    /// Number of distinct ports observed (U).
    pub fn universe(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn count(&self, port: u16) -> u64 {
        self.counts.get(&port).copied().unwrap_or(0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn iter(&self) -> impl Iterator<Item = (u16, u64)> + '_ {
        self.counts.iter().map(|(&p, &c)| (p, c))
    }

    /// Smoothed access probability
    /// p(port) = (count + alpha) / (N + alpha * (U + 1)); the +1 reserves
    /// probability mass for unseen ports.
    pub fn port_prob(&self, port: u16) -> Result<f64> {
        if self.observations == 0 {
            return Err(Error::invalid("port model has no observations"));
        }
        let denom = self.observations as f64 + self.alpha * (self.universe() as f64 + 1.0);
        Ok((self.count(port) as f64 + self.alpha) / denom)
    }
}

/// Fits the port model by counting distinct (src, dst, dst_port, bucket)
/// tuples.
pub fn fit_port_model(sessions: &[TrafficSession], alpha: f64) -> Result<PortModel> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid("alpha must be positive and finite"));
    }
    let mut observed: HashSet<(u64, u64, u16, i64)> = HashSet::new();
    let mut counts: BTreeMap<u16, u64> = BTreeMap::new();
    for s in sessions {
        let bucket = s.min_start_time.div_euclid(BUCKET_SECONDS);
        if observed.insert((s.src_index, s.dst_index, s.dst_port, bucket)) {
            *counts.entry(s.dst_port).or_insert(0) += 1;
        }
    }
    Ok(PortModel {
        observations: observed.len() as u64,
        counts,
        alpha,
    })
}

/// Negative log-probability of a source accessing this set of ports; larger
/// means more suspicious. Errors on an unfitted model or an empty port set.
pub fn scan_score(model: &PortModel, accessed_ports: &BTreeSet<u16>) -> Result<f64> {
    if model.observations() == 0 {
        return Err(Error::invalid("port model has no observations"));
    }
    if accessed_ports.is_empty() {
        return Err(Error::invalid("accessed port set is empty"));
    }
    let mut score = 0.0;
    for &port in accessed_ports {
        score -= model.port_prob(port)?.ln();
    }
    Ok(score)
}

/// One scored (source, window) row.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRankEntry {
    pub src_index: u64,
    pub window_start: i64,
    pub score: f64,
}

/// Scores the distinct destination-port set of every (source, window) group
/// and ranks them by descending score, ties broken by ascending source index
/// then window start. `window_seconds` must be a positive multiple of 600.
pub fn rank_sources(
    model: &PortModel,
    sessions: &[TrafficSession],
    window_seconds: i64,
) -> Result<Vec<ScanRankEntry>> {
    if window_seconds < BUCKET_SECONDS || window_seconds % BUCKET_SECONDS != 0 {
        return Err(Error::invalid(format!(
            "window_seconds must be a positive multiple of {BUCKET_SECONDS}"
        )));
    }
    let mut port_sets: BTreeMap<(u64, i64), BTreeSet<u16>> = BTreeMap::new();
    for s in sessions {
        let window = s.min_start_time.div_euclid(window_seconds);
        port_sets
            .entry((s.src_index, window))
            .or_default()
            .insert(s.dst_port);
    }
    let mut entries = Vec::with_capacity(port_sets.len());
    for ((src_index, window), ports) in port_sets {
        entries.push(ScanRankEntry {
            src_index,
            window_start: window * window_seconds,
            score: scan_score(model, &ports)?,
        });
    }
    entries.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.src_index.cmp(&b.src_index))
            .then(a.window_start.cmp(&b.window_start))
    });
    Ok(entries)
}
