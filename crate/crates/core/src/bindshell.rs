//! Two-phase connection pairing and the aggregative candidate feature
//! vector. Candidates come from a (possibly noise-filtered) pairing pass;
//! the aggregative features are always computed against the unfiltered pair
//! population of the whole corpus.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::TrafficSession;

/// Default pairing window between phase-1 and phase-2 starts.
pub const DEFAULT_WINDOW_SECONDS: i64 = 120;

/// Default lookback horizon for the `is_new` host-history feature.
pub const DEFAULT_LOOKBACK_SECONDS: i64 = 7 * 86_400;

/// Relative direction of the follow-up connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairDirection {
    /// Phase 2 repeats A -> B on a different destination port.
    Bind,
    /// Phase 2 reverses direction: B -> A.
    Reverse,
}

/// Two consecutive connections between a source and a destination.
/// `source` and `destination` are the phase-1 endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionPair {
    pub source: u64,
    pub destination: u64,
    pub phase1: TrafficSession,
    pub phase2: TrafficSession,
    pub direction: PairDirection,
}

impl ConnectionPair {
    pub fn dst_port_phase1(&self) -> u16 {
        self.phase1.dst_port
    }

    pub fn dst_port_phase2(&self) -> u16 {
        self.phase2.dst_port
    }

    fn sort_key(
        &self,
    ) -> (
        i64,
        u64,
        u16,
        u16,
        u64,
        i64,
        PairDirection,
        u16,
        u16,
        &str,
        &str,
    ) {
        (
            self.phase1.min_start_time,
            self.source,
            self.dst_port_phase1(),
            self.dst_port_phase2(),
            self.destination,
            self.phase2.min_start_time,
            self.direction,
            self.phase1.src_port,
            self.phase2.src_port,
            &self.phase1.path,
            &self.phase2.path,
        )
    }
}

/// Pluggable pairing predicate standing in for the undisclosed
/// collection-time noise filter; pairs it rejects are dropped and counted.
pub type NoiseFilter<'a> = &'a (dyn Fn(&ConnectionPair) -> bool + Sync);

/// Pairs that passed plus the count removed by the noise filter.
#[derive(Debug, Clone, Default)]
pub struct PairingOutcome {
    pub pairs: Vec<ConnectionPair>,
    pub dropped_by_filter: usize,
}

/// Emits every ordered session pair obeying the pairing rules:
/// bind pairs share source and destination, start within `window_seconds`,
/// and differ in destination port; reverse pairs have phase 2 with source
/// and destination swapped, under the same time rule.
pub fn pair_connections(
    sessions: &[TrafficSession],
    window_seconds: i64,
    noise_filter: Option<NoiseFilter>,
) -> Result<PairingOutcome> {
    if window_seconds <= 0 {
        return Err(Error::invalid("window_seconds must be positive"));
    }
    // Session row indices grouped by (src, dst), ordered by start time.
    let mut groups: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (i, s) in sessions.iter().enumerate() {
        groups.entry((s.src_index, s.dst_index)).or_default().push(i);
    }
    for members in groups.values_mut() {
        members.sort_by_key(|&i| (sessions[i].min_start_time, i));
    }

    let mut pairs = Vec::new();
    let mut emit = |first: usize, second: usize, direction: PairDirection| {
        let p1 = &sessions[first];
        let p2 = &sessions[second];
        pairs.push(ConnectionPair {
            source: p1.src_index,
            destination: p1.dst_index,
            phase1: p1.clone(),
            phase2: p2.clone(),
            direction,
        });
    };

    for (&(src, dst), members) in &groups {
        // Bind: both phases in the same group; the port rule excludes the
        // degenerate self-pair.
        for &first in members {
            let t1 = sessions[first].min_start_time;
            let from = members.partition_point(|&i| sessions[i].min_start_time < t1);
            for &second in &members[from..] {
                if sessions[second].min_start_time > t1 + window_seconds {
                    break;
                }
                if sessions[second].dst_port != sessions[first].dst_port {
                    emit(first, second, PairDirection::Bind);
                }
            }
        }
        // Reverse: phase 2 lives in the mirrored group.
        if let Some(mirror) = groups.get(&(dst, src)) {
            for &first in members {
                let t1 = sessions[first].min_start_time;
                let from = mirror.partition_point(|&i| sessions[i].min_start_time < t1);
                for &second in &mirror[from..] {
                    if sessions[second].min_start_time > t1 + window_seconds {
                        break;
                    }
                    if first != second {
                        emit(first, second, PairDirection::Reverse);
                    }
                }
            }
        }
    }

    let mut dropped = 0usize;
    if let Some(filter) = noise_filter {
        let before = pairs.len();
        pairs.retain(|p| filter(p));
        dropped = before - pairs.len();
    }
    pairs.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(PairingOutcome {
        pairs,
        dropped_by_filter: dropped,
    })
}

/// The whole-period session corpus plus its unfiltered pair population and
/// the aggregate indexes the candidate features are read from.
#[derive(Debug, Clone)]
pub struct BindShellCorpus {
    window_seconds: i64,
    period: (i64, i64),
    pairs: Vec<ConnectionPair>,
    first_seen: HashMap<u64, i64>,
    by_src_p1_hosts: HashMap<(u64, u16), u64>,
    by_src_p1_ports: HashMap<(u64, u16), u64>,
    by_src_p2_hosts: HashMap<(u64, u16), u64>,
    by_src_p2_ports: HashMap<(u64, u16), u64>,
    by_port_pair: HashMap<(u16, u16), u64>,
    by_endpoint_p1: HashMap<(u64, u64), u64>,
    by_endpoint_p2: HashMap<(u64, u64), u64>,
    by_dst_both_ports: HashMap<(u64, u16, u16), u64>,
    by_dst_p1_srcs: HashMap<(u64, u16), u64>,
    by_dst_p1_ports: HashMap<(u64, u16), u64>,
}

fn distinct_counts<K, V>(sets: HashMap<K, HashSet<V>>) -> HashMap<K, u64>
where
    K: std::hash::Hash + Eq,
{
    sets.into_iter().map(|(k, v)| (k, v.len() as u64)).collect()
}

impl BindShellCorpus {
    /// Pairs the full corpus without noise filtering and builds the
    /// aggregate indexes.
    pub fn build(sessions: &[TrafficSession], window_seconds: i64) -> Result<Self> {
        let pairs = pair_connections(sessions, window_seconds, None)?.pairs;

        let mut first_seen: HashMap<u64, i64> = HashMap::new();
        let mut period = (i64::MAX, i64::MIN);
        for s in sessions {
            period.0 = period.0.min(s.min_start_time);
            period.1 = period.1.max(s.min_start_time);
            for host in [s.src_index, s.dst_index] {
                first_seen
                    .entry(host)
                    .and_modify(|t| *t = (*t).min(s.min_start_time))
                    .or_insert(s.min_start_time);
            }
        }

        let mut src_p1_hosts: HashMap<(u64, u16), HashSet<u64>> = HashMap::new();
        let mut src_p1_ports: HashMap<(u64, u16), HashSet<u16>> = HashMap::new();
        let mut src_p2_hosts: HashMap<(u64, u16), HashSet<u64>> = HashMap::new();
        let mut src_p2_ports: HashMap<(u64, u16), HashSet<u16>> = HashMap::new();
        let mut by_port_pair: HashMap<(u16, u16), u64> = HashMap::new();
        let mut endpoint_p1: HashMap<(u64, u64), HashSet<u16>> = HashMap::new();
        let mut endpoint_p2: HashMap<(u64, u64), HashSet<u16>> = HashMap::new();
        let mut dst_both_ports: HashMap<(u64, u16, u16), HashSet<u64>> = HashMap::new();
        let mut dst_p1_srcs: HashMap<(u64, u16), HashSet<u64>> = HashMap::new();
        let mut dst_p1_ports: HashMap<(u64, u16), HashSet<u16>> = HashMap::new();

        for p in &pairs {
            let (src, dst) = (p.source, p.destination);
            let (p1, p2) = (p.dst_port_phase1(), p.dst_port_phase2());
            src_p1_hosts.entry((src, p1)).or_default().insert(dst);
            src_p1_ports.entry((src, p1)).or_default().insert(p2);
            src_p2_hosts.entry((src, p2)).or_default().insert(dst);
            src_p2_ports.entry((src, p2)).or_default().insert(p1);
            *by_port_pair.entry((p1, p2)).or_insert(0) += 1;
            endpoint_p1.entry((src, dst)).or_default().insert(p1);
            endpoint_p2.entry((src, dst)).or_default().insert(p2);
            dst_both_ports.entry((dst, p1, p2)).or_default().insert(src);
            dst_p1_srcs.entry((dst, p1)).or_default().insert(src);
            dst_p1_ports.entry((dst, p1)).or_default().insert(p2);
        }

        Ok(BindShellCorpus {
            window_seconds,
            period,
            pairs,
            first_seen,
            by_src_p1_hosts: distinct_counts(src_p1_hosts),
            by_src_p1_ports: distinct_counts(src_p1_ports),
            by_src_p2_hosts: distinct_counts(src_p2_hosts),
            by_src_p2_ports: distinct_counts(src_p2_ports),
            by_port_pair,
            by_endpoint_p1: distinct_counts(endpoint_p1),
            by_endpoint_p2: distinct_counts(endpoint_p2),
            by_dst_both_ports: distinct_counts(dst_both_ports),
            by_dst_p1_srcs: distinct_counts(dst_p1_srcs),
            by_dst_p1_ports: distinct_counts(dst_p1_ports),
        })
    }

    pub fn unfiltered_pairs(&self) -> &[ConnectionPair] {
        &self.pairs
    }

    pub fn window_seconds(&self) -> i64 {
        self.window_seconds
    }

    /// Earliest and latest session start in the corpus.
    pub fn period(&self) -> (i64, i64) {
        self.period
    }
}

/// Feature-computation knobs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    /// A host counts as previously seen when it appears in the corpus
    /// earlier than this many seconds before phase 1.
    pub lookback_seconds: i64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            lookback_seconds: DEFAULT_LOOKBACK_SECONDS,
        }
    }
}

/// One candidate row: per-session fields copied from the two phases plus the
/// aggregative counts over the unfiltered pair population. The label is -1
/// (missing) unless a labeling source fills it in downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct BindShellCandidate {
    pub index: u64,
    pub label: i8,
    pub source_host_id: u64,
    pub is_new: bool,
    pub s_phase1_initiators_hosts: u64,
    pub s_phase2_initiators_hosts: u64,
    pub s_phase1_initiators_ports: u64,
    pub s_phase2_initiators_ports: u64,
    pub s_port_count: u64,
    pub s_src_port_phase1: u16,
    pub s_src_port_phase2: u16,
    pub s_pair_phase1_cnt: u64,
    pub s_pair_phase2_cnt: u64,
    pub s_start_time_phase1: i64,
    pub s_start_time_phase2: i64,
    pub s_duration_phase1: i64,
    pub s_duration_phase2: i64,
    pub s_dst_port_phase1: u16,
    pub s_dst_port_phase2: u16,
    pub s_volume_phase1: u64,
    pub s_volume_phase2: u64,
    pub s_rvolume_phase1: u64,
    pub s_rvolume_phase2: u64,
    pub s_path_phase1: String,
    pub s_path_phase2: String,
    pub s_spfss_unique_srcs: u64,
    pub s_arb_host_count: u64,
    pub s_arb_port_count: u64,
}

/// Column order of the candidate TSV.
pub const CANDIDATE_COLUMNS: [&str; 28] = [
    "index",
    "label",
    "source_host_id",
    "is_new",
    "s_phase1_initiators_hosts",
    "s_phase2_initiators_hosts",
    "s_phase1_initiators_ports",
    "s_phase2_initiators_ports",
    "s_port_count",
    "s_src_port_phase1",
    "s_src_port_phase2",
    "s_pair_phase1_cnt",
    "s_pair_phase2_cnt",
    "s_start_time_phase1",
    "s_start_time_phase2",
    "s_duration_phase1",
    "s_duration_phase2",
    "s_dst_port_phase1",
    "s_dst_port_phase2",
    "s_volume_phase1",
    "s_volume_phase2",
    "s_rvolume_phase1",
    "s_rvolume_phase2",
    "s_path_phase1",
    "s_path_phase2",
    "s_spfss_unique_srcs",
    "s_arb_host_count",
    "s_arb_port_count",
];

/// Computes the full feature vector for every candidate against the corpus's
/// unfiltered pair population. Output is sorted by (s_start_time_phase1,
/// source_host_id, s_dst_port_phase1, s_dst_port_phase2) and indexed in that
/// order.
pub fn compute_candidate_features(
    candidates: &[ConnectionPair],
    corpus: &BindShellCorpus,
    cfg: &FeatureConfig,
) -> Result<Vec<BindShellCandidate>> {
    let (start, end) = corpus.period();
    for c in candidates {
        if c.phase1.min_start_time > c.phase2.min_start_time {
            return Err(Error::invalid("candidate phase 2 starts before phase 1"));
        }
        for t in [c.phase1.min_start_time, c.phase2.min_start_time] {
            if t < start || t > end {
                return Err(Error::invalid(format!(
                    "candidate references a session at {t} outside the corpus period {start}..={end}"
                )));
            }
        }
    }

    let mut ordered: Vec<&ConnectionPair> = candidates.iter().collect();
    ordered.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));

    let rows: Vec<BindShellCandidate> = ordered
        .par_iter()
        .enumerate()
        .map(|(index, pair)| {
            let (src, dst) = (pair.source, pair.destination);
            let (p1, p2) = (pair.dst_port_phase1(), pair.dst_port_phase2());
            let t1 = pair.phase1.min_start_time;
            let horizon = t1 - cfg.lookback_seconds;
            let seen_before = |host: u64| {
                corpus
                    .first_seen
                    .get(&host)
                    .is_some_and(|&first| first < horizon)
            };
            let count = |map: &HashMap<(u64, u16), u64>, key: (u64, u16)| {
                map.get(&key).copied().unwrap_or(0)
            };
            BindShellCandidate {
                index: index as u64,
                label: -1,
                source_host_id: src,
                is_new: !seen_before(src) && !seen_before(dst),
                s_phase1_initiators_hosts: count(&corpus.by_src_p1_hosts, (src, p1)),
                s_phase2_initiators_hosts: count(&corpus.by_src_p2_hosts, (src, p2)),
                s_phase1_initiators_ports: count(&corpus.by_src_p1_ports, (src, p1)),
                s_phase2_initiators_ports: count(&corpus.by_src_p2_ports, (src, p2)),
                s_port_count: corpus.by_port_pair.get(&(p1, p2)).copied().unwrap_or(0),
                s_src_port_phase1: pair.phase1.src_port,
                s_src_port_phase2: pair.phase2.src_port,
                s_pair_phase1_cnt: corpus.by_endpoint_p1.get(&(src, dst)).copied().unwrap_or(0),
                s_pair_phase2_cnt: corpus.by_endpoint_p2.get(&(src, dst)).copied().unwrap_or(0),
                s_start_time_phase1: t1,
                s_start_time_phase2: pair.phase2.min_start_time,
                // The traffic schema carries no session end time.
                s_duration_phase1: 0,
                s_duration_phase2: 0,
                s_dst_port_phase1: p1,
                s_dst_port_phase2: p2,
                s_volume_phase1: pair.phase1.tvolume,
                s_volume_phase2: pair.phase2.tvolume,
                s_rvolume_phase1: pair.phase1.rtvolume,
                s_rvolume_phase2: pair.phase2.rtvolume,
                s_path_phase1: pair.phase1.path.clone(),
                s_path_phase2: pair.phase2.path.clone(),
                s_spfss_unique_srcs: corpus
                    .by_dst_both_ports
                    .get(&(dst, p1, p2))
                    .copied()
                    .unwrap_or(0),
                s_arb_host_count: count(&corpus.by_dst_p1_srcs, (dst, p1)),
                s_arb_port_count: count(&corpus.by_dst_p1_ports, (dst, p1)),
            }
        })
        .collect();
    Ok(rows)
}

/// Writes candidates as TSV with the header naming every column; booleans as
/// 1/0.
pub fn write_candidates<W: std::io::Write>(
    w: &mut W,
    candidates: &[BindShellCandidate],
) -> Result<()> {
    writeln!(w, "{}", CANDIDATE_COLUMNS.join("\t"))?;
    for c in candidates {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            c.index,
            c.label,
            c.source_host_id,
            u8::from(c.is_new),
            c.s_phase1_initiators_hosts,
            c.s_phase2_initiators_hosts,
            c.s_phase1_initiators_ports,
            c.s_phase2_initiators_ports,
            c.s_port_count,
            c.s_src_port_phase1,
            c.s_src_port_phase2,
            c.s_pair_phase1_cnt,
            c.s_pair_phase2_cnt,
            c.s_start_time_phase1,
            c.s_start_time_phase2,
            c.s_duration_phase1,
            c.s_duration_phase2,
            c.s_dst_port_phase1,
            c.s_dst_port_phase2,
            c.s_volume_phase1,
            c.s_volume_phase2,
            c.s_rvolume_phase1,
            c.s_rvolume_phase2,
            c.s_path_phase1,
            c.s_path_phase2,
            c.s_spfss_unique_srcs,
            c.s_arb_host_count,
            c.s_arb_port_count,
        )?;
    }
    Ok(())
}
