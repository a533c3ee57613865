//! Property checks for the traffic analytics: bucketize conservation against
//! a group-by recount, idempotence, transition-row normalization, and the
//! scan-score orderings.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pivotlab_core::io::{read_traffic, write_traffic};
use pivotlab_core::model::TrafficSession;
use pivotlab_core::traffic::{
    bucketize, build_access_graph, fit_port_model, path_log_probability, rank_sources, scan_score,
    BucketKey,
};

fn random_sessions(seed: u64, rows: usize) -> Vec<TrafficSession> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows)
        .map(|_| {
            let cnt = rng.random_range(1..=4u64);
            TrafficSession {
                min_start_time: rng.random_range(0..7200i64),
                src_index: rng.random_range(0..6u64),
                dst_index: rng.random_range(0..6u64),
                src_port: rng.random_range(1024..=1030u16),
                dst_port: [80u16, 443, 22, 4444][rng.random_range(0..4usize)],
                tvolume: rng.random_range(0..5000u64),
                rtvolume: rng.random_range(0..5000u64),
                pkt: rng.random_range(0..50u64),
                rpkt: rng.random_range(0..50u64),
                cnt,
                failed_num: rng.random_range(0..=cnt),
                path: if rng.random_bool(0.8) { "tcp" } else { "udp" }.to_string(),
            }
        })
        .collect()
}

#[test]
fn bucketize_conserves_sums_against_group_by_oracle() {
    for seed in 0..50u64 {
        let rows = random_sessions(seed, 120);
        let out = bucketize(&rows);

        // Totals are conserved.
        for f in [
            |s: &TrafficSession| s.cnt,
            |s: &TrafficSession| s.failed_num,
            |s: &TrafficSession| s.tvolume,
            |s: &TrafficSession| s.rtvolume,
            |s: &TrafficSession| s.pkt,
            |s: &TrafficSession| s.rpkt,
        ] {
            let before: u64 = rows.iter().map(f).sum();
            let after: u64 = out.iter().map(f).sum();
            assert_eq!(before, after, "seed {seed}");
        }

        // Per-key sums match an independent group-by recount.
        let mut oracle: BTreeMap<BucketKey, (u64, u64, u64, i64)> = BTreeMap::new();
        for s in &rows {
            let e = oracle
                .entry(BucketKey::of(s))
                .or_insert((0, 0, 0, i64::MAX));
            e.0 += s.cnt;
            e.1 += s.tvolume;
            e.2 += s.pkt;
            e.3 = e.3.min(s.min_start_time);
        }
        assert_eq!(out.len(), oracle.len());
        for s in &out {
            let (cnt, tvolume, pkt, min_time) = oracle[&BucketKey::of(s)];
            assert_eq!(s.cnt, cnt);
            assert_eq!(s.tvolume, tvolume);
            assert_eq!(s.pkt, pkt);
            assert_eq!(s.min_start_time, min_time);
        }
    }
}

#[test]
fn bucketize_fixed_point_byte_identical() {
    for seed in 0..20u64 {
        let rows = random_sessions(seed, 150);
        let once = bucketize(&rows);
        let twice = bucketize(&once);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_traffic(&mut a, &once).unwrap();
        write_traffic(&mut b, &twice).unwrap();
        assert_eq!(a, b, "seed {seed}");
    }
}

#[test]
fn bucketize_output_is_sorted_and_schema_valid() {
    let rows = random_sessions(3, 200);
    let out = bucketize(&rows);
    let keys: Vec<BucketKey> = out.iter().map(BucketKey::of).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let mut buf = Vec::new();
    write_traffic(&mut buf, &out).unwrap();
    assert_eq!(read_traffic(&buf[..]).unwrap(), out);
}

#[test]
fn graph_weights_match_group_by_oracle() {
    let rows = random_sessions(11, 300);
    let graph = build_access_graph(&rows, 1.0).unwrap();
    let mut oracle: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for s in &rows {
        *oracle.entry((s.src_index, s.dst_index)).or_insert(0) += s.cnt;
    }
    for (&(u, v), &w) in &oracle {
        assert_eq!(graph.edge_weight(u, v), w);
    }
    for u in graph.nodes() {
        let expected: u64 = oracle
            .iter()
            .filter(|((src, _), _)| *src == u)
            .map(|(_, w)| w)
            .sum();
        assert_eq!(graph.out_weight(u), expected);
    }
}

#[test]
fn transition_rows_normalize_over_full_node_set() {
    for alpha in [0.25, 1.0, 3.0] {
        let rows = random_sessions(21, 250);
        let graph = build_access_graph(&rows, alpha).unwrap();
        for u in graph.nodes() {
            let total: f64 = graph
                .nodes()
                .map(|v| graph.transition_prob(u, v).unwrap())
                .sum();
            assert!((total - 1.0).abs() < 1e-9, "alpha {alpha} row {u}: {total}");
        }
    }
}

#[test]
fn longer_paths_never_gain_probability() {
    let rows = random_sessions(31, 300);
    let graph = build_access_graph(&rows, 1.0).unwrap();
    let nodes: Vec<u64> = graph.nodes().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let len = rng.random_range(2..=5usize);
        let path: Vec<u64> = (0..len)
            .map(|_| nodes[rng.random_range(0..nodes.len())])
            .collect();
        let full = path_log_probability(&graph, &path).unwrap();
        let prefix = path_log_probability(&graph, &path[..path.len() - 1]).unwrap();
        assert!(full <= prefix + 1e-12);
    }
}

#[test]
fn port_model_counts_match_distinct_tuple_recount() {
    let rows = random_sessions(41, 400);
    let model = fit_port_model(&rows, 1.0).unwrap();
    let mut tuples: HashSet<(u64, u64, u16, i64)> = HashSet::new();
    for s in &rows {
        tuples.insert((
            s.src_index,
            s.dst_index,
            s.dst_port,
            s.min_start_time.div_euclid(600),
        ));
    }
    assert_eq!(model.observations(), tuples.len() as u64);
    let mut per_port: BTreeMap<u16, u64> = BTreeMap::new();
    for (_, _, port, _) in &tuples {
        *per_port.entry(*port).or_insert(0) += 1;
    }
    assert_eq!(model.universe(), per_port.len() as u64);
    for (port, count) in per_port {
        assert_eq!(model.count(port), count);
    }
}

#[test]
fn scan_score_is_permutation_invariant_and_monotone_in_counts() {
    let rows = random_sessions(51, 300);
    let model = fit_port_model(&rows, 1.0).unwrap();
    // Sets are unordered by construction; assembling from different
    // insertion orders scores identically.
    let a: BTreeSet<u16> = [22, 80, 4444].into();
    let b: BTreeSet<u16> = [4444, 22, 80].into();
    assert_eq!(
        scan_score(&model, &a).unwrap(),
        scan_score(&model, &b).unwrap()
    );

    // Raising one port's count (totals held fixed by lowering a port outside
    // the scored set) strictly lowers any score containing it.
    let observation = |i: u64, port: u16| TrafficSession {
        min_start_time: 0,
        src_index: i,
        dst_index: 1000,
        src_port: 1024,
        dst_port: port,
        tvolume: 1,
        rtvolume: 1,
        pkt: 1,
        rpkt: 1,
        cnt: 1,
        failed_num: 0,
        path: "tcp".to_string(),
    };
    let counts_to_sessions = |counts: &[(u16, u64)]| {
        let mut rows = Vec::new();
        let mut i = 0;
        for &(port, count) in counts {
            for _ in 0..count {
                rows.push(observation(i, port));
                i += 1;
            }
        }
        rows
    };
    let base = fit_port_model(&counts_to_sessions(&[(80, 5), (443, 5), (22, 3)]), 1.0).unwrap();
    let boosted = fit_port_model(&counts_to_sessions(&[(80, 6), (443, 4), (22, 3)]), 1.0).unwrap();
    assert_eq!(base.observations(), boosted.observations());
    let scored: BTreeSet<u16> = [80, 22].into();
    assert!(scan_score(&boosted, &scored).unwrap() < scan_score(&base, &scored).unwrap());
}

#[test]
fn rank_sources_window_must_be_bucket_multiple() {
    let rows = random_sessions(61, 50);
    let model = fit_port_model(&rows, 1.0).unwrap();
    assert!(rank_sources(&model, &rows, 600).is_ok());
    assert!(rank_sources(&model, &rows, 1800).is_ok());
    assert!(rank_sources(&model, &rows, 601).is_err());
    assert!(rank_sources(&model, &rows, -600).is_err());
}
