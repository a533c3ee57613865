//! Label generation and detection features for cyber-security data sets:
//! operator-domain pivoting over malware communications, host similarity
//! labeling through resolve/signature joins, traffic bucketing with scan and
//! lateral-movement scoring, two-phase bind-shell candidate features, byte
//! n-gram histograms, and imbalance-aware evaluation — plus a seeded
//! synthetic generator with planted ground truth for verifying all of it.

pub mod bindshell;
pub mod error;
pub mod eval;
pub mod io;
pub mod model;
pub mod ngram;
pub mod pivot;
pub mod synth;
pub mod traffic;

pub use error::{Error, Result};
pub use model::{
    CommunicationRecord, FileRecord, HostSignature, Label, PairLabel, TrafficSession, Verdict,
    VerdictRecord,
};
pub use ngram::NgramHistogram;
pub use pivot::{HostPairMode, PivotConfig, ResolveMap};
pub use synth::{GroundTruth, ScenarioSpec};
