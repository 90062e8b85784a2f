//! Representative re-ranking under partial platform participation.
//!
//! A ranking platform usually sees only the candidates who joined it. When
//! one group joins less than the others, holding each group to its share of
//! the *observed* pool quietly hands that group's places to everyone else.
//! This crate provides the pieces to build, repair, and audit such rankings:
//!
//! * [`model`] — candidate pools, target proportions, rankings.
//! * [`ranker`] — the two representative merge procedures.
//! * [`ideal`] — full-information individual-fair and group-fair baselines.
//! * [`estimator`] — probabilistic re-ranking when only the universal
//!   proportions and per-group activeness are known.
//! * [`metrics`] — per-candidate and per-group fairness verdicts, rank
//!   difference, skew, and the aggregate audit report.
//! * [`sim`] — seeded synthetic sweeps measuring all of the above.
//! * [`io`] — the CSV/JSON/TOML file formats used by the CLI.

pub mod error;
pub mod estimator;
pub mod ideal;
pub mod io;
pub mod metrics;
pub mod model;
mod num;
pub mod ranker;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use estimator::{estimated_individual_rerank, ActivityKind, ActivityModel};
pub use ideal::{group_fair_rerank, individual_fair_rerank};
pub use metrics::{fairness_report, AuditOptions, FairnessReport};
pub use model::{
    partition_groups, ratio_from_pool, within_group_rank, AttributeValue, Candidate, CandidateId,
    CandidatePool, GroupCounts, RankEntry, Ranking, RepresentationRatio,
};
pub use ranker::{detconst_rank, rank_with_policy, representative_rank, MergeKind, MergePolicy, TieBreak};
pub use rng::{derive_seed, SeededRng};
pub use sim::{run_all, ExperimentResult, Manifest, ScenarioConfig};
