//! Multiple trace alignment for process-mining event logs.
//!
//! An alignment places every trace of a log in its own row and inserts gaps
//! so that shared activities line up in columns. Quality is measured by the
//! sum-of-pairs score, the total Hamming distance over all row pairs; lower
//! is better.
//!
//! The engine builds a cheap initial alignment and then improves it by
//! repeatedly removing a subset of rows and merging it back optimally with
//! a profile dynamic program. Each such step can only lower the score:
//!
//! ```
//! use pima::{converge, ConvergencePolicy, Initializer, Log};
//!
//! let log = Log::from_sequences(["a b c d", "a c b d", "a b d", "b c d"]);
//! let run = converge(&log, Initializer::RandomSequential, &ConvergencePolicy::default()).unwrap();
//! assert!(run.alignment.preserves_traces(&log));
//! for pair in run.records.windows(2) {
//!     assert!(pair[1].pairs_score <= pair[0].pairs_score);
//! }
//! ```
//!
//! The guide under `book/` walks through each part with runnable snippets.

pub mod consensus;
mod error;
pub mod init;
pub mod logio;
pub mod model;
pub mod profile;
pub mod refine;
pub mod scoring;

pub use consensus::{consensus, ConsensusEntry, ConsensusSequence};
pub use error::{Error, Result};
pub use init::{
    guide_tree_baseline, order_by_activity_sum, order_by_length, order_random, sequential_merge,
    GuideOrder, GuideTree, Initializer, Linkage,
};
pub use model::{ActivityAlphabet, ActivityId, Alignment, Log, Trace};
pub use profile::{
    align_profiles, align_profiles_with_table, brute_force_min_merge, DpTable, Move,
};
pub use refine::{
    converge, converge_with, multi_trace_candidates, multi_trace_pass, refine_with,
    single_trace_pass, ConvergencePolicy, FreqRange, IterationKind, IterationRecord, PassOutcome,
    Run,
};
pub use scoring::{sps_columnar, sps_pairwise, SpsScore};

// Compiles and runs the guide's snippets as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scoring.md")]
    mod scoring {}
    #[doc = include_str!("../../../book/src/profile-alignment.md")]
    mod profile_alignment {}
    #[doc = include_str!("../../../book/src/initialization.md")]
    mod initialization {}
    #[doc = include_str!("../../../book/src/refinement.md")]
    mod refinement {}
    #[doc = include_str!("../../../book/src/output.md")]
    mod output {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
