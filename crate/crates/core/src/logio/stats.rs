use serde::Serialize;

use crate::consensus::ConsensusSequence;
use crate::model::ActivityAlphabet;
use crate::refine::{ConvergencePolicy, IterationKind, IterationRecord};
use crate::scoring::SpsScore;

/// Printed into every stats document so readers know which score is which.
pub const SCORE_CONVENTION: &str =
    "pairs_score counts each unordered row pair once; doubled_score = 2 * pairs_score";

/// Everything a stats document describes.
#[derive(Clone, Copy, Debug)]
pub struct StatsInput<'a> {
    pub initializer: &'a str,
    pub seed: u64,
    pub policy: &'a ConvergencePolicy,
    pub records: &'a [IterationRecord],
    pub final_score: SpsScore,
    pub final_length: usize,
    pub rows: usize,
    pub consensus: Option<&'a ConsensusSequence>,
    pub alphabet: &'a ActivityAlphabet,
}

#[derive(Serialize)]
struct Document<'a> {
    score_convention: &'static str,
    initializer: &'a str,
    seed: u64,
    policy: &'a ConvergencePolicy,
    iterations: Vec<Iteration>,
    #[serde(rename = "final")]
    final_: Final,
    consensus: Option<Consensus<'a>>,
}

#[derive(Serialize)]
struct Iteration {
    iteration: usize,
    kind: IterationKind,
    pairs_score: u64,
    doubled_score: u64,
    length: usize,
    elapsed_ms: Option<f64>,
    cumulative_ms: Option<f64>,
    align_ops: usize,
}

#[derive(Serialize)]
struct Final {
    pairs_score: u64,
    doubled_score: u64,
    length: usize,
    rows: usize,
    iterations: usize,
}

#[derive(Serialize)]
struct Consensus<'a> {
    threshold: f64,
    length: usize,
    source_length: usize,
    retained_activities: usize,
    columns: Vec<ConsensusColumn<'a>>,
}

#[derive(Serialize)]
struct ConsensusColumn<'a> {
    column: usize,
    activity: &'a str,
    count: usize,
    fraction: f64,
}

fn millis(d: std::time::Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

/// Renders the run statistics as pretty-printed JSON.
///
/// With `timings` off, `elapsed_ms` and `cumulative_ms` are `null` so that
/// identical runs produce identical bytes.
pub fn write_stats_json(input: &StatsInput<'_>, timings: bool) -> String {
    let mut cumulative = std::time::Duration::ZERO;
    let iterations = input
        .records
        .iter()
        .map(|r| {
            cumulative += r.elapsed;
            Iteration {
                iteration: r.index,
                kind: r.kind,
                pairs_score: r.pairs_score,
                doubled_score: 2 * r.pairs_score,
                length: r.length,
                elapsed_ms: timings.then(|| millis(r.elapsed)),
                cumulative_ms: timings.then(|| millis(cumulative)),
                align_ops: r.align_ops,
            }
        })
        .collect();
    let consensus = input.consensus.map(|c| Consensus {
        threshold: c.threshold,
        length: c.len(),
        source_length: c.source_length,
        retained_activities: c.retained_activities(),
        columns: c
            .entries
            .iter()
            .map(|e| ConsensusColumn {
                column: e.column + 1,
                activity: input.alphabet.label(e.activity),
                count: e.count,
                fraction: e.fraction,
            })
            .collect(),
    });
    let doc = Document {
        score_convention: SCORE_CONVENTION,
        initializer: input.initializer,
        seed: input.seed,
        policy: input.policy,
        iterations,
        final_: Final {
            pairs_score: input.final_score.pairs_score,
            doubled_score: input.final_score.doubled_score,
            length: input.final_length,
            rows: input.rows,
            iterations: input.records.len().saturating_sub(1),
        },
        consensus,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("stats document serializes");
    text.push('\n');
    text
}
