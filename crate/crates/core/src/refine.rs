//! Iterative refinement: single-trace passes, multi-trace passes and the
//! convergence controller that alternates them.
//!
//! Every realignment splits the current alignment into a row subset and its
//! complement and merges them back optimally. The old arrangement is always
//! one feasible merge, so no realignment can raise the score.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::init::Initializer;
use crate::model::{Alignment, Log};
use crate::profile::{merge, realign_row};
use crate::scoring::sps_columnar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IterationKind {
    Init,
    Single,
    Multi,
}

/// Telemetry for one iteration of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationRecord {
    pub index: usize,
    pub kind: IterationKind,
    pub pairs_score: u64,
    /// Number of alignment columns.
    pub length: usize,
    pub elapsed: Duration,
    /// Profile merges performed during this iteration.
    pub align_ops: usize,
}

/// Inclusive column-frequency window for multi-trace candidacy, as fractions of N.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FreqRange {
    pub low: f64,
    pub high: f64,
}

impl FreqRange {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&low) || !(0.0..=1.0).contains(&high) || low >= high {
            return Err(Error::InvalidParameter(format!(
                "frequency range {low}:{high} must satisfy 0 <= low < high <= 1"
            )));
        }
        Ok(FreqRange { low, high })
    }

    pub fn contains(&self, count: usize, rows: usize) -> bool {
        let fraction = count as f64 / rows as f64;
        self.low <= fraction && fraction <= self.high
    }
}

impl Default for FreqRange {
    fn default() -> Self {
        FreqRange {
            low: 0.10,
            high: 0.90,
        }
    }
}

/// Stopping rules and knobs of [`converge`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergencePolicy {
    /// Stop a single-trace phase once a pass improves the score by less than
    /// this fraction. 0 means run until the score stops changing.
    pub min_relative_improvement: f64,
    /// Cap on single-trace passes per phase.
    pub max_single_passes: usize,
    /// Cap on multi-trace passes per run.
    pub max_multi_rounds: usize,
    pub freq_range: FreqRange,
    pub seed: u64,
}

impl Default for ConvergencePolicy {
    fn default() -> Self {
        ConvergencePolicy {
            min_relative_improvement: 0.0,
            max_single_passes: 100,
            max_multi_rounds: 2,
            freq_range: FreqRange::default(),
            seed: 0,
        }
    }
}

impl ConvergencePolicy {
    pub fn validate(&self) -> Result<()> {
        FreqRange::new(self.freq_range.low, self.freq_range.high)?;
        if !(0.0..=1.0).contains(&self.min_relative_improvement) {
            return Err(Error::InvalidParameter(format!(
                "minimum relative improvement {} must lie in [0, 1]",
                self.min_relative_improvement
            )));
        }
        if self.max_single_passes == 0 {
            return Err(Error::InvalidParameter(
                "at least one single-trace pass per phase is required".into(),
            ));
        }
        Ok(())
    }
}

/// Result of one refinement pass.
#[derive(Clone, Debug)]
pub struct PassOutcome {
    pub alignment: Alignment,
    pub align_ops: usize,
}

fn require_rows(m: &Alignment, needed: usize) -> Result<()> {
    if m.n_rows() < needed {
        return Err(Error::TooFewRows {
            needed,
            rows: m.n_rows(),
        });
    }
    Ok(())
}

/// Removes and optimally reinserts each trace of `order` (log trace
/// indices) in turn.
pub fn single_trace_pass(m: &Alignment, order: &[usize]) -> Result<PassOutcome> {
    require_rows(m, 2)?;
    let mut current = m.clone();
    for &trace in order {
        let row = current.position_of(trace).ok_or(Error::TraceOutOfRange {
            index: trace,
            len: current.n_rows(),
        })?;
        current = realign_row(&current, row);
    }
    Ok(PassOutcome {
        alignment: current,
        align_ops: order.len(),
    })
}

/// Candidate trace subsets for a multi-trace pass.
///
/// Columns qualify when their activity occupies more than one column and
/// their frequency fraction lies in `range`. Each yields the set of traces
/// holding an activity there. Identical subsets are kept once; the result is
/// ordered by descending subset size, ties in column order.
pub fn multi_trace_candidates(m: &Alignment, range: FreqRange) -> Vec<Vec<usize>> {
    let n = m.n_rows();
    let mut columns_per_label = std::collections::HashMap::new();
    for &label in m.labels() {
        *columns_per_label.entry(label).or_insert(0usize) += 1;
    }
    let mut seen = HashSet::new();
    let mut subsets = Vec::new();
    for k in 0..m.len() {
        let f = m.frequency(k);
        if columns_per_label[&m.label(k)] < 2 || f == 0 || f == n || !range.contains(f, n) {
            continue;
        }
        let mut traces: Vec<usize> = m.members(k).map(|p| m.rows()[p]).collect();
        traces.sort_unstable();
        if seen.insert(traces.clone()) {
            subsets.push(traces);
        }
    }
    subsets.sort_by_key(|s| std::cmp::Reverse(s.len()));
    subsets
}

/// Realigns every candidate subset against its complement, largest first.
/// Subsets are fixed as trace sets before any realignment.
pub fn multi_trace_pass(m: &Alignment, range: FreqRange) -> Result<PassOutcome> {
    require_rows(m, 2)?;
    let candidates = multi_trace_candidates(m, range);
    let mut current = m.clone();
    for subset in &candidates {
        let members: HashSet<usize> = subset.iter().copied().collect();
        let mask: Vec<bool> = current.rows().iter().map(|t| members.contains(t)).collect();
        let (s, rest) = current.split_by(&mask);
        current = merge(&s, &rest);
    }
    Ok(PassOutcome {
        alignment: current,
        align_ops: candidates.len(),
    })
}

/// Final alignment and telemetry of a [`converge`] run.
#[derive(Clone, Debug)]
pub struct Run {
    pub alignment: Alignment,
    pub records: Vec<IterationRecord>,
}

impl Run {
    pub fn final_score(&self) -> u64 {
        self.records.last().map_or(0, |r| r.pairs_score)
    }
}

/// Builds an initial alignment and refines it to convergence.
pub fn converge(log: &Log, initializer: Initializer, policy: &ConvergencePolicy) -> Result<Run> {
    converge_with(log, initializer, policy, |_, _| {})
}

/// [`converge`], calling `observe` after every iteration with its record
/// and the alignment it produced.
pub fn converge_with<F>(
    log: &Log,
    initializer: Initializer,
    policy: &ConvergencePolicy,
    mut observe: F,
) -> Result<Run>
where
    F: FnMut(&IterationRecord, &Alignment),
{
    if log.is_empty() {
        return Err(Error::EmptyLog);
    }
    policy.validate()?;
    let start = Instant::now();
    let (initial, ops) = initializer.run(log, policy.seed)?;
    let record = IterationRecord {
        index: 0,
        kind: IterationKind::Init,
        pairs_score: sps_columnar(&initial),
        length: initial.len(),
        elapsed: start.elapsed(),
        align_ops: ops,
    };
    observe(&record, &initial);
    refine_with(initial, record, policy, observe)
}

/// Refines an existing alignment, e.g. a baseline result used as the
/// starting point. `first` is the record describing `initial`.
pub fn refine_with<F>(
    initial: Alignment,
    first: IterationRecord,
    policy: &ConvergencePolicy,
    mut observe: F,
) -> Result<Run>
where
    F: FnMut(&IterationRecord, &Alignment),
{
    policy.validate()?;
    let mut records = vec![first];
    let mut current = initial;
    if current.n_rows() < 2 {
        return Ok(Run {
            alignment: current,
            records,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    rng.set_stream(1);
    let mut traces: Vec<usize> = current.rows().to_vec();
    traces.sort_unstable();

    let mut push =
        |records: &mut Vec<IterationRecord>, kind, alignment: &Alignment, started: Instant, ops| {
            let record = IterationRecord {
                index: records.len(),
                kind,
                pairs_score: sps_columnar(alignment),
                length: alignment.len(),
                elapsed: started.elapsed(),
                align_ops: ops,
            };
            observe(&record, alignment);
            let score = record.pairs_score;
            records.push(record);
            score
        };

    let mut score = records[0].pairs_score;
    let mut multi_rounds = 0;
    while score > 0 {
        for _ in 0..policy.max_single_passes {
            let started = Instant::now();
            let mut order = traces.clone();
            order.shuffle(&mut rng);
            let pass = single_trace_pass(&current, &order)?;
            current = pass.alignment;
            let next = push(
                &mut records,
                IterationKind::Single,
                &current,
                started,
                pass.align_ops,
            );
            debug_assert!(next <= score);
            let gain = (score - next) as f64 / score as f64;
            score = next;
            if gain == 0.0 || gain < policy.min_relative_improvement || score == 0 {
                break;
            }
        }
        if multi_rounds >= policy.max_multi_rounds || score == 0 {
            break;
        }
        multi_rounds += 1;
        let started = Instant::now();
        let pass = multi_trace_pass(&current, policy.freq_range)?;
        current = pass.alignment;
        let next = push(
            &mut records,
            IterationKind::Multi,
            &current,
            started,
            pass.align_ops,
        );
        debug_assert!(next <= score);
        let improved = next < score;
        score = next;
        if !improved {
            break;
        }
    }
    Ok(Run {
        alignment: current,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ActivityId;
    use crate::scoring::SpsScore;

    #[test]
    fn split_gap_pair_collapses() {
        // [[a, -], [-, a]] scores 2; realigning either row merges the columns.
        let m = Alignment::from_columns(
            vec![0, 1],
            [(ActivityId(0), vec![0]), (ActivityId(0), vec![1])],
        )
        .unwrap();
        assert_eq!(sps_columnar(&m), 2);
        let out = single_trace_pass(&m, &[0, 1]).unwrap();
        assert_eq!(out.alignment.column_frequencies(), vec![2]);
        assert_eq!(sps_columnar(&out.alignment), 0);
        assert_eq!(out.align_ops, 2);
    }

    #[test]
    fn single_pass_needs_two_rows() {
        let log = Log::from_sequences(["a b"]);
        let m = Alignment::from_trace(&log, 0).unwrap();
        assert!(matches!(
            single_trace_pass(&m, &[0]),
            Err(Error::TooFewRows { needed: 2, rows: 1 })
        ));
        assert!(matches!(
            multi_trace_pass(&m, FreqRange::default()),
            Err(Error::TooFewRows { .. })
        ));
    }

    #[test]
    fn candidate_columns_need_repeated_labels() {
        // Labels [x, y, x, z] over 10 rows with frequencies 5, 9, 5, 1.
        let (x, y, z) = (ActivityId(0), ActivityId(1), ActivityId(2));
        let m = Alignment::from_columns(
            (0..10).collect(),
            [
                (x, (0..5).collect::<Vec<_>>()),
                (y, (0..9).collect()),
                (x, (5..10).collect()),
                (z, vec![9]),
            ],
        )
        .unwrap();
        let c = multi_trace_candidates(&m, FreqRange::default());
        assert_eq!(c, vec![vec![0, 1, 2, 3, 4], vec![5, 6, 7, 8, 9]]);
    }

    #[test]
    fn duplicate_partitions_are_dropped() {
        let (x, y) = (ActivityId(0), ActivityId(1));
        let m = Alignment::from_columns(
            (0..4).collect(),
            [
                (x, vec![0, 1]),
                (y, vec![0, 1]),
                (x, vec![2, 3]),
                (y, vec![2, 3]),
            ],
        )
        .unwrap();
        let c = multi_trace_candidates(&m, FreqRange::default());
        assert_eq!(c, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn no_repeated_activities_means_no_candidates() {
        let log = Log::from_sequences(["a b c", "a c", "b c"]);
        let (m, _) = Initializer::RandomSequential.run(&log, 1).unwrap();
        assert!(multi_trace_candidates(&m, FreqRange::default()).is_empty());
        let out = multi_trace_pass(&m, FreqRange::default()).unwrap();
        assert_eq!(out.alignment, m);
        assert_eq!(out.align_ops, 0);
    }

    #[test]
    fn single_trace_log_only_initializes() {
        let log = Log::from_sequences(["a b a"]);
        let run = converge(
            &log,
            Initializer::RandomSequential,
            &ConvergencePolicy::default(),
        )
        .unwrap();
        assert_eq!(run.records.len(), 1);
        assert_eq!(run.records[0].kind, IterationKind::Init);
        assert_eq!(run.final_score(), 0);
    }

    #[test]
    fn identical_traces_converge_immediately() {
        let log = Log::from_sequences(["a b c"; 4]);
        let run = converge(
            &log,
            Initializer::RandomSequential,
            &ConvergencePolicy::default(),
        )
        .unwrap();
        assert_eq!(run.records.len(), 1);
        assert_eq!(run.final_score(), 0);
        assert_eq!(run.records[0].align_ops, 3);
    }

    #[test]
    fn empty_log_is_rejected() {
        assert!(matches!(
            converge(
                &Log::new(),
                Initializer::RandomSequential,
                &ConvergencePolicy::default()
            ),
            Err(Error::EmptyLog)
        ));
    }

    #[test]
    fn invalid_policy_is_rejected() {
        let log = Log::from_sequences(["a", "b"]);
        let policy = ConvergencePolicy {
            freq_range: FreqRange {
                low: 0.9,
                high: 0.1,
            },
            ..Default::default()
        };
        assert!(matches!(
            converge(&log, Initializer::RandomSequential, &policy),
            Err(Error::InvalidParameter(_))
        ));
        assert!(FreqRange::new(0.2, 0.8).is_ok());
        assert!(FreqRange::new(0.5, 0.5).is_err());
    }

    #[test]
    fn run_records_are_monotone_and_indexed() {
        let log = Log::from_sequences([
            "a b c d", "b a c d", "a c b d", "a b d c", "d a b c", "a b c",
        ]);
        let policy = ConvergencePolicy {
            seed: 4,
            ..Default::default()
        };
        let run = converge(&log, Initializer::RandomSequential, &policy).unwrap();
        for (i, r) in run.records.iter().enumerate() {
            assert_eq!(r.index, i);
        }
        for w in run.records.windows(2) {
            assert!(w[1].pairs_score <= w[0].pairs_score);
        }
        assert_eq!(run.final_score(), SpsScore::of(&run.alignment).pairs_score);
        assert!(run.alignment.preserves_traces(&log));
        assert!(run
            .records
            .iter()
            .filter(|r| r.kind == IterationKind::Single)
            .all(|r| r.align_ops == log.len()));
    }
}
