//! Consensus sequences: the columns whose frequency reaches a threshold.

use crate::model::{ActivityId, Alignment};

#[derive(Clone, Debug, PartialEq)]
pub struct ConsensusEntry {
    /// Column index in the source alignment.
    pub column: usize,
    pub activity: ActivityId,
    pub count: usize,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConsensusSequence {
    pub entries: Vec<ConsensusEntry>,
    pub threshold: f64,
    /// Source alignment length L.
    pub source_length: usize,
    /// Source alignment rows N.
    pub rows: usize,
}

impl ConsensusSequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Activities covered by the kept columns, Σ f_k.
    pub fn retained_activities(&self) -> usize {
        self.entries.iter().map(|e| e.count).sum()
    }

    pub fn columns(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.column).collect()
    }
}

/// Keeps columns with `f_k / N >= threshold`, in column order.
///
/// ```
/// use pima::{consensus, Alignment, ActivityId};
/// let m = Alignment::from_columns((0..10).collect(), [
///     (ActivityId(0), (0..10).collect::<Vec<_>>()),
///     (ActivityId(1), (0..3).collect()),
///     (ActivityId(2), vec![9]),
/// ]).unwrap();
/// let c = consensus(&m, 0.2);
/// assert_eq!(c.columns(), vec![0, 1]);
/// assert_eq!(c.retained_activities(), 13);
/// ```
pub fn consensus(alignment: &Alignment, threshold: f64) -> ConsensusSequence {
    let n = alignment.n_rows();
    let entries = (0..alignment.len())
        .filter_map(|k| {
            let count = alignment.frequency(k);
            let fraction = if n == 0 { 0.0 } else { count as f64 / n as f64 };
            (fraction >= threshold).then(|| ConsensusEntry {
                column: k,
                activity: alignment.label(k),
                count,
                fraction,
            })
        })
        .collect();
    ConsensusSequence {
        entries,
        threshold,
        source_length: alignment.len(),
        rows: n,
    }
}
