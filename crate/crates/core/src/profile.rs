//! Optimal profile-profile alignment under the sum-of-pairs objective.
//!
//! Two compacted profiles `a` (L_A columns) and `b` (L_B columns) over
//! disjoint rows are merged by a Needleman-Wunsch style table `Q` of size
//! (L_A+1)×(L_B+1), with `N` the combined row count and
//! `cost(f) = 2·f·(N−f)`:
//!
//! ```text
//! Q[i][j] = max( Q[i][j−1]   − cost(g_j),                 b column alone
//!                Q[i−1][j]   − cost(f_i),                 a column alone
//!                Q[i−1][j−1] − cost(f_i + g_j)  if F_i = G_j )  merged column
//! ```
//!
//! There is no substitution move, so every merged column keeps a single
//! activity. No move rewards anything, every entry is ≤ 0, and the end cell
//! holds exactly minus the doubled sum-of-pairs score of the traced-back
//! merge. That identity is checked on every call.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::model::{ActivityId, Alignment};
use crate::scoring::{column_pairs, sps_doubled};

static SCORE_IDENTITY_CHECKS: AtomicU64 = AtomicU64::new(0);

/// Number of profile merges whose end-cell value has been checked against
/// the doubled score of the merged alignment in this process.
pub fn score_identity_checks() -> u64 {
    SCORE_IDENTITY_CHECKS.load(Ordering::Relaxed)
}

/// Traceback tag of a DP cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    /// The origin cell.
    Start,
    /// Merge column i of `a` with column j of `b` (equal labels).
    Diagonal,
    /// Take column i of `a`, gapping `b`'s rows.
    Up,
    /// Take column j of `b`, gapping `a`'s rows.
    Left,
}

/// Full DP table, retained only by [`align_profiles_with_table`].
#[derive(Clone, Debug)]
pub struct DpTable {
    width: usize,
    values: Vec<i64>,
    moves: Vec<Move>,
}

impl DpTable {
    /// (L_A + 1, L_B + 1)
    pub fn shape(&self) -> (usize, usize) {
        (self.values.len() / self.width, self.width)
    }

    pub fn value(&self, i: usize, j: usize) -> i64 {
        self.values[i * self.width + j]
    }

    pub fn step(&self, i: usize, j: usize) -> Move {
        self.moves[i * self.width + j]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Q at (L_A, L_B).
    pub fn end_value(&self) -> i64 {
        *self
            .values
            .last()
            .expect("table has at least the origin cell")
    }
}

/// Optimally merges two profiles over disjoint row sets.
///
/// The result holds `a`'s rows followed by `b`'s. Column order inside each
/// profile is preserved; columns with equal labels may be merged.
///
/// ```
/// use pima::{align_profiles, Alignment, Log, SpsScore};
/// let log = Log::from_sequences(["a b", "b c"]);
/// let a = Alignment::from_trace(&log, 0).unwrap();
/// let b = Alignment::from_trace(&log, 1).unwrap();
/// let merged = align_profiles(&a, &b).unwrap();
/// assert_eq!(merged.column_frequencies(), vec![1, 2, 1]);
/// assert_eq!(SpsScore::of(&merged).pairs_score, 2);
/// ```
pub fn align_profiles(a: &Alignment, b: &Alignment) -> Result<Alignment> {
    check_disjoint(a, b)?;
    Ok(merge(a, b))
}

/// [`align_profiles`] that also returns the full value/move table.
pub fn align_profiles_with_table(a: &Alignment, b: &Alignment) -> Result<(Alignment, DpTable)> {
    check_disjoint(a, b)?;
    let mut values = Vec::with_capacity((a.len() + 1) * (b.len() + 1));
    let (fa, fb) = (a.column_frequencies(), b.column_frequencies());
    let n = a.n_rows() + b.n_rows();
    let (moves, q_end) = fill(a.labels(), &fa, b.labels(), &fb, n, Some(&mut values));
    let merged = materialize(a, b, &trace_path(&moves, a.len(), b.len()), q_end);
    Ok((
        merged,
        DpTable {
            width: b.len() + 1,
            values,
            moves,
        },
    ))
}

fn check_disjoint(a: &Alignment, b: &Alignment) -> Result<()> {
    let max = a.rows().iter().chain(b.rows()).copied().max().unwrap_or(0);
    let mut seen = vec![false; max + 1];
    for &t in a.rows().iter().chain(b.rows()) {
        if std::mem::replace(&mut seen[t], true) {
            return Err(Error::OverlappingRows { trace: t });
        }
    }
    Ok(())
}

/// Merge without the disjointness check; used where rows come from a split.
pub(crate) fn merge(a: &Alignment, b: &Alignment) -> Alignment {
    let (fa, fb) = (a.column_frequencies(), b.column_frequencies());
    let n = a.n_rows() + b.n_rows();
    let (moves, q_end) = fill(a.labels(), &fa, b.labels(), &fb, n, None);
    materialize(a, b, &trace_path(&moves, a.len(), b.len()), q_end)
}

fn materialize(a: &Alignment, b: &Alignment, path: &[Move], q_end: i64) -> Alignment {
    let b_offset = a.n_rows();
    let mut out = Alignment::merge_target(a, b, path.len());
    let (mut i, mut j) = (0, 0);
    for step in path {
        match step {
            Move::Diagonal => {
                out.push_merged(a.label(i), Some((a, i)), Some((b, j)), b_offset);
                i += 1;
                j += 1;
            }
            Move::Up => {
                out.push_merged(a.label(i), Some((a, i)), None, b_offset);
                i += 1;
            }
            Move::Left => {
                out.push_merged(b.label(j), None, Some((b, j)), b_offset);
                j += 1;
            }
            Move::Start => unreachable!(),
        }
    }
    check_identity(&out, q_end);
    out
}

/// Realigns the trace at row position `row` against the other rows of `m`.
///
/// Equivalent to splitting the row off, compacting both parts and merging
/// them back with the rest as the first profile, except that the row keeps
/// its position instead of moving to the end.
pub(crate) fn realign_row(m: &Alignment, row: usize) -> Alignment {
    let n = m.n_rows();
    let mut rest_cols = Vec::with_capacity(m.len());
    let mut rest_freq = Vec::with_capacity(m.len());
    let mut rest_labels = Vec::with_capacity(m.len());
    let mut own_labels = Vec::new();
    for k in 0..m.len() {
        let f = m.frequency(k);
        let own = m.contains(k, row);
        if own {
            own_labels.push(m.label(k));
        }
        let others = f - own as usize;
        if others > 0 {
            rest_cols.push(k);
            rest_freq.push(others);
            rest_labels.push(m.label(k));
        }
    }
    let own_freq = vec![1usize; own_labels.len()];
    let (moves, q_end) = fill(&rest_labels, &rest_freq, &own_labels, &own_freq, n, None);
    let path = trace_path(&moves, rest_labels.len(), own_labels.len());

    let mut out = Alignment::with_rows_of(m, path.len());
    let (mut i, mut j) = (0, 0);
    for step in &path {
        match step {
            Move::Diagonal => {
                out.push_copy_with(m, rest_cols[i], row, true);
                i += 1;
                j += 1;
            }
            Move::Up => {
                out.push_copy_with(m, rest_cols[i], row, false);
                i += 1;
            }
            Move::Left => {
                out.push_singleton(own_labels[j], row);
                j += 1;
            }
            Move::Start => unreachable!(),
        }
    }
    check_identity(&out, q_end);
    out
}

fn check_identity(merged: &Alignment, q_end: i64) {
    let doubled = sps_doubled(merged);
    SCORE_IDENTITY_CHECKS.fetch_add(1, Ordering::Relaxed);
    assert_eq!(
        -q_end, doubled as i64,
        "DP end value disagrees with the doubled score of the merged alignment"
    );
}

/// Forward move sequence from (0, 0) to (la, lb).
fn trace_path(moves: &[Move], la: usize, lb: usize) -> Vec<Move> {
    let width = lb + 1;
    let mut path = Vec::with_capacity(la + lb);
    let (mut i, mut j) = (la, lb);
    while i > 0 || j > 0 {
        let step = moves[i * width + j];
        match step {
            Move::Diagonal => {
                i -= 1;
                j -= 1;
            }
            Move::Up => i -= 1,
            Move::Left => j -= 1,
            Move::Start => unreachable!("origin reached before (0, 0)"),
        }
        path.push(step);
    }
    path.reverse();
    path
}

/// Fills the move matrix; returns it with Q at the end cell. When `record`
/// is given, every Q value is appended row by row.
fn fill(
    la: &[ActivityId],
    fa: &[usize],
    lb: &[ActivityId],
    fb: &[usize],
    n: usize,
    mut record: Option<&mut Vec<i64>>,
) -> (Vec<Move>, i64) {
    let cost = |f: usize| 2 * column_pairs(f, n) as i64;
    let ca: Vec<i64> = fa.iter().map(|&f| cost(f)).collect();
    let cb: Vec<i64> = fb.iter().map(|&f| cost(f)).collect();

    let width = lb.len() + 1;
    let mut moves = vec![Move::Start; (la.len() + 1) * width];
    let mut prev = vec![0i64; width];
    let mut cur = vec![0i64; width];
    for j in 1..width {
        prev[j] = prev[j - 1] - cb[j - 1];
        moves[j] = Move::Left;
    }
    if let Some(r) = record.as_deref_mut() {
        r.extend_from_slice(&prev);
    }

    for i in 1..=la.len() {
        let row = &mut moves[i * width..(i + 1) * width];
        cur[0] = prev[0] - ca[i - 1];
        row[0] = Move::Up;
        for j in 1..width {
            // Tie order: diagonal, then up, then left.
            let mut best = i64::MIN;
            let mut step = Move::Start;
            if la[i - 1] == lb[j - 1] {
                best = prev[j - 1] - cost(fa[i - 1] + fb[j - 1]);
                step = Move::Diagonal;
            }
            let up = prev[j] - ca[i - 1];
            if up > best {
                best = up;
                step = Move::Up;
            }
            let left = cur[j - 1] - cb[j - 1];
            if left > best {
                best = left;
                step = Move::Left;
            }
            cur[j] = best;
            row[j] = step;
        }
        if let Some(r) = record.as_deref_mut() {
            r.extend_from_slice(&cur);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    (moves, prev[width - 1])
}

/// Largest `L_A + L_B` accepted by [`brute_force_min_merge`].
pub const BRUTE_FORCE_LIMIT: usize = 16;

/// Minimum pairs score over every order-preserving interleaving of the two
/// column sequences, merging only equal-label columns. Exhaustive; a test
/// oracle for [`align_profiles`].
pub fn brute_force_min_merge(a: &Alignment, b: &Alignment) -> Result<u64> {
    let columns = a.len() + b.len();
    if columns > BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge {
            columns,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let n = a.n_rows() + b.n_rows();
    let fa = a.column_frequencies();
    let fb = b.column_frequencies();

    #[allow(clippy::too_many_arguments)]
    fn walk(
        i: usize,
        j: usize,
        a: &Alignment,
        b: &Alignment,
        fa: &[usize],
        fb: &[usize],
        chosen: &mut Vec<usize>,
        n: usize,
        best: &mut u64,
    ) {
        if i == fa.len() && j == fb.len() {
            let score = chosen.iter().map(|&f| column_pairs(f, n)).sum();
            *best = (*best).min(score);
            return;
        }
        if i < fa.len() {
            chosen.push(fa[i]);
            walk(i + 1, j, a, b, fa, fb, chosen, n, best);
            chosen.pop();
        }
        if j < fb.len() {
            chosen.push(fb[j]);
            walk(i, j + 1, a, b, fa, fb, chosen, n, best);
            chosen.pop();
        }
        if i < fa.len() && j < fb.len() && a.label(i) == b.label(j) {
            chosen.push(fa[i] + fb[j]);
            walk(i + 1, j + 1, a, b, fa, fb, chosen, n, best);
            chosen.pop();
        }
    }

    let mut best = u64::MAX;
    walk(0, 0, a, b, &fa, &fb, &mut Vec::new(), n, &mut best);
    Ok(best)
}
