//! Logs, traces and the column-membership alignment matrix.
//!
//! An [`Alignment`] never stores gap cells. Each column carries exactly one
//! activity and the set of row positions holding it; every other row has a
//! gap there. Membership sets are packed bit-vectors stored in one flat
//! buffer, `words` 64-bit words per column.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Dense 0-based activity identifier, assigned in order of first appearance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActivityId(pub u32);

impl ActivityId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ActivityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Ordered set of distinct activity labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActivityAlphabet {
    labels: Vec<String>,
    index: HashMap<String, ActivityId>,
}

impl ActivityAlphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `label`, adding it to the alphabet if unseen.
    pub fn intern(&mut self, label: &str) -> ActivityId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = ActivityId(self.labels.len() as u32);
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        id
    }

    pub fn get(&self, label: &str) -> Option<ActivityId> {
        self.index.get(label).copied()
    }

    /// Label for `id`. Panics if the id is not from this alphabet.
    pub fn label(&self, id: ActivityId) -> &str {
        &self.labels[id.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// One recorded process execution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub case_id: String,
    pub activities: Vec<ActivityId>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.activities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activities.is_empty()
    }
}

/// A set of traces over a shared alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Log {
    pub alphabet: ActivityAlphabet,
    pub traces: Vec<Trace>,
}

impl Log {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a trace given by its labels, interning unseen labels.
    pub fn push_trace<I, S>(&mut self, case_id: impl Into<String>, labels: I) -> usize
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let activities = labels
            .into_iter()
            .map(|l| self.alphabet.intern(l.as_ref()))
            .collect();
        self.traces.push(Trace {
            case_id: case_id.into(),
            activities,
        });
        self.traces.len() - 1
    }

    /// Builds a log from whitespace-separated activity strings, one per trace.
    /// Case ids are `1..=N`.
    ///
    /// ```
    /// let log = pima::Log::from_sequences(["a b", "a c"]);
    /// assert_eq!(log.len(), 2);
    /// assert_eq!(log.alphabet.labels(), ["a", "b", "c"]);
    /// ```
    pub fn from_sequences<I, S>(traces: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut log = Log::new();
        for (i, t) in traces.into_iter().enumerate() {
            log.push_trace((i + 1).to_string(), t.as_ref().split_whitespace());
        }
        log
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn total_activities(&self) -> usize {
        self.traces.iter().map(Trace::len).sum()
    }

    pub fn trace(&self, index: usize) -> Result<&Trace> {
        self.traces.get(index).ok_or(Error::TraceOutOfRange {
            index,
            len: self.traces.len(),
        })
    }

    /// Labels of trace `index`, for display.
    pub fn labels_of(&self, index: usize) -> Vec<&str> {
        self.traces[index]
            .activities
            .iter()
            .map(|&a| self.alphabet.label(a))
            .collect()
    }
}

#[inline]
fn words_for(rows: usize) -> usize {
    rows.div_ceil(64)
}

/// ORs `src` (a bit-vector of `len` bits) into `dst` starting at bit `offset`.
fn or_shifted(dst: &mut [u64], src: &[u64], offset: usize) {
    let word = offset / 64;
    let shift = offset % 64;
    if shift == 0 {
        for (d, s) in dst[word..].iter_mut().zip(src) {
            *d |= *s;
        }
        return;
    }
    for (i, &s) in src.iter().enumerate() {
        if s == 0 {
            continue;
        }
        dst[word + i] |= s << shift;
        if let Some(d) = dst.get_mut(word + i + 1) {
            *d |= s >> (64 - shift);
        }
    }
}

fn ones(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let t = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + t)
        })
    })
}

/// An N×L trace alignment stored column-wise.
///
/// `rows[p]` is the log index of the trace occupying row position `p`.
#[derive(Clone, PartialEq, Eq)]
pub struct Alignment {
    rows: Vec<usize>,
    labels: Vec<ActivityId>,
    words: usize,
    bits: Vec<u64>,
}

impl fmt::Debug for Alignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<_> = (0..self.len())
            .map(|k| (self.labels[k].0, self.members(k).collect::<Vec<_>>()))
            .collect();
        f.debug_struct("Alignment")
            .field("rows", &self.rows)
            .field("columns", &cols)
            .finish()
    }
}

impl Alignment {
    /// An alignment of `rows` with no columns.
    pub fn empty(rows: Vec<usize>) -> Self {
        let words = words_for(rows.len());
        Alignment {
            rows,
            labels: Vec::new(),
            words,
            bits: Vec::new(),
        }
    }

    /// Builds an alignment from explicit `(activity, member row positions)` columns.
    pub fn from_columns<I, M>(rows: Vec<usize>, columns: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ActivityId, M)>,
        M: IntoIterator<Item = usize>,
    {
        let mut out = Alignment::empty(rows);
        for (k, (label, members)) in columns.into_iter().enumerate() {
            let col = out.push_column(label);
            for row in members {
                if row >= out.rows.len() {
                    return Err(Error::MemberOutOfRange {
                        column: k,
                        row,
                        rows: out.rows.len(),
                    });
                }
                out.bits[col * out.words + row / 64] |= 1 << (row % 64);
            }
        }
        Ok(out)
    }

    /// Builds an alignment from a dense cell matrix (`None` is a gap).
    ///
    /// Fails with [`Error::MixedColumn`] when a column holds two activities.
    pub fn from_cells(
        rows: Vec<usize>,
        cells: &[Vec<Option<ActivityId>>],
        alphabet: &ActivityAlphabet,
    ) -> Result<Self> {
        let width = cells.first().map_or(0, Vec::len);
        let mut out = Alignment::empty(rows);
        for k in 0..width {
            let mut label: Option<ActivityId> = None;
            for row in cells {
                match (label, row[k]) {
                    (None, Some(a)) => label = Some(a),
                    (Some(l), Some(a)) if l != a => {
                        return Err(Error::MixedColumn {
                            column: k + 1,
                            first: alphabet.label(l).to_owned(),
                            second: alphabet.label(a).to_owned(),
                        })
                    }
                    _ => {}
                }
            }
            // An all-gap column has no label of its own; it carries id 0 and
            // an empty member set, which scores 0 and disappears on compaction.
            let col = out.push_column(label.unwrap_or(ActivityId(0)));
            for (p, row) in cells.iter().enumerate() {
                if row[k].is_some() {
                    out.bits[col * out.words + p / 64] |= 1 << (p % 64);
                }
            }
        }
        Ok(out)
    }

    fn push_column(&mut self, label: ActivityId) -> usize {
        self.labels.push(label);
        self.bits.resize(self.bits.len() + self.words, 0);
        self.labels.len() - 1
    }

    #[inline]
    fn column_bits(&self, k: usize) -> &[u64] {
        &self.bits[k * self.words..(k + 1) * self.words]
    }

    /// Number of rows (N).
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns (L).
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Log trace index per row position.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn labels(&self) -> &[ActivityId] {
        &self.labels
    }

    pub fn label(&self, column: usize) -> ActivityId {
        self.labels[column]
    }

    /// f_k: number of rows holding an activity in `column`.
    pub fn frequency(&self, column: usize) -> usize {
        self.column_bits(column)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn column_frequencies(&self) -> Vec<usize> {
        (0..self.len()).map(|k| self.frequency(k)).collect()
    }

    /// Row positions with an activity in `column`, ascending.
    pub fn members(&self, column: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.column_bits(column))
    }

    #[inline]
    pub fn contains(&self, column: usize, row: usize) -> bool {
        self.bits[column * self.words + row / 64] >> (row % 64) & 1 == 1
    }

    /// Cell content at (`row`, `column`); `None` is a gap.
    pub fn cell(&self, row: usize, column: usize) -> Option<ActivityId> {
        self.contains(column, row).then(|| self.labels[column])
    }

    /// Row position of log trace `trace`, if present.
    pub fn position_of(&self, trace: usize) -> Option<usize> {
        self.rows.iter().position(|&t| t == trace)
    }

    /// Dense N×L view, `None` for gaps.
    pub fn to_cells(&self) -> Vec<Vec<Option<ActivityId>>> {
        let mut cells = vec![vec![None; self.len()]; self.n_rows()];
        for (k, &label) in self.labels.iter().enumerate() {
            for p in self.members(k) {
                cells[p][k] = Some(label);
            }
        }
        cells
    }

    /// Single-row alignment of one log trace: one column per activity.
    pub fn from_trace(log: &Log, trace_index: usize) -> Result<Self> {
        let trace = log.trace(trace_index)?;
        let mut out = Alignment::empty(vec![trace_index]);
        for &a in &trace.activities {
            let col = out.push_column(a);
            out.bits[col] = 1;
        }
        Ok(out)
    }

    /// Gap-stripped activity sequence of row position `row`.
    pub fn project_row(&self, row: usize) -> Result<Vec<ActivityId>> {
        if row >= self.n_rows() {
            return Err(Error::RowOutOfRange {
                row,
                rows: self.n_rows(),
            });
        }
        Ok((0..self.len())
            .filter(|&k| self.contains(k, row))
            .map(|k| self.labels[k])
            .collect())
    }

    /// True when every row projects to the trace it was built from.
    pub fn preserves_traces(&self, log: &Log) -> bool {
        let mut projected = vec![Vec::new(); self.n_rows()];
        for k in 0..self.len() {
            for p in self.members(k) {
                projected[p].push(self.labels[k]);
            }
        }
        self.rows.iter().zip(&projected).all(|(&t, seq)| {
            log.traces
                .get(t)
                .is_some_and(|trace| trace.activities == *seq)
        })
    }

    pub fn is_compact(&self) -> bool {
        (0..self.len()).all(|k| self.column_bits(k).iter().any(|&w| w != 0))
    }

    /// Drops zero-frequency columns, keeping the order of the rest.
    pub fn compact(&self) -> Alignment {
        let mut out = Alignment::empty(self.rows.clone());
        for k in 0..self.len() {
            let bits = self.column_bits(k);
            if bits.iter().any(|&w| w != 0) {
                out.labels.push(self.labels[k]);
                out.bits.extend_from_slice(bits);
            }
        }
        out
    }

    /// Splits rows into `(selected, rest)` profiles, both compacted.
    ///
    /// `subset` lists row positions; it must be a non-empty proper subset.
    pub fn split(&self, subset: &[usize]) -> Result<(Alignment, Alignment)> {
        let n = self.n_rows();
        let mut selected = vec![false; n];
        for &r in subset {
            if r >= n {
                return Err(Error::RowOutOfRange { row: r, rows: n });
            }
            selected[r] = true;
        }
        let count = selected.iter().filter(|&&s| s).count();
        if count == 0 || count == n {
            return Err(Error::InvalidSubset { rows: n });
        }
        Ok(self.split_by(&selected))
    }

    /// Splits by a per-row-position mask; caller guarantees a proper subset.
    pub(crate) fn split_by(&self, selected: &[bool]) -> (Alignment, Alignment) {
        let mut new_pos = vec![0usize; self.n_rows()];
        let (mut in_rows, mut out_rows) = (Vec::new(), Vec::new());
        for (p, (&trace, &sel)) in self.rows.iter().zip(selected).enumerate() {
            if sel {
                new_pos[p] = in_rows.len();
                in_rows.push(trace);
            } else {
                new_pos[p] = out_rows.len();
                out_rows.push(trace);
            }
        }
        let mut a = Alignment::empty(in_rows);
        let mut b = Alignment::empty(out_rows);
        let mut col_a = vec![0u64; a.words];
        let mut col_b = vec![0u64; b.words];
        for k in 0..self.len() {
            col_a.fill(0);
            col_b.fill(0);
            let (mut any_a, mut any_b) = (false, false);
            for p in self.members(k) {
                let q = new_pos[p];
                if selected[p] {
                    col_a[q / 64] |= 1 << (q % 64);
                    any_a = true;
                } else {
                    col_b[q / 64] |= 1 << (q % 64);
                    any_b = true;
                }
            }
            if any_a {
                a.labels.push(self.labels[k]);
                a.bits.extend_from_slice(&col_a);
            }
            if any_b {
                b.labels.push(self.labels[k]);
                b.bits.extend_from_slice(&col_b);
            }
        }
        (a, b)
    }

    /// Starts an empty merge target holding `a`'s rows followed by `b`'s.
    pub(crate) fn merge_target(a: &Alignment, b: &Alignment, capacity: usize) -> Alignment {
        let mut rows = Vec::with_capacity(a.n_rows() + b.n_rows());
        rows.extend_from_slice(&a.rows);
        rows.extend_from_slice(&b.rows);
        let words = words_for(rows.len());
        Alignment {
            rows,
            labels: Vec::with_capacity(capacity),
            words,
            bits: Vec::with_capacity(capacity * words),
        }
    }

    /// Appends a merged column built from column `ka` of `a` and/or `kb` of `b`.
    /// `b`'s rows are offset by `a.n_rows()`.
    pub(crate) fn push_merged(
        &mut self,
        label: ActivityId,
        a: Option<(&Alignment, usize)>,
        b: Option<(&Alignment, usize)>,
        b_offset: usize,
    ) {
        let col = self.push_column(label);
        let dst = &mut self.bits[col * self.words..(col + 1) * self.words];
        if let Some((a, ka)) = a {
            or_shifted(dst, a.column_bits(ka), 0);
        }
        if let Some((b, kb)) = b {
            or_shifted(dst, b.column_bits(kb), b_offset);
        }
    }

    /// Same rows, no columns.
    pub(crate) fn with_rows_of(other: &Alignment, capacity: usize) -> Alignment {
        Alignment {
            rows: other.rows.clone(),
            labels: Vec::with_capacity(capacity),
            words: other.words,
            bits: Vec::with_capacity(capacity * other.words),
        }
    }

    /// Appends a copy of column `k` of `src` (same row layout), with `row`
    /// forced to `present`.
    pub(crate) fn push_copy_with(&mut self, src: &Alignment, k: usize, row: usize, present: bool) {
        self.labels.push(src.labels[k]);
        self.bits.extend_from_slice(src.column_bits(k));
        let col = self.labels.len() - 1;
        let word = &mut self.bits[col * self.words + row / 64];
        if present {
            *word |= 1 << (row % 64);
        } else {
            *word &= !(1 << (row % 64));
        }
    }

    /// Appends a column whose only member is `row`.
    pub(crate) fn push_singleton(&mut self, label: ActivityId, row: usize) {
        let col = self.push_column(label);
        self.bits[col * self.words + row / 64] |= 1 << (row % 64);
    }

    /// Reorders columns by `order` (a permutation of column indices).
    pub fn permute_columns(&self, order: &[usize]) -> Alignment {
        let mut out = Alignment::empty(self.rows.clone());
        for &k in order {
            out.labels.push(self.labels[k]);
            out.bits.extend_from_slice(self.column_bits(k));
        }
        out
    }

    /// Row positions ordered by log trace index.
    pub fn positions_by_trace(&self) -> Vec<usize> {
        let mut pos: Vec<usize> = (0..self.n_rows()).collect();
        pos.sort_by_key(|&p| self.rows[p]);
        pos
    }
}
