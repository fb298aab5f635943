//! Sum-of-pairs scoring.
//!
//! Two independent routes compute the same number. [`sps_pairwise`] walks
//! every unordered row pair and counts mismatching cells, O(N²L).
//! [`sps_columnar`] uses column frequencies only: a column with `f` activities
//! among `N` rows contributes `f·(N−f)` mismatching pairs, O(L) once the
//! frequencies are known.
//!
//! The pairwise value counts each unordered pair once. The doubled value
//! (`2·Σ f·(N−f)`) is what the profile DP produces at its end cell; both are
//! carried in [`SpsScore`] so reports can say which one they print.

use serde::Serialize;

use crate::model::Alignment;

/// Both conventions of the sum-of-pairs score.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpsScore {
    /// Unordered-pair Hamming total.
    pub pairs_score: u64,
    /// `2 × pairs_score`, the ordered-pair convention.
    pub doubled_score: u64,
}

impl SpsScore {
    pub fn of(alignment: &Alignment) -> Self {
        let pairs_score = sps_columnar(alignment);
        SpsScore {
            pairs_score,
            doubled_score: 2 * pairs_score,
        }
    }
}

/// Mismatching row pairs contributed by a column of frequency `f` among `n` rows.
#[inline]
pub fn column_pairs(f: usize, n: usize) -> u64 {
    (f as u64) * ((n - f) as u64)
}

/// Literal pairwise Hamming sum over all unordered row pairs.
///
/// ```
/// use pima::{Alignment, ActivityId, sps_pairwise};
/// // [[a, b], [a, -]]
/// let m = Alignment::from_columns(vec![0, 1], [
///     (ActivityId(0), vec![0, 1]),
///     (ActivityId(1), vec![0]),
/// ]).unwrap();
/// assert_eq!(sps_pairwise(&m), 1);
/// ```
pub fn sps_pairwise(alignment: &Alignment) -> u64 {
    let cells = alignment.to_cells();
    let mut total = 0u64;
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            total += cells[i]
                .iter()
                .zip(&cells[j])
                .filter(|(x, y)| x != y)
                .count() as u64;
        }
    }
    total
}

/// Columnar closed form `Σ_k f_k·(N − f_k)`.
pub fn sps_columnar(alignment: &Alignment) -> u64 {
    let n = alignment.n_rows();
    (0..alignment.len())
        .map(|k| column_pairs(alignment.frequency(k), n))
        .sum()
}

/// `Σ_k 2·f_k·(N − f_k)`, the doubled convention.
pub fn sps_doubled(alignment: &Alignment) -> u64 {
    2 * sps_columnar(alignment)
}
