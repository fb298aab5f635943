//! Initial alignments.
//!
//! Cheap initializers fold traces into one profile in a fixed order
//! (random, by length, or by activity-number sum). The guide-tree baseline
//! clusters traces by indel edit distance and merges profiles bottom-up
//! along the dendrogram, the classic progressive scheme.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ActivityId, Alignment, Log};
use crate::profile::merge;

/// How a [`GuideOrder`] was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderMethod {
    RandomSequential,
    SortedLength,
    SortedActivitySum,
}

/// A merge schedule for sequential folding: a permutation of trace indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuideOrder {
    pub order: Vec<usize>,
    pub method: OrderMethod,
}

impl GuideOrder {
    pub fn reversed(mut self) -> Self {
        self.order.reverse();
        self
    }
}

/// Uniformly random permutation, deterministic per seed.
pub fn order_random(log: &Log, seed: u64) -> GuideOrder {
    let mut order: Vec<usize> = (0..log.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    GuideOrder {
        order,
        method: OrderMethod::RandomSequential,
    }
}

fn order_by_key(log: &Log, method: OrderMethod, key: impl Fn(&[ActivityId]) -> u64) -> GuideOrder {
    let mut order: Vec<usize> = (0..log.len()).collect();
    // sort_by_key is stable, so equal keys keep index order.
    order.sort_by_key(|&i| key(&log.traces[i].activities));
    GuideOrder { order, method }
}

/// Ascending trace length, ties by index.
pub fn order_by_length(log: &Log) -> GuideOrder {
    order_by_key(log, OrderMethod::SortedLength, |t| t.len() as u64)
}

/// Ascending sum of activity numbers (id + 1), ties by index.
pub fn order_by_activity_sum(log: &Log) -> GuideOrder {
    order_by_key(log, OrderMethod::SortedActivitySum, |t| {
        t.iter().map(|a| a.0 as u64 + 1).sum()
    })
}

/// Left fold of profile merges over `order`. Returns the alignment and the
/// number of merges performed.
pub fn sequential_merge(log: &Log, order: &GuideOrder) -> Result<(Alignment, usize)> {
    let (&first, rest) = order.order.split_first().ok_or(Error::EmptyLog)?;
    let mut acc = Alignment::from_trace(log, first)?;
    for &t in rest {
        let next = Alignment::from_trace(log, t)?;
        if acc.position_of(t).is_some() {
            return Err(Error::OverlappingRows { trace: t });
        }
        acc = merge(&acc, &next);
    }
    Ok((acc, rest.len()))
}

/// Edit distance with insertions and deletions only:
/// `|x| + |y| − 2·LCS(x, y)`.
pub fn indel_distance(x: &[ActivityId], y: &[ActivityId]) -> usize {
    let mut prev = vec![0usize; y.len() + 1];
    let mut cur = vec![0usize; y.len() + 1];
    for &xi in x {
        for (j, &yj) in y.iter().enumerate() {
            cur[j + 1] = if xi == yj {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    x.len() + y.len() - 2 * prev[y.len()]
}

/// Condensed upper-triangle distance matrix, row-major over `i < j`.
pub fn distance_matrix(log: &Log) -> Vec<f64> {
    let n = log.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(indel_distance(&log.traces[i].activities, &log.traces[j].activities) as f64);
        }
    }
    out
}

/// Cluster-to-cluster distance update for the baseline dendrogram.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Linkage {
    Single,
    Complete,
    #[default]
    Average,
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            "average" => Ok(Linkage::Average),
            other => Err(Error::InvalidParameter(format!(
                "unknown linkage {other:?}"
            ))),
        }
    }
}

/// Binary dendrogram over trace indices.
///
/// Node ids below `leaves` are traces; merge `i` creates node `leaves + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct GuideTree {
    pub leaves: usize,
    pub merges: Vec<(usize, usize)>,
}

impl GuideTree {
    /// Agglomerative clustering of a condensed distance matrix.
    pub fn build(condensed: &mut [f64], leaves: usize, linkage: Linkage) -> GuideTree {
        if leaves < 2 {
            return GuideTree {
                leaves,
                merges: Vec::new(),
            };
        }
        let method = match linkage {
            Linkage::Single => kodama::Method::Single,
            Linkage::Complete => kodama::Method::Complete,
            Linkage::Average => kodama::Method::Average,
        };
        let dendrogram = kodama::linkage(condensed, leaves, method);
        GuideTree {
            leaves,
            merges: dendrogram
                .steps()
                .iter()
                .map(|s| (s.cluster1, s.cluster2))
                .collect(),
        }
    }

    pub fn for_log(log: &Log, linkage: Linkage) -> GuideTree {
        GuideTree::build(&mut distance_matrix(log), log.len(), linkage)
    }
}

/// Progressive alignment along `tree`: each internal node merges the
/// already-built profiles of its children, never revisiting subtrees.
pub fn merge_along_tree(log: &Log, tree: &GuideTree) -> Result<(Alignment, usize)> {
    if log.is_empty() {
        return Err(Error::EmptyLog);
    }
    let mut nodes: Vec<Option<Alignment>> = (0..log.len())
        .map(|t| Alignment::from_trace(log, t).map(Some))
        .collect::<Result<_>>()?;
    for &(x, y) in &tree.merges {
        let a = nodes[x].take().expect("dendrogram reuses a merged node");
        let b = nodes[y].take().expect("dendrogram reuses a merged node");
        nodes.push(Some(merge(&a, &b)));
    }
    let root = nodes.pop().flatten().expect("root profile");
    Ok((root, tree.merges.len()))
}

/// The progressive edit-distance guide-tree alignment.
pub fn guide_tree_baseline(log: &Log, linkage: Linkage) -> Result<(Alignment, usize)> {
    merge_along_tree(log, &GuideTree::for_log(log, linkage))
}

/// Initial alignment strategy, selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Initializer {
    RandomSequential,
    SortedLength { descending: bool },
    SortedActivitySum { descending: bool },
    GuideTree(Linkage),
}

impl Initializer {
    pub const NAMES: [&'static str; 4] = [
        "random-sequential",
        "sorted-length",
        "sorted-activity-sum",
        "guide-tree",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Initializer::RandomSequential => Self::NAMES[0],
            Initializer::SortedLength { .. } => Self::NAMES[1],
            Initializer::SortedActivitySum { .. } => Self::NAMES[2],
            Initializer::GuideTree(_) => Self::NAMES[3],
        }
    }

    /// Builds the initial alignment; returns it with the merge count.
    pub fn run(&self, log: &Log, seed: u64) -> Result<(Alignment, usize)> {
        if log.is_empty() {
            return Err(Error::EmptyLog);
        }
        let directed = |order: GuideOrder, descending: bool| {
            if descending {
                order.reversed()
            } else {
                order
            }
        };
        match *self {
            Initializer::RandomSequential => sequential_merge(log, &order_random(log, seed)),
            Initializer::SortedLength { descending } => {
                sequential_merge(log, &directed(order_by_length(log), descending))
            }
            Initializer::SortedActivitySum { descending } => {
                sequential_merge(log, &directed(order_by_activity_sum(log), descending))
            }
            Initializer::GuideTree(linkage) => guide_tree_baseline(log, linkage),
        }
    }
}

impl fmt::Display for Initializer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Initializer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-sequential" => Ok(Initializer::RandomSequential),
            "sorted-length" => Ok(Initializer::SortedLength { descending: false }),
            "sorted-activity-sum" => Ok(Initializer::SortedActivitySum { descending: false }),
            "guide-tree" => Ok(Initializer::GuideTree(Linkage::Average)),
            other => Err(Error::InvalidParameter(format!(
                "unknown initializer {other:?}; expected one of {}",
                Self::NAMES.join(", ")
            ))),
        }
    }
}
