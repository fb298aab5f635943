//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use pima::logio::SyntheticParams;
use pima::{ActivityId, Alignment, Log};
use rand::Rng;

pub const MILD: (f64, f64, f64) = (0.03, 0.03, 0.01);
pub const MODERATE: (f64, f64, f64) = (0.08, 0.08, 0.03);

pub fn synth(
    n: usize,
    types: usize,
    backbone: usize,
    noise: (f64, f64, f64),
    seed: u64,
) -> SyntheticParams {
    SyntheticParams {
        n_traces: n,
        n_activity_types: types,
        backbone_length: backbone,
        insertion_rate: noise.0,
        deletion_rate: noise.1,
        swap_rate: noise.2,
        seed,
    }
}

/// Random log with labels drawn from the first `alphabet` letters.
pub fn random_log(
    rng: &mut impl Rng,
    traces: usize,
    max_len: usize,
    alphabet: usize,
    min_len: usize,
) -> Log {
    let seqs: Vec<String> = (0..traces)
        .map(|_| {
            let len = rng.gen_range(min_len..=max_len);
            (0..len)
                .map(|_| ((b'a' + rng.gen_range(0..alphabet) as u8) as char).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    Log::from_sequences(seqs)
}

/// Random alignment over row positions `0..rows` (trace ids `first..first+rows`),
/// with columns that may be empty.
pub fn random_alignment(
    rng: &mut impl Rng,
    first: usize,
    rows: usize,
    cols: usize,
    alphabet: u32,
) -> Alignment {
    let columns: Vec<(ActivityId, Vec<usize>)> = (0..cols)
        .map(|_| {
            let label = ActivityId(rng.gen_range(0..alphabet));
            let p = rng.gen_range(0.0..1.0);
            let members = (0..rows).filter(|_| rng.gen_bool(p)).collect();
            (label, members)
        })
        .collect();
    Alignment::from_columns((first..first + rows).collect(), columns).unwrap()
}

/// Like [`random_alignment`] but every column has at least one member.
pub fn random_profile(
    rng: &mut impl Rng,
    first: usize,
    rows: usize,
    cols: usize,
    alphabet: u32,
) -> Alignment {
    let columns: Vec<(ActivityId, Vec<usize>)> = (0..cols)
        .map(|_| {
            let label = ActivityId(rng.gen_range(0..alphabet));
            let mut members: Vec<usize> = (0..rows).filter(|_| rng.gen_bool(0.5)).collect();
            if members.is_empty() {
                members.push(rng.gen_range(0..rows));
            }
            (label, members)
        })
        .collect();
    Alignment::from_columns((first..first + rows).collect(), columns).unwrap()
}

/// Dense rows of a matrix: `cells[p][k]`.
pub fn dense(m: &Alignment) -> Vec<Vec<Option<u32>>> {
    (0..m.n_rows())
        .map(|p| {
            (0..m.len())
                .map(|k| m.contains(k, p).then(|| m.label(k).0))
                .collect()
        })
        .collect()
}

/// Sum over row pairs of the Hamming distance between their gap patterns.
pub fn hamming_pairs(cells: &[Vec<Option<u32>>]) -> u64 {
    let mut total = 0;
    for p in 0..cells.len() {
        for q in p + 1..cells.len() {
            total += cells[p]
                .iter()
                .zip(&cells[q])
                .filter(|(x, y)| x.is_some() != y.is_some())
                .count() as u64;
        }
    }
    total
}

type Column = Vec<Option<u32>>;

struct Search<'a> {
    a: &'a Alignment,
    b: &'a Alignment,
    cols_a: Vec<Column>,
    cols_b: Vec<Column>,
    stack: Vec<Column>,
    best: u64,
}

impl Search<'_> {
    fn walk(&mut self, i: usize, j: usize) {
        let (na, nb) = (self.a.n_rows(), self.b.n_rows());
        if i == self.a.len() && j == self.b.len() {
            let rows: Vec<Column> = (0..na + nb)
                .map(|r| self.stack.iter().map(|c| c[r]).collect())
                .collect();
            self.best = self.best.min(hamming_pairs(&rows));
            return;
        }
        let step = |this: &mut Self, col: Column, di: usize, dj: usize| {
            this.stack.push(col);
            this.walk(i + di, j + dj);
            this.stack.pop();
        };
        if i < self.a.len() {
            let col = [self.cols_a[i].clone(), vec![None; nb]].concat();
            step(self, col, 1, 0);
        }
        if j < self.b.len() {
            let col = [vec![None; na], self.cols_b[j].clone()].concat();
            step(self, col, 0, 1);
        }
        if i < self.a.len() && j < self.b.len() && self.a.label(i) == self.b.label(j) {
            let col = [self.cols_a[i].clone(), self.cols_b[j].clone()].concat();
            step(self, col, 1, 1);
        }
    }
}

/// Every way to interleave the columns of `a` and `b`, pairing only
/// equal-labelled columns; returns the least pairwise score found.
pub fn exhaustive_min_merge(a: &Alignment, b: &Alignment) -> u64 {
    let columns = |m: &Alignment| -> Vec<Column> {
        let d = dense(m);
        (0..m.len())
            .map(|k| d.iter().map(|r| r[k]).collect())
            .collect()
    };
    let mut search = Search {
        a,
        b,
        cols_a: columns(a),
        cols_b: columns(b),
        stack: Vec::new(),
        best: u64::MAX,
    };
    search.walk(0, 0);
    search.best
}

/// Gap-stripped row `p` of a dense matrix.
pub fn strip(row: &[Option<u32>]) -> Vec<u32> {
    row.iter().flatten().copied().collect()
}

pub const GOLDEN_LOG: &str = "register triage xray doctor discharge
register triage doctor discharge
register xray triage doctor lab discharge
register triage lab doctor
triage doctor discharge
register triage xray lab doctor discharge
";

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Alignment TSV, stats JSON (no timings) and heatmap HTML for the golden log.
pub fn golden_outputs() -> [(String, String); 3] {
    use pima::logio::{
        render_heatmap_html, write_alignment_tsv, write_stats_json, StatsInput, DEFAULT_GAP,
    };
    use pima::{consensus, converge, ConvergencePolicy, Initializer, SpsScore};

    let log = pima::logio::parse_traces(GOLDEN_LOG, DEFAULT_GAP).unwrap();
    let policy = ConvergencePolicy {
        seed: 3,
        ..Default::default()
    };
    let init = Initializer::RandomSequential;
    let run = converge(&log, init, &policy).unwrap();
    let summary = consensus(&run.alignment, 0.05);
    let stats = write_stats_json(
        &StatsInput {
            initializer: init.name(),
            seed: policy.seed,
            policy: &policy,
            records: &run.records,
            final_score: SpsScore::of(&run.alignment),
            final_length: run.alignment.len(),
            rows: run.alignment.n_rows(),
            consensus: Some(&summary),
            alphabet: &log.alphabet,
        },
        false,
    );
    [
        (
            "golden_alignment.tsv".into(),
            write_alignment_tsv(&run.alignment, &log, DEFAULT_GAP),
        ),
        ("golden_stats.json".into(), stats),
        (
            "golden_heatmap.html".into(),
            render_heatmap_html(&run.alignment, &log, 0.05),
        ),
    ]
}

/// Compares against the stored fixture; `UPDATE_GOLDENS=1` rewrites it.
pub fn check_golden(name: &str, actual: &str) -> bool {
    let path = fixture(name);
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    std::fs::read_to_string(&path).is_ok_and(|expected| expected == actual)
}
