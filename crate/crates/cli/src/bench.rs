use std::io::Write;
use std::time::{Duration, Instant};

use pima::init::{distance_matrix, GuideTree};
use pima::logio::generate_synthetic;
use pima::{
    converge, guide_tree_baseline, single_trace_pass, sps_columnar, ConvergencePolicy, Initializer,
    Linkage, Log, Run,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::{read_file, stdout_err, write_file, BenchArgs, CliError, CliResult};

/// Relative difference of `score` against `baseline`, in percent.
/// A zero baseline gives 0 when `score` is also zero and infinity otherwise.
pub fn percent_delta(score: u64, baseline: u64) -> f64 {
    if baseline == 0 {
        return if score == 0 { 0.0 } else { f64::INFINITY };
    }
    (score as f64 - baseline as f64) / baseline as f64 * 100.0
}

/// Mean and population standard deviation; `(NaN, NaN)` for no samples.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

#[derive(Debug, Serialize)]
struct SeedResult {
    seed: u64,
    init_score: u64,
    init_delta_pct: f64,
    final_score: u64,
    final_delta_pct: f64,
    iterations: usize,
    /// Iterations until the score first reaches the baseline, if ever.
    iterations_to_baseline: Option<usize>,
    ms_to_baseline: Option<f64>,
    total_ms: f64,
}

#[derive(Debug, Serialize)]
struct Scaling {
    traces: usize,
    pass_ms: [f64; 2],
    pass_ratio: f64,
    baseline_tree_ms: [f64; 2],
    baseline_tree_ratio: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    initializer: &'static str,
    traces: usize,
    baseline_score: u64,
    baseline_ms: f64,
    runs: Vec<SeedResult>,
    failed_to_beat_pct: f64,
    scaling: Option<Scaling>,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

fn seed_result(run: &Run, seed: u64, baseline: u64) -> SeedResult {
    let mut cumulative = Duration::ZERO;
    let mut reached = None;
    for r in &run.records {
        cumulative += r.elapsed;
        if reached.is_none() && r.pairs_score <= baseline {
            reached = Some((r.index, ms(cumulative)));
        }
    }
    let init = run.records[0].pairs_score;
    let last = run.final_score();
    SeedResult {
        seed,
        init_score: init,
        init_delta_pct: percent_delta(init, baseline),
        final_score: last,
        final_delta_pct: percent_delta(last, baseline),
        iterations: run.records.len() - 1,
        iterations_to_baseline: reached.map(|r| r.0),
        ms_to_baseline: reached.map(|r| r.1),
        total_ms: ms(cumulative),
    }
}

/// Median time of one single-trace pass over an initial alignment of `log`,
/// and of the baseline's distance matrix plus tree construction.
fn time_sizes(log: &Log, initializer: Initializer, repeats: usize) -> CliResult<(f64, f64)> {
    let (initial, _) = initializer.run(log, 0)?;
    let order: Vec<usize> = (0..log.len()).collect();
    let mut pass = Vec::with_capacity(repeats);
    let mut tree = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let t = Instant::now();
        let out = single_trace_pass(&initial, &order)?;
        pass.push(ms(t.elapsed()));
        std::hint::black_box(out);
        let t = Instant::now();
        let mut d = distance_matrix(log);
        let g = GuideTree::build(&mut d, log.len(), Linkage::Average);
        tree.push(ms(t.elapsed()));
        std::hint::black_box(g);
    }
    Ok((median(pass), median(tree)))
}

fn scaling(args: &BenchArgs, initializer: Initializer) -> CliResult<Scaling> {
    let n = args.synth.traces;
    let mut small = args.synth.clone();
    small.traces = n;
    let mut large = args.synth.clone();
    large.traces = 2 * n;
    let a = time_sizes(
        &generate_synthetic(&small.params(0))?,
        initializer,
        args.repeats,
    )?;
    let b = time_sizes(
        &generate_synthetic(&large.params(0))?,
        initializer,
        args.repeats,
    )?;
    Ok(Scaling {
        traces: n,
        pass_ms: [a.0, b.0],
        pass_ratio: b.0 / a.0,
        baseline_tree_ms: [a.1, b.1],
        baseline_tree_ratio: b.1 / a.1,
    })
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let initializer = args.policy.initializer()?;
    let template = args.policy.policy(args.policy.seed)?;
    if args.seeds == 0 || args.repeats == 0 {
        return Err(CliError::Config(
            "--seeds and --repeats must be positive".into(),
        ));
    }
    let log = match &args.input {
        Some(path) => {
            let text = read_file(path)?;
            pima::logio::parse_log(&text, args.format, &args.gap_token).map_err(|source| {
                CliError::Parse {
                    path: path.clone(),
                    source,
                }
            })?
        }
        None => generate_synthetic(&args.synth.params(args.policy.seed))?,
    };
    let linkage = match initializer {
        Initializer::GuideTree(l) => l,
        _ => args.policy.linkage.parse()?,
    };

    let t = Instant::now();
    let (baseline, _) = guide_tree_baseline(&log, linkage)?;
    let baseline_ms = ms(t.elapsed());
    let baseline_score = sps_columnar(&baseline);

    let seeds: Vec<u64> = (0..args.seeds as u64).map(|k| template.seed + k).collect();
    let one = |seed: u64| -> pima::Result<SeedResult> {
        let policy = ConvergencePolicy { seed, ..template };
        let run = converge(&log, initializer, &policy)?;
        Ok(seed_result(&run, seed, baseline_score))
    };
    let runs: Vec<SeedResult> = if args.parallel {
        seeds
            .par_iter()
            .map(|&s| one(s))
            .collect::<pima::Result<_>>()?
    } else {
        seeds.iter().map(|&s| one(s)).collect::<pima::Result<_>>()?
    };
    let failed = runs
        .iter()
        .filter(|r| r.final_score > baseline_score)
        .count();
    let scaling = if args.scaling {
        Some(scaling(args, initializer)?)
    } else {
        None
    };
    let report = Report {
        initializer: initializer.name(),
        traces: log.len(),
        baseline_score,
        baseline_ms,
        failed_to_beat_pct: failed as f64 / runs.len() as f64 * 100.0,
        runs,
        scaling,
    };
    if let Some(path) = &args.stats {
        let mut json = serde_json::to_string_pretty(&report).map_err(pima::Error::from)?;
        json.push('\n');
        write_file(path, &json)?;
    }
    print_report(&report, out).map_err(stdout_err)
}

fn print_report(r: &Report, out: &mut dyn Write) -> std::io::Result<()> {
    let stat = |f: &dyn Fn(&SeedResult) -> Option<f64>| {
        let v: Vec<f64> = r.runs.iter().filter_map(f).collect();
        let (m, s) = mean_std(&v);
        format!("{m:.3} ± {s:.3} (n={})", v.len())
    };
    writeln!(out, "initializer\t{}", r.initializer)?;
    writeln!(out, "traces\t{}", r.traces)?;
    writeln!(out, "baseline_score\t{}", r.baseline_score)?;
    writeln!(out, "baseline_ms\t{:.3}", r.baseline_ms)?;
    writeln!(out, "init_score\t{}", stat(&|s| Some(s.init_score as f64)))?;
    writeln!(out, "init_delta_pct\t{}", stat(&|s| Some(s.init_delta_pct)))?;
    writeln!(out, "ms_to_baseline\t{}", stat(&|s| s.ms_to_baseline))?;
    writeln!(
        out,
        "iterations_to_baseline\t{}",
        stat(&|s| s.iterations_to_baseline.map(|i| i as f64))
    )?;
    writeln!(
        out,
        "final_score\t{}",
        stat(&|s| Some(s.final_score as f64))
    )?;
    writeln!(
        out,
        "final_delta_pct\t{}",
        stat(&|s| Some(s.final_delta_pct))
    )?;
    writeln!(out, "total_ms\t{}", stat(&|s| Some(s.total_ms)))?;
    writeln!(out, "failed_to_beat_pct\t{:.1}", r.failed_to_beat_pct)?;
    if let Some(s) = &r.scaling {
        writeln!(
            out,
            "pass_ms\t{:.3} -> {:.3} (ratio {:.2})",
            s.pass_ms[0], s.pass_ms[1], s.pass_ratio
        )?;
        writeln!(
            out,
            "baseline_tree_ms\t{:.3} -> {:.3} (ratio {:.2})",
            s.baseline_tree_ms[0], s.baseline_tree_ms[1], s.baseline_tree_ratio
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percent_delta_by_hand() {
        assert_eq!(percent_delta(110, 100), 10.0);
        assert_eq!(percent_delta(75, 100), -25.0);
        assert_eq!(percent_delta(0, 0), 0.0);
        assert!(percent_delta(1, 0).is_infinite());
    }

    #[test]
    fn mean_std_by_hand() {
        // 2, 4, 4, 4, 5, 5, 7, 9: mean 5, population std 2.
        let (m, s) = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(m, 5.0);
        assert_eq!(s, 2.0);
        assert!(mean_std(&[]).0.is_nan());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 3.0, 2.0]), 2.5);
    }
}
