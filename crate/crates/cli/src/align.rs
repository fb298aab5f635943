use std::io::Write;

use pima::logio::{render_heatmap_html, write_alignment_tsv, write_stats_json, StatsInput};
use pima::{consensus, converge, SpsScore};

use crate::{read_log, stdout_err, write_file, AlignArgs, CliError, CliResult};

pub fn cmd_align(args: &AlignArgs, out: &mut dyn Write) -> CliResult<()> {
    let initializer = args.policy.initializer()?;
    let policy = args.policy.policy(args.policy.seed)?;
    if !(0.0..=1.0).contains(&args.consensus) {
        return Err(CliError::Config(format!(
            "consensus threshold {} outside [0, 1]",
            args.consensus
        )));
    }
    let log = read_log(&args.input)?;
    let run = converge(&log, initializer, &policy)?;
    let score = SpsScore::of(&run.alignment);
    let summary = consensus(&run.alignment, args.consensus);

    if let Some(path) = &args.out {
        write_file(
            path,
            &write_alignment_tsv(&run.alignment, &log, &args.input.gap_token),
        )?;
    }
    if let Some(path) = &args.stats {
        let input = StatsInput {
            initializer: initializer.name(),
            seed: policy.seed,
            policy: &policy,
            records: &run.records,
            final_score: score,
            final_length: run.alignment.len(),
            rows: run.alignment.n_rows(),
            consensus: Some(&summary),
            alphabet: &log.alphabet,
        };
        write_file(path, &write_stats_json(&input, !args.no_timings))?;
    }
    if let Some(path) = &args.html {
        write_file(
            path,
            &render_heatmap_html(&run.alignment, &log, args.consensus),
        )?;
    }

    (|| {
        writeln!(out, "pairs_score\t{}", score.pairs_score)?;
        writeln!(out, "doubled_score\t{}", score.doubled_score)?;
        writeln!(out, "length\t{}", run.alignment.len())?;
        writeln!(out, "iterations\t{}", run.records.len() - 1)?;
        writeln!(out, "consensus_length\t{}", summary.len())
    })()
    .map_err(stdout_err)
}
