use std::io::Write;

use pima::logio::parse_alignment_tsv;
use pima::{sps_pairwise, Error, SpsScore};

use crate::{read_file, stdout_err, CliError, CliResult, ScoreArgs};

pub fn cmd_score(args: &ScoreArgs, out: &mut dyn Write) -> CliResult<()> {
    let text = read_file(&args.input)?;
    let (_, alignment) =
        parse_alignment_tsv(&text, &args.gap_token).map_err(|source| match source {
            Error::MixedColumn { .. } => CliError::Invariant {
                path: args.input.clone(),
                source,
            },
            source => CliError::Parse {
                path: args.input.clone(),
                source,
            },
        })?;
    let score = SpsScore::of(&alignment);
    // Cross-check the closed form against the literal pairwise count.
    debug_assert_eq!(score.pairs_score, sps_pairwise(&alignment));
    (|| {
        writeln!(out, "rows\t{}", alignment.n_rows())?;
        writeln!(out, "length\t{}", alignment.len())?;
        writeln!(out, "pairs_score\t{}", score.pairs_score)?;
        writeln!(out, "doubled_score\t{}", score.doubled_score)
    })()
    .map_err(stdout_err)
}
