use std::io::Write;

use pima::logio::{generate_synthetic, write_traces, LogStats};

use crate::{stdout_err, write_file, CliResult, GenArgs};

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> CliResult<()> {
    let log = generate_synthetic(&args.synth.params(args.seed))?;
    write_file(&args.out, &write_traces(&log))?;
    write!(out, "{}", LogStats::of(&log)).map_err(stdout_err)
}
