use crate::error::{Error, Result};
use crate::model::{ActivityAlphabet, Alignment, Log};

/// Writes the alignment matrix as tab-separated text.
///
/// The header is `case_id` followed by column numbers `1..=L`. Each row is a
/// case id and L cells, an activity label or `gap`. Rows are ordered by
/// trace index in `log`.
pub fn write_alignment_tsv(alignment: &Alignment, log: &Log, gap: &str) -> String {
    let mut out = String::from("case_id");
    for k in 1..=alignment.len() {
        out.push('\t');
        out.push_str(&k.to_string());
    }
    out.push('\n');
    for p in alignment.positions_by_trace() {
        let trace = alignment.rows()[p];
        out.push_str(&log.traces[trace].case_id);
        for k in 0..alignment.len() {
            out.push('\t');
            match alignment.cell(p, k) {
                Some(a) => out.push_str(log.alphabet.label(a)),
                None => out.push_str(gap),
            }
        }
        out.push('\n');
    }
    out
}

/// Reads an alignment matrix written by [`write_alignment_tsv`].
///
/// Returns the log of gap-stripped rows alongside the alignment. Columns
/// mixing two activities are rejected; all-gap columns are accepted.
pub fn parse_alignment_tsv(text: &str, gap: &str) -> Result<(Log, Alignment)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::EmptyInput)?;
    let header: Vec<&str> = header.split('\t').collect();
    if header[0] != "case_id" {
        return Err(Error::Parse {
            line: 1,
            message: "header must start with case_id".into(),
        });
    }
    let width = header.len() - 1;

    let mut alphabet = ActivityAlphabet::new();
    let mut case_ids = Vec::new();
    let mut cells = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != width + 1 {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected {} cells, found {}", width, fields.len() - 1),
            });
        }
        case_ids.push(fields[0].to_owned());
        cells.push(
            fields[1..]
                .iter()
                .map(|&c| (c != gap).then(|| alphabet.intern(c)))
                .collect::<Vec<_>>(),
        );
    }

    let alignment = Alignment::from_cells((0..cells.len()).collect(), &cells, &alphabet)?;
    let mut log = Log {
        alphabet,
        traces: Vec::with_capacity(case_ids.len()),
    };
    for (case_id, row) in case_ids.into_iter().zip(&cells) {
        log.traces.push(crate::model::Trace {
            case_id,
            activities: row.iter().flatten().copied().collect(),
        });
    }
    Ok((log, alignment))
}
