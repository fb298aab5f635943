//! Event-log parsing, alignment and statistics output, HTML rendering and
//! synthetic logs.

mod csvlog;
mod html;
mod plain;
mod stats;
mod synth;
mod tsv;

pub use csvlog::{parse_csv, write_csv, CsvConfig};
pub use html::{activity_color, render_heatmap_html};
pub use plain::{parse_traces, write_traces};
pub use stats::{write_stats_json, StatsInput, SCORE_CONVENTION};
pub use synth::{generate_synthetic, LogStats, SyntheticParams};
pub use tsv::{parse_alignment_tsv, write_alignment_tsv};

/// Default gap token; reserved, never an activity label.
pub const DEFAULT_GAP: &str = "-";

/// Input log encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogFormat {
    /// One trace per line, whitespace-separated activities.
    Plain,
    /// `case_id,activity[,order_key]` event rows.
    Csv,
}

impl std::str::FromStr for LogFormat {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "plain" => Ok(LogFormat::Plain),
            "csv" => Ok(LogFormat::Csv),
            other => Err(crate::Error::InvalidParameter(format!(
                "unknown format {other:?}"
            ))),
        }
    }
}

/// Parses `text` in `format` with the given gap token.
pub fn parse_log(text: &str, format: LogFormat, gap: &str) -> crate::Result<crate::Log> {
    match format {
        LogFormat::Plain => parse_traces(text, gap),
        LogFormat::Csv => parse_csv(
            text,
            &CsvConfig {
                gap: gap.to_owned(),
                ..CsvConfig::default()
            },
        ),
    }
}
