use crate::error::{Error, Result};
use crate::model::Log;

/// Parses one trace per non-empty line, activities separated by whitespace.
///
/// Case ids are 1-based line numbers. Blank lines are skipped, so empty
/// traces cannot be expressed in this format.
pub fn parse_traces(text: &str, gap: &str) -> Result<Log> {
    let mut log = Log::new();
    for (i, line) in text.lines().enumerate() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if let Some(token) = tokens.iter().find(|&&t| t == gap) {
            return Err(Error::GapTokenCollision {
                line: i + 1,
                token: (*token).to_owned(),
            });
        }
        log.push_trace((i + 1).to_string(), tokens);
    }
    if log.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(log)
}

/// One line per trace, labels joined by single spaces.
pub fn write_traces(log: &Log) -> String {
    let mut out = String::new();
    for i in 0..log.len() {
        out.push_str(&log.labels_of(i).join(" "));
        out.push('\n');
    }
    out
}
