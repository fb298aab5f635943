use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::Log;

/// Column names and reserved gap token for CSV event logs.
#[derive(Clone, Debug)]
pub struct CsvConfig {
    pub case_column: String,
    pub activity_column: String,
    /// Used for within-case ordering when the header contains it.
    pub order_column: String,
    pub gap: String,
}

impl Default for CsvConfig {
    fn default() -> Self {
        CsvConfig {
            case_column: "case_id".into(),
            activity_column: "activity".into(),
            order_column: "order_key".into(),
            gap: super::DEFAULT_GAP.into(),
        }
    }
}

/// Parses an event table into traces.
///
/// Cases appear in order of their first row. Within a case, events are
/// sorted by the numeric order column when present (stable, so equal keys
/// keep file order), otherwise kept in file order.
pub fn parse_csv(text: &str, config: &CsvConfig) -> Result<Log> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let case_idx = find(&config.case_column)
        .ok_or_else(|| Error::MissingColumn(config.case_column.clone()))?;
    let act_idx = find(&config.activity_column)
        .ok_or_else(|| Error::MissingColumn(config.activity_column.clone()))?;
    let order_idx = find(&config.order_column);

    let mut cases: Vec<(String, Vec<(f64, String)>)> = Vec::new();
    let mut by_case: HashMap<String, usize> = HashMap::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |idx: usize, name: &str| {
            record.get(idx).ok_or_else(|| Error::Parse {
                line,
                message: format!("missing {name} field"),
            })
        };
        let case = field(case_idx, &config.case_column)?;
        let activity = field(act_idx, &config.activity_column)?;
        if activity == config.gap {
            return Err(Error::GapTokenCollision {
                line,
                token: activity.to_owned(),
            });
        }
        let key = match order_idx {
            Some(idx) => {
                let raw = field(idx, &config.order_column)?;
                match raw.parse::<f64>() {
                    Ok(k) if k.is_finite() => k,
                    _ => {
                        return Err(Error::Parse {
                            line,
                            message: format!("unparsable {} {raw:?}", config.order_column),
                        })
                    }
                }
            }
            None => 0.0,
        };
        let slot = *by_case.entry(case.to_owned()).or_insert_with(|| {
            cases.push((case.to_owned(), Vec::new()));
            cases.len() - 1
        });
        cases[slot].1.push((key, activity.to_owned()));
    }
    if cases.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut log = Log::new();
    for (case, mut events) in cases {
        if order_idx.is_some() {
            events.sort_by(|x, y| x.0.total_cmp(&y.0));
        }
        log.push_trace(case, events.into_iter().map(|(_, a)| a));
    }
    Ok(log)
}

/// Writes `case_id,activity` rows, cases in log order, events in trace order.
pub fn write_csv(log: &Log) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["case_id", "activity"])?;
    for (i, trace) in log.traces.iter().enumerate() {
        for label in log.labels_of(i) {
            writer.write_record([trace.case_id.as_str(), label])?;
        }
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8 from UTF-8 input"))
}
