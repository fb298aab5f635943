use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Log;

/// Shape of a generated log. Each trace is a noisy copy of one shared
/// random backbone.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SyntheticParams {
    pub n_traces: usize,
    pub n_activity_types: usize,
    pub backbone_length: usize,
    /// Per backbone activity, chance it is dropped from a trace.
    pub deletion_rate: f64,
    /// Per kept activity, chance a random activity is inserted after it.
    pub insertion_rate: f64,
    /// Per adjacent position, chance the two activities are swapped.
    pub swap_rate: f64,
    pub seed: u64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            n_traces: 100,
            n_activity_types: 20,
            backbone_length: 20,
            deletion_rate: 0.05,
            insertion_rate: 0.05,
            swap_rate: 0.02,
            seed: 0,
        }
    }
}

impl SyntheticParams {
    pub fn validate(&self) -> Result<()> {
        for (name, rate) in [
            ("deletion rate", self.deletion_rate),
            ("insertion rate", self.insertion_rate),
            ("swap rate", self.swap_rate),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidParameter(format!(
                    "{name} {rate} outside [0, 1]"
                )));
            }
        }
        if self.n_traces == 0 {
            return Err(Error::InvalidParameter(
                "at least one trace is required".into(),
            ));
        }
        if self.n_activity_types == 0 {
            return Err(Error::InvalidParameter(
                "at least one activity type is required".into(),
            ));
        }
        Ok(())
    }
}

/// Generates a log, deterministic per `params.seed`.
///
/// Activity labels are `A00`, `A01`, ... (zero-padded to the width of the
/// largest type number).
pub fn generate_synthetic(params: &SyntheticParams) -> Result<Log> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let width = (params.n_activity_types - 1).to_string().len().max(2);
    let labels: Vec<String> = (0..params.n_activity_types)
        .map(|i| format!("A{i:0width$}"))
        .collect();
    let types = params.n_activity_types;
    let backbone: Vec<usize> = (0..params.backbone_length)
        .map(|_| rng.gen_range(0..types))
        .collect();

    let mut log = Log::new();
    for t in 0..params.n_traces {
        let mut trace = Vec::with_capacity(params.backbone_length + 4);
        for &a in &backbone {
            if rng.gen_bool(params.deletion_rate) {
                continue;
            }
            trace.push(a);
            if rng.gen_bool(params.insertion_rate) {
                trace.push(rng.gen_range(0..types));
            }
        }
        for i in 1..trace.len() {
            if rng.gen_bool(params.swap_rate) {
                trace.swap(i - 1, i);
            }
        }
        log.push_trace(
            (t + 1).to_string(),
            trace.iter().map(|&a| labels[a].as_str()),
        );
    }
    Ok(log)
}

/// Summary statistics of a log.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogStats {
    pub traces: usize,
    pub total_activities: usize,
    pub activity_types: usize,
    pub mean_length: f64,
    /// Population standard deviation of trace length.
    pub std_length: f64,
}

impl LogStats {
    pub fn of(log: &Log) -> Self {
        let n = log.len().max(1) as f64;
        let total = log.total_activities();
        let mean = total as f64 / n;
        let var = log
            .traces
            .iter()
            .map(|t| (t.len() as f64 - mean).powi(2))
            .sum::<f64>()
            / n;
        let mut seen = vec![false; log.alphabet.len()];
        for a in log.traces.iter().flat_map(|t| &t.activities) {
            seen[a.index()] = true;
        }
        LogStats {
            traces: log.len(),
            total_activities: total,
            activity_types: seen.iter().filter(|&&s| s).count(),
            mean_length: mean,
            std_length: var.sqrt(),
        }
    }
}

impl fmt::Display for LogStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Num. of Traces     {}", self.traces)?;
        writeln!(f, "Total Activities   {}", self.total_activities)?;
        writeln!(f, "Activity Types     {}", self.activity_types)?;
        writeln!(f, "Avg. Trace Length  {:.2}", self.mean_length)?;
        writeln!(f, "Trace Length STD   {:.2}", self.std_length)
    }
}
