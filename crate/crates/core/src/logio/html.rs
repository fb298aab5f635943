use std::fmt::Write;

use crate::consensus::consensus;
use crate::model::{ActivityId, Alignment, Log};

/// Fill color for an activity: hues spaced by the golden angle.
pub fn activity_color(id: ActivityId) -> String {
    let hue = (id.0 as f64 * 137.508) % 360.0;
    let lightness = if id.0.is_multiple_of(2) { 48 } else { 62 };
    format!("hsl({hue:.1}, 65%, {lightness}%)")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

/// Renders a self-contained HTML page with one colored cell per activity.
///
/// With `threshold > 0` only consensus columns are drawn. Rows follow trace
/// order in `log`. Output depends only on the inputs.
pub fn render_heatmap_html(alignment: &Alignment, log: &Log, threshold: f64) -> String {
    let columns: Vec<usize> = if threshold > 0.0 {
        consensus(alignment, threshold).columns()
    } else {
        (0..alignment.len()).collect()
    };
    let mut used: Vec<ActivityId> = columns.iter().map(|&k| alignment.label(k)).collect();
    used.sort();
    used.dedup();

    let mut html = String::new();
    html.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    html.push_str("<title>Trace alignment</title>\n<style>\n");
    html.push_str("body { font-family: sans-serif; margin: 1.5em; }\n");
    html.push_str("table.alignment { border-collapse: collapse; }\n");
    html.push_str("table.alignment td { width: 10px; height: 10px; padding: 0; border: 1px solid #f4f4f4; }\n");
    html.push_str("table.alignment th { font-weight: normal; font-size: 10px; text-align: right; padding-right: 4px; }\n");
    html.push_str(
        ".legend span { display: inline-block; margin: 0 1em 0.3em 0; font-size: 12px; }\n",
    );
    html.push_str(".legend i { display: inline-block; width: 12px; height: 12px; margin-right: 4px; vertical-align: middle; }\n");
    html.push_str("</style>\n</head>\n<body>\n");
    let _ = writeln!(
        html,
        "<p>{} traces, {} of {} columns shown (minimum column frequency {})</p>",
        alignment.n_rows(),
        columns.len(),
        alignment.len(),
        threshold
    );

    html.push_str("<div class=\"legend\">\n");
    for &id in &used {
        let _ = writeln!(
            html,
            "<span><i style=\"background: {}\"></i>{}</span>",
            activity_color(id),
            escape(log.alphabet.label(id))
        );
    }
    html.push_str("</div>\n<table class=\"alignment\">\n");
    for p in alignment.positions_by_trace() {
        let trace = alignment.rows()[p];
        let _ = write!(html, "<tr><th>{}</th>", escape(&log.traces[trace].case_id));
        for &k in &columns {
            if alignment.contains(k, p) {
                let label = alignment.label(k);
                let _ = write!(
                    html,
                    "<td style=\"background: {}\" title=\"{}\"></td>",
                    activity_color(label),
                    escape(log.alphabet.label(label))
                );
            } else {
                html.push_str("<td></td>");
            }
        }
        html.push_str("</tr>\n");
    }
    html.push_str("</table>\n</body>\n</html>\n");
    html
}
