use serde_json::json;

use gaugelab::catalog::conditional_series_trace;

use crate::args::SeriesArgs;
use crate::output::{is_json, json_text, metadata, num, Csv, Report};

pub const SERIES_HEADER: [&str; 4] = ["n", "partial", "positive", "negative"];

pub fn run(args: &SeriesArgs) -> Result<Report, String> {
    let step = args.step.unwrap_or(args.n);
    let rows = conditional_series_trace(args.n, step).map_err(|e| e.to_string())?;
    let &(n, s, p, m) = rows.last().expect("n ≥ 1 gives a row");
    let summary = format!("series n={n}: partial {}, positive {}, negative {}", num(s), num(p), num(m));
    let body = if is_json(&args.output) {
        let rows: Vec<_> = rows
            .iter()
            .map(|&(n, s, p, m)| json!({ "n": n, "partial": s, "positive": p, "negative": m }))
            .collect();
        json_text(&json!({
            "command": "series",
            "rows": rows,
            "metadata": metadata(&args.output, json!({})),
        }))
    } else {
        let mut csv = Csv::new(&SERIES_HEADER);
        for (n, s, p, m) in rows {
            csv.row([n.to_string(), num(s), num(p), num(m)]);
        }
        csv.finish()
    };
    Ok(Report { body, summary, exit: 0 })
}
