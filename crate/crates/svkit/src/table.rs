//! CSV and Markdown rendering of study results.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use svkit_core::metrics::{ErrorReport, Scheme};

use crate::error::{HarnessError, Result};
use crate::study::{series_orders, Format, StudyResult};

pub const CSV_HEADER: [&str; 7] = ["scheme", "k", "n", "T", "metric", "value", "order"];

/// Three significant digits, e.g. `4.24e-4`.
pub fn format_value(v: f64) -> String {
    format!("{v:.2e}")
}

pub fn format_order(order: Option<f64>) -> String {
    order.map(|o| format!("{o:.2}")).unwrap_or_default()
}

/// One `(scheme, k)` series per group, levels ascending.
fn groups(result: &StudyResult) -> Vec<(Scheme, usize, Vec<&ErrorReport>)> {
    let mut out: Vec<(Scheme, usize, Vec<&ErrorReport>)> = Vec::new();
    for r in &result.reports {
        match out.iter_mut().find(|(s, k, _)| *s == r.scheme && *k == r.k) {
            Some((_, _, list)) => list.push(r),
            None => out.push((r.scheme, r.k, vec![r])),
        }
    }
    for (_, _, list) in &mut out {
        list.sort_by_key(|r| r.n);
    }
    out
}

fn metric_orders(reports: &[&ErrorReport], metric: &str) -> Vec<Option<f64>> {
    let series: Vec<(usize, f64)> = reports
        .iter()
        .filter_map(|r| r.metric(metric).map(|v| (r.n, v)))
        .collect();
    series_orders(&series)
}

pub fn write_csv<W: Write>(result: &StudyResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (scheme, k, reports) in groups(result) {
        let Some(first) = reports.first() else { continue };
        for (metric, _) in first.metrics() {
            let orders = metric_orders(&reports, metric);
            for (r, order) in reports.iter().zip(orders) {
                let value = r.metric(metric).unwrap_or(f64::NAN);
                w.write_record([
                    scheme.name().to_string(),
                    k.to_string(),
                    r.n.to_string(),
                    r.t_final.to_string(),
                    metric.to_string(),
                    format_value(value),
                    format_order(order),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv(result: &StudyResult) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(result, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ASCII"))
}

/// One table per `(scheme, k)`: a row per level, an error/order column pair per metric.
pub fn to_markdown(result: &StudyResult) -> String {
    let mut s = String::new();
    for (scheme, k, reports) in groups(result) {
        let Some(first) = reports.first() else { continue };
        let metrics: Vec<&str> = first.metrics().into_iter().map(|(m, _)| m).collect();
        let _ = writeln!(s, "### {} k={} T={}\n", scheme.name().to_uppercase(), k, first.t_final);
        let _ = write!(s, "| N |");
        for m in &metrics {
            let _ = write!(s, " {m} | order |");
        }
        let _ = write!(s, "\n|---:|");
        for _ in &metrics {
            let _ = write!(s, "---:|---:|");
        }
        s.push('\n');
        let orders: Vec<Vec<Option<f64>>> = metrics.iter().map(|m| metric_orders(&reports, m)).collect();
        for (row, r) in reports.iter().enumerate() {
            let _ = write!(s, "| {} |", r.n);
            for (m, o) in metrics.iter().zip(&orders) {
                let value = r.metric(m).unwrap_or(f64::NAN);
                let order = if row == 0 { "-".to_string() } else { format_order(o[row]) };
                let _ = write!(s, " {} | {} |", format_value(value), order);
            }
            s.push('\n');
        }
        s.push('\n');
    }
    s
}

pub fn render(result: &StudyResult, format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(result),
        Format::Markdown => Ok(to_markdown(result)),
    }
}

/// Writes the table to `path`, or to standard output when `path` is `None`.
pub fn emit_table(result: &StudyResult, format: Format, path: Option<&Path>) -> Result<()> {
    if result.reports.is_empty() {
        return Err(HarnessError::EmptyStudy);
    }
    let text = render(result, format)?;
    match path {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
