use super::{EvalError, EvalReport};
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
    Svg,
}

impl FromStr for ReportFormat {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            "svg" => Ok(ReportFormat::Svg),
            _ => Err(EvalError::UnknownFormat(s.to_string())),
        }
    }
}

pub fn render_report(report: &EvalReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Text => render_text(report).into_bytes(),
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serializes");
            out.push(b'\n');
            out
        }
        ReportFormat::Svg => render_svg(report).into_bytes(),
    }
}

fn cell(value: f64, undefined: bool) -> String {
    if undefined {
        "-".to_string()
    } else {
        format!("{value:.2}")
    }
}

fn render_text(r: &EvalReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<16}{:>10}{:>10}{:>8}", "Route", "Precision", "Recall", "Count");
    for (label, st) in &r.per_label {
        let _ = writeln!(
            s,
            "{:<16}{:>10}{:>10}{:>8}",
            label.as_str(),
            cell(st.precision, st.precision_undefined),
            cell(st.recall, st.recall_undefined),
            st.count
        );
    }
    let _ = writeln!(
        s,
        "{:<16}{:>10.2}{:>10.2}{:>8}",
        "Overall",
        r.overall_precision,
        r.overall_recall,
        r.table_count()
    );
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "accuracy {:.4} ({}/{} routes, blocking/bubble included)",
        r.accuracy,
        r.confusion.trace(),
        r.total
    );
    let _ = writeln!(s, "macro precision {:.4}, macro recall {:.4}", r.macro_precision, r.macro_recall);
    s
}

const CELL: f64 = 44.0;
const MARGIN: f64 = 130.0;

fn render_svg(r: &EvalReport) -> String {
    let labels = &r.confusion.labels;
    let n = labels.len() as f64;
    let width = MARGIN + n * CELL + 20.0;
    let height = MARGIN + n * CELL + 40.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    for (i, label) in labels.iter().enumerate() {
        let y = MARGIN + (i as f64 + 0.5) * CELL;
        let x = MARGIN + (i as f64 + 0.5) * CELL;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            MARGIN - 6.0,
            label.as_str()
        );
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{}" text-anchor="start" transform="rotate(-60 {x} {})">{}</text>"#,
            MARGIN - 6.0,
            MARGIN - 6.0,
            label.as_str()
        );
    }
    for (i, row) in r.confusion.normalized.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let x = MARGIN + j as f64 * CELL;
            let y = MARGIN + i as f64 * CELL;
            let _ = writeln!(
                s,
                r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="#08306b" fill-opacity="{v:.4}" stroke="#999" stroke-width="0.5"/>"##
            );
            let ink = if v > 0.5 { "white" } else { "black" };
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle" dominant-baseline="middle" fill="{ink}">{v:.2}</text>"#,
                x + CELL / 2.0,
                y + CELL / 2.0
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">predicted</text>"#,
        MARGIN + n * CELL / 2.0,
        MARGIN + n * CELL + 24.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">reference</text>"#,
        MARGIN + n * CELL / 2.0,
        MARGIN + n * CELL / 2.0
    );
    s.push_str("</svg>\n");
    s
}
