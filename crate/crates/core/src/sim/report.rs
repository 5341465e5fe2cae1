//! CSV and trace output.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::metrics::MetricsReport;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 6] = [
    "malicious_count",
    "rep_efficiency",
    "dmg_selfish",
    "dmg_malicious",
    "detection_rate_pct",
    "paper_literal_pct",
];

pub const RUNS_HEADER: [&str; 17] = [
    "malicious_count",
    "run",
    "rep_efficiency",
    "dmg_selfish",
    "dmg_selfish_reputation_pct",
    "dmg_malicious",
    "dmg_malicious_energy",
    "detection_rate_pct",
    "paper_literal_pct",
    "act_mal",
    "mal_det",
    "allegations",
    "nodes_blacklisted",
    "local_blacklist_pairs",
    "generated",
    "delivered",
    "max_attacker_waste",
];

fn num(v: f64) -> String {
    format!("{v:.6}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("ascii output")
}

/// One row per report with the aggregate metrics.
pub fn metrics_csv(reports: &[MetricsReport]) -> String {
    let mut w = writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory writer");
    for r in reports {
        let a = &r.aggregate;
        w.write_record([
            r.malicious_count.to_string(),
            opt(a.rep_efficiency),
            num(a.dmg_selfish),
            num(a.dmg_malicious),
            opt(a.detection_rate_pct),
            opt(a.paper_literal_pct),
        ])
        .expect("in-memory writer");
    }
    finish(w)
}

/// One row per run of every report.
pub fn runs_csv(reports: &[MetricsReport]) -> String {
    let mut w = writer(Vec::new());
    w.write_record(RUNS_HEADER).expect("in-memory writer");
    for r in reports {
        for (k, m) in r.runs.iter().enumerate() {
            let waste = m.attacker_waste.values().copied().fold(0.0, f64::max);
            w.write_record([
                r.malicious_count.to_string(),
                k.to_string(),
                opt(m.rep_efficiency),
                num(m.dmg_selfish),
                num(m.dmg_selfish_reputation_pct),
                num(m.dmg_malicious),
                num(m.dmg_malicious_energy),
                opt(m.detection_rate_pct),
                opt(m.paper_literal_pct),
                m.act_mal.to_string(),
                m.mal_det.to_string(),
                m.allegations.to_string(),
                m.nodes_blacklisted.to_string(),
                m.local_blacklist_pairs.to_string(),
                m.generated.to_string(),
                m.delivered.to_string(),
                num(waste),
            ])
            .expect("in-memory writer");
        }
    }
    finish(w)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Output {
            path: dir.to_path_buf(),
            reason: e.to_string(),
        })?;
    }
    fs::write(path, contents).map_err(|e| Error::Output {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

/// Writes `metrics.csv`, `runs.csv` and, when given, `trace.txt` into `dir`.
pub fn emit_report(reports: &[MetricsReport], dir: &Path, trace: Option<&[String]>) -> Result<()> {
    write_file(&dir.join("metrics.csv"), &metrics_csv(reports))?;
    write_file(&dir.join("runs.csv"), &runs_csv(reports))?;
    if let Some(lines) = trace {
        let mut text = lines.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        write_file(&dir.join("trace.txt"), &text)?;
    }
    Ok(())
}
