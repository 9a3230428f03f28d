//! CSV and JSON rendering of verification results.
//!
//! Both formats put the generation timestamp on a line of its own
//! (`# generated_at: ...` in CSV, the `"generated_at"` member in JSON), so
//! [`report_body`] can drop it before comparing two runs byte for byte.

use std::io::Write;

use chrono::{SecondsFormat, Utc};
use serde::Serialize;

use crate::verify::{IdentityReport, StructureReport, SweepReport};

pub const CSV_HEADER: [&str; 13] = [
    "n",
    "ring",
    "kind",
    "family",
    "variant",
    "alpha",
    "beta",
    "gamma",
    "edges",
    "closed_exact",
    "oracle_exact",
    "match",
    "micros",
];

const TIMESTAMP_KEY: &str = "generated_at";

pub fn timestamp_now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Drops the timestamp line.
pub fn report_body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains(TIMESTAMP_KEY))
        .map(|l| format!("{l}\n"))
        .collect()
}

fn csv_writer(out: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new().has_headers(false).from_writer(out)
}

fn push_timestamp(out: &mut Vec<u8>, generated_at: Option<&str>) {
    if let Some(ts) = generated_at {
        writeln!(out, "# {TIMESTAMP_KEY}: {ts}").expect("write to Vec");
    }
}

/// One row per closed-form evaluation, `formula/variant` in the variant
/// column; rings without a closed form get a single `oracle` row. The
/// partition columns carry the closed form's partition when it has one and
/// the oracle's otherwise.
pub fn sweep_csv(report: &SweepReport, generated_at: Option<&str>) -> String {
    let mut out = Vec::new();
    push_timestamp(&mut out, generated_at);
    {
        let mut w = csv_writer(&mut out);
        w.write_record(CSV_HEADER).expect("csv");
        for case in &report.cases {
            let n = case.n.to_string();
            let kind = case.kind.as_str();
            let oracle = case.oracle_value.to_string();
            let micros = case.micros.to_string();
            let part = |p: &crate::EdgePartition| {
                [p.alpha.to_string(), p.beta.to_string(), p.gamma.to_string(), p.total.to_string()]
            };
            if case.evaluations.is_empty() {
                let [a, b, g, e] = part(&case.partition_oracle);
                w.write_record([
                    n.as_str(), &case.ring, kind, &case.family, "oracle", &a, &b, &g, &e, "", &oracle, "", &micros,
                ])
                .expect("csv");
            }
            for ev in &case.evaluations {
                let [a, b, g, e] = part(ev.partition_closed.as_ref().unwrap_or(&case.partition_oracle));
                let variant = format!("{}/{}", ev.formula.label(), ev.variant);
                let closed = ev.closed_value.to_string();
                w.write_record([
                    n.as_str(),
                    &case.ring,
                    kind,
                    &case.family,
                    &variant,
                    &a,
                    &b,
                    &g,
                    &e,
                    &closed,
                    &oracle,
                    if ev.matches() { "true" } else { "false" },
                    &micros,
                ])
                .expect("csv");
            }
        }
        w.flush().expect("csv");
    }
    String::from_utf8(out).expect("utf8")
}

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<&'a str>,
    #[serde(flatten)]
    body: &'a T,
}

fn json<T: Serialize>(value: &T, generated_at: Option<&str>) -> String {
    let mut text = serde_json::to_string_pretty(&Stamped { generated_at, body: value }).expect("json");
    text.push('\n');
    text
}

/// `{"generated_at", "cases", "summary", "errata", "extension"}`.
pub fn sweep_json(report: &SweepReport, generated_at: Option<&str>) -> String {
    json(report, generated_at)
}

#[derive(Serialize)]
struct StructureBody<'a> {
    structure: &'a [StructureReport],
}

pub fn structure_json(rows: &[StructureReport], generated_at: Option<&str>) -> String {
    json(&StructureBody { structure: rows }, generated_at)
}

pub fn structure_csv(rows: &[StructureReport], generated_at: Option<&str>) -> String {
    let mut out = Vec::new();
    push_timestamp(&mut out, generated_at);
    {
        let mut w = csv_writer(&mut out);
        w.write_record(["n", "ring", "local", "zero_divisor_clique", "degrees_match", "duality"])
            .expect("csv");
        for r in rows {
            w.serialize((r.n, &r.ring, r.local, r.zero_divisor_clique, r.degrees_match, r.duality))
                .expect("csv");
        }
        w.flush().expect("csv");
    }
    String::from_utf8(out).expect("utf8")
}

pub fn identity_json(report: &IdentityReport, generated_at: Option<&str>) -> String {
    json(report, generated_at)
}

pub fn identity_csv(report: &IdentityReport, generated_at: Option<&str>) -> String {
    let mut out = Vec::new();
    push_timestamp(&mut out, generated_at);
    {
        let mut w = csv_writer(&mut out);
        w.write_record(["n", "k", "residual", "circulant_match"]).expect("csv");
        for r in &report.rows {
            let circ = r.circulant_match.map_or(String::new(), |b| b.to_string());
            w.write_record([r.n.to_string(), r.k.to_string(), r.residual.to_string(), circ])
                .expect("csv");
        }
        w.flush().expect("csv");
    }
    String::from_utf8(out).expect("utf8")
}
