//! Payloads and their table, JSON and CSV renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thh_core::monadic::MonadicReport;
use thh_core::{GroupEntry, SuiteReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankRow {
    pub degree: usize,
    pub rank: u64,
}

/// A per-degree answer; the cacheable kind of payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Table {
    Group { title: String, rows: Vec<GroupEntry> },
    Ranks { title: String, ring: String, rows: Vec<RankRow> },
}

impl Table {
    pub fn ranks(title: String, ring: String, ranks: &[u64]) -> Self {
        let rows = ranks.iter().enumerate().map(|(degree, &rank)| RankRow { degree, rank }).collect();
        Table::Ranks { title, ring, rows }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelRow {
    pub name: String,
    pub delooping_of: Option<String>,
    pub rings: String,
    pub description: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Output {
    Models { rows: Vec<ModelRow> },
    Verify { passed: bool, reports: Vec<SuiteReport> },
    Monadic { passed: bool, report: MonadicReport },
    #[serde(untagged)]
    Table(Table),
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Envelope<'a> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: &'a str,
    pub input_digest: &'a str,
    pub wall_time_ms: u128,
    pub payload: Value,
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn torsion_field(e: &GroupEntry) -> String {
    e.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";")
}

impl Output {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        match self {
            Output::Table(Table::Group { title, rows }) => {
                writeln!(out, "# {title}").unwrap();
                writeln!(out, "degree  group").unwrap();
                for e in rows {
                    writeln!(out, "{:>6}  {e}", e.degree).unwrap();
                }
            }
            Output::Table(Table::Ranks { title, ring, rows }) => {
                writeln!(out, "# {title}").unwrap();
                writeln!(out, "degree  rank over {ring}").unwrap();
                for r in rows {
                    writeln!(out, "{:>6}  {}", r.degree, r.rank).unwrap();
                }
            }
            Output::Models { rows } => {
                let w = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
                writeln!(out, "{:<w$}  {:<16}  {:<7}  description", "name", "delooping of", "rings").unwrap();
                for r in rows {
                    let d = r.delooping_of.as_deref().unwrap_or("-");
                    writeln!(out, "{:<w$}  {:<16}  {:<7}  {}", r.name, d, r.rings, r.description).unwrap();
                }
            }
            Output::Verify { passed, reports } => {
                for r in reports {
                    for c in &r.checks {
                        writeln!(out, "[{}] {c}", r.suite).unwrap();
                    }
                    if let Some(m) = &r.monadic {
                        for f in &m.failures {
                            writeln!(out, "[{}] FAIL {f}", r.suite).unwrap();
                        }
                        writeln!(
                            out,
                            "[{}] {} {} diagrams, {} tensors, {} reflexive pairs checked",
                            r.suite,
                            if m.passed() { "PASS" } else { "FAIL" },
                            m.diagrams,
                            m.tensors,
                            m.reflexive_pairs
                        )
                        .unwrap();
                    }
                }
                writeln!(out, "{}", if *passed { "all properties hold" } else { "property failures detected" }).unwrap();
            }
            Output::Monadic { passed, report } => {
                for f in &report.failures {
                    writeln!(out, "FAIL {f}").unwrap();
                }
                writeln!(
                    out,
                    "{} {} diagrams, {} tensors, {} reflexive pairs checked",
                    if *passed { "PASS" } else { "FAIL" },
                    report.diagrams,
                    report.tensors,
                    report.reflexive_pairs
                )
                .unwrap();
            }
        }
        out
    }

    pub fn render_csv(&self) -> String {
        match self {
            Output::Table(Table::Group { rows, .. }) => csv_string(
                &["degree", "freeRank", "torsion", "group"],
                rows.iter().map(|e| vec![e.degree.to_string(), e.free_rank.to_string(), torsion_field(e), e.to_string()]),
            ),
            Output::Table(Table::Ranks { rows, .. }) => {
                csv_string(&["degree", "rank"], rows.iter().map(|r| vec![r.degree.to_string(), r.rank.to_string()]))
            }
            Output::Models { rows } => csv_string(
                &["name", "deloopingOf", "rings", "description"],
                rows.iter().map(|r| {
                    vec![r.name.clone(), r.delooping_of.clone().unwrap_or_default(), r.rings.clone(), r.description.clone()]
                }),
            ),
            Output::Verify { reports, .. } => {
                let mut rows = Vec::new();
                for r in reports {
                    for c in &r.checks {
                        let detail = match c.first_mismatch {
                            Some(i) => format!("degree {i}: {:?} vs {:?}", c.lhs.get(i), c.rhs.get(i)),
                            None => c.detail.clone().unwrap_or_default(),
                        };
                        rows.push(vec![r.suite.to_string(), c.name.clone(), c.passed.to_string(), detail]);
                    }
                    if let Some(m) = &r.monadic {
                        let summary = format!("{} diagrams, {} tensors", m.diagrams, m.tensors);
                        rows.push(vec![r.suite.to_string(), "coequalizer formulas".into(), m.passed().to_string(), summary]);
                        for f in &m.failures {
                            rows.push(vec![r.suite.to_string(), "coequalizer formulas".into(), "false".into(), f.clone()]);
                        }
                    }
                }
                csv_string(&["suite", "check", "passed", "detail"], rows)
            }
            Output::Monadic { report, .. } => csv_string(
                &["diagrams", "tensors", "reflexivePairs", "failures"],
                [vec![
                    report.diagrams.to_string(),
                    report.tensors.to_string(),
                    report.reflexive_pairs.to_string(),
                    report.failures.join("; "),
                ]],
            ),
        }
    }
}
