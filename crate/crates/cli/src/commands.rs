//! The `combine`, `condition`, `query` and `trace` commands.
//!
//! Each command takes the document text and returns the rendered output with
//! a status; the binary only does I/O and exit codes.

use serde::Serialize;
use tbm_core::{
    combine_all, condition, normalize, pignistic, Error as CoreError, EvidentialCorpus, Frame,
    MassFunction, Subset,
};

use crate::document::{EvidenceDocument, EvidenceOut, ScriptDocument, ScriptEvent};
use crate::error::CliError;
use crate::format::{decimal, Decimal};

const PIGNISTIC_NOTE: &str =
    "pignistic probabilities divide out m(∅); this renormalization is an extension of the unnormalized calculus";

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Conditioning set for `condition`, e.g. `a,b`; empty means ∅.
    pub set: Option<String>,
    /// Query sets for `query`.
    pub queries: Vec<String>,
    pub normalize: bool,
    pub betp: bool,
    pub machine: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// A requested operation (normalization, BetP) is undefined because
    /// `m(∅) = 1`. The output is still printed.
    TotalContradiction,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::TotalContradiction => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub output: String,
    pub status: Status,
}

/// Parses a set argument: comma-separated labels, optionally wrapped in `{}`
/// or `[]`. An empty argument is ∅.
pub fn parse_set(frame: &Frame, arg: &str) -> Result<Subset, CliError> {
    let inner = arg.trim();
    let inner = inner
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .or_else(|| inner.strip_prefix('[').and_then(|s| s.strip_suffix(']')))
        .unwrap_or(inner);
    let labels = inner.split(',').map(str::trim).filter(|s| !s.is_empty());
    frame
        .subset(labels)
        .map_err(|e| CliError::Validation(format!("set {arg:?}: {e}")))
}

fn labels_of(set: &Subset) -> Vec<String> {
    set.labels().into_iter().map(str::to_string).collect()
}

fn machine<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output is serializable");
    s.push('\n');
    s
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::from("  ");
        for (c, cell) in row.iter().enumerate() {
            line.push_str(cell);
            if c + 1 < row.len() {
                let pad = widths[c] - cell.chars().count() + 2;
                line.extend(std::iter::repeat_n(' ', pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn mass_table(m: &MassFunction) -> String {
    let mut rows = vec![vec!["set".to_string(), "m".to_string()]];
    rows.extend(
        m.focal_sets()
            .map(|(set, v)| vec![set.to_string(), decimal(v)]),
    );
    table(&rows)
}

/// Non-empty focal sets, singletons and Ω, in powerset order.
fn relevant_sets(m: &MassFunction) -> Vec<Subset> {
    let frame = m.frame();
    let mut sets: Vec<Subset> = m
        .focal_sets()
        .map(|(s, _)| s)
        .filter(|s| !s.is_empty())
        .chain((0..frame.len()).map(|i| frame.singleton(i).expect("index in range")))
        .chain(std::iter::once(frame.full_set()))
        .collect();
    sets.sort_by_key(Subset::index);
    sets.dedup();
    sets
}

#[derive(Serialize)]
struct BelPlRow {
    set: Vec<String>,
    bel: Decimal,
    pl: Decimal,
}

fn bel_pl_rows(m: &MassFunction, sets: &[Subset]) -> Vec<BelPlRow> {
    sets.iter()
        .map(|s| BelPlRow {
            set: labels_of(s),
            bel: Decimal(m.bel(s).expect("same frame")),
            pl: Decimal(m.pl(s).expect("same frame")),
        })
        .collect()
}

fn bel_pl_table(m: &MassFunction, sets: &[Subset]) -> String {
    let mut rows = vec![vec!["set".into(), "bel".into(), "pl".into()]];
    for s in sets {
        rows.push(vec![
            s.to_string(),
            decimal(m.bel(s).expect("same frame")),
            decimal(m.pl(s).expect("same frame")),
        ]);
    }
    table(&rows)
}

fn fuse(doc: &EvidenceDocument) -> Result<(Frame, Vec<String>, MassFunction), CliError> {
    let (frame, items) = doc.resolve()?;
    let fused = combine_all(&frame, items.iter().map(|i| i.mass()))
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let ids = items.iter().map(|i| i.id().to_string()).collect();
    Ok((frame, ids, fused))
}

#[derive(Serialize)]
struct CombineOut {
    command: &'static str,
    frame: Vec<String>,
    sources: Vec<String>,
    evidence: Vec<EvidenceOut>,
    conflict: Decimal,
    table: Vec<BelPlRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalized: Option<NormalizedOut>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum NormalizedOut {
    Defined { masses: Vec<crate::document::MassOut> },
    Undefined { error: &'static str },
}

pub fn combine(input: &str, opts: &Options) -> Result<Outcome, CliError> {
    let doc = EvidenceDocument::parse(input)?;
    let (frame, ids, fused) = fuse(&doc)?;
    let sets = relevant_sets(&fused);
    let normalized = opts.normalize.then(|| normalize(&fused));
    let status = match normalized {
        Some(Err(CoreError::TotalContradiction)) => Status::TotalContradiction,
        _ => Status::Success,
    };

    let output = if opts.machine {
        machine(&CombineOut {
            command: "combine",
            frame: frame.labels().to_vec(),
            sources: ids,
            evidence: vec![EvidenceOut::new("fused", &fused)],
            conflict: Decimal(fused.conflict()),
            table: bel_pl_rows(&fused, &sets),
            normalized: normalized.map(|n| match n {
                Ok(m) => NormalizedOut::Defined {
                    masses: EvidenceOut::new("normalized", &m).masses,
                },
                Err(_) => NormalizedOut::Undefined {
                    error: "total contradiction",
                },
            }),
        })
    } else {
        let mut out = format!("frame {frame}\n");
        out.push_str(&format!("fused {} item(s): {}\n", ids.len(), ids.join(", ")));
        out.push_str(&format!("conflict m(∅) = {}\n", decimal(fused.conflict())));
        if fused.is_contradiction() {
            out.push_str("total contradiction: the evidence supports no world\n");
        }
        out.push_str("\nunnormalized mass\n");
        out.push_str(&mass_table(&fused));
        out.push('\n');
        out.push_str(&bel_pl_table(&fused, &sets));
        match normalized {
            Some(Ok(m)) => {
                out.push_str("\nnormalized mass (Dempster)\n");
                out.push_str(&mass_table(&m));
            }
            Some(Err(_)) => {
                out.push_str("\nnormalized mass: undefined, total contradiction (m(∅) = 1)\n");
            }
            None => {}
        }
        out
    };
    Ok(Outcome { output, status })
}

#[derive(Serialize)]
struct ConditionOut {
    command: &'static str,
    frame: Vec<String>,
    set: Vec<String>,
    evidence: Vec<EvidenceOut>,
    prior_conflict: Decimal,
    conflict_delta: Decimal,
    conflict: Decimal,
    total_contradiction: bool,
}

pub fn condition_cmd(input: &str, opts: &Options) -> Result<Outcome, CliError> {
    let doc = EvidenceDocument::parse(input)?;
    let (frame, _, fused) = fuse(&doc)?;
    let arg = opts
        .set
        .as_deref()
        .ok_or_else(|| CliError::Validation("condition needs --set".into()))?;
    let a = parse_set(&frame, arg)?;
    let conditioned = condition(&fused, &a).expect("set parsed on the same frame");
    let delta = fused.bel(&a.complement()).expect("same frame");
    let contradiction = conditioned.is_contradiction();

    let output = if opts.machine {
        machine(&ConditionOut {
            command: "condition",
            frame: frame.labels().to_vec(),
            set: labels_of(&a),
            evidence: vec![EvidenceOut::new("conditioned", &conditioned)],
            prior_conflict: Decimal(fused.conflict()),
            conflict_delta: Decimal(delta),
            conflict: Decimal(conditioned.conflict()),
            total_contradiction: contradiction,
        })
    } else {
        let mut out = format!("frame {frame}\nconditioned on {a}\n");
        out.push_str(&format!(
            "conflict m(∅) = {} (was {}, +bel of the complement {})\n",
            decimal(conditioned.conflict()),
            decimal(fused.conflict()),
            decimal(delta)
        ));
        if contradiction {
            out.push_str("total contradiction: every world has been ruled out\n");
        }
        out.push('\n');
        out.push_str(&mass_table(&conditioned));
        out
    };
    Ok(Outcome {
        output,
        status: Status::Success,
    })
}

#[derive(Serialize)]
struct QueryOut {
    command: &'static str,
    frame: Vec<String>,
    conflict: Decimal,
    queries: Vec<BelPlRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pignistic: Option<PignisticOut>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum PignisticOut {
    Defined {
        probabilities: Vec<WorldProbability>,
        renormalized_conflict: Decimal,
        note: &'static str,
    },
    Undefined {
        error: &'static str,
    },
}

#[derive(Serialize)]
struct WorldProbability {
    world: String,
    p: Decimal,
}

pub fn query(input: &str, opts: &Options) -> Result<Outcome, CliError> {
    let doc = EvidenceDocument::parse(input)?;
    let (frame, _, fused) = fuse(&doc)?;
    let sets: Vec<Subset> = if opts.queries.is_empty() {
        relevant_sets(&MassFunction::vacuous(&frame))
    } else {
        opts.queries
            .iter()
            .map(|q| parse_set(&frame, q))
            .collect::<Result<_, _>>()?
    };
    let betp = opts.betp.then(|| pignistic(&fused));
    let status = match betp {
        Some(Err(_)) => Status::TotalContradiction,
        _ => Status::Success,
    };

    let output = if opts.machine {
        machine(&QueryOut {
            command: "query",
            frame: frame.labels().to_vec(),
            conflict: Decimal(fused.conflict()),
            queries: bel_pl_rows(&fused, &sets),
            pignistic: betp.map(|b| match b {
                Ok(p) => PignisticOut::Defined {
                    probabilities: frame
                        .labels()
                        .iter()
                        .zip(p.probabilities())
                        .map(|(w, &v)| WorldProbability {
                            world: w.clone(),
                            p: Decimal(v),
                        })
                        .collect(),
                    renormalized_conflict: Decimal(p.renormalized_conflict()),
                    note: PIGNISTIC_NOTE,
                },
                Err(_) => PignisticOut::Undefined {
                    error: "total contradiction",
                },
            }),
        })
    } else {
        let mut out = format!(
            "frame {frame}\nconflict m(∅) = {}\n\n",
            decimal(fused.conflict())
        );
        out.push_str(&bel_pl_table(&fused, &sets));
        match betp {
            Some(Ok(p)) => {
                out.push_str("\npignistic probability\n");
                let mut rows = vec![vec!["world".to_string(), "BetP".to_string()]];
                rows.extend(
                    frame
                        .labels()
                        .iter()
                        .zip(p.probabilities())
                        .map(|(w, &v)| vec![w.clone(), decimal(v)]),
                );
                out.push_str(&table(&rows));
                if p.renormalized_conflict() > 0.0 {
                    out.push_str(&format!(
                        "note: m(∅) = {} was divided out; {}\n",
                        decimal(p.renormalized_conflict()),
                        "BetP renormalization goes beyond the unnormalized model"
                    ));
                }
            }
            Some(Err(_)) => {
                out.push_str("\npignistic probability: undefined, total contradiction (m(∅) = 1)\n");
            }
            None => {}
        }
        out
    };
    Ok(Outcome { output, status })
}

#[derive(Serialize)]
struct TraceOut {
    command: &'static str,
    frame: Vec<String>,
    evidence: Vec<EvidenceOut>,
    history: Vec<HistoryRow>,
    report: ReportOut,
}

#[derive(Serialize)]
struct HistoryRow {
    sequence: u64,
    event: String,
    id: String,
    conflict: Decimal,
}

#[derive(Serialize)]
struct ReportOut {
    conflict: Decimal,
    leave_one_out: Vec<LeaveOneOutRow>,
    most_conflicting: Option<String>,
}

#[derive(Serialize)]
struct LeaveOneOutRow {
    id: String,
    conflict_without: Decimal,
}

pub fn trace(input: &str, opts: &Options) -> Result<Outcome, CliError> {
    let script = ScriptDocument::parse(input)?;
    let (frame, pool) = script.resolve()?;
    let mut corpus = EvidentialCorpus::new(&frame);
    for (k, event) in script.events.iter().enumerate() {
        let at = |e: String| CliError::Validation(format!("events[{k}]: {e}"));
        match event {
            ScriptEvent::Add(id) => {
                let item = pool
                    .iter()
                    .find(|i| i.id() == id)
                    .ok_or_else(|| at(format!("no evidence definition with id {id:?}")))?;
                corpus.expand(item.clone()).map_err(|e| at(e.to_string()))?;
            }
            ScriptEvent::Remove(id) => {
                corpus.contract(id).map_err(|e| at(e.to_string()))?;
            }
            ScriptEvent::Condition(labels) => {
                let set = frame.subset(labels).map_err(|e| at(e.to_string()))?;
                corpus.condition(&set).map_err(|e| at(e.to_string()))?;
            }
        }
    }
    let report = corpus
        .conflict_report()
        .map_err(|e| CliError::Validation(e.to_string()))?;

    let output = if opts.machine {
        machine(&TraceOut {
            command: "trace",
            frame: frame.labels().to_vec(),
            evidence: vec![EvidenceOut::new("current", corpus.current())],
            history: report
                .history
                .iter()
                .map(|h| HistoryRow {
                    sequence: h.sequence,
                    event: h.kind.to_string(),
                    id: h.id.clone(),
                    conflict: Decimal(h.conflict),
                })
                .collect(),
            report: ReportOut {
                conflict: Decimal(report.conflict),
                leave_one_out: report
                    .leave_one_out
                    .iter()
                    .map(|l| LeaveOneOutRow {
                        id: l.id.clone(),
                        conflict_without: Decimal(l.conflict_without),
                    })
                    .collect(),
                most_conflicting: report.most_conflicting.clone(),
            },
        })
    } else {
        let mut out = format!("frame {frame}\n\n");
        let mut rows = vec![vec![
            "seq".to_string(),
            "event".to_string(),
            "id".to_string(),
            "m(∅)".to_string(),
        ]];
        rows.extend(report.history.iter().map(|h| {
            vec![
                h.sequence.to_string(),
                h.kind.to_string(),
                h.id.clone(),
                decimal(h.conflict),
            ]
        }));
        out.push_str(&table(&rows));
        out.push_str(&format!("\ncurrent conflict m(∅) = {}\n", decimal(report.conflict)));
        if !report.leave_one_out.is_empty() {
            let mut rows = vec![vec!["without".to_string(), "m(∅)".to_string()]];
            rows.extend(
                report
                    .leave_one_out
                    .iter()
                    .map(|l| vec![l.id.clone(), decimal(l.conflict_without)]),
            );
            out.push_str(&table(&rows));
        }
        out.push_str(&format!(
            "most conflicting: {}\n",
            report.most_conflicting.as_deref().unwrap_or("none")
        ));
        out.push_str("\ncurrent mass\n");
        out.push_str(&mass_table(corpus.current()));
        out
    };
    Ok(Outcome {
        output,
        status: Status::Success,
    })
}
