//! Evidence and trace-script documents (JSON).
//!
//! ```json
//! {
//!   "frame": ["a", "b", "c"],
//!   "evidence": [
//!     { "id": "Ev1", "description": "witness 1",
//!       "masses": [ { "set": ["a"], "mass": 0.99 }, { "set": ["b"], "mass": 0.01 } ] }
//!   ]
//! }
//! ```
//!
//! The empty set is `[]`. Unknown top-level fields are ignored, so the
//! machine-readable output of a command reads back as a document.

use serde::{Deserialize, Serialize};
use tbm_core::{EvidenceItem, Frame, MassFunction};

use crate::error::CliError;
use crate::format::Decimal;

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct EvidenceDocument {
    pub frame: Vec<String>,
    #[serde(default)]
    pub evidence: Vec<EvidenceEntry>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct EvidenceEntry {
    pub id: String,
    #[serde(default)]
    pub description: Option<String>,
    pub masses: Vec<MassEntry>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct MassEntry {
    pub set: Vec<String>,
    pub mass: f64,
}

/// Output side of [`EvidenceEntry`], numbers rounded for printing.
#[derive(Clone, Debug, Serialize)]
pub struct EvidenceOut {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub masses: Vec<MassOut>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MassOut {
    pub set: Vec<String>,
    pub mass: Decimal,
}

impl EvidenceOut {
    pub fn new(id: impl Into<String>, mass: &MassFunction) -> Self {
        EvidenceOut {
            id: id.into(),
            description: None,
            masses: mass
                .focal_sets()
                .map(|(set, m)| MassOut {
                    set: set.labels().into_iter().map(str::to_string).collect(),
                    mass: Decimal(m),
                })
                .collect(),
        }
    }
}

pub fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn build_frame(labels: &[String]) -> Result<Frame, CliError> {
    Frame::new(labels.iter().cloned()).map_err(|e| CliError::Validation(format!("frame: {e}")))
}

impl EvidenceEntry {
    pub fn to_item(&self, frame: &Frame) -> Result<EvidenceItem, CliError> {
        let at = |detail: String| CliError::Validation(format!("evidence {:?}: {detail}", self.id));
        let mut entries = Vec::with_capacity(self.masses.len());
        for (k, entry) in self.masses.iter().enumerate() {
            let set = frame
                .subset(&entry.set)
                .map_err(|e| at(format!("masses[{k}].set: {e}")))?;
            entries.push((set, entry.mass));
        }
        let mass = MassFunction::new(frame, entries).map_err(|e| at(e.to_string()))?;
        let item = EvidenceItem::new(self.id.clone(), mass);
        Ok(match &self.description {
            Some(d) => item.with_description(d.clone()),
            None => item,
        })
    }
}

fn resolve_entries(frame: &Frame, entries: &[EvidenceEntry]) -> Result<Vec<EvidenceItem>, CliError> {
    let mut items: Vec<EvidenceItem> = Vec::with_capacity(entries.len());
    for entry in entries {
        if items.iter().any(|i| i.id() == entry.id) {
            return Err(CliError::Validation(format!(
                "evidence {:?}: id defined twice",
                entry.id
            )));
        }
        items.push(entry.to_item(frame)?);
    }
    Ok(items)
}

impl EvidenceDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse_json(text)
    }

    /// Validates the frame and every item.
    pub fn resolve(&self) -> Result<(Frame, Vec<EvidenceItem>), CliError> {
        let frame = build_frame(&self.frame)?;
        let items = resolve_entries(&frame, &self.evidence)?;
        Ok((frame, items))
    }
}

/// A corpus script: a pool of evidence definitions and the events applied to
/// an initially empty corpus.
///
/// ```json
/// { "frame": ["a", "b"],
///   "evidence": [ ... ],
///   "events": [ { "add": "Ev1" }, { "remove": "Ev1" }, { "condition": ["a"] } ] }
/// ```
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct ScriptDocument {
    pub frame: Vec<String>,
    #[serde(default)]
    pub evidence: Vec<EvidenceEntry>,
    #[serde(default)]
    pub events: Vec<ScriptEvent>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ScriptEvent {
    Add(String),
    Remove(String),
    Condition(Vec<String>),
}

impl ScriptDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse_json(text)
    }

    pub fn resolve(&self) -> Result<(Frame, Vec<EvidenceItem>), CliError> {
        let frame = build_frame(&self.frame)?;
        let items = resolve_entries(&frame, &self.evidence)?;
        Ok((frame, items))
    }
}
