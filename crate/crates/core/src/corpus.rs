//! The evidential corpus: the identified pieces of evidence an agent holds,
//! their fused belief, and a trail of how conflict evolved.
//!
//! Adding evidence combines it into the cached current belief. Removing
//! evidence re-fuses the remaining items from scratch.

use std::fmt;

use crate::error::{Error, Result};
use crate::frame::{Frame, Subset};
use crate::fusion::{combine_all, combine_conjunctive};
use crate::massfn::MassFunction;

/// Conflicts closer than this are treated as ties in [`ConflictReport`].
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct EvidenceItem {
    id: String,
    description: Option<String>,
    mass: MassFunction,
    sequence: u64,
}

impl EvidenceItem {
    pub fn new(id: impl Into<String>, mass: MassFunction) -> Self {
        EvidenceItem {
            id: id.into(),
            description: None,
            mass,
            sequence: 0,
        }
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = Some(description.into());
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn description(&self) -> Option<&str> {
        self.description.as_deref()
    }

    pub fn mass(&self) -> &MassFunction {
        &self.mass
    }

    /// Insertion sequence number, assigned by the corpus.
    pub fn sequence(&self) -> u64 {
        self.sequence
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Add,
    Remove,
    /// An [`EvidentialCorpus::condition`] call; the item is `categorical(A)`.
    Condition,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Add => "add",
            EventKind::Remove => "remove",
            EventKind::Condition => "condition",
        })
    }
}

/// One mutation of the corpus and the conflict `m(∅)` right after it.
#[derive(Clone, Debug, PartialEq)]
pub struct HistoryEntry {
    pub sequence: u64,
    pub kind: EventKind,
    pub id: String,
    pub conflict: f64,
}

#[derive(Clone, Debug)]
pub struct EvidentialCorpus {
    frame: Frame,
    items: Vec<EvidenceItem>,
    current: MassFunction,
    history: Vec<HistoryEntry>,
    next_sequence: u64,
}

impl EvidentialCorpus {
    /// An empty corpus; its belief is vacuous.
    pub fn new(frame: &Frame) -> Self {
        EvidentialCorpus {
            frame: frame.clone(),
            items: Vec::new(),
            current: MassFunction::vacuous(frame),
            history: Vec::new(),
            next_sequence: 1,
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Items in insertion order.
    pub fn items(&self) -> &[EvidenceItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&EvidenceItem> {
        self.items.iter().find(|item| item.id == id)
    }

    /// Conjunctive fusion of every item.
    pub fn current(&self) -> &MassFunction {
        &self.current
    }

    pub fn conflict(&self) -> f64 {
        self.current.conflict()
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    /// Expansion: adds a piece of evidence.
    pub fn expand(&mut self, item: EvidenceItem) -> Result<()> {
        self.insert(item, EventKind::Add)
    }

    /// Contraction: removes a piece of evidence and re-fuses what is left.
    pub fn contract(&mut self, id: &str) -> Result<EvidenceItem> {
        let pos = self
            .items
            .iter()
            .position(|item| item.id == id)
            .ok_or_else(|| Error::UnknownEvidence(id.to_string()))?;
        let current = combine_all(
            &self.frame,
            self.items
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != pos)
                .map(|(_, item)| &item.mass),
        )?;
        let removed = self.items.remove(pos);
        self.current = current;
        self.record(EventKind::Remove, removed.id.clone());
        Ok(removed)
    }

    /// Learns that the actual world lies in `a` by adding `categorical(a)` as
    /// a new item. Returns the generated item id.
    pub fn condition(&mut self, a: &Subset) -> Result<String> {
        self.frame.check_same(a.frame())?;
        let base = format!("condition{}#{}", a, self.next_sequence);
        let mut id = base.clone();
        let mut n = 1;
        while self.get(&id).is_some() {
            n += 1;
            id = format!("{base}.{n}");
        }
        let item = EvidenceItem::new(id.clone(), MassFunction::categorical(a));
        self.insert(item, EventKind::Condition)?;
        Ok(id)
    }

    fn insert(&mut self, mut item: EvidenceItem, kind: EventKind) -> Result<()> {
        if self.get(&item.id).is_some() {
            return Err(Error::DuplicateEvidence(item.id));
        }
        self.frame.check_same(item.mass.frame())?;
        self.current = combine_conjunctive(&self.current, &item.mass)?;
        item.sequence = self.next_sequence;
        let id = item.id.clone();
        self.items.push(item);
        self.record(kind, id);
        Ok(())
    }

    fn record(&mut self, kind: EventKind, id: String) {
        self.history.push(HistoryEntry {
            sequence: self.next_sequence,
            kind,
            id,
            conflict: self.current.conflict(),
        });
        self.next_sequence += 1;
    }

    /// Conflict audit: the current `m(∅)` and, for every item, the conflict of
    /// the fusion without it.
    pub fn conflict_report(&self) -> Result<ConflictReport> {
        let mut leave_one_out = Vec::with_capacity(self.items.len());
        for (skip, item) in self.items.iter().enumerate() {
            let rest = combine_all(
                &self.frame,
                self.items
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, other)| &other.mass),
            )?;
            leave_one_out.push(LeaveOneOut {
                id: item.id.clone(),
                sequence: item.sequence,
                conflict_without: rest.conflict(),
            });
        }
        let current = self.conflict();
        let mut most_conflicting: Option<&LeaveOneOut> = None;
        for entry in &leave_one_out {
            if current - entry.conflict_without <= TIE_TOLERANCE {
                continue;
            }
            // items are in insertion order, so keeping the first of a tie
            // keeps the earliest
            match most_conflicting {
                Some(best) if entry.conflict_without >= best.conflict_without - TIE_TOLERANCE => {}
                _ => most_conflicting = Some(entry),
            }
        }
        Ok(ConflictReport {
            conflict: current,
            most_conflicting: most_conflicting.map(|e| e.id.clone()),
            leave_one_out,
            history: self.history.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeaveOneOut {
    pub id: String,
    pub sequence: u64,
    pub conflict_without: f64,
}

/// Descriptive conflict summary. It gives no verdict on whether the conflict
/// is acceptable.
#[derive(Clone, Debug, PartialEq)]
pub struct ConflictReport {
    pub conflict: f64,
    pub leave_one_out: Vec<LeaveOneOut>,
    /// The item whose removal lowers the conflict the most, earliest first on
    /// ties. `None` when no removal lowers it.
    pub most_conflicting: Option<String>,
    pub history: Vec<HistoryEntry>,
}
