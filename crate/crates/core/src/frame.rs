//! Frames of discernment and the subset algebra over their powersets.
//!
//! A [`Frame`] is an ordered list of distinct world labels. Every subset of a
//! frame is identified by a bitmask over label positions, so the subset with
//! mask `k` sits at index `k` of the powerset ordering. Dense vectors over the
//! powerset (see [`crate::lattice`]) use this ordering directly.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported number of worlds. Dense powerset vectors stay under 2^24
/// cells.
pub const MAX_WORLDS: usize = 24;

/// An ordered, finite frame of discernment.
///
/// Identity is structural: two frames built from the same label sequence are
/// equal and their subsets can be mixed freely.
#[derive(Clone)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if labels.len() > MAX_WORLDS {
            return Err(Error::FrameTooLarge {
                size: labels.len(),
                max: MAX_WORLDS,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Frame {
            labels: labels.into(),
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    /// Number of worlds.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; a frame has at least one world.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of subsets, 2^n.
    pub fn powerset_size(&self) -> usize {
        1 << self.len()
    }

    pub(crate) fn full_mask(&self) -> u32 {
        ((1u64 << self.len()) - 1) as u32
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The subset made of exactly the named worlds. An empty list gives ∅.
    pub fn subset<I, S>(&self, labels: I) -> Result<Subset>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = 0u32;
        for label in labels {
            let label = label.as_ref();
            let i = self
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            mask |= 1 << i;
        }
        Ok(self.subset_unchecked(mask))
    }

    pub fn subset_from_indices<I>(&self, indices: I) -> Result<Subset>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut mask = 0u32;
        for index in indices {
            if index >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index,
                    size: self.len(),
                });
            }
            mask |= 1 << index;
        }
        Ok(self.subset_unchecked(mask))
    }

    /// The subset at position `index` of the powerset ordering.
    pub fn subset_at(&self, index: usize) -> Result<Subset> {
        if index >= self.powerset_size() {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.powerset_size(),
            });
        }
        Ok(self.subset_unchecked(index as u32))
    }

    pub fn empty_set(&self) -> Subset {
        self.subset_unchecked(0)
    }

    pub fn full_set(&self) -> Subset {
        self.subset_unchecked(self.full_mask())
    }

    pub fn singleton(&self, index: usize) -> Result<Subset> {
        self.subset_from_indices([index])
    }

    /// Every subset in powerset order, ∅ first and Ω last.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> + '_ {
        (0..self.powerset_size()).map(move |k| self.subset_unchecked(k as u32))
    }

    pub(crate) fn subset_unchecked(&self, mask: u32) -> Subset {
        debug_assert!(mask & !self.full_mask() == 0);
        Subset {
            frame: self.clone(),
            mask,
        }
    }

    pub(crate) fn check_same(&self, other: &Frame) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for Frame {}

impl std::hash::Hash for Frame {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.labels.hash(state)
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Frame").field(&&*self.labels).finish()
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(","))
    }
}

/// A subset of a specific frame's worlds.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    frame: Frame,
    mask: u32,
}

impl Subset {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Position in the powerset ordering; bit `i` is set when world `i` is a
    /// member.
    pub fn index(&self) -> usize {
        self.mask as usize
    }

    pub(crate) fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == self.frame.full_mask()
    }

    pub fn contains(&self, world: usize) -> bool {
        world < self.frame.len() && self.mask & (1 << world) != 0
    }

    /// Member indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.frame.len()).filter(move |&i| self.mask & (1 << i) != 0)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.indices().map(|i| self.frame.label(i)).collect()
    }

    /// Ω \ A.
    pub fn complement(&self) -> Subset {
        self.frame.subset_unchecked(!self.mask & self.frame.full_mask())
    }

    pub fn intersection(&self, other: &Subset) -> Result<Subset> {
        self.frame.check_same(&other.frame)?;
        Ok(self.frame.subset_unchecked(self.mask & other.mask))
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.frame.check_same(&other.frame)?;
        Ok(self.frame.subset_unchecked(self.mask | other.mask))
    }

    pub fn difference(&self, other: &Subset) -> Result<Subset> {
        self.frame.check_same(&other.frame)?;
        Ok(self.frame.subset_unchecked(self.mask & !other.mask))
    }

    pub fn is_subset(&self, other: &Subset) -> Result<bool> {
        self.frame.check_same(&other.frame)?;
        Ok(self.mask & !other.mask == 0)
    }

    pub fn intersects(&self, other: &Subset) -> Result<bool> {
        self.frame.check_same(&other.frame)?;
        Ok(self.mask & other.mask != 0)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset{}", self)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

/// A coarsening: the source frame's worlds grouped into disjoint, exhaustive
/// blocks, each block becoming one world of the coarse frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    source: Frame,
    coarse: Frame,
    blocks: Vec<Subset>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Coarse labels are the block members joined with `+`.
    pub fn new(source: &Frame, blocks: Vec<Subset>) -> Result<Self> {
        let labels: Vec<String> = blocks.iter().map(|b| b.labels().join("+")).collect();
        Self::with_labels(source, blocks, labels)
    }

    pub fn with_labels<S: Into<String>>(
        source: &Frame,
        blocks: Vec<Subset>,
        labels: Vec<S>,
    ) -> Result<Self> {
        if blocks.len() != labels.len() {
            return Err(Error::InvalidPartition(format!(
                "{} blocks but {} labels",
                blocks.len(),
                labels.len()
            )));
        }
        let mut block_of = vec![usize::MAX; source.len()];
        for (b, block) in blocks.iter().enumerate() {
            source.check_same(block.frame())?;
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block #{b} is empty")));
            }
            for world in block.indices() {
                if block_of[world] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "world {:?} appears in blocks #{} and #{b}",
                        source.label(world),
                        block_of[world]
                    )));
                }
                block_of[world] = b;
            }
        }
        if let Some(world) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "world {:?} is not covered by any block",
                source.label(world)
            )));
        }
        let coarse = Frame::new(labels)?;
        Ok(Partition {
            source: source.clone(),
            coarse,
            blocks,
            block_of,
        })
    }

    /// Every world in its own block; the coarse frame reuses the labels.
    pub fn identity(source: &Frame) -> Self {
        let blocks = (0..source.len())
            .map(|i| source.subset_unchecked(1 << i))
            .collect();
        Partition {
            source: source.clone(),
            coarse: source.clone(),
            blocks,
            block_of: (0..source.len()).collect(),
        }
    }

    /// Keeps every world of `kept` as its own block and merges the remaining
    /// worlds into a single block. Blocks are ordered by their first world.
    pub fn two_block(kept: &Subset) -> Self {
        let source = kept.frame();
        let rest = kept.complement();
        let mut blocks: Vec<Subset> = kept
            .indices()
            .map(|i| source.subset_unchecked(1 << i))
            .collect();
        if !rest.is_empty() {
            blocks.push(rest);
        }
        blocks.sort_by_key(|b| b.mask().trailing_zeros());
        Partition::new(source, blocks).expect("singletons plus complement partition the frame")
    }

    pub fn source(&self) -> &Frame {
        &self.source
    }

    pub fn coarse(&self) -> &Frame {
        &self.coarse
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    /// Index of the block holding `world`.
    pub fn block_of(&self, world: usize) -> usize {
        self.block_of[world]
    }

    /// Outer image of `a`: the coarse subset of blocks meeting `a`.
    pub fn apply(&self, a: &Subset) -> Result<Subset> {
        self.source.check_same(a.frame())?;
        Ok(self.coarse.subset_unchecked(self.image_mask(a.mask())))
    }

    pub(crate) fn image_mask(&self, mut mask: u32) -> u32 {
        let mut image = 0u32;
        while mask != 0 {
            let world = mask.trailing_zeros() as usize;
            image |= 1 << self.block_of[world];
            mask &= mask - 1;
        }
        image
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn abc() -> Frame {
        Frame::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn make_frame_sizes() {
        let f = abc();
        assert_eq!(f.len(), 3);
        assert_eq!(f.powerset_size(), 8);
        assert_eq!(f.subsets().count(), 8);
    }

    #[test]
    fn make_frame_errors() {
        assert_eq!(
            Frame::new(["a", "a"]).unwrap_err(),
            Error::DuplicateLabel("a".into())
        );
        assert_eq!(
            Frame::new(Vec::<String>::new()).unwrap_err(),
            Error::EmptyFrame
        );
        assert_eq!(Frame::new(["a", ""]).unwrap_err(), Error::EmptyLabel);
        let many: Vec<String> = (0..25).map(|i| format!("w{i}")).collect();
        assert_eq!(
            Frame::new(many).unwrap_err(),
            Error::FrameTooLarge { size: 25, max: 24 }
        );
        let max: Vec<String> = (0..24).map(|i| format!("w{i}")).collect();
        assert_eq!(Frame::new(max).unwrap().len(), 24);
    }

    #[test]
    fn subset_lookup() {
        let f = abc();
        let ac = f.subset(["a", "c"]).unwrap();
        assert_eq!(ac.indices().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(ac.index(), 0b101);
        assert!(f.subset(Vec::<&str>::new()).unwrap().is_empty());
        assert_eq!(
            f.subset(["z"]).unwrap_err(),
            Error::UnknownLabel("z".into())
        );
        assert!(f.subset_from_indices([3]).is_err());
        assert!(f.subset_at(8).is_err());
    }

    #[test]
    fn complement_cases() {
        let f = abc();
        assert!(f.empty_set().complement().is_full());
        assert!(f.full_set().complement().is_empty());
        let a = f.subset(["a"]).unwrap();
        assert_eq!(a.complement(), f.subset(["b", "c"]).unwrap());
    }

    #[test]
    fn set_operations() {
        let f = abc();
        let ab = f.subset(["a", "b"]).unwrap();
        let bc = f.subset(["b", "c"]).unwrap();
        assert_eq!(ab.intersection(&bc).unwrap(), f.subset(["b"]).unwrap());
        assert!(ab.union(&bc).unwrap().is_full());
        assert!(f.subset(["a"]).unwrap().is_subset(&ab).unwrap());
        assert!(!bc.is_subset(&ab).unwrap());

        let other = Frame::new(["x", "y"]).unwrap();
        let x = other.subset(["x"]).unwrap();
        assert_eq!(ab.intersection(&x).unwrap_err(), Error::FrameMismatch);
        assert_eq!(ab.is_subset(&x).unwrap_err(), Error::FrameMismatch);
    }

    #[test]
    fn structural_identity() {
        let a1 = abc().subset(["a"]).unwrap();
        let b2 = abc().subset(["b"]).unwrap();
        assert!(a1.union(&b2).is_ok());
    }

    #[test]
    fn apply_partition_examples() {
        let f = abc();
        let p = Partition::new(
            &f,
            vec![f.subset(["a", "b"]).unwrap(), f.subset(["c"]).unwrap()],
        )
        .unwrap();
        assert_eq!(p.coarse().labels(), &["a+b".to_string(), "c".to_string()]);
        let image = p.apply(&f.subset(["a", "c"]).unwrap()).unwrap();
        assert_eq!(image.indices().collect::<Vec<_>>(), vec![0, 1]);
        assert!(p.apply(&f.empty_set()).unwrap().is_empty());
        assert!(p.apply(&f.full_set()).unwrap().is_full());
        let other = Frame::new(["x"]).unwrap();
        assert_eq!(
            p.apply(&other.full_set()).unwrap_err(),
            Error::FrameMismatch
        );
    }

    #[test]
    fn partition_validation() {
        let f = abc();
        let ab = f.subset(["a", "b"]).unwrap();
        let bc = f.subset(["b", "c"]).unwrap();
        assert!(matches!(
            Partition::new(&f, vec![ab.clone(), bc]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            Partition::new(&f, vec![ab.clone()]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            Partition::new(&f, vec![ab, f.subset(["c"]).unwrap(), f.empty_set()]),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn two_block_layout() {
        let f = Frame::new(["a", "b", "c", "d"]).unwrap();
        let p = Partition::two_block(&f.subset(["b", "d"]).unwrap());
        assert_eq!(p.coarse().labels(), &["a+c", "b", "d"]);
        assert_eq!(p.block_of(2), 0);
        let whole = Partition::two_block(&f.full_set());
        assert_eq!(whole.coarse().len(), 4);
        let none = Partition::two_block(&f.empty_set());
        assert_eq!(none.coarse().len(), 1);
    }

    fn frame_and_partition() -> impl Strategy<Value = (Frame, Partition)> {
        (1usize..=7).prop_flat_map(|n| {
            proptest::collection::vec(0..n, n).prop_map(move |assign| {
                let frame = Frame::new((0..n).map(|i| format!("w{i}"))).unwrap();
                let mut groups: Vec<u32> = Vec::new();
                let mut seen: Vec<usize> = Vec::new();
                for (world, &g) in assign.iter().enumerate() {
                    match seen.iter().position(|&s| s == g) {
                        Some(k) => groups[k] |= 1 << world,
                        None => {
                            seen.push(g);
                            groups.push(1 << world);
                        }
                    }
                }
                let blocks = groups
                    .into_iter()
                    .map(|m| frame.subset_unchecked(m))
                    .collect();
                let p = Partition::new(&frame, blocks).unwrap();
                (frame, p)
            })
        })
    }

    proptest! {
        #[test]
        fn complement_is_an_involution(n in 1usize..=10, raw in any::<u32>()) {
            let frame = Frame::new((0..n).map(|i| format!("w{i}"))).unwrap();
            let a = frame.subset_unchecked(raw & frame.full_mask());
            prop_assert_eq!(a.complement().complement(), a);
        }

        #[test]
        fn outer_image_respects_unions((frame, p) in frame_and_partition(), x in any::<u32>(), y in any::<u32>()) {
            let a = frame.subset_unchecked(x & frame.full_mask());
            let b = frame.subset_unchecked(y & frame.full_mask());
            let lhs = p.apply(&a.union(&b).unwrap()).unwrap();
            let rhs = p.apply(&a).unwrap().union(&p.apply(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(p.apply(&a).unwrap().is_empty(), a.is_empty());
        }

        #[test]
        fn two_block_sends_complement_subsets_to_one_world(n in 1usize..=8, kept in any::<u32>(), x in any::<u32>()) {
            let frame = Frame::new((0..n).map(|i| format!("w{i}"))).unwrap();
            let a = frame.subset_unchecked(kept & frame.full_mask());
            let rest = a.complement();
            let p = Partition::two_block(&a);
            let sub = frame.subset_unchecked(x & rest.mask());
            prop_assume!(!sub.is_empty());
            let image = p.apply(&sub).unwrap();
            prop_assert_eq!(&image, &p.apply(&rest).unwrap());
            prop_assert_eq!(image.len(), 1);
        }
    }
}
