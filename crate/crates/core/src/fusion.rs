//! Belief dynamics: unnormalized conditioning and conjunctive combination,
//! Dempster normalization for comparison, mixtures, discounting, coarsening
//! and the pignistic transform.
//!
//! Nothing here renormalizes implicitly. Mass that lands on ∅ stays there.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::frame::{Frame, Partition, Subset};
use crate::lattice;
use crate::massfn::{MassFunction, NEGATIVE_TOLERANCE};

/// Unnormalized Dempster conditioning on "the actual world is in `a`".
///
/// Each focal mass `m(X)` moves to `X ∩ A`, so `m_A(∅) = m(∅) + bel(Ā)`.
/// Conditioning on ∅ yields the contradiction.
pub fn condition(m: &MassFunction, a: &Subset) -> Result<MassFunction> {
    m.frame().check_same(a.frame())?;
    if a.is_empty() {
        return Ok(MassFunction::contradiction(m.frame()));
    }
    let keep = a.mask();
    let mut out = BTreeMap::new();
    for (x, mass) in m.focal_masks() {
        *out.entry(x & keep).or_insert(0.0) += mass;
    }
    Ok(MassFunction::from_parts(m.frame(), out))
}

/// Above this many focal pairs per dense cell operation, combination goes
/// through commonalities instead of pairwise intersections.
const DENSE_CROSSOVER: usize = 4;

/// Unnormalized conjunctive combination: `m(C) = Σ_{X ∩ Y = C} m1(X)·m2(Y)`.
///
/// Picks the sparse focal-pair route unless both operands are dense enough
/// that the commonality product is cheaper.
pub fn combine_conjunctive(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    m1.frame().check_same(m2.frame())?;
    let pairs = m1.focal_count().saturating_mul(m2.focal_count());
    let frame = m1.frame();
    let dense_cost = DENSE_CROSSOVER * frame.len().max(1) * frame.powerset_size();
    if pairs > dense_cost {
        combine_commonality(m1, m2)
    } else {
        combine_focal_pairs(m1, m2)
    }
}

/// Conjunctive combination by iterating over every pair of focal sets.
pub fn combine_focal_pairs(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    m1.frame().check_same(m2.frame())?;
    let mut out = BTreeMap::new();
    for (x, a) in m1.focal_masks() {
        for (y, b) in m2.focal_masks() {
            *out.entry(x & y).or_insert(0.0) += a * b;
        }
    }
    Ok(MassFunction::from_parts(m1.frame(), out))
}

/// Conjunctive combination as a pointwise product of commonalities.
pub fn combine_commonality(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    m1.frame().check_same(m2.frame())?;
    let q2 = m2.commonality();
    let mut q = m1.commonality().values().to_vec();
    for (a, b) in q.iter_mut().zip(q2.values()) {
        *a *= b;
    }
    lattice::superset_mobius(&mut q);
    let mut out = BTreeMap::new();
    for (k, &mass) in q.iter().enumerate() {
        debug_assert!(mass >= -NEGATIVE_TOLERANCE);
        if mass > 1e-15 {
            out.insert(k as u32, mass);
        }
    }
    Ok(MassFunction::from_parts(m1.frame(), out))
}

/// Combines any number of mass functions left to right. An empty input
/// yields the vacuous mass function.
pub fn combine_all<'a, I>(frame: &Frame, masses: I) -> Result<MassFunction>
where
    I: IntoIterator<Item = &'a MassFunction>,
{
    let mut acc = MassFunction::vacuous(frame);
    for m in masses {
        acc = combine_conjunctive(&acc, m)?;
    }
    Ok(acc)
}

/// Dempster normalization: drops `m(∅)` and rescales the rest.
///
/// Fails with [`Error::TotalContradiction`] when no mass is left outside ∅.
pub fn normalize(m: &MassFunction) -> Result<MassFunction> {
    // Dividing by the surviving mass itself, not 1 - m(∅), avoids the
    // cancellation when m(∅) is close to 1.
    let surviving: f64 = m.focal_masks().filter(|(k, _)| *k != 0).map(|(_, v)| v).sum();
    if surviving <= 0.0 {
        return Err(Error::TotalContradiction);
    }
    if m.conflict() == 0.0 {
        return Ok(m.clone());
    }
    let out = m
        .focal_masks()
        .filter(|(k, _)| *k != 0)
        .map(|(k, v)| (k, v / surviving))
        .collect();
    Ok(MassFunction::from_parts(m.frame(), out))
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfUnitRange { name, value })
    }
}

/// Convex blend `p·m1 + (1-p)·m2`: belief from a random device that picks
/// `m1` with probability `p`.
pub fn mixture(p: f64, m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    check_unit("p", p)?;
    m1.frame().check_same(m2.frame())?;
    let q = 1.0 - p;
    let mut out: BTreeMap<u32, f64> = BTreeMap::new();
    for (k, v) in m1.focal_masks() {
        out.insert(k, p * v + q * m2.mass_at(k as usize));
    }
    for (k, v) in m2.focal_masks() {
        out.entry(k).or_insert(q * v);
    }
    Ok(MassFunction::from_parts(m1.frame(), out))
}

/// Classical discounting: a fraction `alpha` of every mass moves to Ω.
pub fn discount(m: &MassFunction, alpha: f64) -> Result<MassFunction> {
    check_unit("alpha", alpha)?;
    let keep = 1.0 - alpha;
    let full = m.frame().full_set().index() as u32;
    let mut out: BTreeMap<u32, f64> = m.focal_masks().map(|(k, v)| (k, keep * v)).collect();
    *out.entry(full).or_insert(0.0) += alpha;
    Ok(MassFunction::from_parts(m.frame(), out))
}

/// Pushes `m` onto the coarse frame of `partition`: each focal set goes to
/// its outer image. `m(∅)` is carried over unchanged.
pub fn coarsen(m: &MassFunction, partition: &Partition) -> Result<MassFunction> {
    partition.source().check_same(m.frame())?;
    let mut out = BTreeMap::new();
    for (x, mass) in m.focal_masks() {
        *out.entry(partition.image_mask(x)).or_insert(0.0) += mass;
    }
    Ok(MassFunction::from_parts(partition.coarse(), out))
}

/// Pignistic probabilities over the worlds of a frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Pignistic {
    frame: Frame,
    probabilities: Vec<f64>,
    renormalized_conflict: f64,
}

impl Pignistic {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// One probability per world, in frame order.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.frame.index_of(label).map(|i| self.probabilities[i])
    }

    /// The `m(∅)` that was divided out. Non-zero values mean the probabilities
    /// were conditioned on the frame being exhaustive.
    pub fn renormalized_conflict(&self) -> f64 {
        self.renormalized_conflict
    }
}

/// `BetP(ω) = Σ_{A ∋ ω} m(A) / (|A|·(1 - m(∅)))`.
///
/// With `m(∅) > 0` this divides the conflict out, which goes beyond the
/// unnormalized calculus; [`Pignistic::renormalized_conflict`] records how
/// much. Fails on total contradiction.
pub fn pignistic(m: &MassFunction) -> Result<Pignistic> {
    let frame = m.frame();
    let mut probabilities = vec![0.0; frame.len()];
    let mut surviving = 0.0;
    for (set, mass) in m.focal_sets() {
        if set.is_empty() {
            continue;
        }
        surviving += mass;
        let share = mass / set.len() as f64;
        for world in set.indices() {
            probabilities[world] += share;
        }
    }
    if surviving <= 0.0 {
        return Err(Error::TotalContradiction);
    }
    for p in &mut probabilities {
        *p /= surviving;
    }
    Ok(Pignistic {
        frame: frame.clone(),
        probabilities,
        renormalized_conflict: m.conflict(),
    })
}
