//! Basic belief assignments with mass on the empty set permitted, and their
//! belief, plausibility and commonality representations.
//!
//! `m(∅)` is the conflict mass: `bel(Ω) = pl(Ω) = 1 - m(∅)`, and `m(∅) = 1`
//! is total contradiction. Neither `bel` nor `pl` ever counts `m(∅)`.
//!
//! Commonality is not needed for belief and plausibility themselves. It is
//! kept because conjunctive combination becomes a pointwise product in it.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::frame::{Frame, Subset};
use crate::lattice;

/// Input masses must sum to one within this tolerance.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Masses recovered by an inverse transform may dip this far below zero
/// before the input is rejected.
pub const NEGATIVE_TOLERANCE: f64 = 1e-9;

/// Recovered masses smaller than this in magnitude are rounding residue.
const ROUNDOFF: f64 = 1e-14;

/// A basic belief assignment over the subsets of a frame.
///
/// Stored sparsely: only focal sets (positive mass) are kept, ordered by
/// powerset index.
#[derive(Clone, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    focal: BTreeMap<u32, f64>,
}

impl MassFunction {
    /// Validates and normalizes a list of `(subset, mass)` entries.
    ///
    /// Repeated subsets are merged by adding their masses. Zero entries are
    /// dropped and the result is rescaled so the masses sum to one.
    pub fn new<I>(frame: &Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, f64)>,
    {
        let mut focal = BTreeMap::new();
        for (set, mass) in entries {
            frame.check_same(set.frame())?;
            if !mass.is_finite() || mass < 0.0 {
                return Err(Error::InvalidMass { mass });
            }
            *focal.entry(set.mask()).or_insert(0.0) += mass;
        }
        Self::validated(frame, focal)
    }

    /// Builds from a dense vector over the powerset, validated like [`new`].
    ///
    /// [`new`]: MassFunction::new
    pub fn from_dense(frame: &Frame, masses: &[f64]) -> Result<Self> {
        check_len(frame, masses.len())?;
        let mut focal = BTreeMap::new();
        for (k, &mass) in masses.iter().enumerate() {
            if !mass.is_finite() || mass < 0.0 {
                return Err(Error::InvalidMass { mass });
            }
            if mass > 0.0 {
                focal.insert(k as u32, mass);
            }
        }
        Self::validated(frame, focal)
    }

    fn validated(frame: &Frame, mut focal: BTreeMap<u32, f64>) -> Result<Self> {
        focal.retain(|_, m| *m > 0.0);
        let sum: f64 = focal.values().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::MassSum {
                sum,
                tolerance: SUM_TOLERANCE,
            });
        }
        if sum != 1.0 {
            for m in focal.values_mut() {
                *m /= sum;
            }
        }
        Ok(MassFunction {
            frame: frame.clone(),
            focal,
        })
    }

    /// Wraps the output of an operation that preserves total mass. Entries are
    /// taken as they are apart from dropping zeros.
    pub(crate) fn from_parts(frame: &Frame, mut focal: BTreeMap<u32, f64>) -> Self {
        focal.retain(|_, m| *m > 0.0);
        debug_assert!((focal.values().sum::<f64>() - 1.0).abs() < 1e-9);
        MassFunction {
            frame: frame.clone(),
            focal,
        }
    }

    /// Total ignorance: `m(Ω) = 1`.
    pub fn vacuous(frame: &Frame) -> Self {
        Self::categorical(&frame.full_set())
    }

    /// All mass on one subset. `categorical(∅)` is the contradiction.
    pub fn categorical(set: &Subset) -> Self {
        MassFunction {
            frame: set.frame().clone(),
            focal: BTreeMap::from([(set.mask(), 1.0)]),
        }
    }

    /// Total contradiction: `m(∅) = 1`.
    pub fn contradiction(frame: &Frame) -> Self {
        Self::categorical(&frame.empty_set())
    }

    /// Inverts `bel` by Möbius inversion over non-empty subsets. `m(∅)` takes
    /// up whatever mass the non-empty subsets leave.
    ///
    /// Accepts either the `2^n - 1` values for the non-empty subsets in
    /// powerset order, or all `2^n` values with `bel(∅) = 0`.
    pub fn from_belief(frame: &Frame, bel: &[f64]) -> Result<Self> {
        let size = frame.powerset_size();
        let mut dense = if bel.len() == size - 1 {
            let mut v = Vec::with_capacity(size);
            v.push(0.0);
            v.extend_from_slice(bel);
            v
        } else if bel.len() == size {
            if bel[0].abs() > NEGATIVE_TOLERANCE {
                return Err(Error::InvalidBelief {
                    index: 0,
                    mass: bel[0],
                });
            }
            let mut v = bel.to_vec();
            v[0] = 0.0;
            v
        } else {
            return Err(Error::DimensionMismatch {
                expected: size,
                got: bel.len(),
            });
        };
        if let Some(k) = dense.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidBelief {
                index: k,
                mass: dense[k],
            });
        }
        lattice::subset_mobius(&mut dense);
        for (k, m) in dense.iter_mut().enumerate().skip(1) {
            if *m < -NEGATIVE_TOLERANCE {
                return Err(Error::InvalidBelief { index: k, mass: *m });
            }
            if m.abs() < ROUNDOFF {
                *m = 0.0;
            }
        }
        let empty = 1.0 - dense[1..].iter().sum::<f64>();
        if !(-NEGATIVE_TOLERANCE..=1.0 + NEGATIVE_TOLERANCE).contains(&empty) {
            return Err(Error::InvalidBelief {
                index: 0,
                mass: empty,
            });
        }
        dense[0] = if empty.abs() < ROUNDOFF { 0.0 } else { empty.max(0.0) };
        let focal = dense
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > 0.0)
            .map(|(k, m)| (k as u32, *m))
            .collect();
        Self::validated(frame, focal)
    }

    /// Inverts a commonality vector by Möbius inversion over supersets.
    pub fn from_commonality(frame: &Frame, q: &[f64]) -> Result<Self> {
        check_len(frame, q.len())?;
        if let Some(k) = q.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidCommonality(format!(
                "q at subset #{k} is {}",
                q[k]
            )));
        }
        if (q[0] - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidCommonality(format!(
                "q(∅) = {}, expected 1",
                q[0]
            )));
        }
        let mut dense = q.to_vec();
        lattice::superset_mobius(&mut dense);
        let mut focal = BTreeMap::new();
        for (k, &m) in dense.iter().enumerate() {
            if m < -NEGATIVE_TOLERANCE {
                return Err(Error::InvalidCommonality(format!(
                    "recovered mass {m} at subset #{k}"
                )));
            }
            if m >= ROUNDOFF {
                focal.insert(k as u32, m);
            }
        }
        Self::validated(frame, focal)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// `m(A)`.
    pub fn mass(&self, set: &Subset) -> Result<f64> {
        self.frame.check_same(set.frame())?;
        Ok(self.mass_at(set.index()))
    }

    /// Mass at a powerset index; zero for non-focal or out-of-range indices.
    pub fn mass_at(&self, index: usize) -> f64 {
        u32::try_from(index)
            .ok()
            .and_then(|k| self.focal.get(&k))
            .copied()
            .unwrap_or(0.0)
    }

    /// The conflict mass `m(∅)`.
    pub fn conflict(&self) -> f64 {
        self.mass_at(0)
    }

    pub fn is_contradiction(&self) -> bool {
        self.focal.len() == 1 && self.focal.contains_key(&0)
    }

    pub fn is_vacuous(&self) -> bool {
        self.focal.len() == 1 && self.focal.contains_key(&self.frame.full_mask())
    }

    /// Every focal set is a singleton.
    pub fn is_bayesian(&self) -> bool {
        self.focal.keys().all(|k| k.count_ones() == 1)
    }

    /// Focal sets with their masses, in powerset order.
    pub fn focal_sets(&self) -> impl Iterator<Item = (Subset, f64)> + '_ {
        self.focal
            .iter()
            .map(|(&k, &m)| (self.frame.subset_unchecked(k), m))
    }

    pub(crate) fn focal_masks(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.focal.iter().map(|(&k, &m)| (k, m))
    }

    pub fn focal_count(&self) -> usize {
        self.focal.len()
    }

    /// Dense vector of length `2^n` in powerset order.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.frame.powerset_size()];
        for (&k, &m) in &self.focal {
            dense[k as usize] = m;
        }
        dense
    }

    /// `bel(A) = Σ_{∅ ≠ X ⊆ A} m(X)`.
    pub fn bel(&self, set: &Subset) -> Result<f64> {
        self.frame.check_same(set.frame())?;
        let a = set.mask();
        Ok(self
            .focal
            .iter()
            .filter(|(&x, _)| x != 0 && x & !a == 0)
            .map(|(_, m)| m)
            .sum())
    }

    /// `pl(A) = Σ_{X ∩ A ≠ ∅} m(X)`.
    pub fn pl(&self, set: &Subset) -> Result<f64> {
        self.frame.check_same(set.frame())?;
        let a = set.mask();
        Ok(self
            .focal
            .iter()
            .filter(|(&x, _)| x & a != 0)
            .map(|(_, m)| m)
            .sum())
    }

    /// `q(A) = Σ_{X ⊇ A} m(X)`.
    pub fn commonality_of(&self, set: &Subset) -> Result<f64> {
        self.frame.check_same(set.frame())?;
        let a = set.mask();
        Ok(self
            .focal
            .iter()
            .filter(|(&x, _)| a & !x == 0)
            .map(|(_, m)| m)
            .sum())
    }

    /// Dense `bel` and `pl` over the whole powerset.
    pub fn belief_view(&self) -> BeliefView {
        let mut implicability = self.to_dense();
        lattice::subset_zeta(&mut implicability);
        // implicability(A) = Σ_{X ⊆ A} m(X), ∅ included
        let conflict = self.conflict();
        let total = implicability[implicability.len() - 1];
        let full = self.frame.full_mask() as usize;
        let bel: Vec<f64> = implicability.iter().map(|b| b - conflict).collect();
        let pl: Vec<f64> = (0..implicability.len())
            .map(|k| total - implicability[full & !k])
            .collect();
        BeliefView {
            frame: self.frame.clone(),
            bel,
            pl,
            conflict,
        }
    }

    pub fn commonality(&self) -> CommonalityView {
        let mut q = self.to_dense();
        lattice::superset_zeta(&mut q);
        CommonalityView {
            frame: self.frame.clone(),
            q,
        }
    }

    /// Largest entrywise difference between two mass functions.
    pub fn max_abs_diff(&self, other: &MassFunction) -> Result<f64> {
        self.frame.check_same(&other.frame)?;
        let mut worst: f64 = 0.0;
        for (&k, &m) in &self.focal {
            worst = worst.max((m - other.mass_at(k as usize)).abs());
        }
        for (&k, &m) in &other.focal {
            if !self.focal.contains_key(&k) {
                worst = worst.max(m);
            }
        }
        Ok(worst)
    }

    /// Entrywise equality within `tolerance`; false across frames.
    pub fn approx_eq(&self, other: &MassFunction, tolerance: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tolerance)
    }
}

fn check_len(frame: &Frame, len: usize) -> Result<()> {
    if len == frame.powerset_size() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: frame.powerset_size(),
            got: len,
        })
    }
}

impl fmt::Debug for MassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (set, m) in self.focal_sets() {
            map.entry(&format_args!("{set}"), &m);
        }
        map.finish()
    }
}

/// Dense belief and plausibility over every subset of a frame.
#[derive(Clone, Debug, PartialEq)]
pub struct BeliefView {
    frame: Frame,
    bel: Vec<f64>,
    pl: Vec<f64>,
    conflict: f64,
}

impl BeliefView {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn bel(&self, set: &Subset) -> Result<f64> {
        self.frame.check_same(set.frame())?;
        Ok(self.bel[set.index()])
    }

    pub fn pl(&self, set: &Subset) -> Result<f64> {
        self.frame.check_same(set.frame())?;
        Ok(self.pl[set.index()])
    }

    /// `bel` indexed by powerset position.
    pub fn bel_values(&self) -> &[f64] {
        &self.bel
    }

    pub fn pl_values(&self) -> &[f64] {
        &self.pl
    }

    pub fn conflict(&self) -> f64 {
        self.conflict
    }

    pub fn to_mass(&self) -> Result<MassFunction> {
        MassFunction::from_belief(&self.frame, &self.bel)
    }
}

/// Dense commonality `q(A) = Σ_{X ⊇ A} m(X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommonalityView {
    frame: Frame,
    q: Vec<f64>,
}

impl CommonalityView {
    pub fn new(frame: &Frame, q: Vec<f64>) -> Result<Self> {
        check_len(frame, q.len())?;
        Ok(CommonalityView {
            frame: frame.clone(),
            q,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn get(&self, set: &Subset) -> Result<f64> {
        self.frame.check_same(set.frame())?;
        Ok(self.q[set.index()])
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    pub fn to_mass(&self) -> Result<MassFunction> {
        MassFunction::from_commonality(&self.frame, &self.q)
    }
}
