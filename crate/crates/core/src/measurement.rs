//! Joint measurement of an isotropic set of quadratures.

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use num_rational::Ratio;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{AffineCoset, ModVector, Submodule};
use crate::state::{EpistemicState, PhaseSpace};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Measurement {
    space: PhaseSpace,
    observables: Submodule,
    perp: Submodule,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome {
    /// Smallest representative of the outcome's valuation class.
    pub valuation: ModVector,
    pub probability: Ratio<u128>,
}

impl Measurement {
    pub fn new(space: PhaseSpace, generators: &[ModVector]) -> Result<Self> {
        let observables = Submodule::new(space.modulus(), space.dim(), generators)?;
        Self::from_submodule(space, observables)
    }

    pub fn from_submodule(space: PhaseSpace, observables: Submodule) -> Result<Self> {
        if observables.ambient_dim() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: observables.ambient_dim() });
        }
        if let Some((i, j)) = space.first_non_commuting(observables.basis()) {
            return Err(Error::NotIsotropic(i, j));
        }
        let perp = observables.orthogonal_complement();
        Ok(Measurement { space, observables, perp })
    }

    pub fn observables(&self) -> &Submodule {
        &self.observables
    }

    /// Ontic states producing outcome `v_pi`.
    pub fn cell(&self, v_pi: &ModVector) -> Result<AffineCoset> {
        AffineCoset::new(self.perp.clone(), v_pi)
    }

    fn check_state(&self, s: &EpistemicState) -> Result<()> {
        if s.space() != self.space {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), found: s.space().dim() });
        }
        Ok(())
    }

    pub fn probability(&self, v_pi: &ModVector, s: &EpistemicState) -> Result<Ratio<u128>> {
        self.check_state(s)?;
        match s.support().intersect(&self.cell(v_pi)?)? {
            None => Ok(Ratio::from_integer(0)),
            Some(c) => Ok(Ratio::new(c.cardinality()?, s.support_size()?)),
        }
    }

    /// Every outcome of nonzero probability, sorted by valuation.
    pub fn outcomes(&self, s: &EpistemicState) -> Result<Vec<Outcome>> {
        self.check_state(s)?;
        // Classes of the support modulo V_pi^perp, reached by walking along V^perp.
        let d = self.space.modulus();
        let start = self.perp.reduce(s.valuation());
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for b in s.perp().basis() {
                let y = self.perp.reduce(&x.add(b, d));
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter()
            .map(|valuation| Ok(Outcome { probability: self.probability(&valuation, s)?, valuation }))
            .collect()
    }

    /// Observables of `s` that commute with every measured observable.
    pub fn commuting_part(&self, s: &EpistemicState) -> Result<Submodule> {
        let comm = self.space.symplectic_complement(&self.observables);
        s.known().intersect(&comm)
    }

    /// Post-measurement state `(V_pi + V_commute, v')`.
    pub fn update(&self, v_pi: &ModVector, s: &EpistemicState) -> Result<EpistemicState> {
        self.check_state(s)?;
        let cell = self.cell(v_pi)?;
        if s.support().intersect(&cell)?.is_none() {
            return Err(Error::IncompatibleOutcome);
        }
        let commuting = self.commuting_part(s)?;
        let kept = AffineCoset::new(commuting.orthogonal_complement(), s.valuation())?;
        let support = cell.intersect(&kept)?.ok_or(Error::IncompatibleOutcome)?;
        let known = self.observables.sum(&commuting)?;
        let out = EpistemicState::from_submodule(self.space, known, support.offset())?;
        debug_assert_eq!(out.support(), support);
        Ok(out)
    }

    /// Draws an outcome with its exact probability and returns it with the updated state.
    pub fn sample<R: Rng + ?Sized>(&self, s: &EpistemicState, rng: &mut R) -> Result<(Outcome, EpistemicState)> {
        let outcomes = self.outcomes(s)?;
        let denom = outcomes.iter().fold(1u128, |acc, o| acc.lcm(o.probability.denom()));
        let mut r = rng.gen_range(0..denom);
        for o in &outcomes {
            let w = o.probability.numer() * (denom / o.probability.denom());
            if r < w {
                let post = self.update(&o.valuation, s)?;
                return Ok((o.clone(), post));
            }
            r -= w;
        }
        unreachable!("outcome probabilities sum to one")
    }
}

/// Whether the cells are exactly the valuation classes of one isotropic
/// submodule. Fails with `NotAPartition` unless the supports tile the space.
pub fn partition_is_measurement(cells: &[EpistemicState]) -> Result<bool> {
    let Some(first) = cells.first() else {
        return Err(Error::NotAPartition("no cells".into()));
    };
    let space = first.space();
    if let Some(c) = cells.iter().find(|c| c.space() != space) {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: c.space().dim() });
    }
    let total = space.modulus().pow(space.dim()).ok_or(Error::Overflow)?;
    let mut covered = 0u128;
    for (i, a) in cells.iter().enumerate() {
        covered = covered.checked_add(a.support_size()?).ok_or(Error::Overflow)?;
        for (j, b) in cells.iter().enumerate().skip(i + 1) {
            if a.support().intersect(&b.support())?.is_some() {
                return Err(Error::NotAPartition(format!("cells {i} and {j} overlap")));
            }
        }
    }
    if covered != total {
        return Err(Error::NotAPartition(format!("cells cover {covered} of {total} ontic states")));
    }
    Ok(cells.iter().all(|c| c.known() == first.known()))
}
