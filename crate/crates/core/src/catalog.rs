//! Exhaustive enumeration of valid epistemic states on small phase spaces.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ModVector, Submodule};
use crate::state::{EpistemicState, PhaseSpace};

/// Largest phase space (number of ontic states) the catalog will enumerate.
pub const MAX_ONTIC_STATES: u128 = 10_000;

fn check_size(space: PhaseSpace) -> Result<()> {
    match space.modulus().pow(space.dim()) {
        Some(size) if size <= MAX_ONTIC_STATES => Ok(()),
        _ => Err(Error::TooLarge(format!(
            "{}^{} ontic states exceeds {MAX_ONTIC_STATES}",
            space.modulus().get(),
            space.dim()
        ))),
    }
}

/// Every isotropic submodule, sorted. Each is reached from the zero module
/// by adjoining one vector of the current symplectic complement at a time.
pub fn isotropic_submodules(space: PhaseSpace) -> Result<Vec<Submodule>> {
    check_size(space)?;
    let zero = Submodule::zero(space.modulus(), space.dim());
    let mut seen = BTreeSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(u) = queue.pop_front() {
        for x in space.symplectic_complement(&u).elements() {
            if u.contains(&x) {
                continue;
            }
            let grown = u.sum(&Submodule::new(space.modulus(), space.dim(), &[x])?)?;
            if seen.insert(grown.clone()) {
                queue.push_back(grown);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Representatives of the classes of `Omega / direction`, one per class, sorted.
pub fn coset_representatives(space: PhaseSpace, direction: &Submodule) -> Vec<ModVector> {
    let d = space.modulus();
    let start = ModVector::zeros(space.dim());
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for i in 0..space.dim() {
            let y = direction.reduce(&x.add(&ModVector::unit(space.dim(), i), d));
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// All valid states `(V, v)`, one per equivalence class, sorted.
pub fn enumerate_states(space: PhaseSpace) -> Result<Vec<EpistemicState>> {
    let mut out = Vec::new();
    for v in isotropic_submodules(space)? {
        let perp = v.orthogonal_complement();
        for rep in coset_representatives(space, &perp) {
            out.push(EpistemicState::from_submodule(space, v.clone(), &rep)?);
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogSummary {
    pub total: usize,
    pub pure: usize,
    pub mixed: usize,
}

pub fn summarize(states: &[EpistemicState]) -> CatalogSummary {
    let pure = states.iter().filter(|s| s.is_pure()).count();
    CatalogSummary { total: states.len(), pure, mixed: states.len() - pure }
}
