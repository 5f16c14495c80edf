//! Mixtures and superpositions of families of states sharing one known space.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{ModVector, Submodule};
use crate::state::{EpistemicState, PhaseSpace};

/// Above this many elements of `V`, per-observable classification is
/// checked on the basis plus seeded random combinations instead of exhaustively.
const EXHAUSTIVE_LIMIT: u128 = 1 << 12;
const RANDOM_CERTIFICATES: usize = 256;

/// States `(V, v_j)` over one isotropic `V`. Valuations are kept canonical,
/// deduplicated and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateFamily {
    space: PhaseSpace,
    known: Submodule,
    valuations: Vec<ModVector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObservableClass {
    Constant(u64),
    TotallyUnknown,
    PartiallyKnown,
}

impl StateFamily {
    pub fn new(space: PhaseSpace, known: Submodule, valuations: &[ModVector]) -> Result<Self> {
        if valuations.is_empty() {
            return Err(Error::BadFamilyShape("a family needs at least one member".into()));
        }
        let first = EpistemicState::from_submodule(space, known, &valuations[0])?;
        let members: BTreeSet<ModVector> =
            valuations.iter().map(|v| first.with_valuation(v).map(|s| s.valuation().clone())).collect::<Result<_>>()?;
        Ok(StateFamily { space, known: first.known().clone(), valuations: members.into_iter().collect() })
    }

    pub fn from_states(states: &[EpistemicState]) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::BadFamilyShape("empty family".into()))?;
        if states.iter().any(|s| s.space() != first.space() || s.known() != first.known()) {
            return Err(Error::BadFamilyShape("members must share the same known space".into()));
        }
        let vals: Vec<ModVector> = states.iter().map(|s| s.valuation().clone()).collect();
        Self::new(first.space(), first.known().clone(), &vals)
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn known(&self) -> &Submodule {
        &self.known
    }

    pub fn valuations(&self) -> &[ModVector] {
        &self.valuations
    }

    pub fn members(&self) -> Vec<EpistemicState> {
        self.valuations
            .iter()
            .map(|v| EpistemicState::from_submodule(self.space, self.known.clone(), v).expect("validated family"))
            .collect()
    }
}

/// How the value of `f` varies across the family.
pub fn classify(f: &ModVector, fam: &StateFamily) -> Result<ObservableClass> {
    if f.len() != fam.space.dim() || !fam.known.contains(f) {
        return Err(Error::NotInV);
    }
    Ok(classify_unchecked(f, fam))
}

fn classify_unchecked(f: &ModVector, fam: &StateFamily) -> ObservableClass {
    let d = fam.space.modulus();
    let values: BTreeSet<u64> = fam.valuations.iter().map(|v| f.dot(v, d)).collect();
    if values.len() == 1 {
        ObservableClass::Constant(*values.first().expect("nonempty"))
    } else if values.into_iter().eq(fam.space.attainable_values(f)) {
        ObservableClass::TotallyUnknown
    } else {
        ObservableClass::PartiallyKnown
    }
}

/// Observables of `V` with the same value in every member.
pub fn constant_submodule(fam: &StateFamily) -> Submodule {
    let d = fam.space.modulus();
    let diffs: Vec<ModVector> = fam.valuations.iter().map(|v| v.sub(&fam.valuations[0], d)).collect();
    let spread = Submodule::new(d, fam.space.dim(), &diffs).expect("dimensions agree");
    fam.known.intersect(&spread.orthogonal_complement()).expect("same ambient space")
}

fn check_mixable(fam: &StateFamily) -> Result<Submodule> {
    let w = constant_submodule(fam);
    let partially_known = |f: &ModVector| classify_unchecked(f, fam) == ObservableClass::PartiallyKnown;
    let witness = match fam.known.cardinality() {
        Ok(size) if size <= EXHAUSTIVE_LIMIT => fam.known.elements().into_iter().find(|f| partially_known(f)),
        _ => {
            let basis = fam.known.basis();
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let d = fam.space.modulus();
            basis.iter().cloned().find(|f| partially_known(f)).or_else(|| {
                (0..RANDOM_CERTIFICATES)
                    .map(|_| {
                        basis.iter().fold(ModVector::zeros(fam.space.dim()), |acc, b| {
                            acc.add(&b.scale(rng.gen_range(0..d.get()), d), d)
                        })
                    })
                    .find(|f| partially_known(f))
            })
        }
    };
    if let Some(f) = witness {
        return Err(Error::PartiallyKnownObservable { witness: vec![f.into_inner()] });
    }
    // The union of member supports fills W^perp + v_1 exactly when the family
    // hits every class of V^perp inside it, i.e. |V| / |W| members.
    let classes = fam.known.cardinality()? / w.cardinality()?;
    if fam.valuations.len() as u128 != classes {
        let witness = fam.known.basis().iter().map(|b| b.to_vec()).collect();
        return Err(Error::PartiallyKnownObservable { witness });
    }
    Ok(w)
}

/// The equal-weight mixture `(W, v_1)` with `W` the constant observables.
pub fn mix(fam: &StateFamily) -> Result<EpistemicState> {
    let w = check_mixable(fam)?;
    EpistemicState::from_submodule(fam.space, w, &fam.valuations[0])
}

/// Constant part `U` of a superposable family: a mixable family whose known
/// space is `U` plus one totally unknown observable.
pub fn superposable_part(fam: &StateFamily) -> Result<Submodule> {
    let w = check_mixable(fam).map_err(|e| Error::BadFamilyShape(e.to_string()))?;
    if w == fam.known {
        return Err(Error::BadFamilyShape("no observable is totally unknown".into()));
    }
    let d = fam.space.modulus();
    let mut candidates: Vec<ModVector> = fam.known.basis().to_vec();
    if fam.known.cardinality().map_or(false, |c| c <= EXHAUSTIVE_LIMIT) {
        candidates.extend(fam.known.elements());
    }
    let single = candidates.iter().any(|f| {
        let grown = w.sum(&Submodule::new(d, fam.space.dim(), std::slice::from_ref(f)).expect("dims")).expect("dims");
        grown == fam.known
    });
    if !single {
        return Err(Error::BadFamilyShape("more than one observable is totally unknown".into()));
    }
    Ok(w)
}

fn superposed_space(fam: &StateFamily, f_new: &ModVector) -> Result<Submodule> {
    if f_new.len() != fam.space.dim() {
        return Err(Error::DimensionMismatch { expected: fam.space.dim(), found: f_new.len() });
    }
    let u = superposable_part(fam)?;
    let d = fam.space.modulus();
    let f_new = ModVector::new(f_new.to_vec(), d);
    if !fam.space.symplectic_complement(&u).contains(&f_new) {
        return Err(Error::NotIsotropicChoice);
    }
    if fam.known.contains(&f_new) {
        return Err(Error::DegenerateChoice);
    }
    u.sum(&Submodule::new(d, fam.space.dim(), &[f_new])?)
}

/// The superposition `(U + span{f_new}, v_j)`.
pub fn superpose(fam: &StateFamily, f_new: &ModVector, phase_choice: usize) -> Result<EpistemicState> {
    let v_prime = superposed_space(fam, f_new)?;
    let v = fam
        .valuations
        .get(phase_choice)
        .ok_or(Error::IndexError { index: phase_choice, n: fam.valuations.len() })?;
    EpistemicState::from_submodule(fam.space, v_prime, v)
}

/// Every state over `U + span{f_new}` that agrees with the family on `U`.
pub fn superposition_phases(fam: &StateFamily, f_new: &ModVector) -> Result<Vec<EpistemicState>> {
    let v_prime = superposed_space(fam, f_new)?;
    let u = constant_submodule(fam);
    let d = fam.space.modulus();
    let target = v_prime.orthogonal_complement();
    let start = target.reduce(&fam.valuations[0]);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let u_perp = u.orthogonal_complement();
    while let Some(x) = queue.pop_front() {
        for b in u_perp.basis() {
            let y = target.reduce(&x.add(b, d));
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.iter().map(|w| EpistemicState::from_submodule(fam.space, v_prime.clone(), w)).collect()
}

/// Observables usable as `f_new`, one per distinct resulting known space,
/// each the lexicographically smallest producing it. May be empty.
pub fn enumerate_superposition_choices(fam: &StateFamily) -> Result<Vec<ModVector>> {
    let u = superposable_part(fam)?;
    let d = fam.space.modulus();
    let mut by_space: BTreeMap<Submodule, ModVector> = BTreeMap::new();
    for x in fam.space.symplectic_complement(&u).elements() {
        if fam.known.contains(&x) {
            continue;
        }
        let v_prime = u.sum(&Submodule::new(d, fam.space.dim(), std::slice::from_ref(&x))?)?;
        by_space.entry(v_prime).or_insert(x);
    }
    let mut out: Vec<ModVector> = by_space.into_values().collect();
    out.sort();
    Ok(out)
}

/// A pure-state family over a maximal isotropic extension of `V` whose
/// mixture is `s`. Needs a prime modulus.
pub fn decompose_into_pure(s: &EpistemicState) -> Result<StateFamily> {
    let space = s.space();
    let d = space.modulus();
    if !d.is_prime() {
        return Err(Error::NotSupportedModulus(d.get()));
    }
    let mut ext = s.known().clone();
    let target = d.pow(space.n()).ok_or(Error::Overflow)?;
    while ext.cardinality()? < target {
        let comp = space.symplectic_complement(&ext);
        let x = comp
            .basis()
            .iter()
            .find(|b| !ext.contains(b))
            .cloned()
            .expect("a non-maximal isotropic space over a field has a proper symplectic complement");
        ext = ext.sum(&Submodule::new(d, space.dim(), &[x])?)?;
    }
    let ext_perp = ext.orthogonal_complement();
    let start = ext_perp.reduce(s.valuation());
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for b in s.perp().basis() {
            let y = ext_perp.reduce(&x.add(b, d));
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let vals: Vec<ModVector> = seen.into_iter().collect();
    let fam = StateFamily::new(space, ext, &vals)?;
    debug_assert_eq!(mix(&fam).as_ref(), Ok(s));
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Modulus;

    fn sp(n: usize, d: u64) -> PhaseSpace {
        PhaseSpace::new(n, Modulus::new(d).unwrap()).unwrap()
    }

    fn family(s: PhaseSpace, gens: &[&[u64]], vals: &[&[u64]]) -> StateFamily {
        let gens: Vec<ModVector> = gens.iter().map(|g| s.vector(g).unwrap()).collect();
        let vals: Vec<ModVector> = vals.iter().map(|v| s.vector(v).unwrap()).collect();
        StateFamily::new(s, Submodule::new(s.modulus(), s.dim(), &gens).unwrap(), &vals).unwrap()
    }

    #[test]
    fn classification() {
        let s = sp(1, 2);
        let fam = family(s, &[&[0, 1]], &[&[0, 0], &[0, 1]]);
        assert_eq!(classify(&s.vector(&[0, 0]).unwrap(), &fam).unwrap(), ObservableClass::Constant(0));
        assert_eq!(classify(&s.vector(&[0, 1]).unwrap(), &fam).unwrap(), ObservableClass::TotallyUnknown);
        assert_eq!(classify(&s.vector(&[1, 0]).unwrap(), &fam), Err(Error::NotInV));
    }

    #[test]
    fn fully_mixed_three_ways() {
        let s = sp(1, 2);
        let full = EpistemicState::maximally_mixed(s);
        for (g, one) in [([1, 0], [1, 0]), ([0, 1], [0, 1]), ([1, 1], [1, 0])] {
            let fam = family(s, &[&g], &[&[0, 0], &one]);
            assert_eq!(fam.valuations().len(), 2);
            assert_eq!(mix(&fam).unwrap(), full);
        }
    }

    #[test]
    fn single_member_mixes_to_itself() {
        let s = sp(1, 3);
        let fam = family(s, &[&[1, 2]], &[&[2, 0]]);
        assert_eq!(mix(&fam).unwrap(), fam.members()[0]);
    }

    #[test]
    fn partially_known_over_z3() {
        let s = sp(1, 3);
        let fam = family(s, &[&[1, 0]], &[&[0, 0], &[1, 0]]);
        assert!(matches!(mix(&fam), Err(Error::PartiallyKnownObservable { .. })));
    }

    #[test]
    fn decomposition_of_fully_mixed_bit() {
        let s = sp(1, 2);
        let fam = decompose_into_pure(&EpistemicState::maximally_mixed(s)).unwrap();
        assert_eq!(fam.valuations().len(), 2);
        assert!(fam.members().iter().all(EpistemicState::is_pure));
        assert_eq!(mix(&fam).unwrap(), EpistemicState::maximally_mixed(s));
        let four = sp(1, 4);
        assert_eq!(decompose_into_pure(&EpistemicState::maximally_mixed(four)), Err(Error::NotSupportedModulus(4)));
    }

    #[test]
    fn pure_state_decomposes_to_itself() {
        let s = sp(1, 3);
        let st = EpistemicState::new(s, &[s.vector(&[1, 1]).unwrap()], &s.vector(&[2, 0]).unwrap()).unwrap();
        let fam = decompose_into_pure(&st).unwrap();
        assert_eq!(fam.members(), vec![st]);
    }

    #[test]
    fn single_bit_superposition_choices() {
        let s = sp(1, 2);
        let fam = family(s, &[&[0, 1]], &[&[0, 0], &[0, 1]]);
        let choices = enumerate_superposition_choices(&fam).unwrap();
        assert_eq!(choices, vec![s.vector(&[1, 0]).unwrap(), s.vector(&[1, 1]).unwrap()]);
        let phases: usize = choices.iter().map(|f| superposition_phases(&fam, f).unwrap().len()).sum();
        assert_eq!(phases, 4);
        assert_eq!(superpose(&fam, &s.vector(&[0, 1]).unwrap(), 0), Err(Error::DegenerateChoice));
        assert!(matches!(superpose(&fam, &s.vector(&[1, 0]).unwrap(), 5), Err(Error::IndexError { .. })));
    }

    #[test]
    fn pure_family_is_not_superposable() {
        let s = sp(1, 2);
        let fam = family(s, &[&[0, 1]], &[&[0, 0]]);
        assert!(matches!(enumerate_superposition_choices(&fam), Err(Error::BadFamilyShape(_))));
    }
}
