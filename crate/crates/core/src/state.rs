//! Phase space Z_d^{2n}, the symplectic form and generalized epistemic states.

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::linalg::{gcd, AffineCoset, ModMatrix, ModVector, Modulus, Submodule};

/// Phase space of `n` degrees of freedom over Z_d, coordinates ordered
/// `(q_1, p_1, ..., q_n, p_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseSpace {
    n: usize,
    d: Modulus,
}

impl PhaseSpace {
    pub fn new(n: usize, d: Modulus) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedShape("phase space needs at least one degree of freedom".into()));
        }
        Ok(PhaseSpace { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.d
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn vector(&self, entries: &[u64]) -> Result<ModVector> {
        self.check_len(entries.len())?;
        Ok(ModVector::new(entries.to_vec(), self.d))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }

    /// `[f, g] = sum_i f_{q_i} g_{p_i} - f_{p_i} g_{q_i}`.
    pub fn symplectic_form(&self, f: &ModVector, g: &ModVector) -> Result<u64> {
        self.check_len(f.len())?;
        self.check_len(g.len())?;
        Ok(self.bracket(f, g))
    }

    pub(crate) fn bracket(&self, f: &ModVector, g: &ModVector) -> u64 {
        let d = self.d;
        (0..self.n).fold(0, |acc, i| {
            let plus = d.mul(f[2 * i], g[2 * i + 1]);
            let minus = d.mul(f[2 * i + 1], g[2 * i]);
            d.add(acc, d.sub(plus, minus))
        })
    }

    /// The matrix with `f^T J g = [f, g]`.
    pub fn j_matrix(&self) -> ModMatrix {
        let mut j = ModMatrix::zeros(self.dim(), self.dim());
        for i in 0..self.n {
            j.set(2 * i, 2 * i + 1, 1);
            j.set(2 * i + 1, 2 * i, self.d.neg(1));
        }
        j
    }

    pub fn is_isotropic(&self, v: &Submodule) -> bool {
        self.first_non_commuting(v.basis()).is_none()
    }

    pub(crate) fn first_non_commuting(&self, gens: &[ModVector]) -> Option<(usize, usize)> {
        (0..gens.len())
            .flat_map(|i| (i + 1..gens.len()).map(move |j| (i, j)))
            .find(|&(i, j)| self.bracket(&gens[i], &gens[j]) != 0)
    }

    /// `{f : [f, g] = 0 for all g in v}`.
    pub fn symplectic_complement(&self, v: &Submodule) -> Submodule {
        let j = self.j_matrix();
        v.image(&j).orthogonal_complement()
    }

    /// `(q, p)` coordinate positions of the given systems.
    pub fn coords_of(&self, systems: &[usize]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(2 * systems.len());
        for &s in systems {
            if s >= self.n {
                return Err(Error::IndexError { index: s, n: self.n });
            }
            out.extend([2 * s, 2 * s + 1]);
        }
        Ok(out)
    }

    /// The submodule of observables supported only on `systems`.
    pub fn local_submodule(&self, systems: &[usize]) -> Result<Submodule> {
        let units: Vec<ModVector> =
            self.coords_of(systems)?.into_iter().map(|c| ModVector::unit(self.dim(), c)).collect();
        Ok(Submodule::from_checked(self.d, self.dim(), &units))
    }

    /// Every point of the phase space in lexicographic order.
    pub fn points(&self) -> Result<Vec<ModVector>> {
        let size = self.d.pow(self.dim()).filter(|&s| s <= 1 << 24);
        if size.is_none() {
            return Err(Error::TooLarge(format!("{}^{} ontic states", self.d.get(), self.dim())));
        }
        Ok(Submodule::full(self.d, self.dim()).elements())
    }

    /// All values `f^T m` as `m` ranges over the phase space.
    pub fn attainable_values(&self, f: &ModVector) -> Vec<u64> {
        let g = f.iter().fold(self.d.get(), |acc, &x| gcd(acc, x));
        (0..self.d.get()).step_by(g as usize).collect()
    }
}

/// An epistemic state `(V, v)`: the values of the observables in the isotropic
/// submodule `V` are known to be `f^T v`. The valuation is stored as the
/// smallest member of its class modulo `V^perp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpistemicState {
    space: PhaseSpace,
    known: Submodule,
    perp: Submodule,
    valuation: ModVector,
}

/// Uniform distribution over the support of a state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnticDistribution {
    pub support: AffineCoset,
    pub normalization: u128,
}

impl OnticDistribution {
    pub fn probability(&self, m: &ModVector) -> Ratio<u128> {
        if self.support.contains(m) {
            Ratio::new(1, self.normalization)
        } else {
            Ratio::from_integer(0)
        }
    }
}

impl EpistemicState {
    pub fn new(space: PhaseSpace, generators: &[ModVector], valuation: &ModVector) -> Result<Self> {
        for g in generators {
            space.check_len(g.len())?;
        }
        if let Some((i, j)) = space.first_non_commuting(generators) {
            return Err(Error::NotIsotropic(i, j));
        }
        let known = Submodule::new(space.d, space.dim(), generators)?;
        Self::from_submodule(space, known, valuation)
    }

    pub fn from_submodule(space: PhaseSpace, known: Submodule, valuation: &ModVector) -> Result<Self> {
        space.check_len(valuation.len())?;
        if known.ambient_dim() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: known.ambient_dim() });
        }
        if known.modulus() != space.d {
            return Err(Error::ModulusMismatch(space.d.get(), known.modulus().get()));
        }
        if let Some((i, j)) = space.first_non_commuting(known.basis()) {
            return Err(Error::NotIsotropic(i, j));
        }
        let perp = known.orthogonal_complement();
        let valuation = perp.reduce(&ModVector::new(valuation.to_vec(), space.d));
        Ok(EpistemicState { space, known, perp, valuation })
    }

    /// The state whose support is exactly `coset`; fails unless the
    /// complement of the coset's direction is isotropic.
    pub fn from_support(space: PhaseSpace, coset: &AffineCoset) -> Result<Self> {
        let known = coset.direction().orthogonal_complement();
        if !space.is_isotropic(&known) {
            return Err(Error::InvalidState("complement is not isotropic".into()));
        }
        Self::from_submodule(space, known, coset.offset())
    }

    /// Complete ignorance: nothing is known.
    pub fn maximally_mixed(space: PhaseSpace) -> Self {
        let known = Submodule::zero(space.d, space.dim());
        let perp = Submodule::full(space.d, space.dim());
        EpistemicState { space, known, perp, valuation: ModVector::zeros(space.dim()) }
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn known(&self) -> &Submodule {
        &self.known
    }

    pub fn valuation(&self) -> &ModVector {
        &self.valuation
    }

    /// `V^perp`, the direction of the support.
    pub fn perp(&self) -> &Submodule {
        &self.perp
    }

    pub fn support(&self) -> AffineCoset {
        AffineCoset::new(self.perp.clone(), &self.valuation).expect("dimensions agree")
    }

    pub fn support_size(&self) -> Result<u128> {
        self.perp.cardinality()
    }

    pub fn distribution(&self) -> Result<OnticDistribution> {
        Ok(OnticDistribution { support: self.support(), normalization: self.support_size()? })
    }

    pub fn is_pure(&self) -> bool {
        match (self.support_size(), self.space.d.pow(self.space.n)) {
            (Ok(s), Some(p)) => s == p,
            _ => false,
        }
    }

    /// Known value of `f`, or `None` if `f` is not in `V`.
    pub fn value_of(&self, f: &ModVector) -> Option<u64> {
        self.known.contains(f).then(|| f.dot(&self.valuation, self.space.d))
    }

    pub fn contains_point(&self, m: &ModVector) -> bool {
        self.perp.contains(&m.sub(&self.valuation, self.space.d))
    }

    /// Same knowledge, different valuation.
    pub fn with_valuation(&self, valuation: &ModVector) -> Result<Self> {
        self.space.check_len(valuation.len())?;
        let valuation = self.perp.reduce(&ModVector::new(valuation.to_vec(), self.space.d));
        Ok(EpistemicState { valuation, ..self.clone() })
    }

    /// The reduced state of the subsystems in `keep`, obtained by projecting the support.
    pub fn marginalize(&self, keep: &[usize]) -> Result<EpistemicState> {
        let keep: Vec<usize> = keep.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if keep.is_empty() {
            return Err(Error::UnsupportedShape("marginal over no systems".into()));
        }
        let coords = self.space.coords_of(&keep)?;
        let sub = PhaseSpace::new(keep.len(), self.space.d)?;
        let dir = self.perp.project(&coords);
        let offset = ModVector::new(coords.iter().map(|&c| self.valuation[c]).collect(), self.space.d);
        EpistemicState::from_support(sub, &AffineCoset::new(dir, &offset)?)
    }

    /// The joint state of `self` on the first systems and `other` on the rest.
    pub fn tensor(&self, other: &EpistemicState) -> Result<EpistemicState> {
        if self.space.d != other.space.d {
            return Err(Error::ModulusMismatch(self.space.d.get(), other.space.d.get()));
        }
        let space = PhaseSpace::new(self.space.n + other.space.n, self.space.d)?;
        let (da, db) = (self.space.dim(), other.space.dim());
        let mut gens: Vec<ModVector> = self.known.basis().iter().map(|b| b.concat(&ModVector::zeros(db))).collect();
        gens.extend(other.known.basis().iter().map(|b| ModVector::zeros(da).concat(b)));
        let known = Submodule::from_checked(space.d, space.dim(), &gens);
        EpistemicState::from_submodule(space, known, &self.valuation.concat(&other.valuation))
    }
}

/// A split of the systems `0..n` into two nonempty parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    n: usize,
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, side_a: &[usize]) -> Result<Self> {
        let a: BTreeSet<usize> = side_a.iter().copied().collect();
        if let Some(&bad) = a.iter().find(|&&i| i >= n) {
            return Err(Error::IndexError { index: bad, n });
        }
        if a.is_empty() || a.len() == n {
            return Err(Error::UnsupportedShape("both sides of a bipartition must be nonempty".into()));
        }
        let b = (0..n).filter(|i| !a.contains(i)).collect();
        Ok(Bipartition { n, a: a.into_iter().collect(), b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side_a(&self) -> &[usize] {
        &self.a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.b
    }

    /// Every bipartition of `n` systems with system 0 on side A.
    pub fn all(n: usize) -> Vec<Bipartition> {
        (0..(1usize << n.saturating_sub(1)) - 1)
            .map(|mask| {
                let a: Vec<usize> = std::iter::once(0).chain((1..n).filter(|i| mask >> (i - 1) & 1 == 1)).collect();
                Bipartition::new(n, &a).expect("proper nonempty split")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize, d: u64) -> PhaseSpace {
        PhaseSpace::new(n, Modulus::new(d).unwrap()).unwrap()
    }

    fn vec(sp: PhaseSpace, e: &[u64]) -> ModVector {
        sp.vector(e).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let s = space(1, 2);
        assert_eq!(s.symplectic_form(&vec(s, &[1, 0]), &vec(s, &[0, 1])).unwrap(), 1);
        assert_eq!(s.symplectic_form(&vec(s, &[1, 1]), &vec(s, &[1, 1])).unwrap(), 0);
        let t = space(2, 3);
        // 1*1 - 1*0 + 0*2 - 0*0
        assert_eq!(t.symplectic_form(&vec(t, &[1, 1, 0, 0]), &vec(t, &[0, 1, 0, 2])).unwrap(), 1);
        assert!(t.symplectic_form(&vec(t, &[1, 1, 0, 0]), &vec(s, &[0, 1])).is_err());
    }

    #[test]
    fn j_matrix_matches_bracket() {
        let s = space(2, 5);
        let j = s.j_matrix();
        let pts = s.points().unwrap();
        for f in pts.iter().step_by(37) {
            for g in pts.iter().step_by(41) {
                assert_eq!(f.dot(&j.mul_vec(g, s.modulus()), s.modulus()), s.bracket(f, g));
            }
        }
    }

    #[test]
    fn simple_state_support() {
        let s = space(1, 2);
        let st = EpistemicState::new(s, &[vec(s, &[1, 0])], &vec(s, &[1, 0])).unwrap();
        assert_eq!(st.support().points(), vec![vec(s, &[1, 0]), vec(s, &[1, 1])]);
        assert!(st.is_pure());
    }

    #[test]
    fn non_isotropic_generators_rejected() {
        let s = space(1, 2);
        let err = EpistemicState::new(s, &[vec(s, &[1, 0]), vec(s, &[0, 1])], &vec(s, &[0, 0]));
        assert_eq!(err, Err(Error::NotIsotropic(0, 1)));
    }

    #[test]
    fn full_ignorance() {
        let s = space(1, 2);
        let st = EpistemicState::new(s, &[], &vec(s, &[0, 0])).unwrap();
        assert_eq!(st, EpistemicState::maximally_mixed(s));
        assert_eq!(st.support_size().unwrap(), 4);
        assert!(!st.is_pure());
    }

    #[test]
    fn coarse_known_space_over_z4_is_mixed() {
        let s = space(1, 4);
        let st = EpistemicState::new(s, &[vec(s, &[2, 0])], &vec(s, &[0, 0])).unwrap();
        assert_eq!(st.support_size().unwrap(), 8);
        assert!(!st.is_pure());
    }

    #[test]
    fn attainable_values_use_gcd() {
        let s = space(1, 4);
        assert_eq!(s.attainable_values(&vec(s, &[2, 2])), vec![0, 2]);
        let t = space(1, 5);
        assert_eq!(t.attainable_values(&vec(t, &[3, 0])), vec![0, 1, 2, 3, 4]);
        assert_eq!(t.attainable_values(&vec(t, &[0, 0])), vec![0]);
    }

    #[test]
    fn valuation_outside_known_space_is_accepted() {
        let s = space(1, 3);
        let a = EpistemicState::new(s, &[vec(s, &[1, 0])], &vec(s, &[2, 1])).unwrap();
        let b = EpistemicState::new(s, &[vec(s, &[1, 0])], &vec(s, &[2, 0])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.value_of(&vec(s, &[2, 0])), Some(1));
        assert_eq!(a.value_of(&vec(s, &[0, 1])), None);
    }

    #[test]
    fn bell_marginal_is_fully_mixed() {
        let s = space(2, 2);
        let bell = EpistemicState::new(s, &[vec(s, &[1, 0, 1, 0]), vec(s, &[0, 1, 0, 1])], &vec(s, &[0; 4])).unwrap();
        let one = space(1, 2);
        assert_eq!(bell.marginalize(&[0]).unwrap(), EpistemicState::maximally_mixed(one));
        assert_eq!(bell.marginalize(&[1]).unwrap(), EpistemicState::maximally_mixed(one));
    }

    #[test]
    fn bipartitions() {
        assert_eq!(Bipartition::all(2), vec![Bipartition::new(2, &[0]).unwrap()]);
        assert_eq!(Bipartition::all(3).len(), 3);
        assert!(Bipartition::new(2, &[0, 1]).is_err());
        assert!(Bipartition::new(2, &[]).is_err());
        assert_eq!(Bipartition::new(3, &[2, 0]).unwrap().side_b(), &[1]);
    }

    #[test]
    fn product_marginals_are_factors() {
        let one = space(1, 3);
        let a = EpistemicState::new(one, &[vec(one, &[1, 2])], &vec(one, &[1, 0])).unwrap();
        let b = EpistemicState::new(one, &[vec(one, &[0, 1])], &vec(one, &[0, 2])).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert!(ab.is_pure());
        assert_eq!(ab.marginalize(&[0]).unwrap(), a);
        assert_eq!(ab.marginalize(&[1]).unwrap(), b);
        assert_eq!(ab.marginalize(&[1, 0]).unwrap(), ab);
        assert!(ab.marginalize(&[2]).is_err());
    }
}
