//! Product, correlated and entangled states across a bipartition.

use std::collections::BTreeSet;

use crate::catalog::{self, MAX_ONTIC_STATES};
use crate::error::{Error, Result};
use crate::linalg::{ModVector, Submodule};
use crate::mixture::{self, StateFamily};
use crate::original::{labels_to_vector, SetEpistemicState};
use crate::state::{Bipartition, EpistemicState, PhaseSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntanglementClass {
    Product,
    /// Not product, but the equal mixture of the witness family of product states.
    CorrelatedSeparable(StateFamily),
    Entangled,
}

impl EntanglementClass {
    pub fn name(&self) -> &'static str {
        match self {
            EntanglementClass::Product => "product",
            EntanglementClass::CorrelatedSeparable(_) => "correlated",
            EntanglementClass::Entangled => "entangled",
        }
    }
}

/// The observables of `v` acting only on `systems`.
pub fn local_part(space: PhaseSpace, v: &Submodule, systems: &[usize]) -> Result<Submodule> {
    v.intersect(&space.local_submodule(systems)?)
}

pub fn is_product(s: &EpistemicState, bp: &Bipartition) -> Result<bool> {
    check_shape(s, bp)?;
    let space = s.space();
    let a = local_part(space, s.known(), bp.side_a())?;
    let b = local_part(space, s.known(), bp.side_b())?;
    Ok(&a.sum(&b)? == s.known())
}

fn check_shape(s: &EpistemicState, bp: &Bipartition) -> Result<()> {
    if s.space().n() != bp.n() {
        return Err(Error::DimensionMismatch { expected: s.space().n(), found: bp.n() });
    }
    Ok(())
}

/// Isotropic submodules of the systems in `systems`, embedded in the full space.
fn embedded_local_submodules(space: PhaseSpace, systems: &[usize]) -> Result<Vec<Submodule>> {
    let local = PhaseSpace::new(systems.len(), space.modulus())?;
    let coords = space.coords_of(systems)?;
    catalog::isotropic_submodules(local)?
        .into_iter()
        .map(|u| {
            let gens: Vec<ModVector> = u
                .basis()
                .iter()
                .map(|b| {
                    let mut e = vec![0; space.dim()];
                    for (&c, &x) in coords.iter().zip(b.iter()) {
                        e[c] = x;
                    }
                    ModVector::new(e, space.modulus())
                })
                .collect();
            Submodule::new(space.modulus(), space.dim(), &gens)
        })
        .collect()
}

/// Classifies `s`. Mixed states that are not product are decided by trying
/// every product isotropic `V_A + V_B` containing the known space and
/// splitting the support into its classes; the first success is the witness.
pub fn classify(s: &EpistemicState, bp: &Bipartition) -> Result<EntanglementClass> {
    if is_product(s, bp)? {
        return Ok(EntanglementClass::Product);
    }
    if s.is_pure() {
        return Ok(EntanglementClass::Entangled);
    }
    let space = s.space();
    match space.modulus().pow(space.dim()) {
        Some(size) if size <= MAX_ONTIC_STATES => {}
        _ => {
            return Err(Error::SearchSpaceTooLarge(format!(
                "{}^{} ontic states",
                space.modulus().get(),
                space.dim()
            )))
        }
    }
    let side_a = embedded_local_submodules(space, bp.side_a())?;
    let side_b = embedded_local_submodules(space, bp.side_b())?;
    for va in &side_a {
        for vb in &side_b {
            let ext = va.sum(vb)?;
            if !s.known().is_subset_of(&ext) {
                continue;
            }
            let fam = support_family(s, ext)?;
            if mixture::mix(&fam).as_ref() == Ok(s) {
                return Ok(EntanglementClass::CorrelatedSeparable(fam));
            }
        }
    }
    Ok(EntanglementClass::Entangled)
}

/// The states over `ext` whose supports tile the support of `s`.
fn support_family(s: &EpistemicState, ext: Submodule) -> Result<StateFamily> {
    let space = s.space();
    let ext_perp = ext.orthogonal_complement();
    let vals: BTreeSet<ModVector> = s
        .perp()
        .basis()
        .iter()
        .fold(BTreeSet::from([ext_perp.reduce(s.valuation())]), |acc, g| {
            // Closing under each generator of the support direction in turn
            // reaches every class.
            let mut all = acc.clone();
            let mut frontier: Vec<ModVector> = acc.into_iter().collect();
            while let Some(x) = frontier.pop() {
                let y = ext_perp.reduce(&x.add(g, space.modulus()));
                if all.insert(y.clone()) {
                    frontier.push(y);
                }
            }
            all
        });
    StateFamily::new(space, ext, &vals.into_iter().collect::<Vec<_>>())
}

/// The pair of label maps `pi`, `pi_prime` for one system of a cat state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Injection {
    pub pi: [u8; 2],
    pub pi_prime: [u8; 2],
}

impl Injection {
    /// `pi = (1, 2)`, `pi_prime = (3, 4)`.
    pub const CANONICAL: Injection = Injection { pi: [1, 2], pi_prime: [3, 4] };

    fn is_valid(&self) -> bool {
        let labels: BTreeSet<u8> = self.pi.iter().chain(&self.pi_prime).copied().collect();
        labels.len() == 4 && labels.iter().all(|l| (1..=4).contains(l))
    }
}

/// The d = 2 cat state on `injections.len()` systems: the union over bit
/// strings `x` with even parity of `pi(x)` and of `pi_prime(x)`.
pub fn cat_state(injections: &[Injection]) -> Result<EpistemicState> {
    let n = injections.len();
    if n < 2 {
        return Err(Error::UnsupportedShape("a cat state needs at least two systems".into()));
    }
    if let Some(bad) = injections.iter().position(|i| !i.is_valid()) {
        return Err(Error::BadInjection(bad));
    }
    let mut basis = Vec::new();
    for x in 0u32..1 << (n - 1) {
        let bits: Vec<usize> = (0..n - 1).map(|k| (x >> k & 1) as usize).chain([x.count_ones() as usize % 2]).collect();
        basis.push(injections.iter().zip(&bits).map(|(inj, &b)| inj.pi[b]).collect::<Vec<u8>>());
        basis.push(injections.iter().zip(&bits).map(|(inj, &b)| inj.pi_prime[b]).collect::<Vec<u8>>());
    }
    for o in &basis {
        labels_to_vector(o)?;
    }
    SetEpistemicState::new(n, basis)?
        .to_general()
        .map_err(|reason| Error::InvalidState(reason.message().into()))
}
