//! The original d = 2 formulation: ontic labels 1..=4 per system and
//! epistemic states given as sets of ontic states.
//!
//! Label `l` of a system stands for the phase-space point `(q, p)` with
//! `l - 1 = q + 2p`, so 1 = (0,0), 2 = (1,0), 3 = (0,1), 4 = (1,1).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::catalog;
use crate::error::{Error, Result};
use crate::linalg::{AffineCoset, ModVector, Modulus, Submodule};
use crate::state::{EpistemicState, PhaseSpace};

pub type OnticLabelState = Vec<u8>;

/// Largest number of systems for which the valid-state catalog is built.
pub const MAX_CATALOG_SYSTEMS: usize = 3;

fn z2() -> Modulus {
    Modulus::new(2).expect("valid modulus")
}

fn space(n: usize) -> Result<PhaseSpace> {
    PhaseSpace::new(n, z2())
}

pub fn labels_to_vector(labels: &[u8]) -> Result<ModVector> {
    let mut e = Vec::with_capacity(2 * labels.len());
    for &l in labels {
        if !(1..=4).contains(&l) {
            return Err(Error::Parse(format!("ontic label {l} is not in 1..=4")));
        }
        e.extend([u64::from((l - 1) & 1), u64::from((l - 1) >> 1)]);
    }
    Ok(ModVector::new(e, z2()))
}

pub fn vector_to_labels(v: &ModVector) -> OnticLabelState {
    v.chunks(2).map(|c| 1 + c[0] as u8 + 2 * c[1] as u8).collect()
}

/// Index of an ontic state in `0..4^n`, system 1 most significant.
pub fn ontic_index(labels: &[u8]) -> usize {
    labels.iter().fold(0, |acc, &l| acc * 4 + usize::from(l - 1))
}

pub fn ontic_from_index(mut index: usize, n: usize) -> OnticLabelState {
    let mut out = vec![0u8; n];
    for slot in out.iter_mut().rev() {
        *slot = (index % 4) as u8 + 1;
        index /= 4;
    }
    out
}

/// A set of ontic states, with no validity requirement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetEpistemicState {
    n: usize,
    basis: BTreeSet<OnticLabelState>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvalidReason {
    Empty,
    NotAffineCoset,
    ComplementNotIsotropic,
}

impl InvalidReason {
    pub fn message(self) -> &'static str {
        match self {
            InvalidReason::Empty => "support is empty",
            InvalidReason::NotAffineCoset => "support is not an affine coset",
            InvalidReason::ComplementNotIsotropic => "complement is not isotropic",
        }
    }
}

impl SetEpistemicState {
    pub fn new<I: IntoIterator<Item = OnticLabelState>>(n: usize, states: I) -> Result<Self> {
        let basis: BTreeSet<OnticLabelState> = states.into_iter().collect();
        for o in &basis {
            if o.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: o.len() });
            }
            labels_to_vector(o)?;
        }
        Ok(SetEpistemicState { n, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &BTreeSet<OnticLabelState> {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, o: &[u8]) -> bool {
        self.basis.contains(o)
    }

    pub fn is_subset(&self, other: &SetEpistemicState) -> bool {
        self.basis.is_subset(&other.basis)
    }

    /// The generalized state with this support, or why none exists.
    pub fn to_general(&self) -> std::result::Result<EpistemicState, InvalidReason> {
        let space = space(self.n).map_err(|_| InvalidReason::Empty)?;
        let Some(first) = self.basis.first() else {
            return Err(InvalidReason::Empty);
        };
        let v0 = labels_to_vector(first).expect("labels checked");
        let diffs: Vec<ModVector> =
            self.basis.iter().map(|o| labels_to_vector(o).expect("labels checked").sub(&v0, z2())).collect();
        let dir = Submodule::new(z2(), space.dim(), &diffs).expect("dimensions agree");
        if dir.cardinality().ok() != Some(self.basis.len() as u128) {
            return Err(InvalidReason::NotAffineCoset);
        }
        let coset = AffineCoset::new(dir, &v0).expect("dimensions agree");
        EpistemicState::from_support(space, &coset).map_err(|_| InvalidReason::ComplementNotIsotropic)
    }

    pub fn from_general(s: &EpistemicState) -> Result<Self> {
        if s.space().modulus().get() != 2 {
            return Err(Error::NotD2(s.space().modulus().get()));
        }
        Self::new(s.space().n(), s.support().points().iter().map(vector_to_labels))
    }

    /// Image under per-system maps `perms[i][label - 1]`.
    pub fn permuted_locally(&self, perms: &[[u8; 4]]) -> SetEpistemicState {
        let basis = self
            .basis
            .iter()
            .map(|o| o.iter().zip(perms).map(|(&l, p)| p[usize::from(l - 1)]).collect())
            .collect();
        SetEpistemicState { n: self.n, basis }
    }
}

pub fn is_valid_state(e: &SetEpistemicState) -> bool {
    e.to_general().is_ok()
}

/// A binary question: "is the ontic state in `yes`?".
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Question {
    pub yes: BTreeSet<OnticLabelState>,
}

impl Question {
    pub fn new<I: IntoIterator<Item = OnticLabelState>>(yes: I) -> Self {
        Question { yes: yes.into_iter().collect() }
    }
}

fn all_ontic(n: usize) -> Vec<OnticLabelState> {
    (0..4usize.pow(n as u32)).map(|i| ontic_from_index(i, n)).collect()
}

/// Whether every answer string to the `2n` questions singles out exactly one ontic state.
pub fn is_canonical(n: usize, qs: &[Question]) -> Result<bool> {
    if qs.len() != 2 * n {
        return Err(Error::WrongQuestionCount { expected: 2 * n, found: qs.len() });
    }
    // 4^n states and 2^(2n) answer strings: canonical iff answers are injective.
    let mut seen = BTreeSet::new();
    Ok(all_ontic(n).into_iter().all(|o| seen.insert(qs.iter().map(|q| q.yes.contains(&o)).collect::<Vec<bool>>())))
}

/// States consistent with the given `(question index, answered yes)` pairs.
pub fn ontic_basis_from_answers(n: usize, qs: &[Question], answers: &[(usize, bool)]) -> Result<SetEpistemicState> {
    if let Some(&(i, _)) = answers.iter().find(|(i, _)| *i >= qs.len()) {
        return Err(Error::IndexError { index: i, n: qs.len() });
    }
    SetEpistemicState::new(
        n,
        all_ontic(n).into_iter().filter(|o| answers.iter().all(|&(i, yes)| qs[i].yes.contains(o) == yes)),
    )
}

/// Classical fidelity of two uniform distributions, kept exact as
/// `overlap / sqrt(size_product)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fidelity {
    pub overlap: u64,
    pub size_product: u64,
}

impl Fidelity {
    pub fn to_f64(self) -> f64 {
        if self.overlap == 0 {
            0.0
        } else {
            self.overlap as f64 / (self.size_product as f64).sqrt()
        }
    }

    fn squared_cmp(self, other: Fidelity) -> Ordering {
        let lhs = u128::from(self.overlap).pow(2) * u128::from(other.size_product);
        let rhs = u128::from(other.overlap).pow(2) * u128::from(self.size_product);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Fidelity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fidelity {
    /// Compares the represented real values; distinct pairs may compare equal.
    fn cmp(&self, other: &Self) -> Ordering {
        self.squared_cmp(*other)
    }
}

pub fn fidelity(e1: &SetEpistemicState, e2: &SetEpistemicState) -> Fidelity {
    let overlap = e1.basis.intersection(&e2.basis).count() as u64;
    Fidelity { overlap, size_product: (e1.len() * e2.len()) as u64 }
}

type CatalogCache = Mutex<HashMap<usize, Arc<Vec<SetEpistemicState>>>>;

/// Every valid set state on `n` systems, built once per `n` and shared.
pub fn valid_states(n: usize) -> Result<Arc<Vec<SetEpistemicState>>> {
    if n > MAX_CATALOG_SYSTEMS {
        return Err(Error::TooLarge(format!("catalog of {n} systems")));
    }
    static CACHE: OnceLock<CatalogCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().expect("catalog cache poisoned").get(&n) {
        return Ok(Arc::clone(c));
    }
    let built: Vec<SetEpistemicState> = catalog::enumerate_states(space(n)?)?
        .iter()
        .map(SetEpistemicState::from_general)
        .collect::<Result<_>>()?;
    let built = Arc::new(built);
    cache.lock().expect("catalog cache poisoned").entry(n).or_insert_with(|| Arc::clone(&built));
    Ok(built)
}

fn check_partition(n: usize, partition: &[SetEpistemicState]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (i, cell) in partition.iter().enumerate() {
        if cell.n != n {
            return Err(Error::DimensionMismatch { expected: n, found: cell.n });
        }
        if !is_valid_state(cell) {
            return Err(Error::NotAPartition(format!("cell {i} is not a valid state")));
        }
        for o in &cell.basis {
            if !seen.insert(o.clone()) {
                return Err(Error::NotAPartition(format!("ontic state {o:?} lies in two cells")));
            }
        }
    }
    if seen.len() != 4usize.pow(n as u32) {
        return Err(Error::NotAPartition(format!("cells cover {} of {} ontic states", seen.len(), 4usize.pow(n as u32))));
    }
    Ok(())
}

/// Outcome cell and post-measurement state of a partition measurement: the
/// valid state inside the cell with the highest fidelity to `s`, ties going
/// to the smaller support and then the lexicographically smaller basis.
pub fn coarse_measure(
    partition: &[SetEpistemicState],
    s: &SetEpistemicState,
    ontic_truth: &[u8],
) -> Result<(usize, SetEpistemicState)> {
    check_partition(s.n, partition)?;
    if !s.contains(ontic_truth) {
        return Err(Error::OnticOutsideSupport);
    }
    let cell = partition.iter().position(|c| c.contains(ontic_truth)).expect("partition covers every state");
    let catalog = valid_states(s.n)?;
    let best = catalog
        .iter()
        .filter(|c| c.is_subset(&partition[cell]))
        .min_by(|a, b| fidelity(b, s).cmp(&fidelity(a, s)).then(a.len().cmp(&b.len())).then(a.cmp(b)))
        .expect("the cell itself is a candidate");
    Ok((cell, best.clone()))
}

/// All 24 permutations of the labels 1..=4.
pub fn label_permutations() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 1..=4u8 {
        for b in (1..=4).filter(|&b| b != a) {
            for c in (1..=4).filter(|&c| c != a && c != b) {
                let d = 10 - a - b - c;
                out.push([a, b, c, d]);
            }
        }
    }
    out
}

/// Whether some tuple of per-system label permutations maps `e1` onto `e2`.
pub fn local_equivalence(e1: &SetEpistemicState, e2: &SetEpistemicState) -> Result<bool> {
    if e1.n != e2.n {
        return Err(Error::DimensionMismatch { expected: e1.n, found: e2.n });
    }
    if e1.n > 2 {
        return Err(Error::TooLarge(format!("24^{} local permutations", e1.n)));
    }
    if e1.len() != e2.len() {
        return Ok(false);
    }
    let perms = label_permutations();
    let mut tuples: Vec<Vec<[u8; 4]>> = vec![Vec::new()];
    for _ in 0..e1.n {
        tuples = tuples.into_iter().flat_map(|t| perms.iter().map(move |p| [t.clone(), vec![*p]].concat())).collect();
    }
    Ok(tuples.iter().any(|t| &e1.permuted_locally(t) == e2))
}

/// Group valid states into local-equivalence classes (n <= 2).
pub fn equivalence_classes(n: usize) -> Result<Vec<Vec<SetEpistemicState>>> {
    let mut classes: BTreeMap<usize, Vec<SetEpistemicState>> = BTreeMap::new();
    let mut reps: Vec<SetEpistemicState> = Vec::new();
    for e in valid_states(n)?.iter() {
        let found = reps.iter().position(|r| local_equivalence(r, e).unwrap_or(false));
        let idx = found.unwrap_or_else(|| {
            reps.push(e.clone());
            reps.len() - 1
        });
        classes.entry(idx).or_default().push(e.clone());
    }
    Ok(classes.into_values().collect())
}
