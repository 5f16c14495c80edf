//! Reversible symplectic-affine maps, ontic permutations for d = 2, and
//! irreversible maps through an ancilla.

use std::collections::BTreeSet;

use rand::Rng;

use crate::entanglement::is_product;
use crate::error::{Error, Result};
use crate::linalg::{ModMatrix, ModVector};
use crate::original::{self, ontic_from_index, ontic_index, SetEpistemicState};
use crate::state::{Bipartition, EpistemicState, PhaseSpace};

/// `m -> S m + a` on one phase space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticMap {
    space: PhaseSpace,
    s: ModMatrix,
    a: ModVector,
}

pub fn is_symplectic(space: PhaseSpace, s: &ModMatrix) -> bool {
    let d = space.modulus();
    s.nrows() == space.dim()
        && s.ncols() == space.dim()
        && s.transpose().mul(&space.j_matrix(), d).mul(s, d) == space.j_matrix()
}

impl SymplecticMap {
    pub fn new(space: PhaseSpace, s: ModMatrix, a: ModVector) -> Result<Self> {
        if a.len() != space.dim() || !is_symplectic(space, &s) {
            return Err(Error::InvalidMap);
        }
        let a = ModVector::new(a.into_inner(), space.modulus());
        Ok(SymplecticMap { space, s, a })
    }

    pub fn identity(space: PhaseSpace) -> Self {
        SymplecticMap { space, s: ModMatrix::identity(space.dim()), a: ModVector::zeros(space.dim()) }
    }

    pub fn displacement(space: PhaseSpace, a: &ModVector) -> Result<Self> {
        Self::new(space, ModMatrix::identity(space.dim()), a.clone())
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn matrix(&self) -> &ModMatrix {
        &self.s
    }

    pub fn shift(&self) -> &ModVector {
        &self.a
    }

    pub fn apply_point(&self, m: &ModVector) -> ModVector {
        let d = self.space.modulus();
        self.s.mul_vec(m, d).add(&self.a, d)
    }

    /// `(S^T)^{-1} = J^T S J`, the action on observables.
    pub fn observable_matrix(&self) -> ModMatrix {
        let d = self.space.modulus();
        let j = self.space.j_matrix();
        j.transpose().mul(&self.s, d).mul(&j, d)
    }

    /// Transports `s`: known space `(S^T)^{-1} V`, support `S (V^perp + v) + a`.
    pub fn apply(&self, s: &EpistemicState) -> Result<EpistemicState> {
        if s.space() != self.space {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), found: s.space().dim() });
        }
        let known = s.known().image(&self.observable_matrix());
        EpistemicState::from_submodule(self.space, known, &self.apply_point(s.valuation()))
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &SymplecticMap) -> Result<SymplecticMap> {
        if self.space != first.space {
            return Err(Error::InvalidMap);
        }
        let d = self.space.modulus();
        Ok(SymplecticMap { space: self.space, s: self.s.mul(&first.s, d), a: self.apply_point(&first.a) })
    }

    /// `S^{-1} = J^T S^T J` and `a' = -S^{-1} a`, with no division in `Z_d`.
    pub fn invert(&self) -> SymplecticMap {
        let d = self.space.modulus();
        let j = self.space.j_matrix();
        let inv = j.transpose().mul(&self.s.transpose(), d).mul(&j, d);
        let a = inv.mul_vec(&self.a, d).neg(d);
        SymplecticMap { space: self.space, s: inv, a }
    }
}

fn check_system(space: PhaseSpace, k: usize) -> Result<()> {
    if k >= space.n() {
        return Err(Error::IndexError { index: k, n: space.n() });
    }
    Ok(())
}

/// The sum gate: `q_c -> q_c - q_t`, `p_t -> p_t + p_c`. For d = 2 it acts on
/// observables as `X_c -> X_c X_t`, `Z_t -> Z_c Z_t`.
pub fn toy_cnot(control: usize, target: usize, space: PhaseSpace) -> Result<SymplecticMap> {
    check_system(space, control)?;
    check_system(space, target)?;
    if control == target {
        return Err(Error::IndexError { index: target, n: space.n() });
    }
    let d = space.modulus();
    let mut s = ModMatrix::identity(space.dim());
    s.set(2 * control, 2 * target, d.neg(1));
    s.set(2 * target + 1, 2 * control + 1, 1);
    SymplecticMap::new(space, s, ModVector::zeros(space.dim()))
}

/// `(q, p) -> (-p, q)` on system `k`.
pub fn local_fourier(k: usize, space: PhaseSpace) -> Result<SymplecticMap> {
    check_system(space, k)?;
    let d = space.modulus();
    let mut s = ModMatrix::identity(space.dim());
    let (q, p) = (2 * k, 2 * k + 1);
    s.set(q, q, 0);
    s.set(p, p, 0);
    s.set(q, p, d.neg(1));
    s.set(p, q, 1);
    SymplecticMap::new(space, s, ModVector::zeros(space.dim()))
}

/// `(q, p) -> (q, p + q)` on system `k`.
pub fn local_shear(k: usize, space: PhaseSpace) -> Result<SymplecticMap> {
    check_system(space, k)?;
    let mut s = ModMatrix::identity(space.dim());
    s.set(2 * k + 1, 2 * k, 1);
    SymplecticMap::new(space, s, ModVector::zeros(space.dim()))
}

/// Exchanges systems `i` and `j`.
pub fn system_swap(i: usize, j: usize, space: PhaseSpace) -> Result<SymplecticMap> {
    check_system(space, i)?;
    check_system(space, j)?;
    let mut s = ModMatrix::zeros(space.dim(), space.dim());
    for k in 0..space.n() {
        let to = if k == i { j } else if k == j { i } else { k };
        s.set(2 * to, 2 * k, 1);
        s.set(2 * to + 1, 2 * k + 1, 1);
    }
    SymplecticMap::new(space, s, ModVector::zeros(space.dim()))
}

/// A random word of `len` generators (Fourier, shear, sum gate) followed by a
/// random displacement.
pub fn random_map<R: Rng + ?Sized>(space: PhaseSpace, len: usize, rng: &mut R) -> SymplecticMap {
    let n = space.n();
    let mut t = SymplecticMap::identity(space);
    for _ in 0..len {
        let k = rng.gen_range(0..n);
        let g = match rng.gen_range(0..3) {
            0 => local_fourier(k, space),
            1 => local_shear(k, space),
            _ if n > 1 => {
                let other = (k + rng.gen_range(1..n)) % n;
                toy_cnot(k, other, space)
            }
            _ => local_shear(k, space),
        }
        .expect("indices in range");
        t = g.compose(&t).expect("same space");
    }
    let d = space.modulus().get();
    let a = ModVector::new((0..space.dim()).map(|_| rng.gen_range(0..d)).collect(), space.modulus());
    SymplecticMap::displacement(space, &a).expect("valid displacement").compose(&t).expect("same space")
}

/// Irreversible map: joins `s` with `ancilla`, applies `t` to both, and
/// marginalizes onto the systems of `s`.
pub fn irreversible_apply(t: &SymplecticMap, ancilla: &EpistemicState, s: &EpistemicState) -> Result<EpistemicState> {
    let joint = t.apply(&s.tensor(ancilla)?)?;
    joint.marginalize(&(0..s.space().n()).collect::<Vec<_>>())
}

/// Largest number of systems for which permutations are checked against the full catalog.
pub const MAX_PERMUTATION_SYSTEMS: usize = 2;

/// A permutation of the `4^n` ontic states of `n` elementary systems, in
/// `ontic_index` order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OnticPermutation {
    n: usize,
    targets: Vec<usize>,
}

impl OnticPermutation {
    pub fn new(n: usize, targets: Vec<usize>) -> Result<Self> {
        let size = 1usize.checked_shl(2 * n as u32).filter(|_| n <= 8).ok_or_else(|| Error::TooLarge(format!("{n} systems")))?;
        let distinct: BTreeSet<usize> = targets.iter().copied().collect();
        if targets.len() != size || distinct.len() != size || distinct.iter().any(|&t| t >= size) {
            return Err(Error::InvalidMap);
        }
        Ok(OnticPermutation { n, targets })
    }

    /// The permutation induced by a d = 2 symplectic map.
    pub fn from_map(t: &SymplecticMap) -> Result<Self> {
        let space = t.space();
        if space.modulus().get() != 2 {
            return Err(Error::NotD2(space.modulus().get()));
        }
        let n = space.n();
        let targets = (0..1usize << (2 * n))
            .map(|i| {
                let m = original::labels_to_vector(&ontic_from_index(i, n))?;
                Ok(ontic_index(&original::vector_to_labels(&t.apply_point(&m))))
            })
            .collect::<Result<_>>()?;
        Self::new(n, targets)
    }

    /// Acts on each system by its own label map, then moves system `k` to `placement[k]`.
    pub fn from_locals(locals: &[[u8; 4]], placement: &[usize]) -> Result<Self> {
        let n = locals.len();
        let targets = (0..1usize << (2 * n))
            .map(|i| {
                let o = ontic_from_index(i, n);
                let mut out = vec![0u8; n];
                for k in 0..n {
                    out[placement[k]] = locals[k][usize::from(o[k] - 1)];
                }
                ontic_index(&out)
            })
            .collect();
        Self::new(n, targets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn apply(&self, e: &SetEpistemicState) -> SetEpistemicState {
        let image = e.basis().iter().map(|o| ontic_from_index(self.targets[ontic_index(o)], self.n));
        SetEpistemicState::new(self.n, image).expect("labels in range")
    }
}

/// Whether every valid epistemic state is mapped to a valid one.
pub fn permutation_is_valid(p: &OnticPermutation) -> Result<bool> {
    if p.n > MAX_PERMUTATION_SYSTEMS {
        return Err(Error::TooLarge(format!("{} systems", p.n)));
    }
    Ok(original::valid_states(p.n)?.iter().all(|e| original::is_valid_state(&p.apply(e))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonEntanglingDecomposition {
    /// `p` equals `OnticPermutation::from_locals(locals, placement)`.
    Local { locals: Vec<[u8; 4]>, placement: Vec<usize> },
    /// A product state whose image is not product.
    NotNonEntangling { witness: SetEpistemicState, image: SetEpistemicState },
}

/// Splits `p` into local permutations and a system swap, or exhibits a
/// product state it entangles.
pub fn decompose_non_entangling(p: &OnticPermutation) -> Result<NonEntanglingDecomposition> {
    if p.n > original::MAX_CATALOG_SYSTEMS {
        return Err(Error::TooLarge(format!("{} systems", p.n)));
    }
    let n = p.n;
    for placement in system_permutations(n) {
        if let Some(locals) = solve_locals(p, &placement) {
            let candidate = OnticPermutation::from_locals(&locals, &placement)?;
            if &candidate == p {
                return Ok(NonEntanglingDecomposition::Local { locals, placement });
            }
        }
    }
    for e in original::valid_states(n)?.iter() {
        let general = e.to_general().map_err(|r| Error::InvalidState(r.message().into()))?;
        let image = p.apply(e);
        for bp in Bipartition::all(n) {
            if !is_product(&general, &bp)? {
                continue;
            }
            let entangled = match image.to_general() {
                Ok(g) => !is_product(&g, &bp)?,
                Err(_) => true,
            };
            if entangled {
                return Ok(NonEntanglingDecomposition::NotNonEntangling { witness: e.clone(), image });
            }
        }
    }
    Err(Error::InvalidMap)
}

/// Reads off each local map from the images of states that differ from
/// all-ones in one system only.
fn solve_locals(p: &OnticPermutation, placement: &[usize]) -> Option<Vec<[u8; 4]>> {
    let n = p.n;
    let base = ontic_from_index(p.targets[ontic_index(&vec![1; n])], n);
    let mut locals = Vec::with_capacity(n);
    for k in 0..n {
        let mut map = [0u8; 4];
        for l in 1..=4u8 {
            let mut o = vec![1u8; n];
            o[k] = l;
            let image = ontic_from_index(p.targets[ontic_index(&o)], n);
            if (0..n).any(|j| j != placement[k] && image[j] != base[j]) {
                return None;
            }
            map[usize::from(l - 1)] = image[placement[k]];
        }
        locals.push(map);
    }
    Some(locals)
}

/// All permutations of `0..n` in lexicographic order.
fn system_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out: Vec<Vec<usize>> = system_permutations(n - 1)
        .into_iter()
        .flat_map(|rest| {
            (0..=rest.len()).map(move |pos| {
                let mut p = rest.clone();
                p.insert(pos, n - 1);
                p
            })
        })
        .collect();
    out.sort();
    out
}
