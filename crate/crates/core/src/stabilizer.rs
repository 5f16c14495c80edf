//! The d = 2 toy stabilizer formalism.
//!
//! Toy Pauli operators are diagonal 4x4 sign matrices, so they commute as
//! matrices; the "commutation" used here is inherited from the quantum
//! Paulis. A word is a sign plus one letter per system, and the product of
//! two words multiplies signs and adds letters as binary `(q, p)` pairs.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{solve_combination, ModVector, Modulus, Submodule};
use crate::state::{Bipartition, EpistemicState, PhaseSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    /// Coefficients `(f_q, f_p)` of the corresponding observable.
    pub fn bits(self) -> (u64, u64) {
        match self {
            Letter::I => (0, 0),
            Letter::X => (1, 0),
            Letter::Z => (0, 1),
            Letter::Y => (1, 1),
        }
    }

    pub fn from_bits(q: u64, p: u64) -> Letter {
        match (q & 1, p & 1) {
            (0, 0) => Letter::I,
            (1, 0) => Letter::X,
            (0, 1) => Letter::Z,
            _ => Letter::Y,
        }
    }

    /// Diagonal entry at ontic label 1..=4, i.e. `(-1)^(f . m)`.
    pub fn entry(self, label: u8) -> i8 {
        let (q, p) = (u64::from((label - 1) & 1), u64::from((label - 1) >> 1));
        let (fq, fp) = self.bits();
        if (fq * q + fp * p) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn symbol(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// A signed toy Pauli word such as `-XZI`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord {
    negative: bool,
    letters: Vec<Letter>,
}

impl PauliWord {
    pub fn new(negative: bool, letters: Vec<Letter>) -> Self {
        PauliWord { negative, letters }
    }

    pub fn identity(n: usize) -> Self {
        PauliWord { negative: false, letters: vec![Letter::I; n] }
    }

    /// The letter `l` on system `i` of `n`.
    pub fn single(n: usize, i: usize, l: Letter) -> Self {
        let mut w = Self::identity(n);
        w.letters[i] = l;
        w
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn negated(&self) -> Self {
        PauliWord { negative: !self.negative, letters: self.letters.clone() }
    }

    pub fn unsigned(&self) -> Self {
        PauliWord { negative: false, letters: self.letters.clone() }
    }

    pub fn is_identity_up_to_sign(&self) -> bool {
        self.letters.iter().all(|&l| l == Letter::I)
    }

    fn check_len(&self, other: &PauliWord) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        Ok(())
    }

    pub fn product(&self, other: &PauliWord) -> Result<PauliWord> {
        self.check_len(other)?;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(a, b)| {
                let ((aq, ap), (bq, bp)) = (a.bits(), b.bits());
                Letter::from_bits(aq ^ bq, ap ^ bp)
            })
            .collect();
        Ok(PauliWord { negative: self.negative ^ other.negative, letters })
    }

    /// Whether the quantum counterparts commute: an even number of positions
    /// carry two different non-identity letters.
    pub fn commutes(&self, other: &PauliWord) -> Result<bool> {
        self.check_len(other)?;
        let clashes = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| **a != Letter::I && **b != Letter::I && a != b)
            .count();
        Ok(clashes % 2 == 0)
    }

    /// The observable `(f_q1, f_p1, ...)` over Z_2.
    pub fn vector(&self) -> ModVector {
        let d = Modulus::new(2).expect("valid modulus");
        ModVector::new(self.letters.iter().flat_map(|l| <[u64; 2]>::from(l.bits())).collect(), d)
    }

    pub fn from_vector(v: &ModVector, negative: bool) -> Self {
        let letters = v.chunks(2).map(|c| Letter::from_bits(c[0], c[1])).collect();
        PauliWord { negative, letters }
    }

    /// Diagonal entry at the ontic state with the given labels.
    pub fn entry(&self, labels: &[u8]) -> i8 {
        let s = self.letters.iter().zip(labels).map(|(l, &o)| l.entry(o)).product::<i8>();
        if self.negative {
            -s
        } else {
            s
        }
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        for l in &self.letters {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("empty Pauli word {s:?}")));
        }
        let letters = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                other => Err(Error::Parse(format!("unexpected {other:?} in Pauli word {s:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(PauliWord { negative, letters })
    }
}

/// A commuting subgroup of the toy Pauli group without `-I`, stored by a
/// canonical generating set so that equal groups compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToyStabilizerGroup {
    n: usize,
    generators: Vec<PauliWord>,
}

fn z2() -> Modulus {
    Modulus::new(2).expect("valid modulus")
}

impl ToyStabilizerGroup {
    pub fn new(n: usize, generators: &[PauliWord]) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: g.len() });
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if !generators[i].commutes(&generators[j])? {
                    return Err(Error::NotCommuting(i, j));
                }
            }
        }
        // A valuation v with (-1)^(f.v) equal to every generator's sign exists
        // exactly when no product of generators is -I.
        let vectors: Vec<ModVector> = generators.iter().map(PauliWord::vector).collect();
        let columns: Vec<ModVector> =
            (0..2 * n).map(|c| ModVector::new(vectors.iter().map(|v| v[c]).collect(), z2())).collect();
        let signs = ModVector::new(generators.iter().map(|g| u64::from(g.negative)).collect(), z2());
        let v = if generators.is_empty() {
            ModVector::zeros(2 * n)
        } else {
            ModVector::new(solve_combination(&columns, &signs, z2()).ok_or(Error::ContainsMinusIdentity)?, z2())
        };
        let span = Submodule::new(z2(), 2 * n, &vectors)?;
        let generators =
            span.basis().iter().map(|f| PauliWord::from_vector(f, f.dot(&v, z2()) == 1)).collect();
        Ok(ToyStabilizerGroup { n, generators })
    }

    pub fn parse(words: &[&str]) -> Result<Self> {
        let words: Vec<PauliWord> = words.iter().map(|w| w.parse()).collect::<Result<_>>()?;
        let n = words.first().map(PauliWord::len).ok_or_else(|| Error::Parse("no generators".into()))?;
        Self::new(n, &words)
    }

    pub fn trivial(n: usize) -> Self {
        ToyStabilizerGroup { n, generators: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliWord] {
        &self.generators
    }

    pub fn is_pure(&self) -> bool {
        self.generators.len() == self.n
    }

    fn span(&self) -> Submodule {
        let vectors: Vec<ModVector> = self.generators.iter().map(PauliWord::vector).collect();
        Submodule::new(z2(), 2 * self.n, &vectors).expect("lengths checked")
    }

    /// `Some(sign)` when `+w` or `-w` lies in the group, `sign` being true for `-w`.
    pub fn sign_of(&self, letters: &PauliWord) -> Option<bool> {
        let vectors: Vec<ModVector> = self.generators.iter().map(PauliWord::vector).collect();
        let c = solve_combination(&vectors, &letters.vector(), z2())?;
        Some(c.iter().zip(&self.generators).filter(|(c, g)| **c == 1 && g.negative).count() % 2 == 1)
    }

    pub fn contains(&self, w: &PauliWord) -> bool {
        w.len() == self.n && self.sign_of(&w.unsigned()) == Some(w.negative)
    }

    /// Every element of the group, `2^k` words for `k` generators.
    pub fn elements(&self) -> Vec<PauliWord> {
        let mut out = vec![PauliWord::identity(self.n)];
        for g in &self.generators {
            let more: Vec<PauliWord> = out.iter().map(|e| e.product(g).expect("same length")).collect();
            out.extend(more);
        }
        out.sort();
        out
    }
}

impl fmt::Display for ToyStabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "span{{{}}}", words.join(", "))
    }
}

/// All `n`-system label tuples in lexicographic order.
pub fn ontic_states(n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p| (1..=4).map(move |l| [p.clone(), vec![l]].concat())).collect();
    }
    out
}

/// Ontic states left fixed by every element of the group.
pub fn stabilized_support(s: &ToyStabilizerGroup) -> BTreeSet<Vec<u8>> {
    ontic_states(s.n).into_iter().filter(|o| s.generators.iter().all(|g| g.entry(o) == 1)).collect()
}

/// The generalized state with `V` spanned by the generators' observables and
/// `(-1)^(f.v)` equal to each generator's sign.
pub fn to_general(s: &ToyStabilizerGroup) -> EpistemicState {
    let space = PhaseSpace::new(s.n.max(1), z2()).expect("n >= 1");
    let vectors: Vec<ModVector> = s.generators.iter().map(PauliWord::vector).collect();
    let columns: Vec<ModVector> =
        (0..2 * s.n).map(|c| ModVector::new(vectors.iter().map(|v| v[c]).collect(), z2())).collect();
    let signs = ModVector::new(s.generators.iter().map(|g| u64::from(g.negative)).collect(), z2());
    let v = if s.generators.is_empty() {
        ModVector::zeros(2 * s.n)
    } else {
        ModVector::new(solve_combination(&columns, &signs, z2()).expect("group has no -I"), z2())
    };
    EpistemicState::new(space, &vectors, &v).expect("commuting words give an isotropic span")
}

pub fn from_general(s: &EpistemicState) -> Result<ToyStabilizerGroup> {
    let d = s.space().modulus().get();
    if d != 2 {
        return Err(Error::NotD2(d));
    }
    let words: Vec<PauliWord> =
        s.known().basis().iter().map(|f| PauliWord::from_vector(f, f.dot(s.valuation(), z2()) == 1)).collect();
    ToyStabilizerGroup::new(s.space().n(), &words)
}

/// `s2` is a rephasing of `s1` when every element of `s1` lies in `s2` up to sign.
pub fn is_rephasing(s1: &ToyStabilizerGroup, s2: &ToyStabilizerGroup) -> bool {
    s1.n == s2.n && s1.generators.iter().all(|g| s2.sign_of(&g.unsigned()).is_some())
}

fn check_mutual_rephasing(s1: &ToyStabilizerGroup, s2: &ToyStabilizerGroup) -> Result<()> {
    if s1.n != s2.n {
        return Err(Error::DimensionMismatch { expected: s1.n, found: s2.n });
    }
    if !is_rephasing(s1, s2) || !is_rephasing(s2, s1) {
        return Err(Error::NotRephasing);
    }
    Ok(())
}

/// The equal-weight mixture: the group of elements shared with equal sign.
pub fn stab_mix(s1: &ToyStabilizerGroup, s2: &ToyStabilizerGroup) -> Result<ToyStabilizerGroup> {
    check_mutual_rephasing(s1, s2)?;
    let shared: Vec<PauliWord> = s1.elements().into_iter().filter(|g| s2.contains(g)).collect();
    ToyStabilizerGroup::new(s1.n, &shared)
}

/// The four superpositions of two distinct pure rephasings.
pub fn stab_superpose(s1: &ToyStabilizerGroup, s2: &ToyStabilizerGroup) -> Result<Vec<ToyStabilizerGroup>> {
    if s1.n != s2.n {
        return Err(Error::DimensionMismatch { expected: s1.n, found: s2.n });
    }
    if !s1.is_pure() || !s2.is_pure() {
        return Err(Error::NotPure);
    }
    check_mutual_rephasing(s1, s2)?;
    if s1 == s2 {
        return Err(Error::IdenticalStates);
    }
    // Normalize so that only one generator changes sign between the groups.
    let mut gens = s1.generators.clone();
    let flipped: Vec<usize> = (0..gens.len()).filter(|&i| !s2.contains(&gens[i])).collect();
    let last = *flipped.last().expect("groups differ");
    for &j in &flipped[..flipped.len() - 1] {
        gens[j] = gens[j].product(&gens[last])?;
    }
    let last_word = gens.remove(last);
    debug_assert!(gens.iter().all(|g| s2.contains(g)) && s2.contains(&last_word.negated()));
    let span = s1.span();
    let mut out = BTreeSet::new();
    for h in ontic_states(s1.n).into_iter().map(|o| {
        PauliWord::new(false, o.iter().map(|&l| Letter::from_bits(u64::from((l - 1) & 1), u64::from((l - 1) >> 1))).collect())
    }) {
        if span.contains(&h.vector()) || !gens.iter().all(|g| g.commutes(&h).unwrap_or(false)) {
            continue;
        }
        for w in [h.clone(), h.negated()] {
            let mut t = gens.clone();
            t.push(w);
            out.insert(ToyStabilizerGroup::new(s1.n, &t)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// Measures `g`; `negative_outcome` selects the `-1` eigenvalue.
pub fn stab_measure(s: &ToyStabilizerGroup, g: &PauliWord, negative_outcome: bool) -> Result<ToyStabilizerGroup> {
    if g.len() != s.n {
        return Err(Error::DimensionMismatch { expected: s.n, found: g.len() });
    }
    let target = if negative_outcome { g.negated() } else { g.clone() };
    if let Some(sign) = s.sign_of(&target.unsigned()) {
        return if sign == target.negative { Ok(s.clone()) } else { Err(Error::InconsistentOutcome) };
    }
    let mut gens = s.generators.clone();
    let anti: Vec<usize> = (0..gens.len()).filter(|&i| !gens[i].commutes(g).unwrap_or(true)).collect();
    match anti.split_first() {
        None => gens.push(target),
        Some((&h, rest)) => {
            for &j in rest {
                gens[j] = gens[j].product(&gens[h])?;
            }
            gens[h] = target;
        }
    }
    ToyStabilizerGroup::new(s.n, &gens)
}

/// Whether the group is generated by its elements supported on one side or the other.
pub fn stab_factorizes(s: &ToyStabilizerGroup, bp: &Bipartition) -> Result<bool> {
    if bp.n() != s.n {
        return Err(Error::DimensionMismatch { expected: s.n, found: bp.n() });
    }
    let elements = s.elements();
    let supported_on = |w: &PauliWord, side: &[usize]| {
        w.letters.iter().enumerate().all(|(i, &l)| l == Letter::I || side.contains(&i))
    };
    let a = elements.iter().filter(|w| supported_on(w, bp.side_a())).count();
    let b = elements.iter().filter(|w| supported_on(w, bp.side_b())).count();
    Ok(a * b == elements.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    fn g(words: &[&str]) -> ToyStabilizerGroup {
        ToyStabilizerGroup::parse(words).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("-XZI").to_string(), "-XZI");
        assert_eq!(w("+XZ").to_string(), "XZ");
        assert!("XQ".parse::<PauliWord>().is_err());
        assert!("-".parse::<PauliWord>().is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(!w("X").commutes(&w("Z")).unwrap());
        assert!(w("XX").commutes(&w("ZZ")).unwrap());
        assert!(w("XYZ").commutes(&w("III")).unwrap());
        assert!(w("X").commutes(&w("XX")).is_err());
    }

    #[test]
    fn product_follows_y_equals_zx() {
        assert_eq!(w("Z").product(&w("X")).unwrap(), w("Y"));
        assert_eq!(w("-Y").product(&w("X")).unwrap(), w("-Z"));
        assert_eq!(w("XX").product(&w("XX")).unwrap(), w("II"));
    }

    #[test]
    fn diagonal_entries_match_labels() {
        let z: Vec<i8> = (1..=4).map(|o| Letter::Z.entry(o)).collect();
        let x: Vec<i8> = (1..=4).map(|o| Letter::X.entry(o)).collect();
        let y: Vec<i8> = (1..=4).map(|o| Letter::Y.entry(o)).collect();
        assert_eq!(z, vec![1, 1, -1, -1]);
        assert_eq!(x, vec![1, -1, 1, -1]);
        assert_eq!(y, vec![1, -1, -1, 1]);
    }

    #[test]
    fn invalid_groups() {
        assert_eq!(ToyStabilizerGroup::parse(&["X", "Z"]), Err(Error::NotCommuting(0, 1)));
        assert_eq!(ToyStabilizerGroup::parse(&["Z", "-Z"]), Err(Error::ContainsMinusIdentity));
        // Toy letters multiply without phases, so XX * ZZ = +YY.
        assert_eq!(ToyStabilizerGroup::parse(&["XX", "ZZ", "-YY"]), Err(Error::ContainsMinusIdentity));
        assert!(ToyStabilizerGroup::parse(&["XX", "ZZ", "YY"]).is_ok());
    }

    #[test]
    fn canonical_form_is_syntactic() {
        assert_eq!(g(&["XX", "ZZ"]), g(&["YY", "ZZ"]));
        assert_eq!(g(&["Z", "Z"]), g(&["Z"]));
    }

    #[test]
    fn supports() {
        let one: Vec<Vec<u8>> = stabilized_support(&g(&["Z"])).into_iter().collect();
        assert_eq!(one, vec![vec![1], vec![2]]);
        let minus_x: Vec<Vec<u8>> = stabilized_support(&g(&["-X"])).into_iter().collect();
        assert_eq!(minus_x, vec![vec![2], vec![4]]);
        assert_eq!(stabilized_support(&ToyStabilizerGroup::trivial(2)).len(), 16);
        let bell: Vec<Vec<u8>> = stabilized_support(&g(&["ZZ", "XX"])).into_iter().collect();
        assert_eq!(bell, vec![vec![1, 1], vec![2, 2], vec![3, 3], vec![4, 4]]);
    }

    #[test]
    fn correspondence_examples() {
        let s = to_general(&g(&["Z"]));
        assert_eq!(s.known().basis(), &[ModVector::new(vec![0, 1], z2())]);
        assert_eq!(s.value_of(&ModVector::new(vec![0, 1], z2())), Some(0));
        let s = to_general(&g(&["-X"]));
        assert_eq!(s.value_of(&ModVector::new(vec![1, 0], z2())), Some(1));
        assert_eq!(from_general(&s).unwrap(), g(&["-X"]));
        let space = PhaseSpace::new(1, z2()).unwrap();
        assert_eq!(from_general(&EpistemicState::maximally_mixed(space)).unwrap(), ToyStabilizerGroup::trivial(1));
        let three = PhaseSpace::new(1, Modulus::new(3).unwrap()).unwrap();
        assert_eq!(from_general(&EpistemicState::maximally_mixed(three)), Err(Error::NotD2(3)));
    }

    #[test]
    fn mixing() {
        assert_eq!(stab_mix(&g(&["-Z"]), &g(&["Z"])).unwrap(), ToyStabilizerGroup::trivial(1));
        assert_eq!(stab_mix(&g(&["Z"]), &g(&["Z"])).unwrap(), g(&["Z"]));
        assert_eq!(stab_mix(&g(&["Z"]), &g(&["X"])), Err(Error::NotRephasing));
    }

    #[test]
    fn superposing_two_qubit_pair() {
        let got = stab_superpose(&g(&["ZZ", "IZ"]), &g(&["ZZ", "-IZ"])).unwrap();
        let mut want = vec![g(&["ZZ", "XX"]), g(&["ZZ", "-XX"]), g(&["ZZ", "XY"]), g(&["ZZ", "-XY"])];
        want.sort();
        assert_eq!(got, want);
        // span{ZZ, YY} coincides with span{ZZ, XX} in the toy group.
        assert_eq!(g(&["ZZ", "YY"]), g(&["ZZ", "XX"]));
    }

    #[test]
    fn superposing_single_system() {
        let got = stab_superpose(&g(&["Z"]), &g(&["-Z"])).unwrap();
        let supports: BTreeSet<Vec<u8>> = got
            .iter()
            .map(|t| stabilized_support(t).into_iter().map(|o| o[0]).collect::<Vec<u8>>())
            .collect();
        let want: BTreeSet<Vec<u8>> = [vec![1, 3], vec![2, 4], vec![2, 3], vec![1, 4]].into_iter().collect();
        assert_eq!(supports, want);
        assert_eq!(stab_superpose(&g(&["Z"]), &g(&["Z"])), Err(Error::IdenticalStates));
        assert_eq!(stab_superpose(&ToyStabilizerGroup::trivial(1), &g(&["Z"])), Err(Error::NotPure));
    }

    #[test]
    fn measurement_examples() {
        assert_eq!(stab_measure(&g(&["XI", "IX"]), &w("ZI"), true).unwrap(), g(&["-ZI", "IX"]));
        assert_eq!(stab_measure(&g(&["Z"]), &w("Z"), false).unwrap(), g(&["Z"]));
        assert_eq!(stab_measure(&g(&["Z"]), &w("Z"), true), Err(Error::InconsistentOutcome));
        assert_eq!(stab_measure(&g(&["XX", "ZZ"]), &w("ZI"), true).unwrap(), g(&["-ZI", "-IZ"]));
    }

    #[test]
    fn factorization() {
        let bp = Bipartition::new(2, &[0]).unwrap();
        assert!(!stab_factorizes(&g(&["ZZ", "XX"]), &bp).unwrap());
        assert!(stab_factorizes(&g(&["ZI", "IZ"]), &bp).unwrap());
        let cat = g(&["ZZI", "IZZ", "XXX"]);
        assert!(!stab_factorizes(&cat, &Bipartition::new(3, &[0]).unwrap()).unwrap());
    }
}
