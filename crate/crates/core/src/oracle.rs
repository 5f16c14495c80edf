//! Brute-force verification battery over small phase spaces.
//!
//! Every check walks the exhaustive catalog of an instance `(d, n)` in sorted
//! order, so the first failure recorded is the lexicographically smallest.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, coset_representatives};
use crate::entanglement::{self, EntanglementClass};
use crate::error::Result;
use crate::linalg::{AffineCoset, ModVector, Modulus, Submodule};
use crate::measurement::Measurement;
use crate::mixture::{self, StateFamily};
use crate::original::{self, vector_to_labels, SetEpistemicState};
use crate::stabilizer::{self, PauliWord};
use crate::state::{Bipartition, EpistemicState, PhaseSpace};
use crate::transform::{self, SymplecticMap};

/// Environment variable with the number of worker threads (unset or 0: one per core).
pub const THREADS_ENV: &str = "EPITOY_ORACLE_THREADS";

/// Random cases per instance for the sampled checks.
const RANDOM_CASES: usize = 250;
/// Largest number of (state, measurement) pairs checked exhaustively.
const PAIR_BUDGET: usize = 8_000;
/// Largest number of valuation classes whose subsets are enumerated.
const SUBSET_CLASSES: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub d: u64,
    pub n: usize,
    pub passed: bool,
    pub cases: u64,
    pub counterexample: Option<String>,
    pub millis: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl OracleReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Scope {
    All,
    Prime,
    Qubit,
}

type CheckFn = fn(&Instance, &mut Tally) -> Result<()>;

const CHECKS: &[(&str, Scope, CheckFn)] = &[
    ("algebra_identities", Scope::All, algebra_identities),
    ("howell_canonical", Scope::All, howell_canonical),
    ("support_correctness", Scope::All, support_correctness),
    ("size_law", Scope::All, size_law),
    ("equality_vs_support", Scope::All, equality_vs_support),
    ("measurement_properties", Scope::All, measurement_properties),
    ("measurement_equivalence", Scope::Qubit, measurement_equivalence),
    ("mixture_soundness", Scope::All, mixture_soundness),
    ("superposition_soundness", Scope::Prime, superposition_soundness),
    ("pure_decomposition", Scope::Prime, pure_decomposition),
    ("correspondence", Scope::Qubit, correspondence),
    ("entanglement", Scope::All, entanglement_check),
    ("transformation_transport", Scope::All, transformation_transport),
    ("marginal_composition", Scope::All, marginal_composition),
    ("catalog_closure", Scope::All, catalog_closure),
];

/// Names of every check in the battery, in report order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

struct Instance {
    space: PhaseSpace,
    states: Vec<EpistemicState>,
    submodules: Vec<Submodule>,
    seed: u64,
}

impl Instance {
    fn rng(&self, salt: &str) -> ChaCha8Rng {
        let mix = salt.bytes().fold(self.seed ^ self.space.modulus().get() << 32 ^ self.space.n() as u64, |h, b| {
            h.rotate_left(5) ^ u64::from(b)
        });
        ChaCha8Rng::seed_from_u64(mix)
    }

    fn d(&self) -> Modulus {
        self.space.modulus()
    }
}

#[derive(Default)]
struct Tally {
    cases: u64,
    counterexample: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }
}

fn applies(scope: Scope, d: Modulus) -> bool {
    match scope {
        Scope::All => true,
        Scope::Prime => d.is_prime(),
        Scope::Qubit => d.get() == 2,
    }
}

fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}

/// Runs the battery for every `d` in `d_list` and `n` in `n_list`. Checks that
/// need a prime modulus or d = 2 are left out where they do not apply.
pub fn run_oracle(d_list: &[u64], n_list: &[usize], seed: u64) -> OracleReport {
    let mut cells: Vec<(u64, usize)> = d_list.iter().flat_map(|&d| n_list.iter().map(move |&n| (d, n))).collect();
    cells.sort();
    cells.dedup();
    let pool = thread_pool();
    let checks = pool.install(|| {
        cells
            .par_iter()
            .map(|&(d, n)| run_instance(d, n, seed))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    });
    OracleReport { seed, checks }
}

fn failed(name: &str, d: u64, n: usize, message: String) -> CheckResult {
    CheckResult { name: name.into(), d, n, passed: false, cases: 0, counterexample: Some(message), millis: 0 }
}

fn run_instance(d: u64, n: usize, seed: u64) -> Vec<CheckResult> {
    let start = Instant::now();
    let built = Modulus::new(d).and_then(|m| PhaseSpace::new(n, m)).and_then(|space| {
        Ok(Instance {
            space,
            states: catalog::enumerate_states(space)?,
            submodules: catalog::isotropic_submodules(space)?,
            seed,
        })
    });
    let inst = match built {
        Ok(inst) => inst,
        Err(e) => return vec![failed("instance", d, n, e.to_string())],
    };
    let catalog_millis = start.elapsed().as_millis();
    CHECKS
        .par_iter()
        .filter(|(_, scope, _)| applies(*scope, inst.d()))
        .map(|&(name, _, check)| {
            let t = Instant::now();
            let mut tally = Tally::default();
            if let Err(e) = check(&inst, &mut tally) {
                tally.check(false, || format!("unexpected error: {e}"));
            }
            CheckResult {
                name: name.into(),
                d,
                n,
                passed: tally.counterexample.is_none(),
                cases: tally.cases,
                counterexample: tally.counterexample,
                millis: t.elapsed().as_millis() + catalog_millis,
            }
        })
        .collect()
}

fn random_vector(space: PhaseSpace, rng: &mut ChaCha8Rng) -> ModVector {
    ModVector::new((0..space.dim()).map(|_| rng.gen_range(0..space.modulus().get())).collect(), space.modulus())
}

fn random_submodule(space: PhaseSpace, rng: &mut ChaCha8Rng) -> Submodule {
    let k = rng.gen_range(0..=3);
    let gens: Vec<ModVector> = (0..k).map(|_| random_vector(space, rng)).collect();
    Submodule::new(space.modulus(), space.dim(), &gens).expect("dimensions agree")
}

fn point_set(points: Vec<ModVector>) -> BTreeSet<ModVector> {
    points.into_iter().collect()
}

fn algebra_identities(inst: &Instance, t: &mut Tally) -> Result<()> {
    let space = inst.space;
    let total = inst.d().pow(space.dim()).expect("checked size");
    let mut rng = inst.rng("algebra");
    for _ in 0..RANDOM_CASES {
        let v = random_submodule(space, &mut rng);
        let w = random_submodule(space, &mut rng);
        let vp = v.orthogonal_complement();
        t.check(vp.orthogonal_complement() == v, || format!("(V^perp)^perp != V for V = {:?}", v.basis()));
        t.check(v.cardinality()? * vp.cardinality()? == total, || format!("|V||V^perp| != d^2n for {:?}", v.basis()));
        let lhs = v.sum(&w)?.orthogonal_complement();
        let rhs = vp.intersect(&w.orthogonal_complement())?;
        t.check(lhs == rhs, || format!("(V+W)^perp != V^perp & W^perp for {:?}, {:?}", v.basis(), w.basis()));
        let a = AffineCoset::new(v.clone(), &random_vector(space, &mut rng))?;
        let b = AffineCoset::new(w.clone(), &random_vector(space, &mut rng))?;
        let expected: BTreeSet<ModVector> = point_set(a.points()).intersection(&point_set(b.points())).cloned().collect();
        let got = a.intersect(&b)?.map(|c| point_set(c.points())).unwrap_or_default();
        t.check(got == expected, || format!("coset intersection law fails for {a:?} and {b:?}"));
        if let Some(c) = a.intersect(&b)? {
            t.check(c.direction() == &v.intersect(&w)?, || format!("intersection direction is not V & W for {a:?}, {b:?}"));
        }
    }
    Ok(())
}

fn howell_canonical(inst: &Instance, t: &mut Tally) -> Result<()> {
    let (space, d) = (inst.space, inst.d());
    let mut rng = inst.rng("howell");
    for _ in 0..RANDOM_CASES {
        let v = random_submodule(space, &mut rng);
        let mut gens: Vec<ModVector> = v.basis().to_vec();
        for _ in 0..3 {
            let c: ModVector = v.basis().iter().fold(ModVector::zeros(space.dim()), |acc, b| {
                acc.add(&b.scale(rng.gen_range(0..d.get()), d), d)
            });
            gens.push(c);
        }
        gens.shuffle(&mut rng);
        let again = Submodule::new(d, space.dim(), &gens)?;
        t.check(again == v, || format!("generators {gens:?} give a different basis than {:?}", v.basis()));
        t.check(v.elements().len() as u128 == v.cardinality()?, || format!("cardinality mismatch for {:?}", v.basis()));
    }
    Ok(())
}

fn support_correctness(inst: &Instance, t: &mut Tally) -> Result<()> {
    let points = inst.space.points()?;
    let d = inst.d();
    for s in &inst.states {
        let by_values: BTreeSet<ModVector> = points
            .iter()
            .filter(|m| s.known().basis().iter().all(|f| f.dot(m, d) == f.dot(s.valuation(), d)))
            .cloned()
            .collect();
        t.check(by_values == point_set(s.support().points()), || format!("support of {s:?} differs from enumeration"));
    }
    Ok(())
}

fn size_law(inst: &Instance, t: &mut Tally) -> Result<()> {
    let total = inst.d().pow(inst.space.dim()).expect("checked size");
    for s in &inst.states {
        let size = s.support().points().len() as u128;
        t.check(size * s.known().cardinality()? == total, || format!("|support| * |V| != d^2n for {s:?}"));
        if inst.d().get() == 2 {
            let k = s.known().basis().len();
            t.check(size == 1 << (inst.space.dim() - k), || format!("|E| != 2^(2N-k) for {s:?}"));
        }
    }
    Ok(())
}

fn equality_vs_support(inst: &Instance, t: &mut Tally) -> Result<()> {
    let mut seen: BTreeMap<BTreeSet<ModVector>, &EpistemicState> = BTreeMap::new();
    let mut rng = inst.rng("equality");
    for s in &inst.states {
        let support = s.support().points();
        let member = support.choose(&mut rng).expect("support is nonempty").clone();
        t.check(s.with_valuation(&member)? == *s, || format!("revaluing {s:?} at {member} changes the state"));
        if let Some(prev) = seen.insert(point_set(support), s) {
            t.check(false, || format!("{prev:?} and {s:?} share a support"));
        }
    }
    Ok(())
}

/// All (state, measurement) pairs, or a seeded sample when there are too many.
fn measurement_pairs<'a>(inst: &'a Instance, salt: &str) -> Vec<(&'a EpistemicState, &'a Submodule)> {
    let all: Vec<_> = inst
        .states
        .iter()
        .flat_map(|s| inst.submodules.iter().filter(|v| !v.is_zero()).map(move |v| (s, v)))
        .collect();
    if all.len() <= PAIR_BUDGET {
        return all;
    }
    let mut rng = inst.rng(salt);
    let mut picked = rand::seq::index::sample(&mut rng, all.len(), PAIR_BUDGET).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| all[i]).collect()
}

fn measurement_properties(inst: &Instance, t: &mut Tally) -> Result<()> {
    for (s, v_pi) in measurement_pairs(inst, "measurement") {
        let m = Measurement::from_submodule(inst.space, v_pi.clone())?;
        let outcomes = m.outcomes(s)?;
        let total: num_rational::Ratio<u128> = outcomes.iter().map(|o| o.probability).sum();
        t.check(total == 1u128.into(), || format!("probabilities of {s:?} under {:?} sum to {total}", v_pi.basis()));
        let support = point_set(s.support().points());
        for o in &outcomes {
            let cell = point_set(m.cell(&o.valuation)?.points());
            let hits = support.intersection(&cell).count() as u128;
            let expected = num_rational::Ratio::new(hits, support.len() as u128);
            t.check(o.probability == expected, || format!("probability of {} on {s:?} is not {expected}", o.valuation));
            let after = m.update(&o.valuation, s)?;
            t.check(point_set(after.support().points()).is_subset(&cell), || {
                format!("update of {s:?} at {} leaves the cell", o.valuation)
            });
            let repeat = m.outcomes(&after)?;
            let idempotent = repeat.len() == 1 && m.update(&repeat[0].valuation, &after)? == after;
            t.check(idempotent, || format!("repeating the measurement on {after:?} is not deterministic"));
        }
    }
    Ok(())
}

fn cells_of(space: PhaseSpace, v_pi: &Submodule) -> Result<Vec<SetEpistemicState>> {
    let perp = v_pi.orthogonal_complement();
    coset_representatives(space, &perp)
        .into_iter()
        .map(|r| SetEpistemicState::new(space.n(), AffineCoset::new(perp.clone(), &r)?.points().iter().map(vector_to_labels)))
        .collect()
}

fn measurement_equivalence(inst: &Instance, t: &mut Tally) -> Result<()> {
    for v_pi in inst.submodules.iter().filter(|v| !v.is_zero()) {
        let m = Measurement::from_submodule(inst.space, v_pi.clone())?;
        let partition = cells_of(inst.space, v_pi)?;
        for s in &inst.states {
            let set = SetEpistemicState::from_general(s)?;
            for o in m.outcomes(s)? {
                let general = m.update(&o.valuation, s)?;
                let truth = s
                    .support()
                    .points()
                    .into_iter()
                    .find(|x| m.cell(&o.valuation).map(|c| c.contains(x)).unwrap_or(false))
                    .expect("outcome has support");
                let (_, best) = original::coarse_measure(&partition, &set, &vector_to_labels(&truth))?;
                let agree = best.to_general().map(|b| b == general).unwrap_or(false);
                t.check(agree, || {
                    format!("{s:?} measured by {:?} at {}: general {general:?}, fidelity {best:?}", v_pi.basis(), o.valuation)
                });
            }
        }
    }
    Ok(())
}

/// Valuation-class subsets of each isotropic submodule, as families.
fn families(inst: &Instance, salt: &str) -> Result<Vec<StateFamily>> {
    let mut rng = inst.rng(salt);
    let mut out = Vec::new();
    for v in &inst.submodules {
        let classes = coset_representatives(inst.space, &v.orthogonal_complement());
        let subsets: Vec<Vec<ModVector>> = if classes.len() <= SUBSET_CLASSES {
            (1u32..1 << classes.len())
                .map(|mask| classes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c.clone()).collect())
                .collect()
        } else {
            (0..32)
                .map(|_| {
                    let k = rng.gen_range(1..=classes.len());
                    classes.choose_multiple(&mut rng, k).cloned().collect()
                })
                .collect()
        };
        for vals in subsets {
            out.push(StateFamily::new(inst.space, v.clone(), &vals)?);
        }
    }
    Ok(out)
}

fn union_of_supports(fam: &StateFamily) -> BTreeSet<ModVector> {
    fam.members().iter().flat_map(|m| m.support().points()).collect()
}

fn mixture_soundness(inst: &Instance, t: &mut Tally) -> Result<()> {
    for fam in families(inst, "mixture")? {
        let union = union_of_supports(&fam);
        match mixture::mix(&fam) {
            Ok(mixed) => t.check(point_set(mixed.support().points()) == union, || format!("mixture of {fam:?} lost points")),
            Err(_) if inst.d().is_prime() => {
                let w = mixture::constant_submodule(&fam);
                let filled = AffineCoset::new(w.orthogonal_complement(), &fam.valuations()[0])?;
                t.check(point_set(filled.points()) != union, || format!("{fam:?} covers a valid support but was rejected"));
            }
            Err(_) => t.check(true, String::new),
        }
    }
    Ok(())
}

fn superposition_soundness(inst: &Instance, t: &mut Tally) -> Result<()> {
    for fam in families(inst, "superposition")? {
        let Ok(u) = mixture::superposable_part(&fam) else { continue };
        let choices = mixture::enumerate_superposition_choices(&fam)?;
        t.check(!choices.is_empty(), || format!("{fam:?} has no superposition choice"));
        for f in choices {
            let grown = u.sum(&Submodule::new(inst.d(), inst.space.dim(), std::slice::from_ref(&f))?)?;
            for phase in mixture::superposition_phases(&fam, &f)? {
                let ok = phase.known() == &grown
                    && inst.space.is_isotropic(phase.known())
                    && u.basis().iter().all(|g| phase.value_of(g) == fam.members()[0].value_of(g));
                t.check(ok, || format!("superposing {fam:?} along {f} gave {phase:?}"));
            }
        }
    }
    Ok(())
}

fn pure_decomposition(inst: &Instance, t: &mut Tally) -> Result<()> {
    let pure_size = inst.d().pow(inst.space.n()).expect("checked size");
    for s in &inst.states {
        let fam = mixture::decompose_into_pure(s)?;
        let members = fam.members();
        let ok = members.iter().all(EpistemicState::is_pure)
            && members.len() as u128 * s.known().cardinality()? == pure_size
            && mixture::mix(&fam).as_ref() == Ok(s);
        t.check(ok, || format!("pure decomposition of {s:?} gave {fam:?}"));
    }
    Ok(())
}

fn correspondence(inst: &Instance, t: &mut Tally) -> Result<()> {
    let space = inst.space;
    for s in &inst.states {
        let group = stabilizer::from_general(s)?;
        t.check(&stabilizer::to_general(&group) == s, || format!("round trip of {s:?} through {group:?}"));
        let support: BTreeSet<Vec<u8>> = s.support().points().iter().map(vector_to_labels).collect();
        t.check(stabilizer::stabilized_support(&group) == support, || format!("{group:?} stabilizes another support"));
        for x in space.points()?.iter().filter(|x| !x.is_zero()) {
            let g = PauliWord::from_vector(x, false);
            let m = Measurement::new(space, std::slice::from_ref(x))?;
            for o in m.outcomes(s)? {
                let negative = x.dot(&o.valuation, inst.d()) == 1;
                let general = m.update(&o.valuation, s)?;
                let stab = stabilizer::stab_measure(&group, &g, negative)?;
                t.check(stabilizer::to_general(&stab) == general, || format!("measuring {g} on {group:?} disagrees"));
            }
        }
    }
    let words = space.points()?;
    for f in &words {
        for g in &words {
            let (a, b) = (PauliWord::from_vector(f, false), PauliWord::from_vector(g, false));
            t.check(a.commutes(&b)? == (space.symplectic_form(f, g)? == 0), || format!("{a} and {b}"));
        }
    }
    Ok(())
}

fn entanglement_check(inst: &Instance, t: &mut Tally) -> Result<()> {
    for bp in Bipartition::all(inst.space.n()) {
        for s in &inst.states {
            let class = entanglement::classify(s, &bp)?;
            match &class {
                EntanglementClass::CorrelatedSeparable(fam) => {
                    let ok = !entanglement::is_product(s, &bp)?
                        && mixture::mix(fam).as_ref() == Ok(s)
                        && fam.members().iter().all(|m| entanglement::is_product(m, &bp).unwrap_or(false));
                    t.check(ok, || format!("witness {fam:?} does not rebuild {s:?}"));
                }
                EntanglementClass::Product => {
                    t.check(entanglement::is_product(s, &bp)?, || format!("{s:?} classified product"));
                    let (a, b) = (bp.side_a(), bp.side_b());
                    if a.iter().chain(b).copied().eq(0..inst.space.n()) {
                        let rebuilt = s.marginalize(a)?.tensor(&s.marginalize(b)?)?;
                        t.check(&rebuilt == s, || format!("marginals of product {s:?} do not rebuild it"));
                    }
                }
                EntanglementClass::Entangled => t.check(true, String::new),
            }
            if s.is_pure() && inst.d().get() == 2 {
                let factorizes = stabilizer::stab_factorizes(&stabilizer::from_general(s)?, &bp)?;
                t.check(factorizes == (class == EntanglementClass::Product), || {
                    format!("{s:?}: stabilizer factorization {factorizes}, classified {}", class.name())
                });
            }
        }
    }
    Ok(())
}

fn transformation_transport(inst: &Instance, t: &mut Tally) -> Result<()> {
    let mut rng = inst.rng("transport");
    for _ in 0..RANDOM_CASES {
        let map = transform::random_map(inst.space, 8, &mut rng);
        let s = inst.states.choose(&mut rng).expect("catalog is nonempty");
        let out = map.apply(s)?;
        let moved: BTreeSet<ModVector> = s.support().points().iter().map(|m| map.apply_point(m)).collect();
        let ok = point_set(out.support().points()) == moved
            && out.is_pure() == s.is_pure()
            && inst.space.is_isotropic(out.known())
            && map.invert().apply(&out)? == *s
            && transform::is_symplectic(inst.space, map.matrix());
        t.check(ok, || format!("map {map:?} on {s:?}"));
    }
    Ok(())
}

fn marginal_composition(inst: &Instance, t: &mut Tally) -> Result<()> {
    let n = inst.space.n();
    let all: Vec<usize> = (0..n).collect();
    for s in &inst.states {
        t.check(s.marginalize(&all)? == *s, || format!("full marginal of {s:?} differs"));
        for k in 0..n {
            let direct = s.marginalize(&[k])?;
            let projected: BTreeSet<ModVector> =
                s.support().points().iter().map(|m| ModVector::new(vec![m[2 * k], m[2 * k + 1]], inst.d())).collect();
            t.check(point_set(direct.support().points()) == projected, || format!("marginal {k} of {s:?}"));
            if n > 2 {
                let rest: Vec<usize> = all.iter().copied().filter(|&j| j != k).collect();
                let two_step = s.marginalize(&rest)?.marginalize(&[0])?;
                let first = rest[0];
                t.check(two_step == s.marginalize(&[first])?, || format!("two-step marginal of {s:?}"));
            }
        }
    }
    if n == 2 {
        let single = catalog::enumerate_states(PhaseSpace::new(1, inst.d())?)?;
        for a in &single {
            for b in &single {
                let joint = a.tensor(b)?;
                t.check(joint.marginalize(&[0])? == *a && joint.marginalize(&[1])? == *b, || format!("{a:?} x {b:?}"));
            }
        }
    }
    Ok(())
}

fn generators(space: PhaseSpace) -> Result<Vec<SymplecticMap>> {
    let n = space.n();
    let mut out = Vec::new();
    for k in 0..n {
        out.push(transform::local_fourier(k, space)?);
        out.push(transform::local_shear(k, space)?);
        out.push(SymplecticMap::displacement(space, &ModVector::unit(space.dim(), 2 * k))?);
        out.push(SymplecticMap::displacement(space, &ModVector::unit(space.dim(), 2 * k + 1))?);
        for j in (0..n).filter(|&j| j != k) {
            out.push(transform::toy_cnot(k, j, space)?);
        }
    }
    Ok(out)
}

fn catalog_closure(inst: &Instance, t: &mut Tally) -> Result<()> {
    let known: BTreeSet<&EpistemicState> = inst.states.iter().collect();
    let gens = generators(inst.space)?;
    for s in &inst.states {
        for g in &gens {
            let image = g.apply(s)?;
            t.check(known.contains(&image), || format!("{g:?} maps {s:?} outside the catalog"));
        }
    }
    if inst.d().get() == 2 && inst.space.n() <= transform::MAX_PERMUTATION_SYSTEMS {
        for g in &gens {
            let p = transform::OnticPermutation::from_map(g)?;
            t.check(transform::permutation_is_valid(&p)?, || format!("{g:?} is not a valid permutation"));
        }
        for e in original::valid_states(inst.space.n())?.iter() {
            let back = e.to_general().ok().map(|g| SetEpistemicState::from_general(&g));
            t.check(matches!(back, Some(Ok(ref b)) if b == e), || format!("{e:?} does not round trip"));
        }
    }
    Ok(())
}
