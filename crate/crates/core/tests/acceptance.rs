//! Acceptance criteria. Prints one PASS/FAIL line per criterion, each with its
//! measured runtime and budget, and exits nonzero if any line fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use epitoy::catalog;
use epitoy::entanglement::{self, EntanglementClass};
use epitoy::measurement::Measurement;
use epitoy::oracle::{run_oracle, OracleReport};
use epitoy::original::{InvalidReason, SetEpistemicState};
use epitoy::stabilizer::{self, PauliWord, ToyStabilizerGroup};
use epitoy::transform::{self, NonEntanglingDecomposition, OnticPermutation};
use epitoy::{AffineCoset, Bipartition, EpistemicState, ModVector, Modulus, PhaseSpace, Submodule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const FUZZ_CASES: usize = 1_000;
const TRANSPORT_MAPS: usize = 1_000;

type Outcome = Result<String, String>;

fn space(n: usize, d: u64) -> PhaseSpace {
    PhaseSpace::new(n, Modulus::new(d).unwrap()).unwrap()
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn set(n: usize, states: &[&[u8]]) -> SetEpistemicState {
    SetEpistemicState::new(n, states.iter().map(|s| s.to_vec())).unwrap()
}

fn catalog_single_bit() -> Outcome {
    let states = catalog::enumerate_states(space(1, 2)).map_err(|e| e.to_string())?;
    let summary = catalog::summarize(&states);
    ensure(summary.pure == 6 && summary.mixed == 1, || format!("{summary:?}"))?;
    let listed: BTreeSet<SetEpistemicState> =
        states.iter().map(|s| SetEpistemicState::from_general(s).unwrap()).collect();
    let mut expected: BTreeSet<SetEpistemicState> =
        [[1, 2], [3, 4], [1, 3], [2, 4], [1, 4], [2, 3]].iter().map(|p| set(1, &[&[p[0]], &[p[1]]])).collect();
    expected.insert(set(1, &[&[1], &[2], &[3], &[4]]));
    ensure(listed == expected, || "catalog differs from the printed list".into())?;
    Ok("6 pure + 1 mixed".into())
}

fn golden_suite() -> Outcome {
    let sp1 = space(1, 2);
    let s = EpistemicState::new(sp1, &[sp1.vector(&[1, 0]).unwrap()], &sp1.vector(&[1, 0]).unwrap()).unwrap();
    let m = Measurement::new(sp1, &[sp1.vector(&[0, 1]).unwrap()]).unwrap();
    let post = m.update(&sp1.vector(&[1, 1]).unwrap(), &s).unwrap();
    let expected = EpistemicState::new(sp1, &[sp1.vector(&[0, 1]).unwrap()], &sp1.vector(&[1, 1]).unwrap()).unwrap();
    ensure(post == expected, || format!("measurement update gave {post:?}"))?;

    let hook = set(2, &[&[1, 1], &[2, 1], &[3, 1], &[4, 2]]);
    ensure(hook.to_general() == Err(InvalidReason::NotAffineCoset), || "hook state accepted".into())?;
    let local = set(2, &[&[1, 1], &[2, 1], &[3, 1], &[4, 1]]);
    ensure(local.to_general() == Err(InvalidReason::ComplementNotIsotropic), || "local state accepted".into())?;

    let sp = space(2, 2);
    let bp = Bipartition::new(2, &[0]).unwrap();
    let st = |gens: &[&[u64]], v: &[u64]| {
        let gens: Vec<ModVector> = gens.iter().map(|g| sp.vector(g).unwrap()).collect();
        EpistemicState::new(sp, &gens, &sp.vector(v).unwrap()).unwrap()
    };
    let classes = [
        entanglement::classify(&st(&[&[1, 0, 1, 0], &[0, 1, 0, 1]], &[0, 0, 0, 0]), &bp),
        entanglement::classify(&st(&[&[1, 0, 1, 0]], &[1, 0, 0, 0]), &bp),
        entanglement::classify(&st(&[&[1, 0, 0, 0], &[0, 0, 1, 0]], &[0, 0, 0, 0]), &bp),
    ];
    let names: Vec<&str> = classes.iter().map(|c| c.as_ref().map(EntanglementClass::name).unwrap_or("error")).collect();
    ensure(names == ["entangled", "correlated", "product"], || format!("entanglement trio gave {names:?}"))?;

    let cnot = transform::toy_cnot(0, 1, sp).unwrap().observable_matrix();
    for (from, to) in [("XI", "XX"), ("IX", "IX"), ("ZI", "ZI"), ("IZ", "ZZ")] {
        let image = cnot.mul_vec(&from.parse::<PauliWord>().unwrap().vector(), sp.modulus());
        let got = PauliWord::from_vector(&image, false).to_string();
        ensure(got == to, || format!("CNOT sends {from} to {got}"))?;
    }
    let ghz = entanglement::cat_state(&[entanglement::Injection::CANONICAL; 3]).unwrap();
    let group = stabilizer::from_general(&ghz).unwrap();
    ensure(group == ToyStabilizerGroup::parse(&["ZZI", "IZZ", "XXX"]).unwrap(), || format!("GHZ gave {group:?}"))?;
    Ok("measurement, invalid states, entanglement trio, CNOT table, GHZ".into())
}

fn oracle_slice(report: &OracleReport, names: &[&str]) -> Outcome {
    let picked: Vec<_> = report.checks.iter().filter(|c| names.contains(&c.name.as_str())).collect();
    ensure(!picked.is_empty(), || "no matching checks ran".into())?;
    if let Some(bad) = picked.iter().find(|c| !c.passed) {
        return Err(format!("{} d={} n={}: {}", bad.name, bad.d, bad.n, bad.counterexample.clone().unwrap_or_default()));
    }
    let cases: u64 = picked.iter().map(|c| c.cases).sum();
    Ok(format!("{} checks, {cases} cases", picked.len()))
}

fn measurement_equivalence() -> Outcome {
    oracle_slice(&run_oracle(&[2], &[1, 2], SEED), &["measurement_equivalence"])
}

fn correspondence() -> Outcome {
    oracle_slice(&run_oracle(&[2], &[1, 2], SEED), &["correspondence"])
}

fn random_submodule(sp: PhaseSpace, rng: &mut ChaCha8Rng) -> Submodule {
    let d = sp.modulus();
    let gens: Vec<ModVector> = (0..rng.gen_range(0..=3)).map(|_| random_vector(sp, rng)).collect();
    Submodule::new(d, sp.dim(), &gens).unwrap()
}

fn random_vector(sp: PhaseSpace, rng: &mut ChaCha8Rng) -> ModVector {
    let entries: Vec<u64> = (0..sp.dim()).map(|_| rng.gen_range(0..sp.modulus().get())).collect();
    sp.vector(&entries).unwrap()
}

fn algebra_fuzz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for d in [2, 3, 4, 5, 6] {
        for case in 0..FUZZ_CASES {
            let sp = space(1 + case % 2, d);
            let total = sp.modulus().pow(sp.dim()).unwrap();
            let (v, w) = (random_submodule(sp, &mut rng), random_submodule(sp, &mut rng));
            let (vp, wp) = (v.orthogonal_complement(), w.orthogonal_complement());
            ensure(vp.orthogonal_complement() == v, || format!("double complement of {v:?}"))?;
            ensure(v.cardinality().unwrap() * vp.cardinality().unwrap() == total, || format!("size law for {v:?}"))?;
            let sum_perp = v.sum(&w).unwrap().orthogonal_complement();
            ensure(sum_perp == vp.intersect(&wp).unwrap(), || format!("sum duality for {v:?}, {w:?}"))?;

            let a = AffineCoset::new(v.clone(), &random_vector(sp, &mut rng)).unwrap();
            let b = AffineCoset::new(w.clone(), &random_vector(sp, &mut rng)).unwrap();
            let pa: BTreeSet<ModVector> = a.points().into_iter().collect();
            let common: BTreeSet<ModVector> = b.points().into_iter().filter(|x| pa.contains(x)).collect();
            let ok = match a.intersect(&b).unwrap() {
                None => common.is_empty(),
                Some(meet) => {
                    meet.direction() == &v.intersect(&w).unwrap() && meet.points().into_iter().collect::<BTreeSet<_>>() == common
                }
            };
            ensure(ok, || format!("coset intersection for {a:?}, {b:?}"))?;
        }
    }
    Ok(format!("{FUZZ_CASES} cases for each d in 2,3,4,5,6"))
}

fn mixture_superposition() -> Outcome {
    let report = run_oracle(&[2, 3], &[1, 2], SEED);
    oracle_slice(&report, &["mixture_soundness", "superposition_soundness", "pure_decomposition"])
}

/// A random valid state: the radical of a random submodule is isotropic.
fn random_state(sp: PhaseSpace, rng: &mut ChaCha8Rng) -> EpistemicState {
    let w = random_submodule(sp, rng);
    let known = w.intersect(&sp.symplectic_complement(&w)).unwrap();
    EpistemicState::from_submodule(sp, known, &random_vector(sp, rng)).unwrap()
}

fn transport() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for d in [2, 3, 4, 6] {
        for case in 0..TRANSPORT_MAPS {
            let sp = space(1 + case % 2, d);
            let map = transform::random_map(sp, 8, &mut rng);
            ensure(transform::is_symplectic(sp, map.matrix()), || format!("{map:?} is not symplectic"))?;
            let s = random_state(sp, &mut rng);
            let out = map.apply(&s).map_err(|e| e.to_string())?;
            let moved: BTreeSet<ModVector> = s.support().points().iter().map(|m| map.apply_point(m)).collect();
            let got: BTreeSet<ModVector> = out.support().points().into_iter().collect();
            ensure(got == moved, || format!("{map:?} does not transport {s:?}"))?;
            ensure(map.invert().apply(&out).as_ref() == Ok(&s), || format!("inverse of {map:?} fails on {s:?}"))?;
        }
    }
    let sp = space(2, 2);
    let cnot = OnticPermutation::from_map(&transform::toy_cnot(0, 1, sp).unwrap()).unwrap();
    ensure(transform::permutation_is_valid(&cnot) == Ok(true), || "CNOT permutation rejected".into())?;
    match transform::decompose_non_entangling(&cnot) {
        Ok(NonEntanglingDecomposition::NotNonEntangling { witness, image }) => {
            let bp = Bipartition::new(2, &[0]).unwrap();
            let product = |e: &SetEpistemicState| entanglement::is_product(&e.to_general().unwrap(), &bp).unwrap();
            ensure(product(&witness) && !product(&image), || "CNOT witness is not product to entangled".into())?
        }
        other => return Err(format!("CNOT decomposition gave {other:?}")),
    }
    Ok(format!("{TRANSPORT_MAPS} maps for each d in 2,3,4,6; CNOT valid with witness"))
}

fn full_oracle() -> Outcome {
    let report = run_oracle(&[2, 3, 4], &[1, 2], SEED);
    if let Some(bad) = report.failures().next() {
        return Err(format!("{} d={} n={}: {}", bad.name, bad.d, bad.n, bad.counterexample.clone().unwrap_or_default()));
    }
    Ok(format!("{} checks over d in 2,3,4 and n in 1,2", report.checks.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("catalog d=2 n=1", catalog_single_bit, 1),
        ("golden examples", golden_suite, 5),
        ("measurement equivalence d=2 n<=2", measurement_equivalence, 120),
        ("stabilizer correspondence d=2 n<=2", correspondence, 30),
        ("algebra fuzz", algebra_fuzz, 60),
        ("mixture and superposition d<=3 n<=2", mixture_superposition, 120),
        ("transformation transport", transport, 60),
        ("full oracle", full_oracle, 300),
    ];
    let mut all = true;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(msg), false) => ("PASS", msg.clone()),
            (Ok(msg), true) => ("FAIL", format!("{msg}; over budget")),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        all &= status == "PASS";
        println!("{status} [{}] {name}: {detail} ({:.2} s, budget {budget} s)", i + 1, elapsed.as_secs_f64());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
