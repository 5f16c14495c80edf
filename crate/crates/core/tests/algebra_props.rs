use std::collections::BTreeSet;

use epitoy::linalg::howell_form;
use epitoy::{AffineCoset, ModVector, Modulus, PhaseSpace, Submodule};
use proptest::prelude::*;

const MODULI: [u64; 5] = [2, 3, 4, 5, 6];

#[derive(Clone, Debug)]
struct Case {
    d: Modulus,
    dim: usize,
    v: Vec<Vec<u64>>,
    w: Vec<Vec<u64>>,
    a: Vec<u64>,
    b: Vec<u64>,
}

fn case() -> impl Strategy<Value = Case> {
    (0..MODULI.len(), 1usize..=2).prop_flat_map(|(i, n)| {
        let d = MODULI[i];
        let dim = 2 * n;
        let vector = proptest::collection::vec(0..d, dim);
        let gens = proptest::collection::vec(vector.clone(), 0..=3);
        (gens.clone(), gens, vector.clone(), vector).prop_map(move |(v, w, a, b)| Case {
            d: Modulus::new(d).unwrap(),
            dim,
            v,
            w,
            a,
            b,
        })
    })
}

fn module(d: Modulus, dim: usize, gens: &[Vec<u64>]) -> Submodule {
    let gens: Vec<ModVector> = gens.iter().map(|g| ModVector::new(g.clone(), d)).collect();
    Submodule::new(d, dim, &gens).unwrap()
}

/// Closure of the generators under addition, by breadth-first search.
fn closure(d: Modulus, dim: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut seen = BTreeSet::from([vec![0; dim]]);
    let mut frontier = vec![vec![0; dim]];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| d.add(*a, *b)).collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

fn all_points(d: Modulus, dim: usize) -> Vec<Vec<u64>> {
    (0..d.get().pow(dim as u32))
        .map(|mut i| {
            (0..dim)
                .map(|_| {
                    let x = i % d.get();
                    i /= d.get();
                    x
                })
                .collect()
        })
        .collect()
}

fn dot(d: Modulus, x: &[u64], y: &[u64]) -> u64 {
    x.iter().zip(y).fold(0, |acc, (a, b)| d.add(acc, d.mul(*a, *b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn elements_match_closure(c in case()) {
        let v = module(c.d, c.dim, &c.v);
        let listed: BTreeSet<Vec<u64>> = v.elements().into_iter().map(ModVector::into_inner).collect();
        prop_assert_eq!(listed, closure(c.d, c.dim, &c.v));
    }

    #[test]
    fn complement_matches_enumeration(c in case()) {
        let v = module(c.d, c.dim, &c.v);
        let members = closure(c.d, c.dim, &c.v);
        let expected: BTreeSet<Vec<u64>> = all_points(c.d, c.dim)
            .into_iter()
            .filter(|x| members.iter().all(|m| dot(c.d, m, x) == 0))
            .collect();
        let perp = v.orthogonal_complement();
        let got: BTreeSet<Vec<u64>> = perp.elements().into_iter().map(ModVector::into_inner).collect();
        prop_assert_eq!(got, expected);
        prop_assert_eq!(perp.orthogonal_complement(), v.clone());
        prop_assert_eq!(v.cardinality().unwrap() * perp.cardinality().unwrap(), c.d.pow(c.dim).unwrap());
    }

    #[test]
    fn sum_and_intersection_duality(c in case()) {
        let v = module(c.d, c.dim, &c.v);
        let w = module(c.d, c.dim, &c.w);
        let sum = v.sum(&w).unwrap();
        prop_assert_eq!(sum.orthogonal_complement(), v.orthogonal_complement().intersect(&w.orthogonal_complement()).unwrap());
        let meet = v.intersect(&w).unwrap();
        let expected: BTreeSet<Vec<u64>> =
            closure(c.d, c.dim, &c.v).intersection(&closure(c.d, c.dim, &c.w)).cloned().collect();
        let got: BTreeSet<Vec<u64>> = meet.elements().into_iter().map(ModVector::into_inner).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn coset_intersection_law(c in case()) {
        let v = module(c.d, c.dim, &c.v);
        let w = module(c.d, c.dim, &c.w);
        let a = AffineCoset::new(v.clone(), &ModVector::new(c.a.clone(), c.d)).unwrap();
        let b = AffineCoset::new(w.clone(), &ModVector::new(c.b.clone(), c.d)).unwrap();
        let pa: BTreeSet<ModVector> = a.points().into_iter().collect();
        let pb: BTreeSet<ModVector> = b.points().into_iter().collect();
        let expected: BTreeSet<ModVector> = pa.intersection(&pb).cloned().collect();
        match a.intersect(&b).unwrap() {
            None => prop_assert!(expected.is_empty()),
            Some(meet) => {
                prop_assert_eq!(meet.direction(), &v.intersect(&w).unwrap());
                prop_assert_eq!(meet.points().into_iter().collect::<BTreeSet<_>>(), expected);
            }
        }
    }

    #[test]
    fn reduce_picks_smallest_coset_member(c in case()) {
        let v = module(c.d, c.dim, &c.v);
        let x = ModVector::new(c.a.clone(), c.d);
        let smallest = closure(c.d, c.dim, &c.v)
            .into_iter()
            .map(|m| ModVector::new(m, c.d).add(&x, c.d))
            .min()
            .unwrap();
        prop_assert_eq!(v.reduce(&x), smallest);
    }

    #[test]
    fn howell_form_is_canonical(c in case()) {
        let v = module(c.d, c.dim, &c.v);
        let mut rows: Vec<ModVector> = c.v.iter().chain(&c.w).map(|g| ModVector::new(g.clone(), c.d)).collect();
        rows.extend(v.basis().iter().cloned());
        let w = module(c.d, c.dim, &c.w);
        let joint = v.sum(&w).unwrap();
        rows.reverse();
        prop_assert_eq!(howell_form(&rows, c.dim, c.d), joint.basis().to_vec());
    }

    #[test]
    fn symplectic_complement_is_an_involution(c in case()) {
        let n = c.dim / 2;
        let space = PhaseSpace::new(n, c.d).unwrap();
        let v = module(c.d, c.dim, &c.v);
        let comp = space.symplectic_complement(&v);
        prop_assert_eq!(space.symplectic_complement(&comp), v.clone());
        for f in v.basis() {
            for g in comp.basis() {
                prop_assert_eq!(space.symplectic_form(f, g).unwrap(), 0);
            }
        }
    }
}
