use super::{howell_form, kernel, solve_combination, ModMatrix, ModVector, Modulus};
use crate::error::{Error, Result};

/// A submodule of Z_d^dim stored by its Howell basis, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Submodule {
    d: Modulus,
    dim: usize,
    basis: Vec<ModVector>,
}

impl Submodule {
    pub fn new(d: Modulus, dim: usize, generators: &[ModVector]) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
        }
        Ok(Self::from_checked(d, dim, generators))
    }

    pub(crate) fn from_checked(d: Modulus, dim: usize, generators: &[ModVector]) -> Self {
        Submodule { d, dim, basis: howell_form(generators, dim, d) }
    }

    pub fn zero(d: Modulus, dim: usize) -> Self {
        Submodule { d, dim, basis: Vec::new() }
    }

    pub fn full(d: Modulus, dim: usize) -> Self {
        let units: Vec<ModVector> = (0..dim).map(|i| ModVector::unit(dim, i)).collect();
        Self::from_checked(d, dim, &units)
    }

    pub fn modulus(&self) -> Modulus {
        self.d
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[ModVector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn check_compatible(&self, other: &Submodule) -> Result<()> {
        if self.d != other.d {
            return Err(Error::ModulusMismatch(self.d.get(), other.d.get()));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    fn pivot(row: &ModVector) -> usize {
        row.iter().position(|&x| x != 0).expect("Howell rows are nonzero")
    }

    /// Lexicographically smallest member of the coset `x + self`.
    pub fn reduce(&self, x: &ModVector) -> ModVector {
        let d = self.d;
        let mut x = x.clone();
        for row in &self.basis {
            let c = Self::pivot(row);
            let q = x[c] / row[c];
            if q != 0 {
                x = x.sub(&row.scale(q, d), d);
            }
        }
        x
    }

    pub fn contains(&self, x: &ModVector) -> bool {
        x.len() == self.dim && self.reduce(x).is_zero()
    }

    /// Number of elements, or `Overflow` if it does not fit in a `u128`.
    pub fn cardinality(&self) -> Result<u128> {
        self.basis
            .iter()
            .try_fold(1u128, |acc, row| acc.checked_mul((self.d.get() / row[Self::pivot(row)]) as u128))
            .ok_or(Error::Overflow)
    }

    /// `{x : f . x = 0 for all f in self}` under the dot-product pairing.
    pub fn orthogonal_complement(&self) -> Submodule {
        Submodule { d: self.d, dim: self.dim, basis: kernel(&self.basis, self.dim, self.d) }
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.check_compatible(other)?;
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Ok(Self::from_checked(self.d, self.dim, &gens))
    }

    /// Computed as the complement of the sum of complements.
    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.check_compatible(other)?;
        let s = self.orthogonal_complement().sum(&other.orthogonal_complement())?;
        Ok(s.orthogonal_complement())
    }

    pub fn is_subset_of(&self, other: &Submodule) -> bool {
        self.d == other.d && self.dim == other.dim && self.basis.iter().all(|b| other.contains(b))
    }

    /// Image under the linear map `x -> M x`.
    pub fn image(&self, m: &ModMatrix) -> Submodule {
        let gens: Vec<ModVector> = self.basis.iter().map(|b| m.mul_vec(b, self.d)).collect();
        Self::from_checked(self.d, m.nrows(), &gens)
    }

    /// Coordinate projection onto `coords` (in the given order).
    pub fn project(&self, coords: &[usize]) -> Submodule {
        let gens: Vec<ModVector> =
            self.basis.iter().map(|b| ModVector(coords.iter().map(|&c| b[c]).collect())).collect();
        Self::from_checked(self.d, coords.len(), &gens)
    }

    /// Coefficients `c` with `sum c_i basis_i = x`, when `x` is a member.
    pub fn coordinates(&self, x: &ModVector) -> Option<Vec<u64>> {
        solve_combination(&self.basis, x, self.d)
    }

    /// All elements in lexicographic order. Intended for small instances.
    pub fn elements(&self) -> Vec<ModVector> {
        let d = self.d;
        let orders: Vec<u64> = self.basis.iter().map(|r| d.get() / r[Self::pivot(r)]).collect();
        let mut out = Vec::new();
        let mut coeffs = vec![0u64; orders.len()];
        loop {
            let mut x = ModVector::zeros(self.dim);
            for (c, row) in coeffs.iter().zip(&self.basis) {
                if *c != 0 {
                    x = x.add(&row.scale(*c, d), d);
                }
            }
            out.push(x);
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    out.sort();
                    return out;
                }
                coeffs[i] += 1;
                if coeffs[i] < orders[i] {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }
}

/// An affine coset `direction + offset` with the offset kept canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineCoset {
    direction: Submodule,
    offset: ModVector,
}

impl AffineCoset {
    pub fn new(direction: Submodule, offset: &ModVector) -> Result<Self> {
        if offset.len() != direction.dim {
            return Err(Error::DimensionMismatch { expected: direction.dim, found: offset.len() });
        }
        let offset = direction.reduce(&ModVector::new(offset.to_vec(), direction.d));
        Ok(AffineCoset { direction, offset })
    }

    pub fn direction(&self) -> &Submodule {
        &self.direction
    }

    /// The lexicographically smallest member.
    pub fn offset(&self) -> &ModVector {
        &self.offset
    }

    pub fn contains(&self, x: &ModVector) -> bool {
        x.len() == self.offset.len() && self.direction.contains(&x.sub(&self.offset, self.direction.d))
    }

    pub fn cardinality(&self) -> Result<u128> {
        self.direction.cardinality()
    }

    /// `None` is the empty intersection.
    pub fn intersect(&self, other: &AffineCoset) -> Result<Option<AffineCoset>> {
        let dir = self.direction.intersect(&other.direction)?;
        let d = self.direction.d;
        let mut gens = self.direction.basis.clone();
        gens.extend(other.direction.basis.iter().cloned());
        let target = other.offset.sub(&self.offset, d);
        let Some(coeffs) = solve_combination(&gens, &target, d) else {
            return Ok(None);
        };
        let mut u = self.offset.clone();
        for (c, g) in coeffs.iter().zip(&self.direction.basis) {
            u = u.add(&g.scale(*c, d), d);
        }
        Ok(Some(AffineCoset::new(dir, &u)?))
    }

    pub fn points(&self) -> Vec<ModVector> {
        let d = self.direction.d;
        let mut pts: Vec<ModVector> = self.direction.elements().iter().map(|e| e.add(&self.offset, d)).collect();
        pts.sort();
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(d: u64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    fn v(e: &[u64], d: Modulus) -> ModVector {
        ModVector::new(e.to_vec(), d)
    }

    fn all_vectors(d: Modulus, dim: usize) -> Vec<ModVector> {
        let mut out = vec![ModVector::zeros(0)];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|p| (0..d.get()).map(move |x| ModVector(p.iter().copied().chain([x]).collect())))
                .collect();
        }
        out
    }

    // Closure of a generating set by repeated addition, independent of Howell form.
    fn closure(gens: &[ModVector], d: Modulus, dim: usize) -> Vec<ModVector> {
        let mut set = std::collections::BTreeSet::from([ModVector::zeros(dim)]);
        loop {
            let mut grown = set.clone();
            for x in &set {
                for g in gens {
                    grown.insert(x.add(g, d));
                }
            }
            if grown.len() == set.len() {
                return set.into_iter().collect();
            }
            set = grown;
        }
    }

    #[test]
    fn span_cardinality_over_z4() {
        let d = m(4);
        let gens = [v(&[2, 0], d), v(&[0, 1], d)];
        let s = Submodule::new(d, 2, &gens).unwrap();
        let expected = closure(&gens, d, 2);
        assert_eq!(expected.len(), 8);
        assert_eq!(s.cardinality().unwrap(), 8);
        assert_eq!(s.elements(), expected);
    }

    #[test]
    fn complement_over_z2() {
        let d = m(2);
        let s = Submodule::new(d, 2, &[v(&[1, 0], d)]).unwrap();
        assert_eq!(s.orthogonal_complement(), Submodule::new(d, 2, &[v(&[0, 1], d)]).unwrap());
        assert_eq!(Submodule::zero(m(3), 2).orthogonal_complement(), Submodule::full(m(3), 2));
    }

    #[test]
    fn complement_over_z4_by_enumeration() {
        let d = m(4);
        let s = Submodule::new(d, 2, &[v(&[2, 2], d)]).unwrap();
        assert_eq!(s.cardinality().unwrap(), 2);
        let perp: Vec<ModVector> =
            all_vectors(d, 2).into_iter().filter(|x| x.dot(&v(&[2, 2], d), d) == 0).collect();
        assert_eq!(perp.len(), 8);
        assert_eq!(s.orthogonal_complement().elements(), perp);
    }

    #[test]
    fn intersection_over_z2_4() {
        let d = m(2);
        let e = |i| ModVector::unit(4, i);
        let a = Submodule::new(d, 4, &[e(0), e(1)]).unwrap();
        let b = Submodule::new(d, 4, &[e(1), e(2)]).unwrap();
        let inter = a.intersect(&b).unwrap();
        let expected: Vec<ModVector> = a.elements().into_iter().filter(|x| b.contains(x)).collect();
        assert_eq!(inter.elements(), expected);
        assert_eq!(inter, Submodule::new(d, 4, &[e(1)]).unwrap());
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(a.sum(&Submodule::zero(d, 4)).unwrap(), a);
    }

    #[test]
    fn coset_intersection_over_z2() {
        let d = m(2);
        let a = AffineCoset::new(Submodule::new(d, 2, &[v(&[0, 1], d)]).unwrap(), &v(&[1, 0], d)).unwrap();
        let b = AffineCoset::new(Submodule::new(d, 2, &[v(&[1, 0], d)]).unwrap(), &v(&[0, 1], d)).unwrap();
        let c = a.intersect(&b).unwrap().unwrap();
        assert_eq!(c.points(), vec![v(&[1, 1], d)]);
        assert_eq!(a.intersect(&a).unwrap().unwrap(), a);
        let p = AffineCoset::new(Submodule::new(d, 2, &[v(&[0, 1], d)]).unwrap(), &v(&[0, 0], d)).unwrap();
        assert!(a.intersect(&p).unwrap().is_none());
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let d = m(3);
        assert!(Submodule::new(d, 2, &[v(&[1, 0, 0], d)]).is_err());
        assert!(Submodule::zero(d, 2).sum(&Submodule::zero(d, 3)).is_err());
        assert!(Submodule::zero(d, 2).intersect(&Submodule::zero(m(2), 2)).is_err());
    }

    #[test]
    fn reduce_gives_lexicographic_minimum() {
        for dd in [2u64, 4, 6] {
            let d = m(dd);
            let s = Submodule::new(d, 3, &[v(&[2, 1, 3], d), v(&[0, 3, 2], d)]).unwrap();
            let els = s.elements();
            for x in all_vectors(d, 3).into_iter().step_by(7) {
                let min = els.iter().map(|e| e.add(&x, d)).min().unwrap();
                assert_eq!(s.reduce(&x), min);
            }
        }
    }
}
