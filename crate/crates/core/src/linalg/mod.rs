//! Exact linear algebra over Z_d for any d >= 2.

mod howell;
mod submodule;

pub use howell::{howell_form, kernel, solve_combination};
pub use submodule::{AffineCoset, Submodule};

use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// The ring Z_d. Entries are kept in `[0, d)`; `d` is capped at 2^32 so that
/// products of two residues fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(d: u64) -> Result<Self> {
        if !(2..=1u64 << 32).contains(&d) {
            return Err(Error::InvalidModulus(d));
        }
        Ok(Modulus(d))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.0
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        (self.0 - a) % self.0
    }

    pub fn reduce(self, x: i128) -> u64 {
        x.rem_euclid(self.0 as i128) as u64
    }

    pub fn is_prime(self) -> bool {
        let d = self.0;
        (2..).take_while(|p| p * p <= d).all(|p| d % p != 0)
    }

    /// `d^k`, or `None` on overflow.
    pub fn pow(self, k: usize) -> Option<u128> {
        (0..k).try_fold(1u128, |acc, _| acc.checked_mul(self.0 as u128))
    }

    /// A unit `u` with `u * a = gcd(a, d) (mod d)`.
    pub(crate) fn normalizing_unit(self, a: u64) -> u64 {
        let d = self.0;
        let g = gcd(a, d);
        let (ap, dp) = (a / g, d / g);
        let u0 = if dp == 1 { 1 } else { inverse_mod(ap, dp).expect("coprime by construction") };
        let mut u = u0;
        while gcd(u, d) != 1 {
            u += dp;
        }
        u % d
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.0)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
pub(crate) fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (g, s, _) = xgcd(a as i128, m as i128);
    (g == 1).then(|| s.rem_euclid(m as i128) as u64)
}

/// A vector over Z_d. The modulus is carried by the surrounding context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ModVector(Vec<u64>);

impl ModVector {
    pub fn new(entries: Vec<u64>, d: Modulus) -> Self {
        ModVector(entries.into_iter().map(|e| e % d.get()).collect())
    }

    pub fn from_signed(entries: &[i64], d: Modulus) -> Self {
        ModVector(entries.iter().map(|&e| d.reduce(e as i128)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        ModVector(vec![0; len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        ModVector(v)
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &ModVector, d: Modulus) -> ModVector {
        ModVector(self.0.iter().zip(&other.0).map(|(&a, &b)| d.add(a, b)).collect())
    }

    pub fn sub(&self, other: &ModVector, d: Modulus) -> ModVector {
        ModVector(self.0.iter().zip(&other.0).map(|(&a, &b)| d.sub(a, b)).collect())
    }

    pub fn scale(&self, c: u64, d: Modulus) -> ModVector {
        let c = c % d.get();
        ModVector(self.0.iter().map(|&a| d.mul(a, c)).collect())
    }

    pub fn neg(&self, d: Modulus) -> ModVector {
        ModVector(self.0.iter().map(|&a| d.neg(a)).collect())
    }

    pub fn dot(&self, other: &ModVector, d: Modulus) -> u64 {
        self.0.iter().zip(&other.0).fold(0, |acc, (&a, &b)| d.add(acc, d.mul(a, b)))
    }

    pub fn concat(&self, other: &ModVector) -> ModVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ModVector(v)
    }
}

impl Deref for ModVector {
    type Target = [u64];
    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for ModVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A dense matrix over Z_d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    rows: Vec<ModVector>,
    ncols: usize,
}

impl ModMatrix {
    pub fn from_rows(rows: Vec<ModVector>, ncols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch { expected: ncols, found: r.len() });
        }
        Ok(ModMatrix { rows, ncols })
    }

    pub fn identity(n: usize) -> Self {
        ModMatrix { rows: (0..n).map(|i| ModVector::unit(n, i)).collect(), ncols: n }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        ModMatrix { rows: vec![ModVector::zeros(ncols); nrows], ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[ModVector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.rows[i].0[j] = value;
    }

    pub fn transpose(&self) -> ModMatrix {
        let rows = (0..self.ncols)
            .map(|j| ModVector(self.rows.iter().map(|r| r[j]).collect()))
            .collect();
        ModMatrix { rows, ncols: self.rows.len() }
    }

    pub fn mul_vec(&self, v: &ModVector, d: Modulus) -> ModVector {
        ModVector(self.rows.iter().map(|r| r.dot(v, d)).collect())
    }

    pub fn mul(&self, other: &ModMatrix, d: Modulus) -> ModMatrix {
        let t = other.transpose();
        let rows = self
            .rows
            .iter()
            .map(|r| ModVector(t.rows.iter().map(|c| r.dot(c, d)).collect()))
            .collect();
        ModMatrix { rows, ncols: other.ncols }
    }
}
