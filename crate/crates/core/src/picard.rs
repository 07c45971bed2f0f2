//! Picard lattice of the plane blown up at `n` points.
//!
//! A class `D = aH - Σ bᵢLᵢ` is stored as `(a, b₁, …, bₙ)`, so the
//! exceptional curve `Lᵢ` has `bᵢ = -1` and the form is `a₁a₂ - Σ b₁ᵢb₂ᵢ`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported blowup count.
pub const MAX_RANK: usize = 10;

/// An integer divisor class on `X_n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    rank: u8,
    coeffs: [i64; MAX_RANK + 1],
}

impl DivisorClass {
    /// Builds a class from `[a, b₁, …, bₙ]`.
    pub fn new(coeffs: &[i64]) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > MAX_RANK + 1 {
            return Err(Error::RankOutOfRange(coeffs.len().saturating_sub(1)));
        }
        let mut c = [0; MAX_RANK + 1];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Self { rank: (coeffs.len() - 1) as u8, coeffs: c })
    }

    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_RANK);
        Self { rank: n as u8, coeffs: [0; MAX_RANK + 1] }
    }

    /// The hyperplane class `H`.
    pub fn hyperplane(n: usize) -> Self {
        let mut d = Self::zero(n);
        d.coeffs[0] = 1;
        d
    }

    /// The exceptional class `Lᵢ`, `1 ≤ i ≤ n`.
    pub fn exceptional(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n, "exceptional index {i} out of 1..={n}");
        let mut d = Self::zero(n);
        d.coeffs[i] = -1;
        d
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    /// `[a, b₁, …, bₙ]`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs[..=self.rank as usize]
    }

    pub fn degree(&self) -> i64 {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Intersection number; ranks must agree (checked in debug builds).
    #[inline]
    pub fn dot(&self, other: &Self) -> i64 {
        debug_assert_eq!(self.rank, other.rank);
        let mut s = self.coeffs[0] * other.coeffs[0];
        for i in 1..=self.rank as usize {
            s -= self.coeffs[i] * other.coeffs[i];
        }
        s
    }

    /// Intersection number with a rank check.
    pub fn intersect(&self, other: &Self) -> Result<i64> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(self.dot(other))
    }

    pub fn self_intersection(&self) -> i64 {
        self.dot(self)
    }

    /// Appends a zero coefficient, i.e. the pullback under one more blowup
    /// in the standard basis.
    pub fn extend(&self) -> Self {
        assert!((self.rank as usize) < MAX_RANK);
        let mut d = *self;
        d.rank += 1;
        d
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("class serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse { field: "class".into(), reason: e.to_string() })
    }

    /// Human form such as `2H - L1 - L2 - 2L3`.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        let mut push = |c: i64, sym: String| {
            if c == 0 {
                return;
            }
            let sign = if c < 0 { "-" } else { "+" };
            let mag = c.abs();
            let term = if mag == 1 { sym } else { format!("{mag}{sym}") };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
                out.push_str(&term);
            } else {
                out.push_str(&format!(" {sign} {term}"));
            }
        };
        push(self.coeffs[0], "H".into());
        for i in 1..=self.rank as usize {
            push(-self.coeffs[i], format!("L{i}"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<i64> = Vec::deserialize(d)?;
        DivisorClass::new(&v).map_err(D::Error::custom)
    }
}

impl Add for DivisorClass {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for DivisorClass {
    fn add_assign(&mut self, rhs: Self) {
        debug_assert_eq!(self.rank, rhs.rank);
        for i in 0..=self.rank as usize {
            self.coeffs[i] += rhs.coeffs[i];
        }
    }
}

impl Sub for DivisorClass {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for DivisorClass {
    fn sub_assign(&mut self, rhs: Self) {
        debug_assert_eq!(self.rank, rhs.rank);
        for i in 0..=self.rank as usize {
            self.coeffs[i] -= rhs.coeffs[i];
        }
    }
}

impl Neg for DivisorClass {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in self.coeffs.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, mut rhs: DivisorClass) -> DivisorClass {
        for c in rhs.coeffs.iter_mut() {
            *c *= self;
        }
        rhs
    }
}

/// `Pic(X_n)` with its canonical class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PicardLattice {
    n: usize,
    k: DivisorClass,
}

impl PicardLattice {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_RANK {
            return Err(Error::RankOutOfRange(n));
        }
        let mut c = vec![-1; n + 1];
        c[0] = -3;
        Ok(Self { n, k: DivisorClass::new(&c)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `K = -3H + ΣLᵢ`.
    pub fn canonical_class(&self) -> DivisorClass {
        self.k
    }

    pub fn hyperplane(&self) -> DivisorClass {
        DivisorClass::hyperplane(self.n)
    }

    pub fn exceptional(&self, i: usize) -> DivisorClass {
        DivisorClass::exceptional(self.n, i)
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass::zero(self.n)
    }

    /// Builds a class of this lattice, checking the length.
    pub fn class(&self, coeffs: &[i64]) -> Result<DivisorClass> {
        if coeffs.len() != self.n + 1 {
            return Err(Error::RankMismatch(coeffs.len().saturating_sub(1), self.n));
        }
        DivisorClass::new(coeffs)
    }

    /// Rejects classes from a lattice of another rank.
    pub fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.rank() != self.n {
            return Err(Error::RankMismatch(d.rank(), self.n));
        }
        Ok(())
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.dot(b))
    }

    pub fn is_line(&self, d: &DivisorClass) -> bool {
        d.rank() == self.n && d.dot(d) == -1 && d.dot(&self.k) == -1
    }

    pub fn is_ruling(&self, d: &DivisorClass) -> bool {
        d.rank() == self.n && d.dot(d) == 0 && d.dot(&self.k) == -2
    }

    pub fn is_root(&self, d: &DivisorClass) -> bool {
        d.rank() == self.n && d.dot(d) == -2 && d.dot(&self.k) == 0
    }

    /// A basis of `K⊥`. For `n ≥ 3` this is the standard simple-root base
    /// `H-L₁-L₂-L₃, L₁-L₂, …, L_{n-1}-L_n`.
    pub fn kperp_basis(&self) -> Vec<DivisorClass> {
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        match n {
            0 => {}
            1 => out.push(self.class(&[1, 3]).expect("rank 1")),
            2 => {
                out.push(self.class(&[1, 3, 0]).expect("rank 2"));
                out.push(self.exceptional(1) - self.exceptional(2));
            }
            _ => {
                out.push(self.hyperplane() - self.exceptional(1) - self.exceptional(2) - self.exceptional(3));
                for i in 1..n {
                    out.push(self.exceptional(i) - self.exceptional(i + 1));
                }
            }
        }
        out
    }

    /// Coordinates of `d ∈ K⊥` in [`Self::kperp_basis`].
    pub fn kperp_coords(&self, d: &DivisorClass) -> Result<Vec<i64>> {
        self.check(d)?;
        if d.dot(&self.k) != 0 {
            return Err(Error::InvalidClass { class: d.to_json(), reason: "not orthogonal to K".into() });
        }
        let c = d.coeffs();
        let a = c[0];
        Ok(match self.n {
            0 => vec![],
            1 => vec![a],
            2 => vec![a, c[2]],
            n => {
                let mut out = Vec::with_capacity(n);
                out.push(a);
                let mut run = 0;
                for j in 1..n {
                    let r = c[j] - if j <= 3 { a } else { 0 };
                    run += r;
                    out.push(-run);
                }
                out
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_square() {
        for n in 0..=MAX_RANK {
            let p = PicardLattice::new(n).unwrap();
            let k = p.canonical_class();
            assert_eq!(k.dot(&k), 9 - n as i64);
        }
        assert!(PicardLattice::new(11).is_err());
    }

    #[test]
    fn basic_products() {
        let p = PicardLattice::new(2).unwrap();
        let h = p.hyperplane();
        let l1 = p.exceptional(1);
        let l2 = p.exceptional(2);
        assert_eq!(h.dot(&h), 1);
        assert_eq!((h - l1 - l2).dot(&l1), 1);
        assert_eq!(l1.dot(&l1), -1);
        assert!(p.is_line(&(h - l1 - l2)));
    }

    #[test]
    fn rank_mismatch_is_error() {
        let a = DivisorClass::hyperplane(3);
        let b = DivisorClass::hyperplane(4);
        assert_ne!(a, b);
        assert!(a.intersect(&b).is_err());
    }

    #[test]
    fn kperp_basis_is_orthogonal_and_invertible() {
        for n in 0..=MAX_RANK {
            let p = PicardLattice::new(n).unwrap();
            let basis = p.kperp_basis();
            assert_eq!(basis.len(), n);
            for b in &basis {
                assert_eq!(b.dot(&p.canonical_class()), 0);
            }
            for (i, b) in basis.iter().enumerate() {
                let c = p.kperp_coords(b).unwrap();
                for (j, x) in c.iter().enumerate() {
                    assert_eq!(*x, (i == j) as i64, "n={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let d = DivisorClass::new(&[2, 1, 1, 1, 1, 1, 0]).unwrap();
        assert_eq!(d.to_json(), "[2,1,1,1,1,1,0]");
        assert_eq!(DivisorClass::from_json("[2,1,1,1,1,1,0]").unwrap(), d);
        assert!(DivisorClass::from_json("[1,x]").is_err());
        assert_eq!(d.pretty(), "2H - L1 - L2 - L3 - L4 - L5");
    }
}
