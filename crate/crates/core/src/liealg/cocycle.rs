//! Bimultiplicative sign function on `K⊥`.

use crate::error::{Error, Result};
use crate::picard::{DivisorClass, PicardLattice};

/// `ε : K⊥ × K⊥ → {±1}` with `ε(α,β)ε(β,α) = (-1)^{α·β}` and
/// `ε(α,α) = (-1)^{α·α/2}`.
///
/// On the ordered basis `e₁, …, eₙ` of `K⊥` the exponent of `ε(eᵢ, eⱼ)` is
/// `eᵢ·eⱼ` for `i > j`, `eᵢ·eᵢ/2` for `i = j` and `0` for `i < j`.
#[derive(Clone, Debug)]
pub struct SignCocycle {
    lattice: PicardLattice,
    basis: Vec<DivisorClass>,
    /// `rows[i]` has bit `j` set when the exponent of `ε(eᵢ, eⱼ)` is odd.
    rows: Vec<u32>,
}

impl SignCocycle {
    pub fn new(lattice: &PicardLattice) -> Result<Self> {
        let basis = lattice.kperp_basis();
        let m = basis.len();
        let mut rows = vec![0u32; m];
        for i in 0..m {
            for j in 0..m {
                let e = match i.cmp(&j) {
                    std::cmp::Ordering::Greater => basis[i].dot(&basis[j]),
                    std::cmp::Ordering::Equal => basis[i].dot(&basis[i]) / 2,
                    std::cmp::Ordering::Less => 0,
                };
                if e.rem_euclid(2) == 1 {
                    rows[i] |= 1 << j;
                }
            }
        }
        let c = Self { lattice: *lattice, basis, rows };
        c.self_check()?;
        Ok(c)
    }

    fn self_check(&self) -> Result<()> {
        for (i, a) in self.basis.iter().enumerate() {
            if a.dot(a) % 2 != 0 {
                return Err(Error::Internal(format!("basis vector {a} has odd norm")));
            }
            if self.eps(a, a)? != sign(a.dot(a) / 2) {
                return Err(Error::Internal(format!("ε({a},{a}) has the wrong sign")));
            }
            for b in &self.basis[..i] {
                if self.eps(a, b)? * self.eps(b, a)? != sign(a.dot(b)) {
                    return Err(Error::Internal(format!("ε({a},{b})ε({b},{a}) ≠ (-1)^{{a·b}}")));
                }
            }
        }
        Ok(())
    }

    pub fn lattice(&self) -> &PicardLattice {
        &self.lattice
    }

    pub fn basis(&self) -> &[DivisorClass] {
        &self.basis
    }

    /// Bitmask of basis coordinates with odd coefficient.
    pub fn parity_mask(&self, d: &DivisorClass) -> Result<u32> {
        let c = self.lattice.kperp_coords(d)?;
        Ok(c.iter().enumerate().fold(0, |m, (i, x)| if x.rem_euclid(2) == 1 { m | 1 << i } else { m }))
    }

    /// `ε` on parity masks.
    #[inline]
    pub fn eps_masks(&self, a: u32, b: u32) -> i64 {
        let mut parity = 0u32;
        let mut rest = a;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            parity ^= (self.rows[i] & b).count_ones() & 1;
            rest &= rest - 1;
        }
        if parity == 0 {
            1
        } else {
            -1
        }
    }

    pub fn eps(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        Ok(self.eps_masks(self.parity_mask(a)?, self.parity_mask(b)?))
    }
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::enumerate_roots;
    use proptest::prelude::*;

    #[test]
    fn root_identities() {
        for n in 2..=8 {
            let p = PicardLattice::new(n).unwrap();
            let c = SignCocycle::new(&p).unwrap();
            let roots = enumerate_roots(&p);
            for a in roots.iter().step_by(3) {
                assert_eq!(c.eps(a, a).unwrap(), -1);
                assert_eq!(c.eps(a, &-*a).unwrap(), -1);
                assert_eq!(c.eps(a, &-*a).unwrap() * c.eps(&-*a, a).unwrap(), 1);
                for b in &roots {
                    let prod = c.eps(a, b).unwrap() * c.eps(b, a).unwrap();
                    assert_eq!(prod, sign(a.dot(b)));
                    if a.dot(b) == 1 {
                        assert_eq!(prod, -1);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_classes_off_kperp() {
        let p = PicardLattice::new(4).unwrap();
        let c = SignCocycle::new(&p).unwrap();
        assert!(c.eps(&p.hyperplane(), &p.hyperplane()).is_err());
    }

    fn kperp_vector(p: &PicardLattice, coords: &[i64]) -> DivisorClass {
        coords.iter().zip(p.kperp_basis()).fold(p.zero(), |acc, (x, b)| acc + *x * b)
    }

    proptest! {
        #[test]
        fn bimultiplicative_identities(n in 1usize..=10, x in proptest::collection::vec(-4i64..=4, 10), y in proptest::collection::vec(-4i64..=4, 10), z in proptest::collection::vec(-4i64..=4, 10)) {
            let p = PicardLattice::new(n).unwrap();
            let c = SignCocycle::new(&p).unwrap();
            let (a, b, d) = (kperp_vector(&p, &x[..n]), kperp_vector(&p, &y[..n]), kperp_vector(&p, &z[..n]));
            prop_assert_eq!(c.eps(&a, &b).unwrap() * c.eps(&b, &a).unwrap(), sign(a.dot(&b)));
            prop_assert_eq!(c.eps(&a, &a).unwrap(), sign(a.dot(&a) / 2));
            prop_assert_eq!(c.eps(&(a + b), &d).unwrap(), c.eps(&a, &d).unwrap() * c.eps(&b, &d).unwrap());
            prop_assert_eq!(c.eps(&a, &(b + d)).unwrap(), c.eps(&a, &b).unwrap() * c.eps(&a, &d).unwrap());
        }
    }
}
