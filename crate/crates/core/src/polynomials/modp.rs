use serde::{Deserialize, Serialize};

use super::IntPolynomial;
use crate::arith::{inv_mod, mul_mod};
use crate::error::{Error, Result};

/// An integer polynomial with coefficients reduced into `[0, m)`, used in
/// inner loops that evaluate the same polynomial many times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPoly {
    coeffs: Vec<u64>,
    modulus: u64,
}

impl ReducedPoly {
    pub(super) fn new(coeffs: Vec<u64>, modulus: u64) -> Self {
        Self { coeffs, modulus }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `F(x) mod m` for `x` already reduced or not.
    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        let m = self.modulus;
        let x = x % m;
        if m <= u32::MAX as u64 {
            self.coeffs
                .iter()
                .rev()
                .fold(0u64, |acc, &c| (acc * x + c) % m)
        } else {
            self.coeffs
                .iter()
                .rev()
                .fold(0u64, |acc, &c| (mul_mod(acc, x, m) + c) % m)
        }
    }
}

/// A root of a polynomial in `F_p` together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModPRoot {
    pub residue: u64,
    pub multiplicity: u32,
}

/// Dense polynomial over the prime field `F_p`, ascending coefficients,
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        coeffs.iter_mut().for_each(|c| *c %= p);
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs, p }
    }

    pub fn from_int(f: &IntPolynomial, p: u64) -> Self {
        Self::new(f.reduce_mod(p).coeffs().to_vec(), p)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x % p, p) + c) % p)
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
            p,
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new(), self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Self::new(out, p)
    }

    /// Euclidean division; panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        let inv_lead = inv_mod(d.coeffs[dd], p).expect("p must be prime");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::new(Vec::new(), p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = mul_mod(r[i], inv_lead, p);
            q[i - dd] = c;
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = (r[idx] + p - mul_mod(c, dc, p)) % p;
            }
        }
        (Self::new(q, p), Self::new(r, p))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = inv_mod(lead, self.p).expect("p must be prime");
                Self::new(
                    self.coeffs
                        .iter()
                        .map(|&c| mul_mod(c, inv, self.p))
                        .collect(),
                    self.p,
                )
            }
        }
    }

    /// Squarefree over `F_p`: nonzero and coprime to its derivative, with a
    /// vanishing derivative (a p-th power) only allowed for constants.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.is_zero() && self.gcd(&d).degree() == Some(0)
            }
        }
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Self {
        match self.degree() {
            None => self.clone(),
            Some(0) => Self::new(vec![1], self.p),
            Some(_) => {
                let f = self.monic();
                let d = f.derivative();
                if d.is_zero() {
                    // f(T) = h(T^p) = h(T)^p over F_p
                    let h = Self::new(
                        f.coeffs.iter().step_by(self.p as usize).copied().collect(),
                        self.p,
                    );
                    return h.radical();
                }
                let g = f.gcd(&d);
                let a = f.div_rem(&g).0;
                let b = g.radical();
                a.mul(&b).div_rem(&a.gcd(&b)).0.monic()
            }
        }
    }

    pub fn is_coprime_to(&self, other: &Self) -> bool {
        self.gcd(other).degree() == Some(0)
    }

    /// Divides by `(T - a)` synthetically, returning quotient and remainder.
    fn synthetic_div(coeffs: &[u64], a: u64, p: u64) -> (Vec<u64>, u64) {
        let n = coeffs.len();
        let mut q = vec![0u64; n.saturating_sub(1)];
        let mut carry = 0u64;
        for i in (0..n).rev() {
            let v = (coeffs[i] + mul_mod(carry, a, p)) % p;
            if i == 0 {
                return (q, v);
            }
            q[i - 1] = v;
            carry = v;
        }
        (q, 0)
    }

    /// Every root in `F_p` with multiplicity, by exhaustive scan and repeated
    /// synthetic division.
    pub fn roots(&self) -> Result<Vec<ModPRoot>> {
        if self.is_zero() {
            return Err(Error::ZeroModP(self.p));
        }
        let p = self.p;
        let mut out = Vec::new();
        for a in 0..p {
            if self.eval(a) != 0 {
                continue;
            }
            let mut coeffs = self.coeffs.clone();
            let mut mult = 0u32;
            loop {
                let (q, r) = Self::synthetic_div(&coeffs, a, p);
                if r != 0 {
                    break;
                }
                mult += 1;
                coeffs = q;
                while coeffs.last() == Some(&0) {
                    coeffs.pop();
                }
                if coeffs.is_empty() {
                    break;
                }
            }
            out.push(ModPRoot {
                residue: a,
                multiplicity: mult,
            });
        }
        Ok(out)
    }
}

/// Roots of `F mod p` in `F_p`, each with its multiplicity.
pub fn roots_mod_p(f: &IntPolynomial, p: u64) -> Result<Vec<ModPRoot>> {
    FpPoly::from_int(f, p).roots()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_coeffs(c)
    }

    fn root(residue: u64, multiplicity: u32) -> ModPRoot {
        ModPRoot {
            residue,
            multiplicity,
        }
    }

    #[test]
    fn roots_examples() {
        assert_eq!(
            roots_mod_p(&p(&[0, -1, 0, 1]), 5).unwrap(),
            vec![root(0, 1), root(1, 1), root(4, 1)]
        );
        assert_eq!(roots_mod_p(&p(&[1, -2, 1]), 7).unwrap(), vec![root(1, 2)]);
        assert_eq!(roots_mod_p(&p(&[1, 0, 1]), 7).unwrap(), vec![]);
        assert_eq!(roots_mod_p(&p(&[7, 14]), 7), Err(Error::ZeroModP(7)));
        // T^3 over F_3 has 0 as a triple root.
        assert_eq!(roots_mod_p(&p(&[0, 0, 0, 1]), 3).unwrap(), vec![root(0, 3)]);
    }

    #[test]
    fn fp_gcd_and_squarefree() {
        let a = FpPoly::from_int(&p(&[-1, 0, 1]), 7);
        let b = FpPoly::from_int(&p(&[-1, 1]), 7);
        assert_eq!(a.gcd(&b), b);
        assert!(a.is_squarefree());
        // T^7 - T is squarefree over F_7, T^7 is not.
        assert!(FpPoly::from_int(&p(&[0, -1, 0, 0, 0, 0, 0, 1]), 7).is_squarefree());
        assert!(!FpPoly::from_int(&p(&[0, 0, 0, 0, 0, 0, 0, 1]), 7).is_squarefree());
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(q, FpPoly::from_int(&p(&[1, 1]), 7));
    }

    #[test]
    fn reduced_poly_matches_eval_mod() {
        let f = p(&[-5, 3, 0, -7, 2]);
        for m in [1u64, 2, 9, 101, 1 << 40] {
            let r = f.reduce_mod(m);
            for x in 0..50 {
                assert_eq!(r.eval(x), f.eval_mod(x as i64, m));
            }
        }
    }

    proptest! {
        #[test]
        fn roots_are_roots_and_multiplicities_bounded(
            coeffs in prop::collection::vec(-10i64..=10, 1..6),
            pi in 0usize..6,
        ) {
            let prime = [3u64, 5, 7, 11, 13, 17][pi];
            let f = p(&coeffs);
            let fp = FpPoly::from_int(&f, prime);
            prop_assume!(!fp.is_zero());
            let roots = fp.roots().unwrap();
            let total: u32 = roots.iter().map(|r| r.multiplicity).sum();
            prop_assert!(total as usize <= fp.degree().unwrap());
            for r in roots {
                prop_assert!(r.multiplicity >= 1);
                prop_assert_eq!(f.eval_mod(r.residue as i64, prime), 0);
            }
        }
    }

    #[test]
    fn radical_strips_repeated_and_pth_power_factors() {
        let f = FpPoly::from_int(&(&p(&[-1, 1]).pow(3) * &p(&[2, 1]).pow(5)), 5);
        assert_eq!(
            f.radical(),
            FpPoly::from_int(&(&p(&[-1, 1]) * &p(&[2, 1])), 5)
        );
        let g = FpPoly::from_int(&p(&[2, 0, 1]).pow(10), 5);
        assert_eq!(g.radical(), FpPoly::from_int(&p(&[2, 0, 1]), 5));
        let h = FpPoly::from_int(&p(&[0, -1, 0, 0, 0, 1]), 5);
        assert_eq!(h.radical(), h.monic());
        assert_eq!(FpPoly::new(vec![3], 5).radical(), FpPoly::new(vec![1], 5));
    }
}
