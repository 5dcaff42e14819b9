//! Exact integer polynomials and their reductions modulo primes.
//!
//! Coefficients are stored in ascending degree order as arbitrary precision
//! integers. The zero polynomial is the empty coefficient list, so every
//! nonzero polynomial has a nonzero leading coefficient.
//!
//! Resultants follow the Sylvester matrix convention: for `F` of degree `m`
//! and `G` of degree `n`, `res(F, G)` is the determinant of the
//! `(m + n) x (m + n)` matrix whose first `n` rows hold the shifted
//! coefficients of `F` (leading coefficient first) and whose last `m` rows
//! hold those of `G`. Equivalently `res(F, G) = lc(F)^n * prod G(a)` over
//! the roots `a` of `F`, so `res(T - a, T - b) = a - b`.

mod modp;
mod resultant;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::mul_mod;
use crate::error::{Error, Result};

pub use modp::{roots_mod_p, FpPoly, ModPRoot, ReducedPoly};
pub use resultant::{discriminant, gcd_over_q, is_squarefree_over_q, resultant};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The indeterminate `T`.
    pub fn t() -> Self {
        Self::from_coeffs(&[0, 1])
    }

    /// `T - a`.
    pub fn linear_root(a: i64) -> Self {
        Self::from_coeffs(&[-a, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// True when `T` divides the polynomial (including the zero polynomial).
    pub fn is_multiple_of_t(&self) -> bool {
        self.coeffs.first().is_none_or(Zero::is_zero)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `F(x) mod m` in `[0, m)` by Horner's scheme, reducing at every step.
    pub fn eval_mod(&self, x: i64, m: u64) -> u64 {
        assert!(m >= 1, "modulus must be positive");
        let x = (x as i128).rem_euclid(m as i128) as u64;
        self.coeffs.iter().rev().fold(0u64, |acc, c| {
            (mul_mod(acc, x, m) + reduce_bigint(c, m)) % m
        })
    }

    /// Coefficients reduced into `[0, m)`, for repeated evaluation.
    pub fn reduce_mod(&self, m: u64) -> ReducedPoly {
        ReducedPoly::new(self.coeffs.iter().map(|c| reduce_bigint(c, m)).collect(), m)
    }

    /// Formal derivative over the integers.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// The polynomial divided by its content, normalized to a positive
    /// leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_some_and(Signed::is_negative) {
            c = -c;
        }
        self.div_exact_scalar(&c)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Divides every coefficient by `k`; `k` must divide each exactly.
    pub fn div_exact_scalar(&self, k: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(k);
                    debug_assert!(r.is_zero(), "inexact scalar division");
                    q
                })
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self * T^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-remainder by zero polynomial");
        let Some(da) = self.degree() else {
            return Self::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.leading_coeff().unwrap().clone();
        let mut r = self.clone();
        let mut steps = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading_coeff().unwrap().clone();
            r = &r.scale(&lb) - &b.scale(&lr).shift(dr - db);
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&num_traits::pow(lb, steps));
        }
        r
    }

    /// Exact quotient by `b` over the integers, if it exists.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        let db = b.degree()?;
        let lb = b.leading_coeff()?.clone();
        let mut r = self.clone();
        let Some(da) = r.degree() else {
            return Some(Self::zero());
        };
        if da < db {
            return None;
        }
        let mut q = vec![BigInt::zero(); da - db + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let (c, rem) = r.leading_coeff().unwrap().div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            r = &r - &Self::constant(c.clone()).shift(dr - db).mul_ref(b);
            q[dr - db] = c;
        }
        Some(Self::new(q))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    /// Smallest p-adic valuation over the nonzero coefficients.
    pub fn p_content_valuation(&self, p: u64) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = BigInt::from(p);
        Ok(self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| {
                let mut v = 0;
                let mut c = c.clone();
                loop {
                    let (q, r) = c.div_rem(&p);
                    if !r.is_zero() {
                        break v;
                    }
                    c = q;
                    v += 1;
                }
            })
            .min()
            .unwrap())
    }

    /// Product of a list of polynomials (1 for the empty list).
    pub fn product<'a>(polys: impl IntoIterator<Item = &'a IntPolynomial>) -> Self {
        polys.into_iter().fold(Self::constant(1), |acc, f| &acc * f)
    }
}

/// Free-function form of [`IntPolynomial::p_content_valuation`].
pub fn p_content_valuation(f: &IntPolynomial, p: u64) -> Result<u32> {
    f.p_content_valuation(p)
}

/// Free-function form of [`IntPolynomial::derivative`].
pub fn derivative(f: &IntPolynomial) -> IntPolynomial {
    f.derivative()
}

/// Free-function form of [`IntPolynomial::eval_mod`].
pub fn eval_mod(f: &IntPolynomial, x: i64, m: u64) -> u64 {
    f.eval_mod(x, m)
}

pub(crate) fn reduce_bigint(c: &BigInt, m: u64) -> u64 {
    c.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: Self) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: Self) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: Self) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "T")?,
                _ => write!(f, "T^{i}")?,
            }
        }
        Ok(())
    }
}

/// Coefficients serialize as JSON numbers when they fit in an `i64`, and as
/// decimal strings otherwise.
impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coeff {
            Int(i64),
            Text(String),
        }
        let raw = Vec::<Coeff>::deserialize(d)?;
        let coeffs = raw
            .into_iter()
            .map(|c| match c {
                Coeff::Int(v) => Ok(BigInt::from(v)),
                Coeff::Text(s) => s.trim().parse::<BigInt>().map_err(serde::de::Error::custom),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_coeffs(c)
    }

    #[test]
    fn eval_mod_examples() {
        assert_eq!(p(&[1, 0, 1]).eval_mod(3, 7), 3);
        assert_eq!(IntPolynomial::zero().eval_mod(5, 11), 0);
        assert_eq!(p(&[0, -1, 0, 1]).eval_mod(4, 17), 9);
        assert_eq!(p(&[0, -1, 0, 1]).eval_mod(-4, 17), (17 - 9));
        assert_eq!(p(&[5]).eval_mod(0, 1), 0);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[1, 0, 1]).derivative(), p(&[0, 2]));
        assert_eq!(p(&[5]).derivative(), IntPolynomial::zero());
        assert_eq!(p(&[0, -1, 0, 1]).derivative(), p(&[-1, 0, 3]));
    }

    #[test]
    fn content_valuation_examples() {
        assert_eq!(p(&[1, 2]).p_content_valuation(3), Ok(0));
        assert_eq!(p(&[3, 0, 9]).p_content_valuation(3), Ok(1));
        assert_eq!(p(&[0, 49]).p_content_valuation(7), Ok(2));
        assert_eq!(
            IntPolynomial::zero().p_content_valuation(7),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn trailing_zeros_trimmed_and_display() {
        let f = p(&[0, -1, 0, 1, 0, 0]);
        assert_eq!(f.degree(), Some(3));
        assert_eq!(f.to_string(), "T^3 - T");
        assert_eq!(p(&[1, -2, 1]).to_string(), "T^2 - 2T + 1");
        assert_eq!(p(&[-1]).to_string(), "-1");
    }

    #[test]
    fn json_is_ascending_coefficient_list() {
        let f = p(&[0, -1, 0, 1]);
        assert_eq!(serde_json::to_string(&f).unwrap(), "[0,-1,0,1]");
        let back: IntPolynomial = serde_json::from_str("[0,-1,0,1]").unwrap();
        assert_eq!(back, f);
        let big = IntPolynomial::constant(BigInt::from(u64::MAX) * 4);
        let text = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<IntPolynomial>(&text).unwrap(), big);
    }

    #[test]
    fn arithmetic_and_exact_division() {
        let a = p(&[-1, 1]);
        let b = p(&[1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!(a.pow(3), p(&[-1, 3, -3, 1]));
        assert_eq!(p(&[-1, 0, 1]).div_exact(&a), Some(b.clone()));
        assert_eq!(p(&[1, 0, 1]).div_exact(&a), None);
        assert_eq!(p(&[6, 4]).primitive_part(), p(&[3, 2]));
        assert_eq!(p(&[-6, -4]).primitive_part(), p(&[3, 2]));
    }

    #[test]
    fn pseudo_remainder_relation() {
        // lc(b)^(da-db+1) a = q b + r with deg r < deg b
        let a = p(&[3, 1, 4, 1, 5]);
        let b = p(&[2, 7, 3]);
        let r = a.pseudo_rem(&b);
        assert!(r.degree().unwrap_or(0) < 2);
        let lhs = &a.scale(&BigInt::from(27)) - &r;
        assert!(lhs.div_exact(&b).is_some());
    }
}
